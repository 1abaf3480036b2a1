#include "corpusclean/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "corpusclean/io.hpp"

namespace corpusclean {

namespace {

namespace fs = std::filesystem;

struct CleanFlags {
  std::string src;
  std::string tgt;
  std::string in;
  std::string out_dir;
  std::optional<std::string> src_lang;
  std::optional<std::string> tgt_lang;
  std::optional<std::string> config;
  std::optional<std::string> langid_model;
  std::optional<std::string> rejects;
  std::optional<std::string> report;
  std::optional<std::string> filters;
  std::optional<std::size_t> threads;
  std::optional<double> nonalpha_majority_threshold;
  std::optional<double> mismatch_ratio;
  std::optional<std::size_t> mismatch_min_count;
  std::optional<std::size_t> repeat_min_run;
  std::optional<std::size_t> langid_min_chars;
  std::optional<double> langid_min_margin;
  std::optional<std::size_t> len_min;
  std::optional<std::size_t> len_max;
  std::optional<double> len_ratio_max;
  std::optional<std::uint64_t> max_bad_lines;
  bool multi_drop_all = false;
  bool exact_dedup = false;
};

void add_pipeline_flags(CLI::App* sub, CleanFlags& f) {
  sub->add_option("--out-dir", f.out_dir, "Directory for cleaned output")->required();
  sub->add_option("--config", f.config, "JSON pipeline config; flags override its fields");
  sub->add_option("--langid-model", f.langid_model, "Language model (enables language_mismatch)");
  sub->add_option("--rejects", f.rejects, "Reject TSV path (default <out-dir>/rejects.tsv)");
  sub->add_option("--report", f.report, "Report JSON path (default <out-dir>/report.json)");
  sub->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--filters", f.filters, "Comma-separated filter order");
  sub->add_option("--nonalpha-majority-threshold", f.nonalpha_majority_threshold);
  sub->add_option("--mismatch-ratio", f.mismatch_ratio);
  sub->add_option("--mismatch-min-count", f.mismatch_min_count);
  sub->add_option("--repeat-min-run", f.repeat_min_run);
  sub->add_option("--langid-min-chars", f.langid_min_chars);
  sub->add_option("--langid-min-margin", f.langid_min_margin);
  sub->add_option("--len-min", f.len_min);
  sub->add_option("--len-max", f.len_max);
  sub->add_option("--len-ratio-max", f.len_ratio_max);
  sub->add_option("--max-bad-lines", f.max_bad_lines, "Abort after this many undecodable lines");
  sub->add_flag("--multi-drop-all", f.multi_drop_all, "Drop every pair of a multi-aligned group");
  sub->add_flag("--exact-dedup", f.exact_dedup, "Deduplicate on exact strings instead of digests");
}

std::string read_file(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path.string());
  return buf.str();
}

std::vector<FilterId> parse_filter_list(const std::string& csv) {
  std::vector<FilterId> order;
  std::stringstream ss(csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    const auto id = parse_filter_id(name);
    if (!id) throw ConfigError("unknown filter '" + name + "'");
    order.push_back(*id);
  }
  return order;
}

template <typename T, typename U>
void override_with(T& field, const std::optional<U>& flag) {
  if (flag) field = *flag;
}

PipelineConfig build_config(const CleanFlags& f, CorpusMode mode) {
  PipelineConfig config;
  config.mode = mode;
  if (f.config) {
    config = apply_config_json(read_file(*f.config), config);
    if (config.mode != mode) throw ConfigError("config file mode conflicts with the subcommand");
  }
  override_with(config.src_lang, f.src_lang);
  override_with(config.tgt_lang, f.tgt_lang);
  if (f.langid_model) config.langid_model_path = *f.langid_model;
  if (f.filters) config.filter_order = parse_filter_list(*f.filters);
  override_with(config.threads, f.threads);
  auto& p = config.params;
  override_with(p.nonalpha_majority_threshold, f.nonalpha_majority_threshold);
  override_with(p.mismatch_ratio, f.mismatch_ratio);
  override_with(p.mismatch_min_count, f.mismatch_min_count);
  override_with(p.repeat_min_run, f.repeat_min_run);
  override_with(p.langid_min_chars, f.langid_min_chars);
  override_with(p.langid_min_margin, f.langid_min_margin);
  override_with(p.len_min, f.len_min);
  override_with(p.len_max, f.len_max);
  override_with(p.len_ratio_max, f.len_ratio_max);
  if (f.max_bad_lines) config.max_bad_lines = *f.max_bad_lines;
  if (f.multi_drop_all) config.multi_align = MultiAlignMode::drop_all;
  if (f.exact_dedup) config.exact_dedup = true;

  if (config.src_lang.empty()) throw ConfigError(mode == CorpusMode::parallel ? "--src-lang is required" : "--lang is required");
  if (mode == CorpusMode::parallel && config.tgt_lang.empty()) throw ConfigError("--tgt-lang is required");
  return config;
}

int cmd_clean(const CleanFlags& f, CorpusMode mode, std::ostream& out) {
  const PipelineConfig config = build_config(f, mode);
  std::shared_ptr<const LangIdModel> model;
  if (config.langid_model_path) model = std::make_shared<const LangIdModel>(load_model(*config.langid_model_path));
  Pipeline pipeline(config, model);

  const bool parallel = mode == CorpusMode::parallel;
  const fs::path src_path = parallel ? f.src : f.in;
  const fs::path tgt_path = parallel ? fs::path(f.tgt) : fs::path();
  const fs::path out_dir = f.out_dir;
  if (parallel && src_path.filename() == tgt_path.filename()) {
    throw ConfigError("source and target share the file name " + src_path.filename().string());
  }
  fs::create_directories(out_dir);

  std::ifstream src_in = open_input(src_path);
  std::ifstream tgt_in;
  if (parallel) tgt_in = open_input(tgt_path);

  const fs::path src_clean = out_dir / (src_path.filename().string() + ".clean");
  const fs::path tgt_clean = parallel ? out_dir / (tgt_path.filename().string() + ".clean") : fs::path();
  const fs::path rejects_path = f.rejects ? fs::path(*f.rejects) : out_dir / "rejects.tsv";
  const fs::path report_path = f.report ? fs::path(*f.report) : out_dir / "report.json";

  AtomicFile src_file(src_clean);
  std::optional<AtomicFile> tgt_file;
  if (parallel) tgt_file.emplace(tgt_clean);
  AtomicFile rejects_file(rejects_path);

  PipelineOutputs outputs;
  outputs.on_keep = [&](const SentencePair& pair) {
    src_file.stream() << pair.src.text << '\n';
    if (tgt_file) tgt_file->stream() << pair.tgt.text << '\n';
  };
  outputs.on_reject = [&](std::uint64_t line_no, FilterId id, std::string_view s, std::string_view t) {
    rejects_file.stream() << reject_record_line(line_no, id, s, t) << '\n';
  };

  FilterReport report = parallel ? pipeline.run_parallel(src_in, tgt_in, outputs) : pipeline.run_mono(src_in, outputs);
  report.src_path = src_path.string();
  report.tgt_path = tgt_path.string();

  src_file.commit();
  if (tgt_file) tgt_file->commit();
  rejects_file.commit();
  AtomicFile report_file(report_path);
  report_file.stream() << report_to_json(report) << '\n';
  report_file.commit();

  const std::string name = parallel ? src_path.stem().string() : src_path.filename().string();
  out << render_table(std::span<const FilterReport>(&report, 1), std::vector<std::string>{name});
  return kExitOk;
}

int cmd_langid_train(const std::string& samples_dir, const std::string& out_path, const std::vector<int>& orders,
                     double alpha, std::ostream& out) {
  if (!fs::is_directory(samples_dir)) throw IoError("not a directory: " + samples_dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(samples_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw TrainingError("no <code>.txt sample files in " + samples_dir);

  std::map<std::string, std::vector<std::string>> samples;
  for (const auto& path : files) {
    auto& lines = samples[path.stem().string()];
    std::ifstream in = open_input(path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    if (in.bad()) throw IoError("read failed on " + path.string());
  }
  const LangIdModel model = train(samples, orders, alpha);
  save_model(model, out_path);
  out << "trained " << model.languages().size() << " languages";
  for (const auto& code : model.languages()) out << ' ' << code;
  out << " -> " << out_path << '\n';
  return kExitOk;
}

int cmd_langid_id(const std::string& model_path, const std::optional<std::string>& in_path, std::ostream& out) {
  const LangIdModel model = load_model(model_path);
  std::ifstream file;
  if (in_path) file = open_input(*in_path);
  std::istream& in = in_path ? static_cast<std::istream&>(file) : std::cin;
  std::string line;
  char buf[64];
  while (std::getline(in, line)) {
    try {
      const LangIdVerdict v = model.identify(normalize_line(line));
      std::snprintf(buf, sizeof buf, "\t%.4f\t%.4f", v.margin, v.score);
      out << v.language << buf << '\n';
    } catch (const UndecidableInput&) {
      out << "und\t0.0000\t0.0000\n";
    }
  }
  if (in.bad()) throw IoError("read failed");
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& inputs, bool do_aggregate, std::ostream& out) {
  std::vector<FilterReport> reports;
  std::vector<std::string> names;
  for (const auto& path : inputs) {
    reports.push_back(report_from_json(read_file(path)));
    names.push_back(fs::path(path).stem().string());
  }
  out << render_table(reports, names);
  if (do_aggregate) out << '\n' << render_aggregate(aggregate(reports));
  return kExitOk;
}

int cmd_combine_shuffle(const std::vector<std::pair<std::string, std::string>>& corpora, std::uint64_t seed,
                        const std::string& src_out, const std::string& tgt_out, std::ostream& out) {
  std::vector<CorpusPaths> paths;
  for (const auto& [s, t] : corpora) paths.push_back({s, t});
  const std::uint64_t n = combine_shuffle(paths, seed, src_out, tgt_out);
  out << "wrote " << n << " pairs to " << src_out << " and " << tgt_out << '\n';
  return kExitOk;
}

const CLI::App* failing_subcommand(const CLI::App& app) {
  for (const auto* sub : app.get_subcommands()) return sub;
  return &app;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel and monolingual corpus filtering toolkit", "corpus-clean"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CleanFlags parallel_flags;
  auto* clean_parallel = app.add_subcommand("clean-parallel", "Filter a line-aligned parallel corpus");
  clean_parallel->add_option("--src", parallel_flags.src, "Source side")->required();
  clean_parallel->add_option("--tgt", parallel_flags.tgt, "Target side")->required();
  clean_parallel->add_option("--src-lang", parallel_flags.src_lang, "Declared source language code");
  clean_parallel->add_option("--tgt-lang", parallel_flags.tgt_lang, "Declared target language code");
  add_pipeline_flags(clean_parallel, parallel_flags);

  CleanFlags mono_flags;
  auto* clean_mono = app.add_subcommand("clean-mono", "Filter a monolingual corpus");
  clean_mono->add_option("--in", mono_flags.in, "Input corpus")->required();
  clean_mono->add_option("--lang", mono_flags.src_lang, "Declared language code");
  add_pipeline_flags(clean_mono, mono_flags);

  std::string samples_dir;
  std::string model_out;
  std::vector<int> orders{1, 2, 3};
  double alpha = 0.5;
  auto* langid_train = app.add_subcommand("langid-train", "Train a character n-gram language identifier");
  langid_train->add_option("--samples", samples_dir, "Directory of <code>.txt sample files")->required();
  langid_train->add_option("--out", model_out, "Model file to write")->required();
  langid_train->add_option("--orders", orders, "N-gram orders")->delimiter(',')->capture_default_str();
  langid_train->add_option("--alpha", alpha, "Add-alpha smoothing constant")->capture_default_str();

  std::string model_in;
  std::optional<std::string> id_in;
  auto* langid_id = app.add_subcommand("langid-id", "Identify the language of each input line");
  langid_id->add_option("--model", model_in, "Model file")->required();
  langid_id->add_option("--in", id_in, "Input file (default: standard input)");

  std::vector<std::string> report_inputs;
  bool do_aggregate = false;
  auto* report = app.add_subcommand("report", "Print report tables");
  report->add_option("--in", report_inputs, "Report JSON (repeatable)")->required();
  report->add_flag("--aggregate", do_aggregate, "Also print the combined remaining percentage");

  std::vector<std::pair<std::string, std::string>> corpora;
  std::uint64_t seed = 0;
  std::string shuffle_src_out;
  std::string shuffle_tgt_out;
  auto* shuffle = app.add_subcommand("combine-shuffle", "Concatenate corpora and shuffle pairs");
  shuffle->add_option("--corpus", corpora, "SRC TGT (repeatable)")->required();
  shuffle->add_option("--seed", seed, "Shuffle seed")->capture_default_str();
  shuffle->add_option("--out-src", shuffle_src_out)->required();
  shuffle->add_option("--out-tgt", shuffle_tgt_out)->required();

  for (auto* sub : app.get_subcommands({})) sub->set_version_flag("--version", std::string(kVersion));

  std::vector<std::string> argv_storage{"corpus-clean"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << failing_subcommand(app)->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << failing_subcommand(app)->help();
    return kExitUsage;
  }

  try {
    if (clean_parallel->parsed()) return cmd_clean(parallel_flags, CorpusMode::parallel, out);
    if (clean_mono->parsed()) return cmd_clean(mono_flags, CorpusMode::monolingual, out);
    if (langid_train->parsed()) return cmd_langid_train(samples_dir, model_out, orders, alpha, out);
    if (langid_id->parsed()) return cmd_langid_id(model_in, id_in, out);
    if (report->parsed()) return cmd_report(report_inputs, do_aggregate, out);
    if (shuffle->parsed()) return cmd_combine_shuffle(corpora, seed, shuffle_src_out, shuffle_tgt_out, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n\n" << failing_subcommand(app)->help();
    return kExitUsage;
  } catch (const AlignmentError& e) {
    err << "alignment error: " << e.what() << '\n';
    return kExitData;
  } catch (const DecodeError& e) {
    err << "decoding error: " << e.what() << '\n';
    return kExitData;
  } catch (const TooManyBadLines& e) {
    err << "decoding error: " << e.what() << '\n';
    return kExitData;
  } catch (const TrainingError& e) {
    err << "training error: " << e.what() << '\n';
    return kExitData;
  } catch (const ModelFormatError& e) {
    err << "model error: " << e.what() << '\n';
    return kExitData;
  } catch (const ReportFormatError& e) {
    err << "report error: " << e.what() << '\n';
    return kExitData;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what();
    if (e.line_no() > 0) err << " (line " << e.line_no() << ')';
    err << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace corpusclean
