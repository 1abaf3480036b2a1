#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>

#include "corpusclean/report.hpp"

namespace fixtures {

namespace fs = std::filesystem;
using namespace corpusclean;

fs::path data_dir() { return CC_TEST_DATA_DIR; }
fs::path cli_binary() { return CC_CLI_BINARY; }

std::vector<std::string> read_dir_lines(const fs::path& file) { return synth::read_lines(file); }

const LangIdModel& seed_model() { return *seed_model_ptr(); }

std::shared_ptr<const LangIdModel> seed_model_ptr() {
  static const auto model = [] {
    std::map<std::string, std::vector<std::string>> samples;
    for (const char* lang : {"en", "et", "fi"}) {
      samples[lang] = synth::read_lines(data_dir() / "langid" / "train" / (std::string(lang) + ".txt"));
    }
    return std::make_shared<const LangIdModel>(train(samples, {1, 2, 3}, 0.5));
  }();
  return model;
}

const oracle::Scorer& seed_scorer() {
  static const oracle::Scorer scorer(model_to_json(seed_model()));
  return scorer;
}

const synth::Pools& seed_pools() {
  static const synth::Pools pools = synth::load_pools(data_dir() / "langid" / "source", {"en", "et", "fi"});
  return pools;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("cc-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

RunResult run_library(const PipelineConfig& config, const std::vector<std::string>& src,
                      const std::vector<std::string>& tgt) {
  const bool mono = config.mode == CorpusMode::monolingual;
  const bool wants_model =
      config.filter_order.empty() ||
      std::find(config.filter_order.begin(), config.filter_order.end(), FilterId::language_mismatch) !=
          config.filter_order.end();
  Pipeline pipeline(config, wants_model ? seed_model_ptr() : nullptr);

  std::string src_text, tgt_text;
  for (const auto& l : src) src_text += l + '\n';
  for (const auto& l : tgt) tgt_text += l + '\n';
  std::istringstream src_in(src_text), tgt_in(tgt_text);

  RunResult r;
  r.verdict.assign(src.size(), -1);
  std::ostringstream rejects;
  PipelineOutputs out;
  out.on_keep = [&](const SentencePair& p) {
    r.kept_src.push_back(p.src.text);
    if (!mono) r.kept_tgt.push_back(p.tgt.text);
  };
  out.on_reject = [&](std::uint64_t line, FilterId id, std::string_view s, std::string_view t) {
    r.verdict.at(line - 1) = static_cast<int>(id);
    rejects << reject_record_line(line, id, s, t) << '\n';
  };
  r.report = mono ? pipeline.run_mono(src_in, out) : pipeline.run_parallel(src_in, tgt_in, out);
  r.rejects = rejects.str();
  return r;
}

oracle::Config oracle_config(const PipelineConfig& config) {
  oracle::Config c;
  const bool with_language = config.filter_order.empty() ||
                             std::find(config.filter_order.begin(), config.filter_order.end(),
                                       FilterId::language_mismatch) != config.filter_order.end();
  for (FilterId id : config.effective_order(with_language)) c.chain.push_back(static_cast<int>(id));
  const auto& p = config.params;
  c.params = {p.nonalpha_majority_threshold, p.mismatch_ratio, p.mismatch_min_count, p.repeat_min_run,
              p.langid_min_chars, p.langid_min_margin, p.len_min, p.len_max, p.len_ratio_max};
  c.drop_all = config.multi_align == MultiAlignMode::drop_all;
  c.mono = config.mode == CorpusMode::monolingual;
  c.src_lang = config.src_lang;
  c.tgt_lang = config.tgt_lang;
  c.scorer = &seed_scorer();
  return c;
}

}  // namespace fixtures
