#include "corpusclean/pipeline.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <thread>

#include "corpusclean/io.hpp"

namespace corpusclean {

namespace {

constexpr std::size_t kBatchSize = 4096;

constexpr std::uint32_t bit(FilterId id) { return 1u << static_cast<unsigned>(id); }

struct Item {
  std::uint64_t line_no = 0;
  std::string raw_src;
  std::string raw_tgt;
  SentencePair pair;
  bool bad = false;
  bool evaluated = false;
  std::uint32_t stateless_rejects = 0;
};

std::uint64_t drain_lines(std::istream& in) {
  std::uint64_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

void rewind(std::istream& in) {
  in.clear();
  in.seekg(0, std::ios::beg);
  if (!in) throw ConfigError("drop-all multi-alignment needs rewindable input streams");
}

}  // namespace

AlignmentError::AlignmentError(std::uint64_t src_lines, std::uint64_t tgt_lines, const std::string& context)
    : std::runtime_error((context.empty() ? std::string() : context + ": ") + "source has " +
                         std::to_string(src_lines) + " lines but target has " + std::to_string(tgt_lines)),
      src_lines_(src_lines),
      tgt_lines_(tgt_lines) {}

// ---------------------------------------------------------------------------
// PipelineConfig

std::vector<FilterId> PipelineConfig::default_order(CorpusMode mode, bool with_language) {
  std::vector<FilterId> order;
  for (FilterId id : kAllFilters) {
    if (id == FilterId::language_mismatch && !with_language) continue;
    if (mode == CorpusMode::monolingual && is_pair_only(id)) continue;
    order.push_back(id);
  }
  return order;
}

std::vector<FilterId> PipelineConfig::effective_order(bool with_language) const {
  return filter_order.empty() ? default_order(mode, with_language) : filter_order;
}

void PipelineConfig::validate(bool have_model) const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (threads == 0) throw ConfigError("threads must be at least 1");
  const auto order = effective_order(have_model);
  std::array<bool, kFilterCount + 1> seen{};
  for (FilterId id : order) {
    if (id == FilterId::invalid_utf8) throw ConfigError("invalid_utf8 is reserved and cannot be placed in a chain");
    if (seen[static_cast<std::size_t>(id)]) {
      throw ConfigError("filter '" + std::string(filter_name(id)) + "' listed twice");
    }
    seen[static_cast<std::size_t>(id)] = true;
    if (mode == CorpusMode::monolingual && is_pair_only(id)) {
      throw ConfigError("filter '" + std::string(filter_name(id)) + "' needs a parallel corpus");
    }
    if (id == FilterId::language_mismatch && !have_model) {
      throw ConfigError("language_mismatch requires a language identification model");
    }
  }
  if (seen[static_cast<std::size_t>(FilterId::language_mismatch)]) {
    if (src_lang.empty()) throw ConfigError("source language not declared");
    if (mode == CorpusMode::parallel && tgt_lang.empty()) throw ConfigError("target language not declared");
  }
}

// ---------------------------------------------------------------------------
// Pipeline

struct Pipeline::Run {
  const Pipeline& pipeline;
  bool mono;
  std::span<const FilterId> chain;
  // Finalized drop-all key sets, by chain position; null means keep-first.
  std::vector<const AmbiguousKeys*> drop_all;
  DedupState state;
  // Collection pass: observes pairs that survive `chain`, keyed per `collect_key`.
  AmbiguousKeys* collect = nullptr;
  AlignmentKey collect_key = AlignmentKey::by_source;
  const PipelineOutputs* out = nullptr;
  std::array<std::uint64_t, kFilterCount + 1> counts{};
  std::uint64_t lines = 0;
  std::uint64_t bad_lines = 0;

  Run(const Pipeline& p, bool is_mono, std::span<const FilterId> c)
      : pipeline(p), mono(is_mono), chain(c), drop_all(c.size(), nullptr), state(p.config_.exact_dedup) {}

  const FilterParams& params() const { return pipeline.config_.params; }

  bool stateless_rejects(FilterId id, const SentencePair& pair) const {
    const auto& prm = params();
    switch (id) {
      case FilterId::src_eq_tgt:
        return filter_src_eq_tgt(pair).rejected();
      case FilterId::nonalpha_majority:
        return (mono ? filter_nonalpha_majority(pair.src, prm) : filter_nonalpha_majority(pair, prm)).rejected();
      case FilterId::nonalpha_mismatch:
        return filter_nonalpha_mismatch(pair, prm).rejected();
      case FilterId::repeating_tokens:
        return (mono ? filter_repeating_tokens(pair.src, prm) : filter_repeating_tokens(pair, prm)).rejected();
      case FilterId::language_mismatch: {
        const auto& cfg = pipeline.config_;
        const auto& model = *pipeline.model_;
        return (mono ? filter_language(pair.src, model, cfg.src_lang, prm)
                     : filter_language(pair, model, {cfg.src_lang, cfg.tgt_lang}, prm))
            .rejected();
      }
      case FilterId::length_ratio:
        return (mono ? filter_length_ratio(pair.src, prm) : filter_length_ratio(pair, prm)).rejected();
      default:
        return false;
    }
  }

  void prepare(Item& item, bool evaluate) const {
    item.bad = false;
    item.evaluated = false;
    item.stateless_rejects = 0;
    item.pair.src.line_no = item.pair.tgt.line_no = item.line_no;
    try {
      item.pair.src.text = normalize_line(item.raw_src);
      item.pair.tgt.text = mono ? std::string() : normalize_line(item.raw_tgt);
    } catch (const DecodeError&) {
      item.bad = true;
      return;
    }
    if (!evaluate) return;
    for (FilterId id : chain) {
      if (!is_stateful(id) && stateless_rejects(id, item.pair)) item.stateless_rejects |= bit(id);
    }
    item.evaluated = true;
  }

  void prepare_batch(std::span<Item> items) const {
    const std::size_t threads = std::min(pipeline.config_.threads, items.size());
    if (threads <= 1) {
      for (auto& item : items) prepare(item, false);
      return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    const std::size_t per = (items.size() + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * per;
      const std::size_t end = std::min(items.size(), begin + per);
      if (begin >= end) break;
      workers.emplace_back([this, items, begin, end] {
        for (std::size_t i = begin; i < end; ++i) prepare(items[i], true);
      });
    }
  }

  std::optional<FilterId> judge(Item& item) {
    const SentencePair& pair = item.pair;
    for (std::size_t pos = 0; pos < chain.size(); ++pos) {
      const FilterId id = chain[pos];
      bool rejected;
      switch (id) {
        case FilterId::unique:
          rejected = (mono ? filter_unique(pair.src, state) : filter_unique(pair, state)).rejected();
          break;
        case FilterId::multi_src_one_tgt:
        case FilterId::multi_tgt_one_src: {
          const AlignmentKey key =
              id == FilterId::multi_tgt_one_src ? AlignmentKey::by_source : AlignmentKey::by_target;
          rejected = drop_all[pos] != nullptr
                         ? filter_multi_alignment_drop_all(pair, *drop_all[pos], key).rejected()
                         : filter_multi_alignment(pair, state, key).rejected();
          break;
        }
        default:
          rejected = item.evaluated ? (item.stateless_rejects & bit(id)) != 0 : stateless_rejects(id, pair);
      }
      if (rejected) return id;
    }
    if (collect != nullptr) {
      const bool by_source = collect_key == AlignmentKey::by_source;
      collect->observe(by_source ? pair.src.text : pair.tgt.text, by_source ? pair.tgt.text : pair.src.text);
    }
    return std::nullopt;
  }

  void finish(Item& item) {
    ++lines;
    if (item.bad) {
      if (collect != nullptr) return;
      ++bad_lines;
      ++counts[static_cast<std::size_t>(FilterId::invalid_utf8)];
      const auto& limit = pipeline.config_.max_bad_lines;
      if (limit && bad_lines > *limit) {
        throw TooManyBadLines("more than " + std::to_string(*limit) + " undecodable lines (line " +
                              std::to_string(item.line_no) + ")");
      }
      if (out && out->on_reject) {
        out->on_reject(item.line_no, FilterId::invalid_utf8, scrub_utf8(item.raw_src),
                       mono ? std::string() : scrub_utf8(item.raw_tgt));
      }
      return;
    }
    const auto claimed = judge(item);
    if (collect != nullptr) return;
    if (claimed) {
      ++counts[static_cast<std::size_t>(*claimed)];
      if (out && out->on_reject) out->on_reject(item.line_no, *claimed, item.pair.src.text, item.pair.tgt.text);
    } else if (out && out->on_keep) {
      out->on_keep(item.pair);
    }
  }

  void scan(std::istream& src, std::istream* tgt) {
    std::vector<Item> batch(kBatchSize);
    std::uint64_t line_no = 0;
    for (;;) {
      std::size_t n = 0;
      while (n < kBatchSize) {
        Item& item = batch[n];
        const bool got_src = static_cast<bool>(std::getline(src, item.raw_src));
        const bool got_tgt = tgt == nullptr ? got_src : static_cast<bool>(std::getline(*tgt, item.raw_tgt));
        if (src.bad() || (tgt != nullptr && tgt->bad())) throw IoError("read failed", line_no + 1);
        if (!got_src && !got_tgt) break;
        if (got_src != got_tgt) {
          const std::uint64_t src_lines = line_no + got_src + (got_src ? drain_lines(src) : 0);
          const std::uint64_t tgt_lines = line_no + got_tgt + (got_tgt ? drain_lines(*tgt) : 0);
          throw AlignmentError(src_lines, tgt_lines);
        }
        item.line_no = ++line_no;
        ++n;
      }
      std::span<Item> items(batch.data(), n);
      prepare_batch(items);
      for (auto& item : items) finish(item);
      if (n < kBatchSize) break;
    }
  }
};

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<const LangIdModel> model)
    : config_(std::move(config)), model_(std::move(model)) {
  config_.validate(model_ != nullptr);
  chain_ = config_.effective_order(model_ != nullptr);
  if (std::find(chain_.begin(), chain_.end(), FilterId::language_mismatch) != chain_.end()) {
    std::vector<std::string> declared{config_.src_lang};
    if (config_.mode == CorpusMode::parallel) declared.push_back(config_.tgt_lang);
    for (const auto& lang : declared) {
      if (!model_->has_language(lang)) throw ConfigError("language model has no language '" + lang + "'");
    }
  }
}

FilterReport Pipeline::run_parallel(std::istream& src, std::istream& tgt, const PipelineOutputs& out) {
  if (config_.mode != CorpusMode::parallel) throw ConfigError("pipeline is configured for monolingual input");
  return run(src, &tgt, out);
}

FilterReport Pipeline::run_mono(std::istream& in, const PipelineOutputs& out) {
  if (config_.mode != CorpusMode::monolingual) throw ConfigError("pipeline is configured for parallel input");
  return run(in, nullptr, out);
}

FilterReport Pipeline::run(std::istream& src, std::istream* tgt, const PipelineOutputs& out) {
  const bool mono = tgt == nullptr;
  std::vector<std::unique_ptr<AmbiguousKeys>> finalized(chain_.size());
  bool rewound_needed = false;

  if (config_.multi_align == MultiAlignMode::drop_all && !mono) {
    for (std::size_t pos = 0; pos < chain_.size(); ++pos) {
      const FilterId id = chain_[pos];
      if (id != FilterId::multi_src_one_tgt && id != FilterId::multi_tgt_one_src) continue;
      if (rewound_needed) {
        rewind(src);
        rewind(*tgt);
      }
      auto keys = std::make_unique<AmbiguousKeys>(config_.exact_dedup);
      Run pass(*this, mono, std::span<const FilterId>(chain_.data(), pos));
      for (std::size_t k = 0; k < pos; ++k) pass.drop_all[k] = finalized[k].get();
      pass.collect = keys.get();
      pass.collect_key = id == FilterId::multi_tgt_one_src ? AlignmentKey::by_source : AlignmentKey::by_target;
      pass.scan(src, tgt);
      finalized[pos] = std::move(keys);
      rewound_needed = true;
    }
    if (rewound_needed) {
      rewind(src);
      rewind(*tgt);
    }
  }

  Run run(*this, mono, chain_);
  for (std::size_t k = 0; k < chain_.size(); ++k) run.drop_all[k] = finalized[k].get();
  run.out = &out;
  run.scan(src, tgt);

  dedup_bytes_ = run.state.memory_bytes();
  dedup_entries_ = run.state.pair_count() + run.state.alignment_key_count(AlignmentKey::by_source) +
                   run.state.alignment_key_count(AlignmentKey::by_target);

  FilterReport report;
  report.corpus_size = run.lines;
  const auto bad = run.counts[static_cast<std::size_t>(FilterId::invalid_utf8)];
  if (bad > 0) report.per_filter.push_back({FilterId::invalid_utf8, bad});
  for (FilterId id : chain_) report.per_filter.push_back({id, run.counts[static_cast<std::size_t>(id)]});
  report.finalize();
  return report;
}

namespace {

std::shared_ptr<const LangIdModel> model_for(const PipelineConfig& config) {
  if (!config.langid_model_path) return nullptr;
  return std::make_shared<const LangIdModel>(load_model(*config.langid_model_path));
}

}  // namespace

FilterReport run_parallel(const PipelineConfig& config, std::istream& src, std::istream& tgt,
                          const PipelineOutputs& out) {
  Pipeline pipeline(config, model_for(config));
  return pipeline.run_parallel(src, tgt, out);
}

FilterReport run_mono(const PipelineConfig& config, std::istream& in, const PipelineOutputs& out) {
  Pipeline pipeline(config, model_for(config));
  return pipeline.run_mono(in, out);
}

}  // namespace corpusclean
