// Ordered filter-chain execution over streamed corpora.
//
// The first filter in the chain that rejects a pair claims it; later filters
// never see it and stateful filters never record it. Output is identical to
// a single-threaded run for any worker count.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "corpusclean/filters.hpp"
#include "corpusclean/langid.hpp"
#include "corpusclean/report.hpp"

namespace corpusclean {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The two sides of a parallel corpus have different line counts.
class AlignmentError : public std::runtime_error {
 public:
  AlignmentError(std::uint64_t src_lines, std::uint64_t tgt_lines, const std::string& context = {});
  std::uint64_t src_lines() const { return src_lines_; }
  std::uint64_t tgt_lines() const { return tgt_lines_; }

 private:
  std::uint64_t src_lines_;
  std::uint64_t tgt_lines_;
};

/// More undecodable lines than --max-bad-lines allows.
class TooManyBadLines : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CorpusMode { parallel, monolingual };
enum class MultiAlignMode { keep_first, drop_all };

struct PipelineConfig {
  std::vector<FilterId> filter_order;  // empty: default_order()
  FilterParams params;
  std::string src_lang;
  std::string tgt_lang;
  std::optional<std::filesystem::path> langid_model_path;
  CorpusMode mode = CorpusMode::parallel;
  MultiAlignMode multi_align = MultiAlignMode::keep_first;
  bool exact_dedup = false;
  std::size_t threads = 1;
  std::optional<std::uint64_t> max_bad_lines;  // unset: unlimited

  /// Table order with length_ratio last; language_mismatch only with a model.
  static std::vector<FilterId> default_order(CorpusMode mode, bool with_language);
  /// filter_order, or the default when it is empty.
  std::vector<FilterId> effective_order(bool with_language) const;
  /// Throws ConfigError for duplicate or mode-incompatible filters and
  /// invalid parameters.
  void validate(bool have_model) const;
};

struct PipelineOutputs {
  /// Kept pairs in input order, normalized. In monolingual mode tgt is empty.
  std::function<void(const SentencePair&)> on_keep;
  std::function<void(std::uint64_t line_no, FilterId id, std::string_view src, std::string_view tgt)> on_reject;
};

class Pipeline {
 public:
  /// `model` is required iff the chain contains language_mismatch.
  explicit Pipeline(PipelineConfig config, std::shared_ptr<const LangIdModel> model = nullptr);

  const PipelineConfig& config() const { return config_; }
  const std::vector<FilterId>& chain() const { return chain_; }

  /// Streams must be rewindable when multi_align == drop_all.
  FilterReport run_parallel(std::istream& src, std::istream& tgt, const PipelineOutputs& out);
  FilterReport run_mono(std::istream& in, const PipelineOutputs& out);

  /// Dedup table footprint after the last run.
  std::size_t dedup_memory_bytes() const { return dedup_bytes_; }
  std::size_t dedup_entries() const { return dedup_entries_; }

 private:
  struct Run;

  FilterReport run(std::istream& src, std::istream* tgt, const PipelineOutputs& out);

  PipelineConfig config_;
  std::shared_ptr<const LangIdModel> model_;
  std::vector<FilterId> chain_;
  std::size_t dedup_bytes_ = 0;
  std::size_t dedup_entries_ = 0;
};

/// Loads the model named by config.langid_model_path (if any) and runs.
FilterReport run_parallel(const PipelineConfig& config, std::istream& src, std::istream& tgt,
                          const PipelineOutputs& out);
FilterReport run_mono(const PipelineConfig& config, std::istream& in, const PipelineOutputs& out);

// ---------------------------------------------------------------------------
// Combine and shuffle

struct CorpusPaths {
  std::filesystem::path src;
  std::filesystem::path tgt;
};

/// Deterministic Fisher-Yates permutation of [0, n) driven by mt19937_64.
/// Identical on every platform for a given seed.
std::vector<std::uint64_t> seeded_permutation(std::uint64_t n, std::uint64_t seed);

/// Concatenates all pairs and writes them in seeded-permutation order.
/// Lines are copied byte for byte. Returns the number of pairs written.
/// Throws AlignmentError if any corpus has sides of different lengths.
std::uint64_t combine_shuffle(std::span<const CorpusPaths> corpora, std::uint64_t seed,
                              const std::filesystem::path& src_out, const std::filesystem::path& tgt_out);

}  // namespace corpusclean
