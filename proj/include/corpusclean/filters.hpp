// Keep/reject decisions over sentence pairs.
//
// Stateless filters are pure functions of a pair and its parameters.
// The deduplicating filters (unique, multi-alignment) consult a DedupState
// and follow keep-first semantics: the first occurrence of a key is kept and
// recorded, later conflicting occurrences are rejected.

#pragma once

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "corpusclean/core.hpp"

namespace corpusclean {

class LangIdModel;

enum class FilterId : std::uint8_t {
  unique,
  src_eq_tgt,
  multi_src_one_tgt,
  multi_tgt_one_src,
  nonalpha_majority,
  nonalpha_mismatch,
  repeating_tokens,
  language_mismatch,
  length_ratio,
  // Reserved: the line could not be decoded as UTF-8. Never part of a chain.
  invalid_utf8,
};

inline constexpr std::size_t kFilterCount = 9;

inline constexpr std::array<FilterId, kFilterCount> kAllFilters = {
    FilterId::unique,           FilterId::src_eq_tgt,        FilterId::multi_src_one_tgt,
    FilterId::multi_tgt_one_src, FilterId::nonalpha_majority, FilterId::nonalpha_mismatch,
    FilterId::repeating_tokens, FilterId::language_mismatch, FilterId::length_ratio,
};

std::string_view filter_name(FilterId id);
/// Row label used in the human-readable report table.
std::string_view filter_label(FilterId id);
std::optional<FilterId> parse_filter_id(std::string_view name);

bool is_stateful(FilterId id);
/// Filters that only make sense with two sides.
bool is_pair_only(FilterId id);

class FilterDecision {
 public:
  static FilterDecision keep() { return FilterDecision(); }
  static FilterDecision reject(FilterId id) { return FilterDecision(id); }

  bool kept() const { return !filter_.has_value(); }
  bool rejected() const { return filter_.has_value(); }
  /// Only meaningful when rejected().
  FilterId filter_id() const { return *filter_; }

  friend bool operator==(const FilterDecision&, const FilterDecision&) = default;

 private:
  FilterDecision() = default;
  explicit FilterDecision(FilterId id) : filter_(id) {}
  std::optional<FilterId> filter_;
};

struct FilterParams {
  double nonalpha_majority_threshold = 0.5;
  double mismatch_ratio = 3.0;
  std::size_t mismatch_min_count = 6;
  std::size_t repeat_min_run = 3;
  std::size_t langid_min_chars = 20;
  double langid_min_margin = 0.0;
  std::size_t len_min = 1;
  std::size_t len_max = 100;
  double len_ratio_max = 9.0;

  /// Throws std::invalid_argument naming the first violated bound.
  void validate() const;
};

/// Which side's text keys the multi-alignment lookup.
///   by_source: one source seen with several targets -> multi_tgt_one_src
///   by_target: one target seen with several sources -> multi_src_one_tgt
enum class AlignmentKey : std::uint8_t { by_source, by_target };

FilterId multi_alignment_filter(AlignmentKey key);

/// Dedup tables for one run. In exact mode keys are the full length-prefixed
/// byte strings instead of their 128-bit digests.
class DedupState {
 public:
  explicit DedupState(bool exact = false) : exact_(exact) {}

  bool exact() const { return exact_; }

  /// Records the pair; false if it was already present.
  bool insert_pair(std::string_view src, std::string_view tgt);
  /// Records key->partner on first sight of key. Returns false iff key was
  /// seen before with a different partner.
  bool admit_alignment(AlignmentKey which, std::string_view key, std::string_view partner);

  std::size_t pair_count() const;
  std::size_t alignment_key_count(AlignmentKey which) const;
  /// Bytes held by the hash tables (slots plus control bytes).
  std::size_t memory_bytes() const;
  void clear();

 private:
  // Digest tables keep only the low 64 bits of the partner digest.
  template <typename Key, typename Partner>
  struct Tables {
    absl::flat_hash_set<Key> pairs;
    absl::flat_hash_map<Key, Partner> by_source;
    absl::flat_hash_map<Key, Partner> by_target;
  };

  bool exact_;
  Tables<Digest128, std::uint64_t> digest_;
  Tables<std::string, std::string> exact_tables_;
};

/// Keys flagged by a collection pass as having more than one distinct
/// partner; used by the drop-all variant of the multi-alignment filters.
class AmbiguousKeys {
 public:
  explicit AmbiguousKeys(bool exact = false) : exact_(exact) {}

  void observe(std::string_view key, std::string_view partner);
  bool contains(std::string_view key) const;
  std::size_t size() const;

 private:
  struct Entry {
    std::uint64_t partner;
    bool ambiguous;
  };
  struct ExactEntry {
    std::string partner;
    bool ambiguous;
  };
  bool exact_;
  absl::flat_hash_map<Digest128, Entry> digest_;
  absl::flat_hash_map<std::string, ExactEntry> exact_entries_;
};

// ---------------------------------------------------------------------------
// Pair filters

FilterDecision filter_unique(const SentencePair& pair, DedupState& state);
FilterDecision filter_src_eq_tgt(const SentencePair& pair);
FilterDecision filter_multi_alignment(const SentencePair& pair, DedupState& state, AlignmentKey key);
FilterDecision filter_multi_alignment_drop_all(const SentencePair& pair, const AmbiguousKeys& ambiguous,
                                               AlignmentKey key);
FilterDecision filter_nonalpha_majority(const SentencePair& pair, const FilterParams& params);
FilterDecision filter_nonalpha_mismatch(const SentencePair& pair, const FilterParams& params);
FilterDecision filter_repeating_tokens(const SentencePair& pair, const FilterParams& params);
FilterDecision filter_language(const SentencePair& pair, const LangIdModel& model,
                               const std::pair<std::string, std::string>& declared, const FilterParams& params);
FilterDecision filter_length_ratio(const SentencePair& pair, const FilterParams& params);

// ---------------------------------------------------------------------------
// Single-side variants for monolingual corpora

FilterDecision filter_unique(const Sentence& line, DedupState& state);
FilterDecision filter_nonalpha_majority(const Sentence& line, const FilterParams& params);
FilterDecision filter_repeating_tokens(const Sentence& line, const FilterParams& params);
FilterDecision filter_language(const Sentence& line, const LangIdModel& model, std::string_view declared,
                               const FilterParams& params);
/// Length bounds only; there is no ratio for a single side.
FilterDecision filter_length_ratio(const Sentence& line, const FilterParams& params);

// Building blocks, exposed for tests.
bool exceeds_nonalpha_majority(const AlphaCount& count, double threshold);
bool nonalpha_counts_mismatch(std::size_t a, std::size_t b, const FilterParams& params);
/// Longest run of consecutive case-folded identical tokens containing a letter.
std::size_t longest_letter_token_run(std::string_view text);
/// True if the side should be rejected as a wrong-language sentence.
bool wrong_language(std::string_view text, const LangIdModel& model, std::string_view declared,
                    const FilterParams& params);

}  // namespace corpusclean
