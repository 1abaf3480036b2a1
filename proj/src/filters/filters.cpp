#include "corpusclean/filters.hpp"

#include <algorithm>
#include <stdexcept>

#include "corpusclean/langid.hpp"

namespace corpusclean {

namespace {

struct FilterInfo {
  FilterId id;
  std::string_view name;
  std::string_view label;
};

constexpr std::array<FilterInfo, kFilterCount + 1> kInfo = {{
    {FilterId::unique, "unique", "Unique"},
    {FilterId::src_eq_tgt, "src_eq_tgt", "src == tgt"},
    {FilterId::multi_src_one_tgt, "multi_src_one_tgt", "* sources 1 target"},
    {FilterId::multi_tgt_one_src, "multi_tgt_one_src", "* targets 1 source"},
    {FilterId::nonalpha_majority, "nonalpha_majority", "> 50% non-alpha"},
    {FilterId::nonalpha_mismatch, "nonalpha_mismatch", "Non-alpha mismatch"},
    {FilterId::repeating_tokens, "repeating_tokens", "Repeating tokens"},
    {FilterId::language_mismatch, "language_mismatch", "Language mismatch"},
    {FilterId::length_ratio, "length_ratio", "Length / ratio"},
    {FilterId::invalid_utf8, "invalid_utf8", "Invalid UTF-8"},
}};

template <typename H>
std::size_t table_bytes(const H& table) {
  return table.capacity() * (sizeof(typename H::value_type) + 1);
}

std::uint64_t partner_digest(std::string_view partner) { return fingerprint({partner}).lo; }

}  // namespace

std::string_view filter_name(FilterId id) { return kInfo[static_cast<std::size_t>(id)].name; }
std::string_view filter_label(FilterId id) { return kInfo[static_cast<std::size_t>(id)].label; }

std::optional<FilterId> parse_filter_id(std::string_view name) {
  for (const auto& info : kInfo) {
    if (info.name == name) return info.id;
  }
  return std::nullopt;
}

bool is_stateful(FilterId id) {
  return id == FilterId::unique || id == FilterId::multi_src_one_tgt || id == FilterId::multi_tgt_one_src;
}

bool is_pair_only(FilterId id) {
  return id == FilterId::src_eq_tgt || id == FilterId::multi_src_one_tgt || id == FilterId::multi_tgt_one_src ||
         id == FilterId::nonalpha_mismatch;
}

FilterId multi_alignment_filter(AlignmentKey key) {
  return key == AlignmentKey::by_source ? FilterId::multi_tgt_one_src : FilterId::multi_src_one_tgt;
}

void FilterParams::validate() const {
  if (!(nonalpha_majority_threshold > 0.0 && nonalpha_majority_threshold < 1.0)) {
    throw std::invalid_argument("nonalpha_majority_threshold must lie in (0, 1)");
  }
  if (!(mismatch_ratio >= 1.0)) throw std::invalid_argument("mismatch_ratio must be >= 1");
  if (repeat_min_run < 2) throw std::invalid_argument("repeat_min_run must be >= 2");
  if (!(langid_min_margin >= 0.0)) throw std::invalid_argument("langid_min_margin must be >= 0");
  if (len_min > len_max) throw std::invalid_argument("len_min must not exceed len_max");
  if (!(len_ratio_max > 0.0)) throw std::invalid_argument("len_ratio_max must be positive");
}

// ---------------------------------------------------------------------------
// DedupState

bool DedupState::insert_pair(std::string_view src, std::string_view tgt) {
  if (exact_) return exact_tables_.pairs.insert(fingerprint_key({src, tgt})).second;
  return digest_.pairs.insert(fingerprint({src, tgt})).second;
}

bool DedupState::admit_alignment(AlignmentKey which, std::string_view key, std::string_view partner) {
  if (exact_) {
    auto& table = which == AlignmentKey::by_source ? exact_tables_.by_source : exact_tables_.by_target;
    auto [it, inserted] = table.try_emplace(std::string(key), partner);
    return inserted || it->second == partner;
  }
  auto& table = which == AlignmentKey::by_source ? digest_.by_source : digest_.by_target;
  const std::uint64_t p = partner_digest(partner);
  auto [it, inserted] = table.try_emplace(fingerprint({key}), p);
  return inserted || it->second == p;
}

std::size_t DedupState::pair_count() const {
  return exact_ ? exact_tables_.pairs.size() : digest_.pairs.size();
}

std::size_t DedupState::alignment_key_count(AlignmentKey which) const {
  if (exact_) {
    return which == AlignmentKey::by_source ? exact_tables_.by_source.size() : exact_tables_.by_target.size();
  }
  return which == AlignmentKey::by_source ? digest_.by_source.size() : digest_.by_target.size();
}

std::size_t DedupState::memory_bytes() const {
  if (exact_) {
    return table_bytes(exact_tables_.pairs) + table_bytes(exact_tables_.by_source) +
           table_bytes(exact_tables_.by_target);
  }
  return table_bytes(digest_.pairs) + table_bytes(digest_.by_source) + table_bytes(digest_.by_target);
}

void DedupState::clear() {
  digest_ = {};
  exact_tables_ = {};
}

// ---------------------------------------------------------------------------
// AmbiguousKeys

void AmbiguousKeys::observe(std::string_view key, std::string_view partner) {
  if (exact_) {
    auto [it, inserted] = exact_entries_.try_emplace(std::string(key), ExactEntry{std::string(partner), false});
    if (!inserted && it->second.partner != partner) it->second.ambiguous = true;
    return;
  }
  const std::uint64_t p = partner_digest(partner);
  auto [it, inserted] = digest_.try_emplace(fingerprint({key}), Entry{p, false});
  if (!inserted && it->second.partner != p) it->second.ambiguous = true;
}

bool AmbiguousKeys::contains(std::string_view key) const {
  if (exact_) {
    auto it = exact_entries_.find(std::string(key));
    return it != exact_entries_.end() && it->second.ambiguous;
  }
  auto it = digest_.find(fingerprint({key}));
  return it != digest_.end() && it->second.ambiguous;
}

std::size_t AmbiguousKeys::size() const {
  std::size_t n = 0;
  if (exact_) {
    for (const auto& [k, e] : exact_entries_) n += e.ambiguous;
  } else {
    for (const auto& [k, e] : digest_) n += e.ambiguous;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Building blocks

bool exceeds_nonalpha_majority(const AlphaCount& count, double threshold) {
  const std::size_t total = count.total();
  if (total == 0) return false;
  return static_cast<double>(count.non_alpha) > threshold * static_cast<double>(total);
}

bool nonalpha_counts_mismatch(std::size_t a, std::size_t b, const FilterParams& params) {
  const std::size_t m = std::max(a, b);
  const std::size_t n = std::min(a, b);
  return static_cast<double>(m) >= params.mismatch_ratio * static_cast<double>(std::max<std::size_t>(n, 1)) &&
         m >= params.mismatch_min_count;
}

std::size_t longest_letter_token_run(std::string_view text) {
  std::size_t best = 0;
  std::size_t run = 0;
  std::u32string previous;
  std::u32string current;
  std::vector<char32_t> cps;
  for (const auto& token : tokenize(text)) {
    cps.clear();
    decode_utf8(token, cps);
    current.clear();
    bool has_letter = false;
    for (char32_t cp : cps) {
      has_letter = has_letter || is_letter(cp);
      current.push_back(to_lower(cp));
    }
    if (!has_letter) {
      run = 0;
      previous.clear();
      continue;
    }
    run = (run > 0 && current == previous) ? run + 1 : 1;
    best = std::max(best, run);
    previous.swap(current);
  }
  return best;
}

bool wrong_language(std::string_view text, const LangIdModel& model, std::string_view declared,
                    const FilterParams& params) {
  if (count_alpha(text).alpha < params.langid_min_chars) return false;
  try {
    const LangIdVerdict verdict = model.identify(text);
    return verdict.language != declared && verdict.margin >= params.langid_min_margin;
  } catch (const UndecidableInput&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Pair filters

FilterDecision filter_unique(const SentencePair& pair, DedupState& state) {
  return state.insert_pair(pair.src.text, pair.tgt.text) ? FilterDecision::keep()
                                                         : FilterDecision::reject(FilterId::unique);
}

FilterDecision filter_src_eq_tgt(const SentencePair& pair) {
  return pair.src.text == pair.tgt.text ? FilterDecision::reject(FilterId::src_eq_tgt) : FilterDecision::keep();
}

FilterDecision filter_multi_alignment(const SentencePair& pair, DedupState& state, AlignmentKey key) {
  const bool by_source = key == AlignmentKey::by_source;
  const auto& k = by_source ? pair.src.text : pair.tgt.text;
  const auto& partner = by_source ? pair.tgt.text : pair.src.text;
  return state.admit_alignment(key, k, partner) ? FilterDecision::keep()
                                                : FilterDecision::reject(multi_alignment_filter(key));
}

FilterDecision filter_multi_alignment_drop_all(const SentencePair& pair, const AmbiguousKeys& ambiguous,
                                               AlignmentKey key) {
  const auto& k = key == AlignmentKey::by_source ? pair.src.text : pair.tgt.text;
  return ambiguous.contains(k) ? FilterDecision::reject(multi_alignment_filter(key)) : FilterDecision::keep();
}

FilterDecision filter_nonalpha_majority(const SentencePair& pair, const FilterParams& params) {
  const double t = params.nonalpha_majority_threshold;
  if (exceeds_nonalpha_majority(count_alpha(pair.src.text), t) ||
      exceeds_nonalpha_majority(count_alpha(pair.tgt.text), t)) {
    return FilterDecision::reject(FilterId::nonalpha_majority);
  }
  return FilterDecision::keep();
}

FilterDecision filter_nonalpha_mismatch(const SentencePair& pair, const FilterParams& params) {
  const auto a = count_alpha(pair.src.text).non_alpha;
  const auto b = count_alpha(pair.tgt.text).non_alpha;
  return nonalpha_counts_mismatch(a, b, params) ? FilterDecision::reject(FilterId::nonalpha_mismatch)
                                                : FilterDecision::keep();
}

FilterDecision filter_repeating_tokens(const SentencePair& pair, const FilterParams& params) {
  if (longest_letter_token_run(pair.src.text) >= params.repeat_min_run ||
      longest_letter_token_run(pair.tgt.text) >= params.repeat_min_run) {
    return FilterDecision::reject(FilterId::repeating_tokens);
  }
  return FilterDecision::keep();
}

FilterDecision filter_language(const SentencePair& pair, const LangIdModel& model,
                               const std::pair<std::string, std::string>& declared, const FilterParams& params) {
  if (!model.has_language(declared.first) || !model.has_language(declared.second)) {
    throw std::invalid_argument("language model lacks declared language '" +
                                (model.has_language(declared.first) ? declared.second : declared.first) + "'");
  }
  if (wrong_language(pair.src.text, model, declared.first, params) ||
      wrong_language(pair.tgt.text, model, declared.second, params)) {
    return FilterDecision::reject(FilterId::language_mismatch);
  }
  return FilterDecision::keep();
}

FilterDecision filter_length_ratio(const SentencePair& pair, const FilterParams& params) {
  const std::size_t ls = count_tokens(pair.src.text);
  const std::size_t lt = count_tokens(pair.tgt.text);
  const auto out_of_bounds = [&](std::size_t n) { return n < params.len_min || n > params.len_max; };
  if (out_of_bounds(ls) || out_of_bounds(lt)) return FilterDecision::reject(FilterId::length_ratio);
  const double ratio = static_cast<double>(std::max(ls, lt)) / static_cast<double>(std::max<std::size_t>(std::min(ls, lt), 1));
  return ratio > params.len_ratio_max ? FilterDecision::reject(FilterId::length_ratio) : FilterDecision::keep();
}

// ---------------------------------------------------------------------------
// Monolingual variants

FilterDecision filter_unique(const Sentence& line, DedupState& state) {
  return state.insert_pair(line.text, {}) ? FilterDecision::keep() : FilterDecision::reject(FilterId::unique);
}

FilterDecision filter_nonalpha_majority(const Sentence& line, const FilterParams& params) {
  return exceeds_nonalpha_majority(count_alpha(line.text), params.nonalpha_majority_threshold)
             ? FilterDecision::reject(FilterId::nonalpha_majority)
             : FilterDecision::keep();
}

FilterDecision filter_repeating_tokens(const Sentence& line, const FilterParams& params) {
  return longest_letter_token_run(line.text) >= params.repeat_min_run
             ? FilterDecision::reject(FilterId::repeating_tokens)
             : FilterDecision::keep();
}

FilterDecision filter_language(const Sentence& line, const LangIdModel& model, std::string_view declared,
                               const FilterParams& params) {
  if (!model.has_language(declared)) {
    throw std::invalid_argument("language model lacks declared language '" + std::string(declared) + "'");
  }
  return wrong_language(line.text, model, declared, params) ? FilterDecision::reject(FilterId::language_mismatch)
                                                            : FilterDecision::keep();
}

FilterDecision filter_length_ratio(const Sentence& line, const FilterParams& params) {
  const std::size_t n = count_tokens(line.text);
  return (n < params.len_min || n > params.len_max) ? FilterDecision::reject(FilterId::length_ratio)
                                                     : FilterDecision::keep();
}

}  // namespace corpusclean
