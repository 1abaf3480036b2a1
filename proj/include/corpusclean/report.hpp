// Filter statistics with sequential (first-claim) accounting: every removed
// pair is counted by exactly one filter, and every percentage is relative to
// the ORIGINAL corpus size, so the per-filter rows sum to the total row.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "corpusclean/filters.hpp"

namespace corpusclean {

class ReportFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FilterCount {
  FilterId id;
  std::uint64_t removed = 0;
};

struct FilterReport {
  std::string src_path;
  std::string tgt_path;  // empty for monolingual corpora
  std::uint64_t corpus_size = 0;
  std::vector<FilterCount> per_filter;
  std::uint64_t total_removed = 0;
  std::uint64_t remaining = 0;

  /// removed / corpus_size * 100; 0 for an empty corpus.
  double pct_of_original(std::uint64_t removed) const;
  double pct_removed() const { return pct_of_original(total_removed); }
  double pct_remaining() const { return pct_of_original(remaining); }
  std::uint64_t removed_by(FilterId id) const;

  /// Fills total_removed and remaining from corpus_size and per_filter.
  void finalize();
  /// Throws ReportFormatError if the totals disagree with the rows.
  void check_invariants() const;
};

struct AggregateReport {
  std::vector<FilterReport> per_corpus;
  std::uint64_t combined_size = 0;
  std::uint64_t combined_remaining = 0;

  double combined_pct() const;
};

/// Throws std::invalid_argument for an empty list.
AggregateReport aggregate(std::span<const FilterReport> reports);

/// Fixed two-decimal rendering, e.g. 18.70537... -> "18.71".
std::string format_pct(double pct, int decimals = 2);

std::string report_to_json(const FilterReport& report);
/// Throws ReportFormatError on malformed input.
FilterReport report_from_json(std::string_view json);

/// Aligned-column table with one column per corpus; each filter takes a count
/// row followed by a percentage row. The total row also shows the
/// whole-percent rounding.
std::string render_table(std::span<const FilterReport> reports, std::span<const std::string> column_names);
std::string render_aggregate(const AggregateReport& aggregate);

/// Escapes backslash as \\ and tab as \t for one TSV field.
std::string escape_tsv(std::string_view field);
std::string unescape_tsv(std::string_view field);
std::string reject_record_line(std::uint64_t line_no, FilterId id, std::string_view src, std::string_view tgt);

}  // namespace corpusclean
