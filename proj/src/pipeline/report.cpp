#include "corpusclean/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace corpusclean {

double FilterReport::pct_of_original(std::uint64_t removed) const {
  if (corpus_size == 0) return 0.0;
  return 100.0 * static_cast<double>(removed) / static_cast<double>(corpus_size);
}

std::uint64_t FilterReport::removed_by(FilterId id) const {
  for (const auto& row : per_filter) {
    if (row.id == id) return row.removed;
  }
  return 0;
}

void FilterReport::finalize() {
  total_removed = 0;
  for (const auto& row : per_filter) total_removed += row.removed;
  if (total_removed > corpus_size) {
    throw ReportFormatError("removed " + std::to_string(total_removed) + " pairs from a corpus of " +
                            std::to_string(corpus_size));
  }
  remaining = corpus_size - total_removed;
}

void FilterReport::check_invariants() const {
  std::uint64_t sum = 0;
  for (const auto& row : per_filter) sum += row.removed;
  if (sum != total_removed) {
    throw ReportFormatError("total_removed " + std::to_string(total_removed) + " != sum of filter rows " +
                            std::to_string(sum));
  }
  if (total_removed > corpus_size || remaining != corpus_size - total_removed) {
    throw ReportFormatError("remaining " + std::to_string(remaining) + " != size " + std::to_string(corpus_size) +
                            " - removed " + std::to_string(total_removed));
  }
}

double AggregateReport::combined_pct() const {
  if (combined_size == 0) return 0.0;
  return 100.0 * static_cast<double>(combined_remaining) / static_cast<double>(combined_size);
}

AggregateReport aggregate(std::span<const FilterReport> reports) {
  if (reports.empty()) throw std::invalid_argument("nothing to aggregate");
  AggregateReport agg;
  for (const auto& r : reports) {
    agg.per_corpus.push_back(r);
    agg.combined_size += r.corpus_size;
    agg.combined_remaining += r.remaining;
  }
  return agg;
}

std::string format_pct(double pct, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, pct);
  return buf;
}

// ---------------------------------------------------------------------------
// JSON

std::string report_to_json(const FilterReport& report) {
  nlohmann::ordered_json j;
  j["corpus"]["src"] = report.src_path;
  if (report.tgt_path.empty()) {
    j["corpus"]["tgt"] = nullptr;
  } else {
    j["corpus"]["tgt"] = report.tgt_path;
  }
  j["corpus"]["size"] = report.corpus_size;
  j["filters"] = nlohmann::ordered_json::array();
  for (const auto& row : report.per_filter) {
    nlohmann::ordered_json f;
    f["id"] = filter_name(row.id);
    f["removed"] = row.removed;
    f["pct"] = report.pct_of_original(row.removed);
    j["filters"].push_back(std::move(f));
  }
  j["total_removed"] = report.total_removed;
  j["remaining"] = report.remaining;
  j["pct_remaining"] = report.pct_remaining();
  return j.dump(2);
}

namespace {

const nlohmann::json& field(const nlohmann::json& obj, const char* name) {
  if (!obj.is_object()) throw ReportFormatError("expected a JSON object");
  auto it = obj.find(name);
  if (it == obj.end()) throw ReportFormatError(std::string("report is missing '") + name + "'");
  return *it;
}

std::uint64_t count_field(const nlohmann::json& obj, const char* name) {
  const auto& v = field(obj, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ReportFormatError(std::string("'") + name + "' is not a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

FilterReport report_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ReportFormatError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    FilterReport r;
    const auto& corpus = field(j, "corpus");
    const auto& src = field(corpus, "src");
    if (src.is_string()) r.src_path = src.get<std::string>();
    if (auto it = corpus.find("tgt"); it != corpus.end() && it->is_string()) r.tgt_path = it->get<std::string>();
    r.corpus_size = count_field(corpus, "size");
    const auto& filters = field(j, "filters");
    if (!filters.is_array()) throw ReportFormatError("'filters' is not an array");
    for (const auto& f : filters) {
      const auto& id = field(f, "id");
      if (!id.is_string()) throw ReportFormatError("filter id is not a string");
      const auto parsed = parse_filter_id(id.get<std::string>());
      if (!parsed) throw ReportFormatError("unknown filter id '" + id.get<std::string>() + "'");
      r.per_filter.push_back({*parsed, count_field(f, "removed")});
    }
    r.total_removed = count_field(j, "total_removed");
    r.remaining = count_field(j, "remaining");
    r.check_invariants();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ReportFormatError(std::string("malformed report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Human-readable table

std::string render_table(std::span<const FilterReport> reports, std::span<const std::string> column_names) {
  std::vector<FilterId> rows;
  for (const auto& r : reports) {
    for (const auto& f : r.per_filter) {
      if (std::find(rows.begin(), rows.end(), f.id) == rows.end()) rows.push_back(f.id);
    }
  }

  std::vector<std::vector<std::string>> table;  // [row][0 = label, 1.. = columns]
  auto add_row = [&](std::string label, auto&& cell) {
    std::vector<std::string> row{std::move(label)};
    for (const auto& r : reports) row.push_back(cell(r));
    table.push_back(std::move(row));
  };

  {
    std::vector<std::string> header{""};
    for (std::size_t i = 0; i < reports.size(); ++i) {
      header.push_back(i < column_names.size() ? column_names[i] : "corpus " + std::to_string(i + 1));
    }
    table.push_back(std::move(header));
  }
  add_row("Corpus size", [](const FilterReport& r) { return std::to_string(r.corpus_size); });
  for (FilterId id : rows) {
    const auto present = [id](const FilterReport& r) {
      return std::any_of(r.per_filter.begin(), r.per_filter.end(), [id](const FilterCount& f) { return f.id == id; });
    };
    add_row(std::string(filter_label(id)), [&](const FilterReport& r) {
      return present(r) ? std::to_string(r.removed_by(id)) : std::string("-");
    });
    add_row("", [&](const FilterReport& r) {
      return present(r) ? format_pct(r.pct_of_original(r.removed_by(id))) + "%" : std::string();
    });
  }
  add_row("Sum removed", [](const FilterReport& r) { return std::to_string(r.total_removed); });
  add_row("", [](const FilterReport& r) {
    return format_pct(r.pct_removed()) + "% (" + format_pct(r.pct_removed(), 0) + "%)";
  });
  add_row("Remaining", [](const FilterReport& r) { return std::to_string(r.remaining); });
  add_row("", [](const FilterReport& r) { return format_pct(r.pct_remaining()) + "%"; });

  std::vector<std::size_t> width(reports.size() + 1, 0);
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : table) {
    std::string line = row[0] + std::string(width[0] - row[0].size(), ' ');
    for (std::size_t c = 1; c < row.size(); ++c) {
      line += "  " + std::string(width[c] - row[c].size(), ' ') + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

std::string render_aggregate(const AggregateReport& agg) {
  std::ostringstream out;
  out << "Corpora combined:    " << agg.per_corpus.size() << '\n'
      << "Combined size:       " << agg.combined_size << '\n'
      << "Combined remaining:  " << agg.combined_remaining << " (" << format_pct(agg.combined_pct())
      << "% of total)\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Reject records

std::string escape_tsv(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\t') {
      out += "\\t";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string unescape_tsv(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == '\\' && i + 1 < field.size()) {
      const char next = field[++i];
      out.push_back(next == 't' ? '\t' : next);
    } else {
      out.push_back(field[i]);
    }
  }
  return out;
}

std::string reject_record_line(std::uint64_t line_no, FilterId id, std::string_view src, std::string_view tgt) {
  std::string line = std::to_string(line_no);
  line += '\t';
  line += filter_name(id);
  line += '\t';
  line += escape_tsv(src);
  line += '\t';
  line += escape_tsv(tgt);
  return line;
}

}  // namespace corpusclean
