#include <gtest/gtest.h>

#include <cmath>

#include "corpusclean/report.hpp"
#include "json.hpp"
#include "tables.hpp"

namespace {

using namespace corpusclean;

const tables::Column& column(const std::string& name) {
  for (const auto& c : tables::columns()) {
    if (c.name == name) return c;
  }
  throw std::out_of_range(name);
}

TEST(Report, ParaCrawlEtTotals) {
  const auto r = tables::to_report(column("paracrawl_et"));
  EXPECT_EQ(r.total_removed, 1097779u);
  EXPECT_EQ(r.remaining, 200324u);
  EXPECT_EQ(format_pct(r.pct_of_original(242816)), "18.71");
  EXPECT_EQ(format_pct(r.pct_removed()), "84.57");
  EXPECT_EQ(format_pct(r.pct_removed(), 0), "85");
}

TEST(Report, EveryPublishedPercentage) {
  for (const auto& c : tables::columns()) {
    const auto r = tables::to_report(c);
    EXPECT_EQ(r.total_removed, c.sum_removed) << c.name;
    EXPECT_EQ(format_pct(r.pct_removed(), 0), c.sum_whole_pct) << c.name;
    for (std::size_t i = 0; i < tables::kRows.size(); ++i) {
      const double pct = r.pct_of_original(r.removed_by(tables::kRows[i]));
      EXPECT_LE(std::abs(pct - std::stod(c.printed_pct[i])), 0.005) << c.name << " row " << i;
    }
  }
}

TEST(Report, FormatPct) {
  EXPECT_EQ(format_pct(18.70537), "18.71");
  EXPECT_EQ(format_pct(0.0), "0.00");
  EXPECT_EQ(format_pct(84.57, 0), "85");
  EXPECT_EQ(format_pct(100.0), "100.00");
}

TEST(Report, EmptyCorpusPercentages) {
  FilterReport r;
  r.finalize();
  EXPECT_EQ(r.pct_remaining(), 0.0);
  EXPECT_EQ(r.pct_removed(), 0.0);
}

TEST(Report, FinalizeRejectsOverCount) {
  FilterReport r;
  r.corpus_size = 1;
  r.per_filter = {{FilterId::unique, 2}};
  EXPECT_THROW(r.finalize(), ReportFormatError);
}

TEST(Report, JsonRoundTrip) {
  const auto r = tables::to_report(column("rapid_et"));
  const auto json = report_to_json(r);
  const auto back = report_from_json(json);
  EXPECT_EQ(back.src_path, r.src_path);
  EXPECT_EQ(back.tgt_path, r.tgt_path);
  EXPECT_EQ(back.corpus_size, r.corpus_size);
  EXPECT_EQ(back.total_removed, r.total_removed);
  ASSERT_EQ(back.per_filter.size(), r.per_filter.size());
  for (std::size_t i = 0; i < r.per_filter.size(); ++i) {
    EXPECT_EQ(back.per_filter[i].id, r.per_filter[i].id);
    EXPECT_EQ(back.per_filter[i].removed, r.per_filter[i].removed);
  }
  EXPECT_EQ(report_to_json(back), json);

  const auto j = nlohmann::json::parse(json);
  EXPECT_EQ(j.at("filters").at(7).at("id"), "language_mismatch");
  EXPECT_NEAR(j.at("filters").at(7).at("pct").get<double>(), 6.50, 0.005);
  EXPECT_EQ(j.at("remaining"), 226978 - 25148);
}

TEST(Report, MonoJsonHasNullTarget) {
  FilterReport r;
  r.src_path = "mono.txt";
  r.corpus_size = 4;
  r.per_filter = {{FilterId::unique, 1}};
  r.finalize();
  const auto j = nlohmann::json::parse(report_to_json(r));
  EXPECT_TRUE(j.at("corpus").at("tgt").is_null());
  EXPECT_TRUE(report_from_json(j.dump()).tgt_path.empty());
}

TEST(Report, MalformedJson) {
  EXPECT_THROW(report_from_json("{"), ReportFormatError);
  EXPECT_THROW(report_from_json("[]"), ReportFormatError);
  EXPECT_THROW(report_from_json(R"({"corpus":{"src":"a","size":3}})"), ReportFormatError);
  // Totals that disagree with the rows.
  EXPECT_THROW(report_from_json(R"({"corpus":{"src":"a","tgt":null,"size":3},
      "filters":[{"id":"unique","removed":1}],"total_removed":2,"remaining":1})"),
               ReportFormatError);
  EXPECT_THROW(report_from_json(R"({"corpus":{"src":"a","tgt":null,"size":3},
      "filters":[{"id":"bogus","removed":1}],"total_removed":1,"remaining":2})"),
               ReportFormatError);
  EXPECT_THROW(report_from_json(R"({"corpus":{"src":"a","tgt":null,"size":-3},
      "filters":[],"total_removed":0,"remaining":0})"),
               ReportFormatError);
}

TEST(Report, TableShowsBothPrecisionsOnSumRow) {
  const std::vector<FilterReport> reports{tables::to_report(column("paracrawl_et")),
                                          tables::to_report(column("rapid_et"))};
  const std::vector<std::string> names{"ParaCrawl", "Rapid"};
  const auto table = render_table(reports, names);
  EXPECT_NE(table.find("ParaCrawl"), std::string::npos);
  EXPECT_NE(table.find("1097779"), std::string::npos);
  EXPECT_NE(table.find("84.57% (85%)"), std::string::npos);
  EXPECT_NE(table.find("11.08% (11%)"), std::string::npos);
  EXPECT_NE(table.find("18.71%"), std::string::npos);
}

TEST(Aggregate, PublishedTotals) {
  for (const auto& a : tables::aggregates()) {
    std::vector<FilterReport> reports;
    for (const auto& name : a.corpora) reports.push_back(tables::to_report(column(name)));
    const auto agg = aggregate(reports);
    EXPECT_EQ(agg.combined_remaining, a.remaining) << a.pair;
    EXPECT_EQ(format_pct(agg.combined_pct()), a.pct) << a.pair;
    EXPECT_NE(render_aggregate(agg).find(a.pct + "%"), std::string::npos);
  }
  EXPECT_THROW(aggregate(std::span<const FilterReport>{}), std::invalid_argument);
}

TEST(Aggregate, CombinedSizeOfEtCorpora) {
  const std::vector<FilterReport> reports{tables::to_report(column("paracrawl_et")),
                                          tables::to_report(column("rapid_et")),
                                          tables::to_report(column("europarl_et"))};
  EXPECT_EQ(aggregate(reports).combined_size, 2178025u);
}

TEST(Tsv, EscapeRoundTrip) {
  EXPECT_EQ(escape_tsv("a\tb\\c"), "a\\tb\\\\c");
  for (const char* s : {"", "plain", "tab\there", "back\\slash", "\\t literal", "end\\"}) {
    EXPECT_EQ(unescape_tsv(escape_tsv(s)), s);
  }
  EXPECT_EQ(reject_record_line(7, FilterId::src_eq_tgt, "a\tb", "c"), "7\tsrc_eq_tgt\ta\\tb\tc");
}

}  // namespace
