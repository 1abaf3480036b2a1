#include "tables.hpp"

namespace tables {

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = {
      {"paracrawl_et", "En-Et", 1298103,
       {26, 242816, 267235, 69225, 200338, 23777, 11210, 283152},
       {"0.00", "18.71", "20.59", "5.33", "15.43", "1.83", "0.86", "21.81"}, 1097779, "85"},
      {"paracrawl_fi", "En-Fi", 624058,
       {37, 41611, 17239, 9532, 12919, 12737, 1397, 36233},
       {"0.01", "6.67", "2.76", "1.53", "2.07", "2.04", "0.22", "5.81"}, 131705, "21"},
      {"rapid_et", "En-Et", 226978,
       {23, 428, 1108, 752, 1226, 6674, 175, 14762},
       {"0.01", "0.19", "0.49", "0.33", "0.54", "2.94", "0.08", "6.50"}, 25148, "11"},
      {"rapid_fi", "En-Fi", 583223,
       {161463, 3488, 1513, 1016, 5647, 13311, 396, 24854},
       {"27.68", "0.60", "0.26", "0.17", "0.97", "2.28", "0.07", "4.26"}, 211688, "36"},
      {"rapid_lv", "En-Lv", 306588,
       {80894, 2929, 990, 329, 1699, 6361, 171, 8739},
       {"26.39", "0.96", "0.32", "0.11", "0.55", "2.07", "0.06", "2.85"}, 102112, "33"},
      {"europarl_et", "En-Et", 652944,
       {23218, 490, 1176, 462, 66, 7211, 727, 8924},
       {"3.56", "0.08", "0.18", "0.07", "0.01", "1.10", "0.11", "1.37"}, 42274, "6"},
      {"europarl_fi", "En-Fi", 1926114,
       {52686, 528, 6631, 3536, 285, 24847, 2594, 10932},
       {"2.74", "0.03", "0.34", "0.18", "0.01", "1.29", "0.13", "0.57"}, 102039, "5"},
      {"europarl_lv", "En-Lv", 638789,
       {19652, 707, 979, 435, 72, 4012, 703, 3301},
       {"3.08", "0.11", "0.15", "0.07", "0.01", "0.63", "0.11", "0.52"}, 29861, "5"},
      {"wiki_fi", "En-Fi", 153728,
       {0, 42438, 161, 339, 488, 4616, 38, 74507},
       {"0.00", "27.61", "0.10", "0.22", "0.32", "3.00", "0.02", "48.47"}, 122587, "80"},
      {"dcep_lv", "En-Lv", 3542280,
       {2277397, 339861, 12474, 9450, 31842, 38838, 1242, 48910},
       {"64.29", "9.59", "0.35", "0.27", "0.90", "1.10", "0.04", "1.38"}, 2760014, "78"},
      {"leta_lv", "En-Lv", 15671,
       {454, 2, 2, 15, 0, 946, 47, 59},
       {"2.90", "0.01", "0.01", "0.10", "0.00", "6.04", "0.30", "0.38"}, 1525, "10"},
      {"books_lv", "En-Lv", 9577,
       {434, 4, 35, 12, 13, 20, 8, 1074},
       {"4.53", "0.04", "0.37", "0.13", "0.14", "0.21", "0.08", "11.21"}, 1600, "17"},
  };
  return cols;
}

corpusclean::FilterReport to_report(const Column& column) {
  corpusclean::FilterReport r;
  r.src_path = column.name + ".en";
  r.tgt_path = column.name + "." + column.pair.substr(3);
  r.corpus_size = column.size;
  for (std::size_t i = 0; i < kRows.size(); ++i) r.per_filter.push_back({kRows[i], column.removed[i]});
  r.finalize();
  return r;
}

const std::vector<Aggregate>& aggregates() {
  static const std::vector<Aggregate> aggs = {
      {"En-Et", {"paracrawl_et", "rapid_et", "europarl_et"}, 1012824, "46.50"},
      {"En-Fi", {"paracrawl_fi", "rapid_fi", "europarl_fi", "wiki_fi"}, 2719104, "82.72"},
      {"En-Lv", {"rapid_lv", "europarl_lv", "dcep_lv", "leta_lv", "books_lv"}, 1617793, "35.85"},
  };
  return aggs;
}

}  // namespace tables
