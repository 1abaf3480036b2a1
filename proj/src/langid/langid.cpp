#include "corpusclean/langid.hpp"

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>
#include <absl/numeric/int128.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "corpusclean/core.hpp"
#include "corpusclean/io.hpp"
#include "json.hpp"

namespace corpusclean {

namespace {

// Each code point takes a 21-bit lane holding cp + 1, so n-grams of
// different lengths never share a key.
absl::uint128 pack(const char32_t* cps, int n) {
  absl::uint128 key = 0;
  for (int i = 0; i < n; ++i) {
    key |= absl::uint128(static_cast<std::uint64_t>(cps[i]) + 1) << (21 * i);
  }
  return key;
}

std::string unpack_utf8(absl::uint128 key) {
  std::string out;
  while (key != 0) {
    const auto lane = static_cast<std::uint32_t>(absl::Uint128Low64(key) & 0x1fffff);
    append_utf8(out, static_cast<char32_t>(lane - 1));
    key >>= 21;
  }
  return out;
}

// Lowercased code points of `text`; false if nothing but whitespace.
bool lowered_code_points(std::string_view text, std::vector<char32_t>& out) {
  out.clear();
  decode_utf8(text, out);
  bool any = false;
  for (auto& cp : out) {
    if (!any && !is_whitespace(cp)) any = true;
    cp = to_lower(cp);
  }
  return any;
}

}  // namespace

struct LangIdModel::Index {
  absl::flat_hash_map<absl::uint128, std::uint32_t> rows;
  std::vector<double> row_scores;          // rows x languages
  std::vector<double> unseen;              // orders x languages
  std::vector<std::size_t> vocabulary;     // per order, including the unseen bucket
};

LangIdModel::LangIdModel(std::vector<std::string> languages, std::vector<int> orders, double alpha,
                         std::vector<std::vector<OrderTable>> tables)
    : languages_(std::move(languages)),
      orders_(std::move(orders)),
      alpha_(alpha),
      tables_(std::move(tables)),
      index_(std::make_unique<Index>()) {
  if (languages_.empty()) throw MalformedModelError("model has no languages");
  {
    auto sorted = languages_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw MalformedModelError("duplicate language code in model");
    }
  }
  if (orders_.empty()) throw MalformedModelError("model has no n-gram orders");
  for (int n : orders_) {
    if (n < 1 || n > kMaxOrder) {
      throw MalformedModelError("n-gram order " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxOrder) + "]");
    }
  }
  {
    auto sorted = orders_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw MalformedModelError("duplicate n-gram order in model");
    }
  }
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) throw MalformedModelError("alpha must be positive");
  if (tables_.size() != languages_.size()) throw MalformedModelError("table count does not match languages");

  const std::size_t nl = languages_.size();
  const std::size_t no = orders_.size();
  index_->unseen.assign(no * nl, 0.0);
  index_->vocabulary.assign(no, 1);
  for (std::size_t l = 0; l < nl; ++l) {
    if (tables_[l].size() != no) throw MalformedModelError("order count mismatch for " + languages_[l]);
    for (std::size_t o = 0; o < no; ++o) index_->unseen[o * nl + l] = tables_[l][o].unseen;
  }

  std::vector<char32_t> cps;
  for (std::size_t l = 0; l < nl; ++l) {
    for (std::size_t o = 0; o < no; ++o) {
      for (const auto& [gram, lp] : tables_[l][o].log_probs) {
        cps.clear();
        try {
          decode_utf8(gram, cps);
        } catch (const DecodeError&) {
          throw MalformedModelError("n-gram key is not valid UTF-8");
        }
        if (cps.size() != static_cast<std::size_t>(orders_[o])) {
          throw MalformedModelError("n-gram '" + gram + "' listed under order " + std::to_string(orders_[o]));
        }
        const auto key = pack(cps.data(), orders_[o]);
        auto [it, inserted] = index_->rows.try_emplace(key, static_cast<std::uint32_t>(index_->rows.size()));
        if (inserted) {
          ++index_->vocabulary[o];
          for (std::size_t k = 0; k < nl; ++k) index_->row_scores.push_back(index_->unseen[o * nl + k]);
        }
        index_->row_scores[it->second * nl + l] = lp;
      }
    }
  }
}

LangIdModel::~LangIdModel() = default;
LangIdModel::LangIdModel(LangIdModel&&) noexcept = default;
LangIdModel& LangIdModel::operator=(LangIdModel&&) noexcept = default;

bool LangIdModel::has_language(std::string_view code) const {
  return std::find(languages_.begin(), languages_.end(), code) != languages_.end();
}

std::size_t LangIdModel::vocabulary_size(std::size_t order_index) const {
  return index_->vocabulary.at(order_index);
}

bool operator==(const LangIdModel& a, const LangIdModel& b) {
  if (a.languages_ != b.languages_ || a.orders_ != b.orders_ || a.alpha_ != b.alpha_) return false;
  for (std::size_t l = 0; l < a.tables_.size(); ++l) {
    for (std::size_t o = 0; o < a.tables_[l].size(); ++o) {
      const auto& x = a.tables_[l][o];
      const auto& y = b.tables_[l][o];
      if (x.unseen != y.unseen || x.log_probs != y.log_probs) return false;
    }
  }
  return true;
}

LangIdVerdict LangIdModel::identify(std::string_view text) const {
  thread_local std::vector<char32_t> cps;
  thread_local std::vector<double> scores;
  if (!lowered_code_points(text, cps)) throw UndecidableInput("no characters to identify");

  const std::size_t nl = languages_.size();
  scores.assign(nl, 0.0);
  std::size_t grams = 0;
  for (std::size_t o = 0; o < orders_.size(); ++o) {
    const int n = orders_[o];
    if (cps.size() < static_cast<std::size_t>(n)) continue;
    const double* unseen = &index_->unseen[o * nl];
    for (std::size_t i = 0; i + n <= cps.size(); ++i) {
      auto it = index_->rows.find(pack(&cps[i], n));
      const double* row = it == index_->rows.end() ? unseen : &index_->row_scores[it->second * nl];
      for (std::size_t l = 0; l < nl; ++l) scores[l] += row[l];
      ++grams;
    }
  }
  if (grams == 0) throw UndecidableInput("text too short to score");

  std::size_t best = 0;
  for (std::size_t l = 1; l < nl; ++l) {
    if (scores[l] > scores[best]) best = l;
  }
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < nl; ++l) {
    if (l != best) second = std::max(second, scores[l]);
  }
  const double norm = static_cast<double>(grams);
  LangIdVerdict verdict;
  verdict.language = languages_[best];
  verdict.score = scores[best] / norm;
  verdict.margin = nl > 1 ? (scores[best] - second) / norm : 0.0;
  return verdict;
}

LangIdVerdict identify(const LangIdModel& model, std::string_view text) { return model.identify(text); }

LangIdModel train(const std::map<std::string, std::vector<std::string>>& samples,
                  const std::vector<int>& orders, double alpha) {
  if (orders.empty()) throw TrainingError("no n-gram orders given");
  for (int n : orders) {
    if (n < 1 || n > LangIdModel::kMaxOrder) {
      throw TrainingError("n-gram order " + std::to_string(n) + " outside [1, " +
                          std::to_string(LangIdModel::kMaxOrder) + "]");
    }
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw TrainingError("smoothing alpha must be positive");
  if (samples.empty()) throw TrainingError("no languages to train");

  using Counts = absl::flat_hash_map<absl::uint128, std::uint64_t>;
  const std::size_t no = orders.size();
  std::vector<std::string> languages;
  std::vector<std::vector<Counts>> counts;
  std::vector<std::vector<std::uint64_t>> totals;
  std::vector<absl::flat_hash_set<absl::uint128>> vocab(no);

  std::vector<char32_t> cps;
  for (const auto& [code, lines] : samples) {
    languages.push_back(code);
    auto& lang_counts = counts.emplace_back(no);
    auto& lang_totals = totals.emplace_back(no, 0);
    bool any_text = false;
    for (const auto& raw : lines) {
      const std::string text = normalize_line(raw);
      if (!lowered_code_points(text, cps)) continue;
      any_text = true;
      for (std::size_t o = 0; o < no; ++o) {
        const int n = orders[o];
        for (std::size_t i = 0; i + n <= cps.size(); ++i) {
          const auto key = pack(&cps[i], n);
          ++lang_counts[o][key];
          ++lang_totals[o];
          vocab[o].insert(key);
        }
      }
    }
    if (!any_text) throw TrainingError("no training text for language '" + code + "'");
  }

  std::vector<std::vector<OrderTable>> tables(languages.size(), std::vector<OrderTable>(no));
  for (std::size_t l = 0; l < languages.size(); ++l) {
    for (std::size_t o = 0; o < no; ++o) {
      const double v = static_cast<double>(vocab[o].size() + 1);
      const double denom = static_cast<double>(totals[l][o]) + alpha * v;
      auto& table = tables[l][o];
      table.unseen = std::log(alpha / denom);
      for (const auto& [key, c] : counts[l][o]) {
        table.log_probs.emplace(unpack_utf8(key), std::log((static_cast<double>(c) + alpha) / denom));
      }
    }
  }
  return LangIdModel(std::move(languages), orders, alpha, std::move(tables));
}

// ---------------------------------------------------------------------------
// Serialization

std::string model_to_json(const LangIdModel& model) {
  nlohmann::json j;
  j["version"] = model.version();
  j["orders"] = model.orders();
  j["alpha"] = model.alpha();
  nlohmann::json langs = nlohmann::json::object();
  nlohmann::json unseen = nlohmann::json::object();
  for (std::size_t l = 0; l < model.languages().size(); ++l) {
    const auto& code = model.languages()[l];
    nlohmann::json per_order = nlohmann::json::object();
    nlohmann::json per_order_unseen = nlohmann::json::object();
    for (std::size_t o = 0; o < model.orders().size(); ++o) {
      const auto& t = model.table(l, o);
      const std::string key = std::to_string(model.orders()[o]);
      per_order[key] = t.log_probs;
      per_order_unseen[key] = t.unseen;
    }
    langs[code] = std::move(per_order);
    unseen[code] = std::move(per_order_unseen);
  }
  j["languages"] = std::move(langs);
  j["unseen"] = std::move(unseen);
  return j.dump();
}

namespace {

const nlohmann::json& require(const nlohmann::json& obj, const std::string& field, const std::string& where) {
  if (!obj.is_object()) throw MalformedModelError(where + " is not an object");
  auto it = obj.find(field);
  if (it == obj.end()) throw MissingFieldError("missing field '" + field + "' in " + where);
  return *it;
}

}  // namespace

LangIdModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedModelError(std::string("model is not valid JSON: ") + e.what());
  }
  try {
    const auto& version = require(j, "version", "model");
    if (!version.is_number_integer()) throw MalformedModelError("'version' is not an integer");
    if (version.get<int>() != LangIdModel::kFormatVersion) {
      throw ModelVersionError("unsupported model version " + version.dump() + " (expected " +
                              std::to_string(LangIdModel::kFormatVersion) + ")");
    }
    const auto& orders_j = require(j, "orders", "model");
    const auto& alpha_j = require(j, "alpha", "model");
    const auto& langs_j = require(j, "languages", "model");
    const auto& unseen_j = require(j, "unseen", "model");
    if (!orders_j.is_array()) throw MalformedModelError("'orders' is not an array");
    if (!alpha_j.is_number()) throw MalformedModelError("'alpha' is not a number");
    if (!langs_j.is_object() || !unseen_j.is_object()) {
      throw MalformedModelError("'languages' and 'unseen' must be objects");
    }

    std::vector<int> orders;
    for (const auto& n : orders_j) {
      if (!n.is_number_integer()) throw MalformedModelError("n-gram order is not an integer");
      orders.push_back(n.get<int>());
    }
    std::vector<std::string> languages;
    std::vector<std::vector<OrderTable>> tables;
    for (const auto& [code, per_order] : langs_j.items()) {
      languages.push_back(code);
      const auto& lang_unseen = require(unseen_j, code, "'unseen'");
      auto& lang_tables = tables.emplace_back();
      for (int n : orders) {
        const std::string key = std::to_string(n);
        const auto& grams = require(per_order, key, "languages." + code);
        if (!grams.is_object()) throw MalformedModelError("languages." + code + "." + key + " is not an object");
        OrderTable table;
        for (const auto& [gram, lp] : grams.items()) {
          if (!lp.is_number()) throw MalformedModelError("log probability is not a number");
          table.log_probs.emplace(gram, lp.get<double>());
        }
        const auto& u = require(lang_unseen, key, "unseen." + code);
        if (!u.is_number()) throw MalformedModelError("unseen log probability is not a number");
        table.unseen = u.get<double>();
        lang_tables.push_back(std::move(table));
      }
    }
    return LangIdModel(std::move(languages), std::move(orders), alpha_j.get<double>(), std::move(tables));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedModelError(std::string("malformed model: ") + e.what());
  }
}

void save_model(const LangIdModel& model, const std::filesystem::path& path) {
  AtomicFile file(path);
  file.stream() << model_to_json(model) << '\n';
  file.commit();
}

LangIdModel load_model(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path.string());
  return model_from_json(buf.str());
}

}  // namespace corpusclean
