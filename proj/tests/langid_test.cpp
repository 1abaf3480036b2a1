#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "corpusclean/io.hpp"
#include "corpusclean/langid.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace {

using namespace corpusclean;
using Samples = std::map<std::string, std::vector<std::string>>;

double prob(const LangIdModel& m, const std::string& lang, int order_index, const std::string& gram) {
  std::size_t l = 0;
  while (m.languages()[l] != lang) ++l;
  const auto& t = m.table(l, static_cast<std::size_t>(order_index));
  auto it = t.log_probs.find(gram);
  return std::exp(it == t.log_probs.end() ? t.unseen : it->second);
}

TEST(Train, AddAlphaEstimateSingleLanguage) {
  // Vocabulary {a} plus the unseen bucket: V = 2, so P(a) = (4 + 1) / (4 + 2).
  const auto m = train({{"xx", {"aaaa"}}}, {1}, 1.0);
  EXPECT_EQ(m.vocabulary_size(0), 2u);
  EXPECT_NEAR(prob(m, "xx", 0, "a"), 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(prob(m, "xx", 0, "zzz-unseen"), 1.0 / 6.0, 1e-12);
}

TEST(Train, SharedVocabularyAcrossLanguages) {
  // Union vocabulary {a, b} plus unseen: V = 3.
  const auto m = train({{"xx", {"aaaa"}}, {"yy", {"bb"}}}, {1}, 1.0);
  EXPECT_NEAR(prob(m, "xx", 0, "a"), 5.0 / 7.0, 1e-12);
  EXPECT_NEAR(prob(m, "xx", 0, "b"), 1.0 / 7.0, 1e-12);
  EXPECT_NEAR(prob(m, "yy", 0, "b"), 3.0 / 5.0, 1e-12);
  EXPECT_NEAR(prob(m, "yy", 0, "a"), 1.0 / 5.0, 1e-12);
}

TEST(Train, LowercasesAndNormalizes) {
  // "A", "A" and decomposed a + U+0301 -> grams a, a, U+00E1; V = 3, N = 3.
  const auto m = train({{"xx", {"AA", "á"}}}, {1}, 1.0);
  EXPECT_EQ(m.vocabulary_size(0), 3u);
  EXPECT_NEAR(prob(m, "xx", 0, "a"), 3.0 / 6.0, 1e-12);
  EXPECT_NEAR(prob(m, "xx", 0, "á"), 2.0 / 6.0, 1e-12);
}

TEST(Train, ProbabilitiesSumToOne) {
  const auto& m = fixtures::seed_model();
  for (std::size_t l = 0; l < m.languages().size(); ++l) {
    for (std::size_t o = 0; o < m.orders().size(); ++o) {
      const auto& t = m.table(l, o);
      double sum = 0;
      for (const auto& [gram, lp] : t.log_probs) sum += std::exp(lp);
      sum += static_cast<double>(m.vocabulary_size(o) - t.log_probs.size()) * std::exp(t.unseen);
      EXPECT_NEAR(sum, 1.0, 1e-6) << m.languages()[l] << " order " << m.orders()[o];
    }
  }
}

TEST(Train, Errors) {
  EXPECT_THROW(train({{"xx", {"abc"}}}, {}, 0.5), TrainingError);
  EXPECT_THROW(train({{"xx", {"abc"}}}, {0}, 0.5), TrainingError);
  EXPECT_THROW(train({{"xx", {"abc"}}}, {1}, 0.0), TrainingError);
  EXPECT_THROW(train({}, {1}, 0.5), TrainingError);
  try {
    train({{"xx", {"abc"}}, {"yy", {"", "   "}}}, {1, 2}, 0.5);
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("yy"), std::string::npos);
  }
}

TEST(Identify, DisjointAlphabets) {
  const auto m = train({{"la", {"the cat sat on the mat", "a quick brown fox"}},
                        {"cy", {"кот сидел", "быстрая лиса"}}},
                       {1, 2, 3}, 0.5);
  EXPECT_EQ(m.identify("a brown cat").language, "la");
  EXPECT_EQ(m.identify("лиса сидел").language, "cy");
  const auto v = m.identify("the fox");
  EXPECT_GT(v.margin, 0.0);
  EXPECT_LT(v.score, 0.0);
}

TEST(Identify, EmptyIsUndecidable) {
  const auto& m = fixtures::seed_model();
  EXPECT_THROW(m.identify(""), UndecidableInput);
  EXPECT_THROW(m.identify("   "), UndecidableInput);
}

TEST(Identify, DeterministicAndMarginNonNegative) {
  const auto& m = fixtures::seed_model();
  for (const char* s : {"Tere hommikust", "Good morning to you", "Hyvää huomenta", "x", "12345"}) {
    const auto a = m.identify(s);
    const auto b = m.identify(s);
    EXPECT_EQ(a.language, b.language);
    EXPECT_EQ(a.margin, b.margin);
    EXPECT_EQ(a.score, b.score);
    EXPECT_GE(a.margin, 0.0);
    EXPECT_TRUE(m.has_language(a.language));
  }
}

TEST(Identify, OnlyGramsOfOneLanguage) {
  const auto m = train({{"p", {"abab abab"}}, {"q", {"xyxy xyxy"}}}, {1, 2}, 0.5);
  EXPECT_EQ(m.identify("ba ab").language, "p");
  EXPECT_EQ(m.identify("yx").language, "q");
}

TEST(Identify, HeldOutAccuracy) {
  const auto& m = fixtures::seed_model();
  std::size_t total = 0, correct = 0;
  for (const char* lang : {"en", "et", "fi"}) {
    for (const auto& line : fixtures::read_dir_lines(fixtures::data_dir() / "langid" / "heldout" / (std::string(lang) + ".txt"))) {
      if (line.size() < 50) continue;
      ++total;
      correct += m.identify(line).language == lang;
    }
  }
  ASSERT_GE(total, 200u);
  EXPECT_GE(static_cast<double>(correct) / static_cast<double>(total), 0.95) << correct << "/" << total;
}

TEST(Identify, DuplicatingOneLanguageKeepsArgmax) {
  Samples samples;
  for (const char* lang : {"en", "et", "fi"}) {
    samples[lang] = fixtures::read_dir_lines(fixtures::data_dir() / "langid" / "train" / (std::string(lang) + ".txt"));
  }
  const auto base = train(samples, {1, 2, 3}, 0.5);
  auto& et = samples["et"];
  const auto copy = et;
  for (int k = 0; k < 2; ++k) et.insert(et.end(), copy.begin(), copy.end());
  const auto tripled = train(samples, {1, 2, 3}, 0.5);
  for (const char* lang : {"en", "et", "fi"}) {
    for (const auto& line : fixtures::read_dir_lines(fixtures::data_dir() / "langid" / "heldout" / (std::string(lang) + ".txt"))) {
      EXPECT_EQ(base.identify(line).language, tripled.identify(line).language) << line;
    }
  }
}

TEST(ModelFile, RoundTripIsExact) {
  const auto& m = fixtures::seed_model();
  fixtures::TempDir dir;
  save_model(m, dir / "model.json");
  const auto loaded = load_model(dir / "model.json");
  EXPECT_TRUE(loaded == m);
  for (const char* s : {"Tere hommikust", "Good morning", "Hyvää huomenta", "Kass ja koer"}) {
    EXPECT_EQ(loaded.identify(s).language, m.identify(s).language);
    EXPECT_EQ(loaded.identify(s).margin, m.identify(s).margin);
  }
}

TEST(ModelFile, DistinctErrors) {
  const auto m = train({{"xx", {"abc"}}, {"yy", {"xyz"}}}, {1, 2}, 0.5);
  const std::string good = model_to_json(m);

  auto j = nlohmann::json::parse(good);
  j["version"] = 999;
  EXPECT_THROW(model_from_json(j.dump()), ModelVersionError);

  EXPECT_THROW(model_from_json(good.substr(0, good.size() / 2)), MalformedModelError);

  auto missing = nlohmann::json::parse(good);
  missing.erase("unseen");
  EXPECT_THROW(model_from_json(missing.dump()), MissingFieldError);

  auto no_order = nlohmann::json::parse(good);
  no_order["languages"]["xx"].erase("2");
  EXPECT_THROW(model_from_json(no_order.dump()), MissingFieldError);

  fixtures::TempDir dir;
  EXPECT_THROW(load_model(dir / "absent.json"), IoError);
}

TEST(ModelFile, SchemaShape) {
  const auto m = train({{"xx", {"ab"}}}, {1, 2}, 0.5);
  const auto j = nlohmann::json::parse(model_to_json(m));
  EXPECT_EQ(j.at("version"), 1);
  EXPECT_EQ(j.at("orders"), nlohmann::json::array({1, 2}));
  EXPECT_DOUBLE_EQ(j.at("alpha").get<double>(), 0.5);
  EXPECT_TRUE(j.at("languages").at("xx").at("2").contains("ab"));
  EXPECT_TRUE(j.at("unseen").at("xx").at("1").is_number());
}

}  // namespace
