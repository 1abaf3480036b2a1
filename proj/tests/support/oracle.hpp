// Brute-force reference for the filter chain.
//
// Deliberately shares no code with the library: its own UTF-8 decoder,
// character classes restricted to the alphabet the synthetic generator
// emits, exact std::string keys, and stage-by-stage passes over the
// survivors of the previous stage instead of a streaming first-claim loop.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

// Same numbering as corpusclean::FilterId.
enum Filter : int {
  kUnique = 0,
  kSrcEqTgt,
  kMultiSrcOneTgt,  // keyed by target
  kMultiTgtOneSrc,  // keyed by source
  kNonalphaMajority,
  kNonalphaMismatch,
  kRepeatingTokens,
  kLanguage,
  kLength,
};

struct Params {
  double majority = 0.5;
  double mismatch_ratio = 3.0;
  std::size_t mismatch_min = 6;
  std::size_t repeat_run = 3;
  std::size_t langid_min_chars = 20;
  double langid_min_margin = 0.0;
  std::size_t len_min = 1;
  std::size_t len_max = 100;
  double len_ratio = 9.0;
};

// Only the characters the generator can produce are classified; anything
// else aborts, so the oracle never silently guesses.
std::u32string decode(const std::string& s);
std::string encode(const std::u32string& s);
bool valid(const std::string& s);
bool letter(char32_t c);
bool space(char32_t c);
bool punct(char32_t c);
char32_t lower(char32_t c);

std::string normalize(const std::string& raw);
std::vector<std::string> tokens(const std::string& text);
std::size_t letters(const std::string& text);
std::size_t non_letters(const std::string& text);
std::size_t longest_run(const std::string& text);

// Naive Bayes scorer reading the model's JSON tables.
class Scorer {
 public:
  explicit Scorer(const std::string& model_json);
  // Empty optional when the text has nothing to score.
  std::optional<std::pair<std::string, double>> best(const std::string& text) const;

 private:
  std::vector<std::string> langs_;
  std::vector<int> orders_;
  std::vector<std::map<std::string, std::vector<double>>> grams_;  // per order: gram -> per-language log prob
  std::vector<std::vector<double>> unseen_;                        // per order, per language
};

struct Config {
  std::vector<int> chain;  // Filter values
  Params params;
  bool drop_all = false;
  bool mono = false;
  std::string src_lang;
  std::string tgt_lang;
  const Scorer* scorer = nullptr;
};

// Per input line: -1 for kept, otherwise the claiming filter.
std::vector<int> run(const Config& config, const std::vector<std::string>& src, const std::vector<std::string>& tgt);

// Stateless verdict of one filter on one (normalized) pair.
bool rejects(const Config& config, int filter, const std::string& src, const std::string& tgt);

}  // namespace oracle
