// Character n-gram naive Bayes language identifier.
//
// A model holds, for every language and every n-gram order, add-alpha
// smoothed log probabilities of the n-grams observed in that language's
// training text, plus the log probability given to any other n-gram.
// The smoothing vocabulary for an order is every n-gram seen in any
// language's training text, plus one bucket for everything never seen:
//
//   P(g | L) = (count_L(g) + alpha) / (N_L + alpha * V)
//
// so that, per (language, order), the stored probabilities plus
// (V - observed_L) times the unseen probability sum to one.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corpusclean {

class TrainingError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// identify() was given text with no characters to score.
class UndecidableInput : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Base for everything load_model() can reject.
class ModelFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class ModelVersionError : public ModelFormatError {
  using ModelFormatError::ModelFormatError;
};
class MalformedModelError : public ModelFormatError {
  using ModelFormatError::ModelFormatError;
};
class MissingFieldError : public ModelFormatError {
  using ModelFormatError::ModelFormatError;
};

struct OrderTable {
  std::map<std::string, double> log_probs;  // UTF-8 n-gram -> log P
  double unseen = 0.0;                      // log P of any n-gram not in log_probs
};

struct LangIdVerdict {
  std::string language;
  double margin = 0.0;  // best minus second-best normalized score
  double score = 0.0;   // best language's mean log probability per n-gram
};

class LangIdModel {
 public:
  static constexpr int kFormatVersion = 1;
  static constexpr int kMaxOrder = 6;

  /// `tables[l][o]` belongs to languages[l] and orders[o]. Throws
  /// MalformedModelError if the pieces are inconsistent.
  LangIdModel(std::vector<std::string> languages, std::vector<int> orders, double alpha,
              std::vector<std::vector<OrderTable>> tables);
  ~LangIdModel();
  LangIdModel(LangIdModel&&) noexcept;
  LangIdModel& operator=(LangIdModel&&) noexcept;

  const std::vector<std::string>& languages() const { return languages_; }
  const std::vector<int>& orders() const { return orders_; }
  double alpha() const { return alpha_; }
  int version() const { return kFormatVersion; }
  const OrderTable& table(std::size_t language, std::size_t order_index) const {
    return tables_[language][order_index];
  }
  bool has_language(std::string_view code) const;

  /// Smoothing vocabulary size V for orders()[order_index].
  std::size_t vocabulary_size(std::size_t order_index) const;

  LangIdVerdict identify(std::string_view text) const;

  friend bool operator==(const LangIdModel& a, const LangIdModel& b);

 private:
  struct Index;

  std::vector<std::string> languages_;
  std::vector<int> orders_;
  double alpha_;
  std::vector<std::vector<OrderTable>> tables_;
  std::unique_ptr<Index> index_;
};

/// Learns a model from per-language sample lines. Samples are normalized and
/// lowercased; n-grams never span two sample lines.
LangIdModel train(const std::map<std::string, std::vector<std::string>>& samples,
                  const std::vector<int>& orders, double alpha);

/// Argmax language under the summed n-gram log probabilities of every order,
/// divided by the number of n-grams scored. `text` should be normalized.
/// Throws UndecidableInput when the text is empty or whitespace-only.
LangIdVerdict identify(const LangIdModel& model, std::string_view text);

std::string model_to_json(const LangIdModel& model);
LangIdModel model_from_json(std::string_view json);

void save_model(const LangIdModel& model, const std::filesystem::path& path);
LangIdModel load_model(const std::filesystem::path& path);

}  // namespace corpusclean
