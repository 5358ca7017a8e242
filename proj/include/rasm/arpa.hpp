#pragma once

#include <string>

#include "rasm/lm.hpp"

namespace rasm {

/// Renders a trained model in the sorted-text ARPA layout: a \data\ section
/// with per-order entry counts, then per order one line per n-gram holding
/// log10 probability, the space-joined gram, and (below the top order) a
/// log10 backoff weight when the gram acts as a context. Grams are sorted
/// lexicographically per order, so equal models diff as equal files.
std::string to_arpa(const NgramModel& model);
void write_arpa(const NgramModel& model, const std::string& path);

/// A queryable model loaded from the ARPA text format or the binary cache.
/// Query semantics: the probability of a seen gram is its stored value; an
/// unseen gram costs the context's backoff weight times the suffix query.
/// Scores equal the estimating model's up to text-format rounding.
class ArpaModel {
 public:
  struct Entry {
    double ln_prob = 0.0;
    double ln_backoff = 0.0;  // 0 = no backoff stored (weight 1)
  };

  static ArpaModel from_arpa_text(std::string_view text);
  static ArpaModel load_arpa(const std::string& path);
  static ArpaModel load_binary(const std::string& path);
  /// Sniffs the format (binary magic vs text) and dispatches.
  static ArpaModel load(const std::string& path);

  void save_binary(const std::string& path) const;

  int order() const { return order_; }
  const LmVocab& vocab() const { return vocab_; }

  double prob(WordId w, std::span<const WordId> context) const;
  double logprob_word(WordId w, std::span<const WordId> context) const;
  double sequence_logprob(std::span<const WordId> tokens, bool bos = true,
                          bool eos = false) const;
  WordId map_token(std::string_view token) const { return vocab_.id(token); }

  EvalReport perplexity(const TokenStream& test, bool score_eos = true) const;

 private:
  int order_ = 0;
  LmVocab vocab_;
  std::vector<NgramMap<Entry>> tables_;  // 1..order
};

/// Round-trips a model through the binary cache representation.
ArpaModel to_arpa_model(const NgramModel& model);

}  // namespace rasm
