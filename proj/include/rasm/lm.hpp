#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rasm/stats.hpp"
#include "rasm/tokenize.hpp"

namespace rasm {

inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kBosToken = "<s>";
inline constexpr std::string_view kEosToken = "</s>";

using WordId = std::uint32_t;
inline constexpr WordId kUnkId = 0;
inline constexpr WordId kBosId = 1;
inline constexpr WordId kEosId = 2;

inline constexpr int kMinOrder = 2;
inline constexpr int kMaxOrder = 6;

/// Fixed-capacity n-gram key (orders 1..6).
struct NgramKey {
  std::array<WordId, kMaxOrder> w{};
  std::uint8_t len = 0;

  bool operator==(const NgramKey& o) const {
    if (len != o.len) return false;
    for (std::uint8_t i = 0; i < len; ++i) {
      if (w[i] != o.w[i]) return false;
    }
    return true;
  }
  NgramKey suffix() const {  // drop the leftmost word
    NgramKey k;
    k.len = static_cast<std::uint8_t>(len - 1);
    for (std::uint8_t i = 1; i < len; ++i) k.w[i - 1] = w[i];
    return k;
  }
  NgramKey prefix() const {  // drop the rightmost word
    NgramKey k = *this;
    k.len = static_cast<std::uint8_t>(len - 1);
    k.w[k.len] = 0;
    return k;
  }
  WordId last() const { return w[len - 1]; }

  static NgramKey of(std::span<const WordId> ids) {
    NgramKey k;
    k.len = static_cast<std::uint8_t>(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) k.w[i] = ids[i];
    return k;
  }
};

struct NgramKeyHash {
  std::size_t operator()(const NgramKey& k) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t i = 0; i < k.len; ++i) {
      h ^= k.w[i];
      h *= 0x100000001b3ULL;
    }
    h ^= k.len;
    h *= 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
  }
};

template <typename V>
using NgramMap = std::unordered_map<NgramKey, V, NgramKeyHash>;

/// Model-side token ids: <unk>=0, <s>=1, </s>=2, then training types in
/// frequency-descending order with lexicographic tie-break.
class LmVocab {
 public:
  LmVocab();
  explicit LmVocab(const VocabTable& vocab);

  WordId add(std::string_view token);  // used by the ARPA loader
  WordId id(std::string_view token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnkId : it->second;
  }
  const std::string& token(WordId id) const { return tokens_[id]; }
  std::size_t size() const { return tokens_.size(); }
  /// Tokens a model may emit: everything except <s> and <unk>.
  std::size_t predictable() const { return tokens_.size() - 2; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, WordId, StringHash, std::equal_to<>> index_;
};

/// Raw k-gram count tables for k = 1..order, with one <s>/</s> pad per
/// sample. Each sample [w1..wm] contributes the k-grams of
/// [<s>, w1..wm, </s>].
class NgramCounts {
 public:
  NgramCounts(const TokenStream& train, int order);
  /// Counts against a caller-supplied vocabulary (sharded counting: build
  /// the vocabulary once, count shards independently, merge).
  NgramCounts(const TokenStream& train, int order, LmVocab vocab);

  int order() const { return order_; }
  const LmVocab& vocab() const { return vocab_; }
  const NgramMap<std::uint64_t>& table(int k) const { return raw_[k]; }
  std::uint64_t count(const NgramKey& key) const;
  /// Number of distinct k-grams (the n-gram count statistic).
  std::size_t distinct(int k) const { return raw_[k].size(); }

  /// Padded id sequence of one sample: [<s>, ids..., </s>].
  std::vector<WordId> padded_sample(const TokenStream& stream,
                                    std::size_t sample) const;

  /// Adds every count of `other` into this table (associative shard merge;
  /// both sides must share one vocabulary).
  void merge_from(const NgramCounts& other);

 private:
  int order_;
  LmVocab vocab_;
  std::vector<NgramMap<std::uint64_t>> raw_;  // index 1..order used
};

enum class Smoothing : std::uint8_t {
  modified_kn,  // three discount bands from count-of-counts
  simple_kn,    // single fixed discount
};

struct EvalReport {
  double ppl = 0.0;
  std::uint64_t token_count = 0;  // scored tokens
  std::uint64_t oov_tokens = 0;
  std::uint64_t oov_types = 0;
  double total_log_prob = 0.0;  // nats
};

/// Interpolated Kneser-Ney n-gram model. Immutable once estimated; queries
/// are thread-safe.
class NgramModel {
 public:
  struct Discounts {
    double d1 = 0.75, d2 = 0.75, d3 = 0.75;
    bool fallback = false;  // estimation degenerate, fixed discount in use
  };
  struct ContextStats {
    std::uint64_t denom = 0;  // sum of predictive counts under this context
    std::uint32_t n1 = 0, n2 = 0, n3p = 0;  // continuation count bands
  };

  int order() const { return order_; }
  const LmVocab& vocab() const { return vocab_; }
  const Discounts& discounts(int k) const { return discounts_[k]; }

  /// p(w | context), natural probability in (0, 1]. The context is clipped
  /// to the rightmost order-1 ids; unseen contexts back off transparently.
  double prob(WordId w, std::span<const WordId> context) const;
  double logprob_word(WordId w, std::span<const WordId> context) const;

  /// Sum of ln p over the sequence, scored left to right with
  /// longest-available context. `bos` prepends <s> as context; `eos`
  /// additionally scores </s> after the last token.
  double sequence_logprob(std::span<const WordId> tokens, bool bos = true,
                          bool eos = false) const;

  WordId map_token(std::string_view token) const { return vocab_.id(token); }

  EvalReport perplexity(const TokenStream& test, bool score_eos = true) const;

  // Estimation internals exposed for the serializer.
  const NgramMap<std::uint64_t>& predictive_table(int k) const {
    return adjusted_[k];
  }
  const NgramMap<ContextStats>& context_table(int k) const {
    return contexts_[k];
  }
  double uniform_mass() const { return uniform_; }
  /// Backoff weight gamma(h) of a seen context (1.0 for unseen contexts).
  double backoff_weight(const NgramKey& context) const;

  friend NgramModel estimate_kn(const NgramCounts& counts, int order,
                                Smoothing smoothing, double fixed_discount);

 private:
  double prob_rec(WordId w, std::span<const WordId> context) const;
  double unigram_prob(WordId w) const;
  double discount_for(int k, std::uint64_t count) const;

  int order_ = 0;
  LmVocab vocab_;
  std::vector<NgramMap<std::uint64_t>> adjusted_;   // predictive counts, 1..n
  std::vector<NgramMap<ContextStats>> contexts_;    // 2..n, keyed by context
  ContextStats unigram_stats_;                      // context = empty
  std::vector<Discounts> discounts_;                // 1..n
  double uniform_ = 0.0;                            // 1/(predictable + 1)
};

/// Estimates an interpolated Kneser-Ney model of the given order from the
/// count tables. Modified-KN discounts come from count-of-counts
/// (Y = n1/(n1+2 n2), Dk = k - (k+1) Y n_{k+1}/n_k); degenerate statistics
/// fall back to the fixed discount with a warning on stderr.
NgramModel estimate_kn(const NgramCounts& counts, int order,
                       Smoothing smoothing = Smoothing::modified_kn,
                       double fixed_discount = 0.75);

/// Token-level and type-level out-of-vocabulary counts of `test` against a
/// training vocabulary. Schemes must match.
std::pair<std::uint64_t, std::uint64_t> oov_stats(const VocabTable& train,
                                                  const TokenStream& test);

/// Open-vocabulary cutoff for training streams: keeps the smallest set of
/// most-frequent types whose cumulative frequency reaches `coverage` of the
/// running text and rewrites every other token to <unk>, which then carries
/// ordinary n-gram statistics. coverage >= 1 (or <= 0) is the identity.
TokenStream apply_vocab_coverage(const TokenStream& stream, double coverage);

/// Perplexity from a total negative log likelihood in nats.
double perplexity_from_nll(double total_log_prob_nats, std::uint64_t tokens);

/// Shared evaluation loop for any model exposing vocab() and
/// sequence_logprob(). Each sample is scored with <s> context; the final
/// </s> is scored unless `score_eos` is false. OOV tokens score as <unk>
/// and are tallied per occurrence and per distinct type.
template <typename Model>
EvalReport evaluate_perplexity(const Model& model, const TokenStream& test,
                               bool score_eos = true) {
  EvalReport report;
  std::unordered_map<std::uint32_t, bool> oov_pool_ids;
  std::vector<WordId> ids;
  for (std::size_t s = 0; s < test.sample_count(); ++s) {
    const std::size_t begin = test.sample_offsets[s];
    const std::size_t end = test.sample_offsets[s + 1];
    if (begin == end) continue;
    ids.clear();
    for (std::size_t i = begin; i < end; ++i) {
      const WordId id = model.vocab().id(test.token(i));
      if (id == kUnkId) {
        ++report.oov_tokens;
        if (oov_pool_ids.emplace(test.ids[i], true).second) ++report.oov_types;
      }
      ids.push_back(id);
    }
    report.total_log_prob +=
        model.sequence_logprob(ids, /*bos=*/true, score_eos);
    report.token_count += ids.size() + (score_eos ? 1 : 0);
  }
  report.ppl = perplexity_from_nll(report.total_log_prob, report.token_count);
  return report;
}

/// Unsmoothed maximum-likelihood log probability (nats) of one sample,
/// scored with <s> context and a final </s>, longest-available context per
/// token. Throws Error on any n-gram whose context or extension was never
/// observed. Test oracle for order-monotonicity checks.
double mle_logprob(const NgramCounts& counts, int order,
                   std::span<const std::string_view> tokens);

/// Same, summed over every sample of a stream; `scored` receives the token
/// count (including the final </s> of each sample).
double mle_corpus_logprob(const NgramCounts& counts, int order,
                          const TokenStream& stream,
                          std::uint64_t* scored = nullptr);

}  // namespace rasm
