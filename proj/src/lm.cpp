#include "rasm/lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rasm {

LmVocab::LmVocab() {
  add(kUnkToken);
  add(kBosToken);
  add(kEosToken);
}

LmVocab::LmVocab(const VocabTable& vocab) : LmVocab() {
  for (const auto& [token, freq] : vocab.entries) add(token);
}

WordId LmVocab::add(std::string_view token) {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<WordId>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), id);
  return id;
}

NgramCounts::NgramCounts(const TokenStream& train, int order)
    : NgramCounts(train, order, LmVocab(build_vocab(train))) {}

NgramCounts::NgramCounts(const TokenStream& train, int order, LmVocab vocab)
    : order_(order), vocab_(std::move(vocab)) {
  if (order < kMinOrder || order > kMaxOrder) {
    throw Error("n-gram order must lie in [" + std::to_string(kMinOrder) +
                ", " + std::to_string(kMaxOrder) + "]");
  }
  raw_.resize(order + 1);

  std::vector<WordId> padded;
  for (std::size_t s = 0; s < train.sample_count(); ++s) {
    padded.clear();
    padded.push_back(kBosId);
    const std::size_t begin = train.sample_offsets[s];
    const std::size_t end = train.sample_offsets[s + 1];
    for (std::size_t i = begin; i < end; ++i) {
      padded.push_back(vocab_.id(train.token(i)));
    }
    padded.push_back(kEosId);

    for (int k = 1; k <= order; ++k) {
      if (padded.size() < static_cast<std::size_t>(k)) continue;
      for (std::size_t i = 0; i + k <= padded.size(); ++i) {
        ++raw_[k][NgramKey::of({padded.data() + i, static_cast<size_t>(k)})];
      }
    }
  }
}

std::uint64_t NgramCounts::count(const NgramKey& key) const {
  if (key.len == 0 || key.len > order_) return 0;
  const auto& t = raw_[key.len];
  auto it = t.find(key);
  return it == t.end() ? 0 : it->second;
}

std::vector<WordId> NgramCounts::padded_sample(const TokenStream& stream,
                                               std::size_t sample) const {
  std::vector<WordId> out;
  const std::size_t begin = stream.sample_offsets[sample];
  const std::size_t end = stream.sample_offsets[sample + 1];
  out.reserve(end - begin + 2);
  out.push_back(kBosId);
  for (std::size_t i = begin; i < end; ++i) {
    out.push_back(vocab_.id(stream.token(i)));
  }
  out.push_back(kEosId);
  return out;
}

void NgramCounts::merge_from(const NgramCounts& other) {
  if (other.order_ != order_) throw Error("order mismatch in count merge");
  if (other.vocab_.size() != vocab_.size()) {
    throw Error("count shards must share one vocabulary");
  }
  for (WordId id = 0; id < vocab_.size(); ++id) {
    if (vocab_.token(id) != other.vocab_.token(id)) {
      throw Error("count shards must share one vocabulary");
    }
  }
  for (int k = 1; k <= order_; ++k) {
    for (const auto& [key, n] : other.raw_[k]) raw_[k][key] += n;
  }
}

namespace {

// Count-of-counts n1..n4 over a predictive table; skip_bos drops the <s>
// unigram, which is context-only and must not shape the discounts.
struct CountOfCounts {
  std::uint64_t n[5] = {0, 0, 0, 0, 0};  // n[1]..n[4]
};

template <typename Table>
CountOfCounts tally(const Table& table, bool skip_bos) {
  CountOfCounts cc;
  for (const auto& [key, c] : table) {
    if (skip_bos && key.len == 1 && key.w[0] == kBosId) continue;
    if (c >= 1 && c <= 4) ++cc.n[c];
  }
  return cc;
}

}  // namespace

NgramModel estimate_kn(const NgramCounts& counts, int order,
                       Smoothing smoothing, double fixed_discount) {
  if (order < kMinOrder || order > counts.order()) {
    throw Error("estimation order must lie in [2, counts order]");
  }
  if (!(fixed_discount > 0.0 && fixed_discount < 1.0)) {
    throw Error("fixed discount must lie in (0, 1)");
  }

  NgramModel m;
  m.order_ = order;
  m.vocab_ = counts.vocab();
  m.adjusted_.resize(order + 1);
  m.contexts_.resize(order + 1);
  m.discounts_.resize(order + 1);
  m.uniform_ = 1.0 / static_cast<double>(m.vocab_.predictable() + 1);

  // Predictive counts: raw at the top order; at lower orders the
  // continuation count (distinct left extensions), except that grams
  // beginning with <s> keep their raw counts -- nothing can precede <s>, so
  // a continuation count would be identically zero there.
  m.adjusted_[order] = counts.table(order);
  for (int k = order - 1; k >= 1; --k) {
    auto& adj = m.adjusted_[k];
    for (const auto& [key, c] : counts.table(k + 1)) {
      ++adj[key.suffix()];
    }
    for (const auto& [key, c] : counts.table(k)) {
      if (key.w[0] == kBosId) adj[key] = c;
    }
  }

  // Context aggregates per order.
  for (int k = 2; k <= order; ++k) {
    auto& ctx = m.contexts_[k];
    for (const auto& [key, c] : m.adjusted_[k]) {
      auto& st = ctx[key.prefix()];
      st.denom += c;
      if (c == 1) {
        ++st.n1;
      } else if (c == 2) {
        ++st.n2;
      } else {
        ++st.n3p;
      }
    }
  }
  for (const auto& [key, c] : m.adjusted_[1]) {
    if (key.w[0] == kBosId) continue;  // <s> is never predicted
    m.unigram_stats_.denom += c;
    if (c == 1) {
      ++m.unigram_stats_.n1;
    } else if (c == 2) {
      ++m.unigram_stats_.n2;
    } else {
      ++m.unigram_stats_.n3p;
    }
  }

  // Discounts.
  for (int k = 1; k <= order; ++k) {
    NgramModel::Discounts d;
    d.d1 = d.d2 = d.d3 = fixed_discount;
    if (smoothing == Smoothing::modified_kn) {
      const CountOfCounts cc = tally(m.adjusted_[k], /*skip_bos=*/k == 1);
      const double n1 = static_cast<double>(cc.n[1]);
      const double n2 = static_cast<double>(cc.n[2]);
      const double n3 = static_cast<double>(cc.n[3]);
      const double n4 = static_cast<double>(cc.n[4]);
      bool ok = cc.n[1] > 0 && cc.n[2] > 0;
      if (ok) {
        const double y = n1 / (n1 + 2.0 * n2);
        d.d1 = 1.0 - 2.0 * y * n2 / n1;
        d.d2 = 2.0 - 3.0 * y * n3 / n2;
        d.d3 = cc.n[3] > 0 ? 3.0 - 4.0 * y * n4 / n3 : 3.0;
        // Each band must stay inside (0, band]; outside means the
        // count-of-count statistics are unusable for this order.
        ok = d.d1 > 0.0 && d.d1 < 1.0 && d.d2 > 0.0 && d.d2 <= 2.0 &&
             d.d3 > 0.0 && d.d3 <= 3.0;
      }
      if (!ok) {
        std::fprintf(stderr,
                     "warning: degenerate count-of-counts at order %d; "
                     "falling back to fixed discount %.2f\n",
                     k, fixed_discount);
        d = NgramModel::Discounts{};
        d.d1 = d.d2 = d.d3 = fixed_discount;
        d.fallback = true;
      }
    }
    m.discounts_[k] = d;
  }

  return m;
}

double NgramModel::discount_for(int k, std::uint64_t count) const {
  if (count == 0) return 0.0;
  const Discounts& d = discounts_[k];
  if (count == 1) return d.d1;
  if (count == 2) return d.d2;
  return d.d3;
}

double NgramModel::unigram_prob(WordId w) const {
  const double denom = static_cast<double>(unigram_stats_.denom);
  const Discounts& d = discounts_[1];
  const double gamma = (d.d1 * unigram_stats_.n1 + d.d2 * unigram_stats_.n2 +
                        d.d3 * unigram_stats_.n3p) /
                       denom;
  double base = 0.0;
  if (w != kBosId) {
    NgramKey key;
    key.len = 1;
    key.w[0] = w;
    auto it = adjusted_[1].find(key);
    if (it != adjusted_[1].end()) {
      base = (static_cast<double>(it->second) - discount_for(1, it->second)) /
             denom;
    }
  }
  return base + gamma * uniform_;
}

double NgramModel::prob_rec(WordId w, std::span<const WordId> context) const {
  if (context.empty()) return unigram_prob(w);

  const int k = static_cast<int>(context.size()) + 1;
  const NgramKey ctx_key = NgramKey::of(context);
  const auto& ctx_table = contexts_[k];
  auto ctx_it = ctx_table.find(ctx_key);
  if (ctx_it == ctx_table.end() || ctx_it->second.denom == 0) {
    return prob_rec(w, context.subspan(1));
  }
  const ContextStats& st = ctx_it->second;
  const double denom = static_cast<double>(st.denom);

  NgramKey full = ctx_key;
  full.w[full.len] = w;
  full.len = static_cast<std::uint8_t>(full.len + 1);
  std::uint64_t c = 0;
  if (auto it = adjusted_[k].find(full); it != adjusted_[k].end()) {
    c = it->second;
  }

  const Discounts& d = discounts_[k];
  const double gamma = (d.d1 * st.n1 + d.d2 * st.n2 + d.d3 * st.n3p) / denom;
  const double base =
      c == 0 ? 0.0 : (static_cast<double>(c) - discount_for(k, c)) / denom;
  return base + gamma * prob_rec(w, context.subspan(1));
}

double NgramModel::prob(WordId w, std::span<const WordId> context) const {
  const std::size_t max_ctx = static_cast<std::size_t>(order_ - 1);
  if (context.size() > max_ctx) {
    context = context.subspan(context.size() - max_ctx);
  }
  return prob_rec(w, context);
}

double NgramModel::logprob_word(WordId w,
                                std::span<const WordId> context) const {
  return std::log(prob(w, context));
}

double NgramModel::backoff_weight(const NgramKey& context) const {
  if (context.len == 0) {
    const Discounts& d = discounts_[1];
    return (d.d1 * unigram_stats_.n1 + d.d2 * unigram_stats_.n2 +
            d.d3 * unigram_stats_.n3p) /
           static_cast<double>(unigram_stats_.denom);
  }
  const int k = context.len + 1;
  if (k > order_) return 1.0;
  auto it = contexts_[k].find(context);
  if (it == contexts_[k].end() || it->second.denom == 0) return 1.0;
  const ContextStats& st = it->second;
  const Discounts& d = discounts_[k];
  return (d.d1 * st.n1 + d.d2 * st.n2 + d.d3 * st.n3p) /
         static_cast<double>(st.denom);
}

double NgramModel::sequence_logprob(std::span<const WordId> tokens, bool bos,
                                    bool eos) const {
  std::vector<WordId> history;
  history.reserve(tokens.size() + 2);
  if (bos) history.push_back(kBosId);
  double total = 0.0;
  for (WordId w : tokens) {
    total += logprob_word(w, history);
    history.push_back(w);
  }
  if (eos) total += logprob_word(kEosId, history);
  return total;
}

double perplexity_from_nll(double total_log_prob_nats, std::uint64_t tokens) {
  if (tokens == 0) throw Error("perplexity of an empty evaluation");
  return std::exp(-total_log_prob_nats / static_cast<double>(tokens));
}

EvalReport NgramModel::perplexity(const TokenStream& test,
                                  bool score_eos) const {
  return evaluate_perplexity(*this, test, score_eos);
}

std::pair<std::uint64_t, std::uint64_t> oov_stats(const VocabTable& train,
                                                  const TokenStream& test) {
  if (train.scheme != test.scheme) {
    throw Error("OOV statistics require matching tokenization schemes");
  }
  std::uint64_t oov_tokens = 0;
  std::uint64_t oov_types = 0;
  std::vector<std::uint64_t> occurrences(test.pool.size(), 0);
  for (std::uint32_t id : test.ids) ++occurrences[id];
  for (std::size_t i = 0; i < test.pool.size(); ++i) {
    if (occurrences[i] > 0 && !train.contains(test.pool[i])) {
      oov_tokens += occurrences[i];
      ++oov_types;
    }
  }
  return {oov_tokens, oov_types};
}

TokenStream apply_vocab_coverage(const TokenStream& stream, double coverage) {
  TokenStream out;
  out.scheme = stream.scheme;
  out.sample_offsets = stream.sample_offsets;
  out.space_after = stream.space_after;
  out.ids.reserve(stream.ids.size());
  if (coverage <= 0.0 || coverage >= 1.0 || stream.size() == 0) {
    for (std::uint32_t id : stream.ids) out.ids.push_back(out.intern(stream.pool[id]));
    return out;
  }

  std::vector<std::uint64_t> freq(stream.pool.size(), 0);
  for (std::uint32_t id : stream.ids) ++freq[id];
  std::vector<std::uint32_t> order(stream.pool.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (freq[a] != freq[b]) return freq[a] > freq[b];
    return stream.pool[a] < stream.pool[b];
  });

  const auto want = static_cast<std::uint64_t>(
      std::ceil(coverage * static_cast<double>(stream.size())));
  std::vector<bool> keep(stream.pool.size(), false);
  std::uint64_t covered = 0;
  for (std::uint32_t id : order) {
    if (covered >= want || freq[id] == 0) break;
    keep[id] = true;
    covered += freq[id];
  }

  for (std::uint32_t id : stream.ids) {
    out.ids.push_back(out.intern(keep[id] ? std::string_view(stream.pool[id])
                                          : kUnkToken));
  }
  return out;
}

namespace {

double mle_score(const NgramCounts& counts, int order,
                 std::span<const WordId> padded) {
  double total = 0.0;
  for (std::size_t i = 1; i < padded.size(); ++i) {
    const std::size_t ctx_len =
        std::min<std::size_t>(i, static_cast<std::size_t>(order - 1));
    NgramKey full =
        NgramKey::of({padded.data() + (i - ctx_len), ctx_len + 1});
    const std::uint64_t num = counts.count(full);
    if (num == 0) {
      throw Error("unseen n-gram in maximum-likelihood scoring");
    }
    std::uint64_t den = 0;
    if (ctx_len == 0) {
      // Unigram: all non-<s> occurrences.
      for (const auto& [key, c] : counts.table(1)) {
        if (key.w[0] != kBosId) den += c;
      }
    } else {
      // Sum over continuations of the context at this order.
      NgramKey ctx = full.prefix();
      for (const auto& [key, c] : counts.table(static_cast<int>(ctx_len) + 1)) {
        NgramKey p = key.prefix();
        if (p == ctx) den += c;
      }
    }
    total += std::log(static_cast<double>(num) / static_cast<double>(den));
  }
  return total;
}

}  // namespace

double mle_logprob(const NgramCounts& counts, int order,
                   std::span<const std::string_view> tokens) {
  if (order < 1 || order > counts.order()) {
    throw Error("MLE order must lie in [1, counts order]");
  }
  if (tokens.empty()) throw Error("cannot score an empty sequence");
  std::vector<WordId> padded;
  padded.reserve(tokens.size() + 2);
  padded.push_back(kBosId);
  for (std::string_view t : tokens) padded.push_back(counts.vocab().id(t));
  padded.push_back(kEosId);
  return mle_score(counts, order, padded);
}

double mle_corpus_logprob(const NgramCounts& counts, int order,
                          const TokenStream& stream, std::uint64_t* scored) {
  if (order < 1 || order > counts.order()) {
    throw Error("MLE order must lie in [1, counts order]");
  }
  // Context-sum denominators are precomputed once; the naive per-token scan
  // in mle_score would be quadratic over a whole corpus.
  std::vector<NgramMap<std::uint64_t>> ctx_sums(counts.order() + 1);
  for (int k = 2; k <= order; ++k) {
    for (const auto& [key, c] : counts.table(k)) {
      ctx_sums[k][key.prefix()] += c;
    }
  }
  std::uint64_t uni_total = 0;
  for (const auto& [key, c] : counts.table(1)) {
    if (key.w[0] != kBosId) uni_total += c;
  }

  double total = 0.0;
  std::uint64_t n_scored = 0;
  for (std::size_t s = 0; s < stream.sample_count(); ++s) {
    const std::vector<WordId> padded = counts.padded_sample(stream, s);
    for (std::size_t i = 1; i < padded.size(); ++i) {
      const std::size_t ctx_len =
          std::min<std::size_t>(i, static_cast<std::size_t>(order - 1));
      NgramKey full =
          NgramKey::of({padded.data() + (i - ctx_len), ctx_len + 1});
      const std::uint64_t num = counts.count(full);
      if (num == 0) throw Error("unseen n-gram in MLE corpus scoring");
      std::uint64_t den;
      if (ctx_len == 0) {
        den = uni_total;
      } else {
        auto it = ctx_sums[ctx_len + 1].find(full.prefix());
        if (it == ctx_sums[ctx_len + 1].end() || it->second == 0) {
          throw Error("unseen context in MLE corpus scoring");
        }
        den = it->second;
      }
      total += std::log(static_cast<double>(num) / static_cast<double>(den));
      ++n_scored;
    }
  }
  if (scored) *scored = n_scored;
  return total;
}

}  // namespace rasm
