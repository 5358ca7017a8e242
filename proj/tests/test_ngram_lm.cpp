#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "rasm/lm.hpp"
#include "test_helpers.hpp"

using namespace rasm;

namespace {

TokenStream stream_of_samples(
    const std::vector<std::vector<std::string>>& samples) {
  TokenStream s;
  for (const auto& sample : samples) {
    for (const auto& t : sample) s.push(t, true);
    s.end_sample();
  }
  return s;
}

// Brute-force interpolated Kneser-Ney evaluator, written against the same
// conventions as the estimator but with naive string-keyed tables and
// linear scans. Per-order discount triples cover both the fixed-discount
// form (all equal) and the count-of-counts form (derive_discounts).
struct KnOracle {
  using Gram = std::vector<std::string>;
  struct Triple {
    double d1, d2, d3;
    bool degenerate = false;
  };
  int order;
  std::vector<Triple> discounts;                   // per order 1..n
  std::vector<std::map<Gram, std::uint64_t>> raw;  // 1..order
  std::vector<std::map<Gram, double>> adj;
  std::set<std::string> support;  // predictable tokens incl </s> and <unk>

  KnOracle(const std::vector<std::vector<std::string>>& samples, int n,
           double delta)
      : order(n), raw(n + 1), adj(n + 1) {
    build(samples);
    discounts.assign(n + 1, Triple{delta, delta, delta});
  }

  // Count-of-counts discounts per the modified formula
  // D_k = k - (k+1) Y n_{k+1}/n_k with Y = n1/(n1 + 2 n2).
  KnOracle(const std::vector<std::vector<std::string>>& samples, int n,
           double fallback_delta, bool /*modified*/)
      : order(n), raw(n + 1), adj(n + 1) {
    build(samples);
    discounts.assign(n + 1, Triple{});
    for (int k = 1; k <= n; ++k) {
      double nc[5] = {0, 0, 0, 0, 0};
      for (const auto& [g, c] : adj[k]) {
        if (k == 1 && g.front() == "<s>") continue;
        const auto ci = static_cast<std::uint64_t>(c + 0.5);
        if (ci >= 1 && ci <= 4) nc[ci] += 1.0;
      }
      Triple t{};
      bool ok = nc[1] > 0 && nc[2] > 0;
      if (ok) {
        const double y = nc[1] / (nc[1] + 2.0 * nc[2]);
        t.d1 = 1.0 - 2.0 * y * nc[2] / nc[1];
        t.d2 = 2.0 - 3.0 * y * nc[3] / nc[2];
        t.d3 = nc[3] > 0 ? 3.0 - 4.0 * y * nc[4] / nc[3] : 3.0;
        ok = t.d1 > 0 && t.d1 < 1 && t.d2 > 0 && t.d2 <= 2 && t.d3 > 0 &&
             t.d3 <= 3;
      }
      if (!ok) {
        t = Triple{fallback_delta, fallback_delta, fallback_delta, true};
      }
      discounts[k] = t;
    }
  }

  void build(const std::vector<std::vector<std::string>>& samples) {
    for (const auto& sample : samples) {
      Gram padded;
      padded.push_back("<s>");
      for (const auto& t : sample) padded.push_back(t);
      padded.push_back("</s>");
      for (int k = 1; k <= order; ++k) {
        for (std::size_t i = 0; i + k <= padded.size(); ++i) {
          ++raw[k][Gram(padded.begin() + i, padded.begin() + i + k)];
        }
      }
      for (const auto& t : sample) support.insert(t);
    }
    support.insert("</s>");
    support.insert("<unk>");

    for (const auto& [g, c] : raw[order]) adj[order][g] = static_cast<double>(c);
    for (int k = order - 1; k >= 1; --k) {
      for (const auto& [g, c] : raw[k + 1]) {
        adj[k][Gram(g.begin() + 1, g.end())] += 1.0;
      }
      for (const auto& [g, c] : raw[k]) {
        if (g.front() == "<s>") adj[k][g] = static_cast<double>(c);
      }
    }
  }

  double discount(int level, double count) const {
    const Triple& t = discounts[level];
    if (count < 1.5) return t.d1;
    if (count < 2.5) return t.d2;
    return t.d3;
  }

  double prob(const std::string& w, Gram ctx) const {
    while (ctx.size() > static_cast<std::size_t>(order - 1)) {
      ctx.erase(ctx.begin());
    }
    return prob_rec(w, ctx);
  }

  double prob_rec(const std::string& w, const Gram& ctx) const {
    if (ctx.empty()) {
      double denom = 0.0, gamma_mass = 0.0, base = 0.0;
      for (const auto& [g, c] : adj[1]) {
        if (g.front() == "<s>") continue;
        denom += c;
        gamma_mass += discount(1, c);
        if (g.front() == w) base = std::max(c - discount(1, c), 0.0);
      }
      const double uniform = 1.0 / static_cast<double>(support.size());
      return base / denom + (gamma_mass / denom) * uniform;
    }
    const int k = static_cast<int>(ctx.size()) + 1;
    double denom = 0.0, gamma_mass = 0.0, base = 0.0;
    for (const auto& [g, c] : adj[k]) {
      if (!std::equal(ctx.begin(), ctx.end(), g.begin())) continue;
      denom += c;
      gamma_mass += discount(k, c);
      if (g.back() == w) base = std::max(c - discount(k, c), 0.0);
    }
    Gram shorter(ctx.begin() + 1, ctx.end());
    if (denom == 0.0) return prob_rec(w, shorter);
    return base / denom + (gamma_mass / denom) * prob_rec(w, shorter);
  }

  // Perplexity with <s> context and a scored </s>, clipped contexts.
  double ppl(const std::vector<std::vector<std::string>>& samples) const {
    double total = 0.0;
    std::uint64_t n_scored = 0;
    for (const auto& sample : samples) {
      Gram hist{"<s>"};
      for (const auto& t : sample) {
        const std::string w = support.count(t) ? t : "<unk>";
        total += std::log(prob(w, hist));
        hist.push_back(w);
        ++n_scored;
      }
      total += std::log(prob("</s>", hist));
      ++n_scored;
    }
    return std::exp(-total / static_cast<double>(n_scored));
  }
};

NgramModel simple_model(const std::vector<std::vector<std::string>>& samples,
                        int order, double delta = 0.75) {
  const TokenStream s = stream_of_samples(samples);
  const NgramCounts counts(s, order);
  return estimate_kn(counts, order, Smoothing::simple_kn, delta);
}

std::vector<WordId> ids_of(const NgramModel& m,
                           const std::vector<std::string>& tokens) {
  std::vector<WordId> out;
  for (const auto& t : tokens) out.push_back(m.map_token(t));
  return out;
}

}  // namespace

TEST_CASE("bigram counts with sentence padding") {
  const TokenStream s = stream_of_samples({{"a", "b", "a", "b"}});
  const NgramCounts counts(s, 2);
  auto c2 = [&](std::vector<std::string> g) {
    NgramKey key;
    key.len = 2;
    key.w[0] = counts.vocab().id(g[0]);
    key.w[1] = counts.vocab().id(g[1]);
    return counts.count(key);
  };
  CHECK(c2({"<s>", "a"}) == 1);
  CHECK(c2({"a", "b"}) == 2);
  CHECK(c2({"b", "a"}) == 1);
  CHECK(c2({"b", "</s>"}) == 1);
  CHECK(counts.distinct(2) == 4);

  const TokenStream one = stream_of_samples({{"x"}});
  const NgramCounts c1(one, 2);
  CHECK(c1.distinct(2) == 2);  // (<s>,x), (x,</s>)
}

TEST_CASE("order bounds are enforced") {
  const TokenStream s = stream_of_samples({{"a", "b"}});
  CHECK_THROWS_AS(NgramCounts(s, 1), Error);
  CHECK_THROWS_AS(NgramCounts(s, 7), Error);
  const NgramCounts counts(s, 3);
  CHECK_THROWS_AS(estimate_kn(counts, 4), Error);
}

TEST_CASE("shard-merged counts equal whole-stream counts") {
  std::mt19937_64 rng(41);
  const Corpus c = testing::random_arabic_corpus(rng, 60);
  Corpus first, second;
  first.mode = second.mode = LanguageMode::arabic;
  first.samples.assign(c.samples.begin(), c.samples.begin() + 30);
  second.samples.assign(c.samples.begin() + 30, c.samples.end());

  const TokenStream whole = tokenize(c, Scheme::word);
  const LmVocab shared(build_vocab(whole));
  const NgramCounts whole_counts(whole, 3);

  NgramCounts merged(tokenize(first, Scheme::word), 3, shared);
  merged.merge_from(NgramCounts(tokenize(second, Scheme::word), 3, shared));

  for (int k = 1; k <= 3; ++k) {
    REQUIRE(merged.distinct(k) == whole_counts.distinct(k));
    for (const auto& [key, n] : whole_counts.table(k)) {
      CHECK(merged.count(key) == n);
    }
  }

  // Mismatched vocabularies are rejected.
  CHECK_THROWS_AS(
      merged.merge_from(NgramCounts(tokenize(first, Scheme::word), 3)),
      Error);
}

TEST_CASE("simple KN matches hand-computed values on the toy corpus") {
  const std::vector<std::vector<std::string>> corpus = {{"a", "b", "a", "c"}};
  const NgramModel m = simple_model(corpus, 2);

  const WordId a = m.map_token("a");
  const WordId b = m.map_token("b");
  const WordId c = m.map_token("c");
  const std::vector<WordId> bos{kBosId};
  const std::vector<WordId> ctx_a{a};

  // Hand evaluation with delta = 0.75: continuation counts a:2 b:1 c:1
  // </s>:1, five predictables incl <unk>, uniform 1/5.
  CHECK(m.prob(a, bos) == doctest::Approx(0.5275).epsilon(1e-9));
  CHECK(m.prob(b, bos) == doctest::Approx(0.1275).epsilon(1e-9));
  CHECK(m.prob(kEosId, ctx_a) == doctest::Approx(0.1275).epsilon(1e-9));
  CHECK(m.prob(b, ctx_a) == doctest::Approx(0.2525).epsilon(1e-9));
  CHECK(m.prob(a, {}) == doctest::Approx(0.37).epsilon(1e-9));
  CHECK(m.prob(c, {}) == doctest::Approx(0.17).epsilon(1e-9));
  CHECK(m.prob(kUnkId, {}) == doctest::Approx(0.12).epsilon(1e-9));
}

TEST_CASE("simple KN equals the brute-force oracle on toy corpora") {
  const std::vector<std::vector<std::vector<std::string>>> corpora = {
      {{"a", "b", "a", "c"}},
      {{"a", "a", "b"}, {"b", "a"}},
      {{"x", "y", "z", "x", "y"}, {"z"}, {"y", "y"}},
  };
  for (const auto& corpus : corpora) {
    for (int order = 2; order <= 3; ++order) {
      const NgramModel m = simple_model(corpus, order);
      const KnOracle oracle(corpus, order, 0.75);

      // every conditional against every observed context, all predictables
      std::vector<std::vector<std::string>> contexts{{}};
      for (const auto& sample : corpus) {
        std::vector<std::string> hist{"<s>"};
        for (const auto& t : sample) {
          contexts.push_back(hist);
          hist.push_back(t);
        }
        contexts.push_back(hist);
      }
      for (const auto& ctx : contexts) {
        std::vector<WordId> ctx_ids;
        for (const auto& t : ctx) ctx_ids.push_back(m.map_token(t));
        double sum = 0.0;
        for (const std::string& w : oracle.support) {
          const double want = oracle.prob(w, ctx);
          const double got = m.prob(m.map_token(w), ctx_ids);
          CHECK(got == doctest::Approx(want).epsilon(1e-9));
          sum += got;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("simple KN perplexity equals the oracle") {
  const std::vector<std::vector<std::string>> train = {
      {"a", "b", "a", "c"}, {"c", "b"}, {"a", "a"}};
  const std::vector<std::vector<std::string>> test = {{"a", "c"},
                                                      {"b", "d", "a"}};
  for (int order = 2; order <= 3; ++order) {
    const NgramModel m = simple_model(train, order);
    const KnOracle oracle(train, order, 0.75);
    const EvalReport r = m.perplexity(stream_of_samples(test));
    CHECK(r.ppl == doctest::Approx(oracle.ppl(test)).epsilon(1e-9));
    CHECK(r.oov_tokens == 1);  // "d"
    CHECK(r.oov_types == 1);
    CHECK(r.token_count == 7);  // 5 tokens + 2 </s>
  }
}

TEST_CASE("modified KN matches an independent count-of-counts oracle") {
  std::mt19937_64 rng(42);
  std::vector<std::vector<std::string>> corpus;
  for (int s = 0; s < 60; ++s) {
    std::vector<std::string> sample;
    const std::size_t len = 1 + bounded_rand(rng, 8);
    for (std::size_t i = 0; i < len; ++i) {
      // Zipf-ish: small ids common
      const auto pick = bounded_rand(rng, 1 + bounded_rand(rng, 12));
      sample.push_back("w" + std::to_string(pick));
    }
    corpus.push_back(std::move(sample));
  }
  const TokenStream s = stream_of_samples(corpus);
  const NgramCounts counts(s, 3);
  const NgramModel m = estimate_kn(counts, 3, Smoothing::modified_kn, 0.75);
  const KnOracle oracle(corpus, 3, 0.75, /*modified=*/true);

  for (int k = 1; k <= 3; ++k) {
    CHECK(m.discounts(k).fallback == oracle.discounts[k].degenerate);
    CHECK(m.discounts(k).d1 ==
          doctest::Approx(oracle.discounts[k].d1).epsilon(1e-12));
    CHECK(m.discounts(k).d2 ==
          doctest::Approx(oracle.discounts[k].d2).epsilon(1e-12));
    CHECK(m.discounts(k).d3 ==
          doctest::Approx(oracle.discounts[k].d3).epsilon(1e-12));
    if (!m.discounts(k).fallback) {
      CHECK(m.discounts(k).d1 > 0.0);
      CHECK(m.discounts(k).d1 < 1.0);
      CHECK(m.discounts(k).d2 > 0.0);
      CHECK(m.discounts(k).d2 <= 2.0);
      CHECK(m.discounts(k).d3 > 0.0);
      CHECK(m.discounts(k).d3 <= 3.0);
    }
  }

  // Conditional probabilities across observed contexts of every length.
  std::vector<std::vector<std::string>> contexts{{}};
  for (int k = 2; k <= 3; ++k) {
    for (const auto& [key, st] : m.context_table(k)) {
      std::vector<std::string> ctx;
      for (std::uint8_t i = 0; i < key.len; ++i) {
        ctx.push_back(m.vocab().token(key.w[i]));
      }
      contexts.push_back(std::move(ctx));
    }
  }
  std::size_t checked = 0;
  for (const auto& ctx : contexts) {
    std::vector<WordId> ctx_ids;
    for (const auto& t : ctx) ctx_ids.push_back(m.map_token(t));
    for (const std::string& w : {std::string("w0"), std::string("w7"),
                                 std::string("</s>"), std::string("<unk>")}) {
      const double got = m.prob(m.map_token(w), ctx_ids);
      const double want = oracle.prob(w, ctx);
      REQUIRE(got == doctest::Approx(want).epsilon(1e-9));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("every observed context normalizes to one") {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 5; ++round) {
    const Corpus c = testing::random_arabic_corpus(rng, 25, 6, 4);
    const TokenStream s = tokenize(c, Scheme::word);
    const NgramCounts counts(s, 4);
    for (Smoothing smoothing :
         {Smoothing::modified_kn, Smoothing::simple_kn}) {
      const NgramModel m = estimate_kn(counts, 4, smoothing);
      for (int k = 2; k <= 4; ++k) {
        for (const auto& [key, st] : m.context_table(k)) {
          std::vector<WordId> ctx(key.w.begin(), key.w.begin() + key.len);
          double sum = 0.0;
          for (WordId w = 0; w < m.vocab().size(); ++w) {
            if (w == kBosId) continue;
            sum += m.prob(w, ctx);
          }
          REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
      }
      // unseen contexts fall through and still normalize
      std::vector<WordId> unseen{kUnkId, kUnkId, kUnkId};
      double sum = 0.0;
      for (WordId w = 0; w < m.vocab().size(); ++w) {
        if (w == kBosId) continue;
        sum += m.prob(w, unseen);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("backoff mass of a singleton context is delta times continuations") {
  const NgramModel m = simple_model({{"a", "b", "a", "c"}}, 2);
  NgramKey ctx;
  ctx.len = 1;
  ctx.w[0] = m.map_token("a");
  // context "a" has continuations {b, c}, each once; denom 2
  CHECK(m.backoff_weight(ctx) == doctest::Approx(0.75 * 2 / 2.0));
  ctx.w[0] = kBosId;
  CHECK(m.backoff_weight(ctx) == doctest::Approx(0.75 * 1 / 1.0));
}

TEST_CASE("sequence logprob is the sum of word logprobs") {
  const NgramModel m =
      simple_model({{"a", "b", "c"}, {"b", "c", "a"}}, 3);
  const std::vector<std::string> seq{"a", "c", "b"};
  const std::vector<WordId> ids = ids_of(m, seq);
  double manual = 0.0;
  std::vector<WordId> hist{kBosId};
  for (WordId w : ids) {
    manual += m.logprob_word(w, hist);
    hist.push_back(w);
  }
  CHECK(m.sequence_logprob(ids, true, false) ==
        doctest::Approx(manual).epsilon(1e-12));
  manual += m.logprob_word(kEosId, hist);
  CHECK(m.sequence_logprob(ids, true, true) ==
        doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("all-OOV sequences score finitely through <unk>") {
  const NgramModel m = simple_model({{"a", "b"}}, 2);
  TokenStream test;
  test.push("zz", true);
  test.push("qq", true);
  test.end_sample();
  const EvalReport r = m.perplexity(test);
  CHECK(std::isfinite(r.ppl));
  CHECK(r.ppl >= 1.0);
  CHECK(r.oov_tokens == 2);
  CHECK(r.oov_types == 2);
}

TEST_CASE("uniform scorer perplexity is the vocabulary size") {
  for (std::uint64_t v : {2ull, 17ull, 1000ull}) {
    const double nll = -static_cast<double>(12) *
                       std::log(1.0 / static_cast<double>(v));
    CHECK(perplexity_from_nll(-nll, 12) ==
          doctest::Approx(static_cast<double>(v)).epsilon(1e-12));
  }
}

TEST_CASE("perplexity on a near-deterministic corpus approaches one") {
  std::vector<std::string> sample(100, "a");
  const NgramModel m = simple_model({sample}, 2);
  const EvalReport r = m.perplexity(stream_of_samples({sample}));
  CHECK(r.ppl > 1.0);
  CHECK(r.ppl < 1.2);
}

TEST_CASE("training twice is bit-identical") {
  std::mt19937_64 rng(44);
  const Corpus c = testing::random_arabic_corpus(rng, 50);
  const TokenStream train = tokenize(c, Scheme::word);
  const TokenStream test =
      tokenize(testing::random_arabic_corpus(rng, 10), Scheme::word);
  const NgramCounts counts(train, 3);
  const EvalReport a =
      estimate_kn(counts, 3).perplexity(test);
  const EvalReport b =
      estimate_kn(counts, 3).perplexity(test);
  CHECK(a.ppl == b.ppl);
  CHECK(a.total_log_prob == b.total_log_prob);
}

TEST_CASE("MLE order-1 train NLL equals the empirical entropy") {
  const std::vector<std::vector<std::string>> corpus = {{"a", "b", "a"},
                                                        {"c", "a"}};
  const TokenStream s = stream_of_samples(corpus);
  const NgramCounts counts(s, 2);
  std::uint64_t scored = 0;
  const double nll = -mle_corpus_logprob(counts, 1, s, &scored);

  // scored tokens: 5 words + 2 </s>
  CHECK(scored == 7);
  // empirical distribution over scored tokens: a:3 b:1 c:1 </s>:2
  const double n = 7.0;
  double h = 0.0;
  for (double f : {3.0, 1.0, 1.0, 2.0}) {
    h -= (f / n) * std::log(f / n);
  }
  CHECK(nll / n == doctest::Approx(h).epsilon(1e-12));
}

TEST_CASE("MLE train cross-entropy never increases with order") {
  std::mt19937_64 rng(45);
  for (int round = 0; round < 10; ++round) {
    const Corpus c = testing::random_arabic_corpus(rng, 30, 8, 4);
    const TokenStream s = tokenize(c, Scheme::word);
    const NgramCounts counts(s, 6);
    double prev = std::numeric_limits<double>::infinity();
    for (int order = 1; order <= 6; ++order) {
      std::uint64_t scored = 0;
      const double nll = -mle_corpus_logprob(counts, order, s, &scored);
      const double ce = nll / static_cast<double>(scored);
      CHECK(ce <= prev + 1e-12);
      prev = ce;
    }
  }
}

TEST_CASE("MLE rejects unseen n-grams") {
  const std::vector<std::vector<std::string>> corpus = {{"a", "b"}};
  const NgramCounts counts(stream_of_samples(corpus), 2);
  const std::vector<std::string_view> unseen{"b", "a"};
  CHECK_THROWS_AS(mle_logprob(counts, 2, unseen), Error);
}

TEST_CASE("oov statistics") {
  const VocabTable train = build_vocab(stream_of_samples({{"a", "b"}}));
  const TokenStream test = stream_of_samples({{"a", "c", "c"}});
  const auto [tokens, types] = oov_stats(train, test);
  CHECK(tokens == 2);
  CHECK(types == 1);

  const TokenStream covered = stream_of_samples({{"a", "b", "b"}});
  const auto [t2, y2] = oov_stats(train, covered);
  CHECK(t2 == 0);
  CHECK(y2 == 0);
}

TEST_CASE("dotless OOV never exceeds dotted OOV") {
  std::mt19937_64 rng(46);
  for (int round = 0; round < 25; ++round) {
    const Corpus c = testing::random_arabic_corpus(rng, 60);
    const SplitResult split = split_corpus(c, SplitSpec{});
    const Corpus train_u = undot_corpus(split.train);
    const Corpus test_u = undot_corpus(split.test);
    for (Scheme scheme : {Scheme::word, Scheme::disjoint}) {
      const auto dotted =
          oov_stats(build_vocab(tokenize(split.train, scheme)),
                    tokenize(split.test, scheme));
      const auto dotless = oov_stats(build_vocab(tokenize(train_u, scheme)),
                                     tokenize(test_u, scheme));
      CHECK(dotless.first <= dotted.first);
      CHECK(dotless.second <= dotted.second);
    }
  }
}

TEST_CASE("vocabulary coverage cutoff rewrites rare types to <unk>") {
  const TokenStream s = stream_of_samples(
      {{"a", "a", "a", "a", "a", "b", "b", "b", "c", "d"}});
  // cumulative: a covers 0.5, a+b covers 0.8
  const TokenStream cut = apply_vocab_coverage(s, 0.8);
  REQUIRE(cut.size() == s.size());
  std::size_t unks = 0;
  for (std::size_t i = 0; i < cut.size(); ++i) {
    if (cut.token(i) == kUnkToken) ++unks;
  }
  CHECK(unks == 2);  // c and d
  CHECK(cut.token(0) == "a");
  CHECK(cut.token(5) == "b");

  // identity at full coverage
  const TokenStream full = apply_vocab_coverage(s, 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(full.token(i) == s.token(i));
  }

  // a model over the cut stream treats <unk> as an ordinary type and still
  // normalizes
  const NgramCounts counts(cut, 2);
  const NgramModel m = estimate_kn(counts, 2, Smoothing::simple_kn);
  for (const auto& [key, st] : m.context_table(2)) {
    std::vector<WordId> ctx(key.w.begin(), key.w.begin() + key.len);
    double sum = 0.0;
    for (WordId w = 0; w < m.vocab().size(); ++w) {
      if (w == kBosId) continue;
      sum += m.prob(w, ctx);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("degenerate count-of-counts falls back with a warning flag") {
  // Every bigram occurs exactly once: n2 = 0 at the top order.
  const std::vector<std::vector<std::string>> corpus = {{"a", "b", "c"}};
  const TokenStream s = stream_of_samples(corpus);
  const NgramCounts counts(s, 2);
  const NgramModel m = estimate_kn(counts, 2, Smoothing::modified_kn, 0.6);
  CHECK(m.discounts(2).fallback);
  CHECK(m.discounts(2).d1 == doctest::Approx(0.6));
}
