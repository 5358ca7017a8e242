#include <numeric>

#include "doctest.h"
#include "rasm/tokenize.hpp"
#include "test_helpers.hpp"

using namespace rasm;

namespace {

Corpus one_sample(std::string text) {
  Corpus c;
  c.name = "t";
  c.mode = LanguageMode::arabic;
  c.samples.push_back(std::move(text));
  return c;
}

std::vector<std::string> tokens_of(const TokenStream& s) {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.emplace_back(s.token(i));
  return out;
}

}  // namespace

TEST_CASE("word tokenization splits on spaces") {
  const TokenStream s = tokenize(one_sample("اب جد"), Scheme::word);
  CHECK(tokens_of(s) == std::vector<std::string>{"اب", "جد"});
  CHECK(s.sample_count() == 1);

  const TokenStream empty = tokenize(one_sample(""), Scheme::word);
  CHECK(empty.size() == 0);
  CHECK(empty.sample_count() == 1);
}

TEST_CASE("character tokenization emits the space token") {
  const TokenStream s = tokenize(one_sample("اب جد"), Scheme::character);
  CHECK(tokens_of(s) ==
        std::vector<std::string>{"ا", "ب", std::string(kSpaceToken), "ج",
                                 "د"});
  const TokenStream single = tokenize(one_sample("ا"), Scheme::character);
  CHECK(tokens_of(single) == std::vector<std::string>{"ا"});
}

TEST_CASE("space token cannot collide with single-character tokens") {
  CHECK(kSpaceToken.size() > 1);
  std::mt19937_64 rng(11);
  const TokenStream s = tokenize(
      testing::random_arabic_corpus(rng, 50), Scheme::character);
  for (const std::string& tok : s.pool) {
    if (tok != kSpaceToken) CHECK(utf8_length(tok) == 1);
  }
}

TEST_CASE("disjoint tokenization breaks after non-connectors") {
  CHECK(tokens_of(tokenize(one_sample("مدرسة"), Scheme::disjoint)) ==
        std::vector<std::string>{"مد", "ر", "سة"});
  CHECK(tokens_of(tokenize(one_sample("والكتاب"), Scheme::disjoint)) ==
        std::vector<std::string>{"و", "ا", "لكتا", "ب"});
  // no non-connectors: the whole word is one piece
  CHECK(tokens_of(tokenize(one_sample("بيت"), Scheme::disjoint)) ==
        std::vector<std::string>{"بيت"});
}

TEST_CASE("disjoint pieces concatenate back to their words") {
  std::mt19937_64 rng(12);
  const Corpus c = testing::random_arabic_corpus(rng, 100);
  const TokenStream words = tokenize(c, Scheme::word);
  const TokenStream pieces = tokenize(c, Scheme::disjoint);
  std::string from_words, from_pieces;
  for (std::size_t i = 0; i < words.size(); ++i) from_words += words.token(i);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    from_pieces += pieces.token(i);
  }
  CHECK(from_words == from_pieces);
}

TEST_CASE("morph adapter splits on the delimiter and validates") {
  const Corpus c = one_sample("وكتب");
  const TokenStream s = morph_stream_from_lines({"و+كتب"}, "+", c);
  CHECK(tokens_of(s) == std::vector<std::string>{"و", "كتب"});

  // unsegmented lines degrade to word tokens
  const TokenStream w = morph_stream_from_lines({"وكتب"}, "+", c);
  CHECK(tokens_of(w) == std::vector<std::string>{"وكتب"});
}

TEST_CASE("morph adapter reports reconstruction mismatches by line") {
  const Corpus c =
      corpus_from_text("اب جد\nوكتب\n", "t", LanguageMode::arabic);
  CHECK_THROWS_WITH_AS(
      morph_stream_from_lines({"اب جد", "و+كتاب"}, "+", c),
      doctest::Contains("line 2"), Error);
  CHECK_THROWS_AS(morph_stream_from_lines({"اب جد"}, "+", c), Error);
  // word-count mismatch inside a line
  CHECK_THROWS_WITH_AS(morph_stream_from_lines({"اب", "وكتب"}, "+", c),
                       doctest::Contains("line 1"), Error);
}

TEST_CASE("undot_stream on the four schemes") {
  const Corpus c = one_sample("من");
  CHECK(tokens_of(undot_stream(tokenize(c, Scheme::word))) ==
        std::vector<std::string>{"مں"});

  // character stream keeps word-position context across tokens
  const Corpus c2 = one_sample("نب ن");
  const TokenStream chars = undot_stream(tokenize(c2, Scheme::character));
  CHECK(tokens_of(chars) ==
        std::vector<std::string>{"ٮ", "ٮ", std::string(kSpaceToken), "ں"});

  const TokenStream dj = undot_stream(tokenize(one_sample("بيت"),
                                               Scheme::disjoint));
  CHECK(tokens_of(dj) == std::vector<std::string>{"ٮٮٮ"});

  // subword-final noon that is word-medial takes the medial form
  const Corpus c3 = one_sample("منكم");
  const TokenStream morph =
      undot_stream(morph_stream_from_lines({"من+كم"}, "+", c3));
  CHECK(tokens_of(morph) == std::vector<std::string>{"مٮ", "كم"});
}

TEST_CASE("undotting commutes with tokenization on every scheme") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 30; ++round) {
    const Corpus c = testing::random_arabic_corpus(rng, 20);
    const Corpus undotted = undot_corpus(c);
    for (Scheme scheme :
         {Scheme::word, Scheme::character, Scheme::disjoint}) {
      const TokenStream direct = tokenize(undotted, scheme);
      const TokenStream mapped = undot_stream(tokenize(c, scheme));
      REQUIRE(direct.size() == mapped.size());
      for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(direct.token(i) == mapped.token(i));
      }
    }
    // morph: undotting the stream must equal undotting the sample texts
    const std::vector<std::string> seg = testing::random_segmentation(rng, c);
    const TokenStream morph = morph_stream_from_lines(seg, "+", c);
    const TokenStream mapped = undot_stream(morph);
    const std::vector<std::string> detok = detokenize(mapped);
    REQUIRE(detok.size() == undotted.samples.size());
    for (std::size_t i = 0; i < detok.size(); ++i) {
      CHECK(detok[i] == undotted.samples[i]);
    }
    CHECK(mapped.size() == morph.size());
  }
}

TEST_CASE("token count is invariant under undotting") {
  std::mt19937_64 rng(14);
  const Corpus c = testing::random_arabic_corpus(rng, 200);
  const Corpus u = undot_corpus(c);
  for (Scheme scheme : {Scheme::word, Scheme::character, Scheme::disjoint}) {
    CHECK(tokenize(c, scheme).size() == tokenize(u, scheme).size());
  }
}

TEST_CASE("detokenization inverts every scheme") {
  std::mt19937_64 rng(15);
  const Corpus c = testing::random_arabic_corpus(rng, 100);
  for (Scheme scheme : {Scheme::word, Scheme::character, Scheme::disjoint}) {
    CHECK(detokenize(tokenize(c, scheme)) == c.samples);
  }
  const std::vector<std::string> seg = testing::random_segmentation(rng, c);
  CHECK(detokenize(morph_stream_from_lines(seg, "+", c)) == c.samples);
}

TEST_CASE("streams never contain empty tokens") {
  std::mt19937_64 rng(16);
  const Corpus c = testing::random_arabic_corpus(rng, 50);
  const std::vector<std::string> seg = testing::random_segmentation(rng, c);
  for (const TokenStream& s :
       {tokenize(c, Scheme::word), tokenize(c, Scheme::character),
        tokenize(c, Scheme::disjoint),
        morph_stream_from_lines(seg, "+", c)}) {
    for (const std::string& tok : s.pool) CHECK_FALSE(tok.empty());
  }
}

TEST_CASE("sharding by sample does not change the stream") {
  std::mt19937_64 rng(17);
  const Corpus c = testing::random_arabic_corpus(rng, 40);
  const TokenStream whole = tokenize(c, Scheme::disjoint);

  Corpus first, second;
  first.mode = second.mode = LanguageMode::arabic;
  first.samples.assign(c.samples.begin(), c.samples.begin() + 20);
  second.samples.assign(c.samples.begin() + 20, c.samples.end());
  const TokenStream a = tokenize(first, Scheme::disjoint);
  const TokenStream b = tokenize(second, Scheme::disjoint);

  std::vector<std::string> merged = tokens_of(a);
  for (const std::string& t : tokens_of(b)) merged.push_back(t);
  CHECK(merged == tokens_of(whole));
}
