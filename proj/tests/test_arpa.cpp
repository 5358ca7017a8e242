#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "rasm/arpa.hpp"
#include "test_helpers.hpp"

using namespace rasm;

namespace {

NgramModel train_random(std::mt19937_64& rng, int order,
                        Smoothing smoothing = Smoothing::modified_kn) {
  const Corpus c = testing::random_arabic_corpus(rng, 80, 8, 4);
  const TokenStream s = tokenize(c, Scheme::word);
  const NgramCounts counts(s, order);
  return estimate_kn(counts, order, smoothing);
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("ARPA text round-trips the model scores") {
  std::mt19937_64 rng(51);
  const NgramModel m = train_random(rng, 3);
  const ArpaModel loaded = to_arpa_model(m);

  const Corpus probe = testing::random_arabic_corpus(rng, 20, 8, 4);
  const TokenStream test = tokenize(probe, Scheme::word);
  const EvalReport a = m.perplexity(test);
  const EvalReport b = loaded.perplexity(test);
  CHECK(b.ppl == doctest::Approx(a.ppl).epsilon(1e-9));
  CHECK(b.oov_tokens == a.oov_tokens);

  // scores of unseen grams go through the backoff chain identically
  std::vector<WordId> ctx{m.map_token("xxx"), m.map_token("yyy")};
  std::vector<WordId> lctx{loaded.map_token("xxx"), loaded.map_token("yyy")};
  CHECK(loaded.prob(loaded.map_token("zzz"), lctx) ==
        doctest::Approx(m.prob(m.map_token("zzz"), ctx)).epsilon(1e-9));
}

TEST_CASE("ARPA text is deterministic and structured") {
  std::mt19937_64 rng(52);
  const NgramModel m = train_random(rng, 2);
  const std::string text = to_arpa(m);
  CHECK(text == to_arpa(m));
  CHECK(text.rfind("\\data\\\n", 0) == 0);
  CHECK(text.find("\\1-grams:") != std::string::npos);
  CHECK(text.find("\\2-grams:") != std::string::npos);
  CHECK(text.find("\\end\\") != std::string::npos);
  CHECK(text.find(kUnkToken) != std::string::npos);
  CHECK(text.find("-99\t<s>") != std::string::npos);
}

TEST_CASE("binary cache round-trips exactly") {
  std::mt19937_64 rng(53);
  const NgramModel m = train_random(rng, 3);
  const ArpaModel a = to_arpa_model(m);

  TempFile bin("rasm_test_model.bin");
  a.save_binary(bin.path);
  const ArpaModel b = ArpaModel::load_binary(bin.path);

  const Corpus probe = testing::random_arabic_corpus(rng, 10, 8, 4);
  const TokenStream test = tokenize(probe, Scheme::word);
  CHECK(b.perplexity(test).ppl == a.perplexity(test).ppl);

  // sniffing loader picks the right format
  const ArpaModel c = ArpaModel::load(bin.path);
  CHECK(c.order() == a.order());

  TempFile txt("rasm_test_model.arpa");
  write_file(txt.path, to_arpa(m));
  const ArpaModel d = ArpaModel::load(txt.path);
  CHECK(d.order() == m.order());

  // binary emission is byte-stable
  TempFile bin2("rasm_test_model2.bin");
  a.save_binary(bin2.path);
  CHECK(read_file(bin.path) == read_file(bin2.path));
}

TEST_CASE("malformed ARPA inputs are rejected") {
  CHECK_THROWS_AS(ArpaModel::from_arpa_text("not an arpa file"), Error);
  CHECK_THROWS_AS(ArpaModel::from_arpa_text("\\data\\\n"), Error);
  CHECK_THROWS_WITH_AS(
      ArpaModel::from_arpa_text("\\data\\\nngram 1=2\n\n\\1-grams:\n"
                                "-1\ta\n\n\\end\\\n"),
      doctest::Contains("lists"), Error);
}

TEST_CASE("simple-KN models survive the ARPA round trip too") {
  std::mt19937_64 rng(54);
  const NgramModel m = train_random(rng, 4, Smoothing::simple_kn);
  const ArpaModel loaded = to_arpa_model(m);
  const Corpus probe = testing::random_arabic_corpus(rng, 15, 8, 4);
  for (Scheme scheme : {Scheme::word}) {
    const TokenStream test = tokenize(probe, scheme);
    CHECK(loaded.perplexity(test).ppl ==
          doctest::Approx(m.perplexity(test).ppl).epsilon(1e-9));
  }
}
