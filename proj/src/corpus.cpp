#include "rasm/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>

#include "rasm/util.hpp"

namespace rasm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

// Sentence-dot splitting: ASCII '.' and Arabic full stop U+06D4 (0xDB 0x94).
void append_sentences(std::vector<std::string>& out, std::string_view line) {
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    const std::string_view piece = trim(line.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
  };
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '.') {
      flush(i);
      start = i + 1;
    } else if (static_cast<unsigned char>(line[i]) == 0xDB &&
               i + 1 < line.size() &&
               static_cast<unsigned char>(line[i + 1]) == 0x94) {
      flush(i);
      start = i + 2;
      ++i;
    }
  }
  flush(line.size());
}

}  // namespace

std::size_t count_words(std::string_view sample) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : sample) {
    const bool ws = c == ' ' || c == '\t';
    if (!ws && !in_word) ++n;
    in_word = !ws;
  }
  return n;
}

Corpus corpus_from_text(std::string_view text, std::string name,
                        LanguageMode mode, const LoadOptions& opts) {
  std::size_t bad = 0;
  if (!validate_utf8(text, &bad)) {
    throw Error(name + ": invalid UTF-8 byte sequence at offset " +
                std::to_string(bad));
  }
  Corpus corpus;
  corpus.name = std::move(name);
  corpus.mode = mode;
  for (const std::string& line : split_lines(text)) {
    const std::string_view t = trim(line);
    if (t.empty()) continue;
    if (opts.split_sentence_dots) {
      append_sentences(corpus.samples, t);
    } else {
      corpus.samples.emplace_back(t);
    }
  }
  return corpus;
}

Corpus load_corpus(const std::string& path, LanguageMode mode,
                   const LoadOptions& opts) {
  const std::string text = read_file(path);
  std::string name = std::filesystem::path(path).stem().string();
  Corpus corpus = corpus_from_text(text, std::move(name), mode, opts);
  if (corpus.empty()) {
    std::fprintf(stderr, "warning: %s contains no samples\n", path.c_str());
  }
  return corpus;
}

Corpus preprocess_corpus(const Corpus& corpus, DropHistogram* drops,
                         std::size_t* dropped_samples) {
  Corpus out;
  out.name = corpus.name;
  out.mode = corpus.mode;
  out.samples.reserve(corpus.samples.size());
  std::size_t dropped = 0;
  for (const std::string& s : corpus.samples) {
    std::string p = preprocess(s, corpus.mode, drops);
    if (p.empty()) {
      ++dropped;
    } else {
      out.samples.push_back(std::move(p));
    }
  }
  if (dropped_samples) *dropped_samples = dropped;
  return out;
}

Corpus undot_corpus(const Corpus& corpus, bool positional_overrides) {
  Corpus out;
  out.name = corpus.name;
  out.mode = corpus.mode;
  out.samples.reserve(corpus.samples.size());
  for (const std::string& s : corpus.samples) {
    out.samples.push_back(undot(s, positional_overrides));
  }
  return out;
}

Corpus filter_samples(const Corpus& corpus, std::size_t min_tokens,
                      std::size_t max_tokens, std::size_t* retained) {
  Corpus out;
  out.name = corpus.name;
  out.mode = corpus.mode;
  for (const std::string& s : corpus.samples) {
    const std::size_t n = count_words(s);
    if (n >= min_tokens && n <= max_tokens) out.samples.push_back(s);
  }
  if (retained) *retained = out.samples.size();
  return out;
}

void SplitSpec::validate() const {
  for (double f : {train_fraction, validation_fraction, test_fraction}) {
    if (f < 0.0 || f > 1.0 || !std::isfinite(f)) {
      throw Error("split fractions must lie in [0,1]");
    }
  }
  const double sum = train_fraction + validation_fraction + test_fraction;
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error("split fractions must sum to 1 (got " + fmt_double(sum) + ")");
  }
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  spec.validate();
  if (n == 0) throw Error("cannot split an empty corpus");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (spec.shuffle) {
    // Hand-rolled Fisher-Yates: std::shuffle's draw sequence is
    // implementation-defined, which would break cross-platform determinism.
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(bounded_rand(rng, i + 1));
      std::swap(order[i], order[j]);
    }
  }

  // Largest-remainder apportionment keeps every part within one sample of
  // its exact fraction.
  const double fracs[3] = {spec.train_fraction, spec.validation_fraction,
                           spec.test_fraction};
  std::size_t counts[3];
  double remainders[3];
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double ideal = fracs[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(ideal));
    remainders[i] = ideal - std::floor(ideal);
    assigned += counts[i];
  }
  for (std::size_t left = n - assigned; left > 0; --left) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (remainders[i] > remainders[best]) best = i;
    }
    ++counts[best];
    remainders[best] = -1.0;
  }
  for (int i = 0; i < 3; ++i) {
    if (fracs[i] > 0.0 && counts[i] == 0) {
      throw Error("corpus too small: a non-zero split would receive 0 of " +
                  std::to_string(n) + " samples");
    }
  }

  SplitIndices idx;
  std::vector<std::size_t>* parts[3] = {&idx.train, &idx.validation,
                                        &idx.test};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    parts[i]->assign(order.begin() + pos, order.begin() + pos + counts[i]);
    pos += counts[i];
  }
  return idx;
}

SplitResult split_corpus(const Corpus& corpus, const SplitSpec& spec) {
  const SplitIndices idx = split_indices(corpus.size(), spec);

  SplitResult result;
  Corpus* parts[3] = {&result.train, &result.validation, &result.test};
  const std::vector<std::size_t>* indices[3] = {&idx.train, &idx.validation,
                                                &idx.test};
  const char* suffix[3] = {".train", ".valid", ".test"};
  for (int i = 0; i < 3; ++i) {
    parts[i]->name = corpus.name + suffix[i];
    parts[i]->mode = corpus.mode;
    parts[i]->samples.reserve(indices[i]->size());
    for (std::size_t k : *indices[i]) {
      parts[i]->samples.push_back(corpus.samples[k]);
    }
  }
  return result;
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  std::string out;
  for (const std::string& s : corpus.samples) {
    out += s;
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace rasm
