#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rasm/normalize.hpp"

namespace rasm {

/// An ordered, immutable-after-construction list of text samples (one per
/// input line). Order is stable across runs for the same input bytes.
struct Corpus {
  std::string name;
  LanguageMode mode = LanguageMode::arabic;
  std::vector<std::string> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

struct LoadOptions {
  // Additionally split samples on the ASCII full stop and the Arabic full
  // stop (U+06D4). Off by default: samples are lines.
  bool split_sentence_dots = false;
};

/// Reads a UTF-8 text file, one sample per line. CRLF is normalized, each
/// line trimmed, and empty lines dropped. Throws Error on I/O failure or
/// invalid UTF-8 (with byte offset).
Corpus load_corpus(const std::string& path, LanguageMode mode,
                   const LoadOptions& opts = {});

/// Same, from in-memory text (used by tests and pipe input).
Corpus corpus_from_text(std::string_view text, std::string name,
                        LanguageMode mode, const LoadOptions& opts = {});

/// Applies preprocess() to every sample, dropping samples that normalize to
/// nothing; the drop count is reported through `dropped_samples`.
Corpus preprocess_corpus(const Corpus& corpus, DropHistogram* drops = nullptr,
                         std::size_t* dropped_samples = nullptr);

/// Undots every sample of a preprocessed Arabic corpus.
Corpus undot_corpus(const Corpus& corpus, bool positional_overrides = true);

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

/// Keeps samples whose word-token count lies in [min_tokens, max_tokens].
/// Idempotent; `retained` (optional) reports the surviving count.
Corpus filter_samples(const Corpus& corpus, std::size_t min_tokens,
                      std::size_t max_tokens = kUnbounded,
                      std::size_t* retained = nullptr);

struct SplitSpec {
  double train_fraction = 0.9;
  double validation_fraction = 0.0;
  double test_fraction = 0.1;
  std::uint64_t seed = 42;
  bool shuffle = true;  // false = sequential prefix split

  void validate() const;  // fractions in range and summing to 1
};

struct SplitResult {
  Corpus train;
  Corpus validation;
  Corpus test;
};

/// The index assignment behind split_corpus, exposed so companion files
/// (e.g. a morphological segmentation aligned line-by-line with the corpus)
/// can be split identically.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);

/// Deterministic split: a seeded Fisher-Yates permutation of sample indices
/// followed by contiguous train/validation/test assignment. Identical
/// (samples, spec) always produces identical splits, on any platform. Each
/// part size differs from its exact fraction by less than one sample.
/// Throws Error if a non-zero fraction would receive no samples.
SplitResult split_corpus(const Corpus& corpus, const SplitSpec& spec);

/// Writes one sample per line ('\n' separators, trailing newline).
void write_corpus(const Corpus& corpus, const std::string& path);

/// Word-token count of one sample (whitespace-delimited).
std::size_t count_words(std::string_view sample);

}  // namespace rasm
