#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rasm/corpus.hpp"
#include "rasm/util.hpp"

namespace rasm {

enum class Scheme : std::uint8_t { word, character, disjoint, morph };

std::string_view scheme_name(Scheme s);
Scheme scheme_from_name(std::string_view name);

/// Stand-in for the space character in the character scheme. Multi-character
/// by construction, so it can never collide with a single-letter token.
inline constexpr std::string_view kSpaceToken = "<##>";

/// A tokenized corpus. Tokens are interned: `ids[i]` indexes into `pool`,
/// which holds each distinct token string once (first-appearance order).
/// `sample_offsets` delimits samples: sample s spans
/// [sample_offsets[s], sample_offsets[s+1]). For subword schemes
/// `space_after[i]` records whether a word boundary follows token i inside
/// its sample, which is what makes detokenization exact.
struct TokenStream {
  Scheme scheme = Scheme::word;
  std::vector<std::uint32_t> ids;
  std::vector<std::string> pool;
  std::vector<std::size_t> sample_offsets{0};
  std::vector<bool> space_after;

  std::size_t size() const { return ids.size(); }
  std::size_t sample_count() const { return sample_offsets.size() - 1; }
  std::string_view token(std::size_t i) const { return pool[ids[i]]; }

  std::uint32_t intern(std::string_view tok);
  void begin_sample() {}
  void end_sample() { sample_offsets.push_back(ids.size()); }
  void push(std::string_view tok, bool space_follows) {
    ids.push_back(intern(tok));
    space_after.push_back(space_follows);
  }

 private:
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>>
      index_;
};

/// Tokenizes a preprocessed corpus. `scheme` must not be morph (that one
/// comes from load_morph_segmentation).
TokenStream tokenize(const Corpus& corpus, Scheme scheme);

// Single-sample entry points (append into an existing stream).
void tokenize_word_sample(std::string_view sample, TokenStream& out);
void tokenize_char_sample(std::string_view sample, TokenStream& out);
void tokenize_disjoint_sample(std::string_view sample, TokenStream& out);

/// Morphological-segmentation adapter. `lines` hold the externally
/// segmented corpus, one sample per line, subword boundaries marked by
/// `delimiter` inside each word. Every sample is validated against the
/// preprocessed `companion`: per-word piece concatenation must reproduce the
/// companion word (mismatches raise Error with the line number).
TokenStream morph_stream_from_lines(const std::vector<std::string>& lines,
                                    std::string_view delimiter,
                                    const Corpus& companion);
TokenStream load_morph_segmentation(const std::string& path,
                                    std::string_view delimiter,
                                    const Corpus& companion);

/// Exact inverse of tokenization: reconstructs the preprocessed sample
/// texts.
std::vector<std::string> detokenize(const TokenStream& stream);

/// Token-wise undotting. Positional overrides are resolved against the
/// position in the original word, not the subword: a subword-final noon that
/// is word-medial still takes the medial form. Token count, sample
/// boundaries and word breaks are preserved.
TokenStream undot_stream(const TokenStream& stream,
                         bool positional_overrides = true);

/// One token per line (samples separated implicitly; export format only).
void write_tokens(const TokenStream& stream, const std::string& path);

}  // namespace rasm
