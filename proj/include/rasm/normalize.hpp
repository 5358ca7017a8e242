#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace rasm {

enum class LanguageMode : std::uint8_t { arabic, latin };

/// Per-run histogram of characters removed by preprocess.
struct DropHistogram {
  std::map<char32_t, std::uint64_t> dropped;
  std::uint64_t total = 0;

  void add(char32_t c) {
    ++dropped[c];
    ++total;
  }
};

/// Normalizes raw text to the working character set.
///
/// arabic: keeps the 31-letter inventory, replaces seated hamza forms by
/// their carrier, strips diacritics, drops everything else. latin: lowercase
/// a-z only. Both collapse whitespace runs to single spaces and trim; both
/// are idempotent.
std::string preprocess(std::string_view text, LanguageMode mode,
                       DropHistogram* drops = nullptr);
std::u32string preprocess_u32(std::u32string_view text, LanguageMode mode,
                              DropHistogram* drops = nullptr);

/// Dotted -> rasm transform over preprocessed Arabic text. Letters map per
/// the rasm table; noon, yeh and qaf take their cursive-shape override
/// anywhere but the last letter of a whitespace-delimited word. Length and
/// space positions are preserved. Throws Error (naming code point and
/// offset) on characters outside the letter sets.
std::string undot(std::string_view text, bool positional_overrides = true);
std::u32string undot_u32(std::u32string_view text,
                         bool positional_overrides = true);

/// Undots a single space-free unit (a word, or any token whose final letter
/// is known to be word-final: disjoint pieces qualify, see tokenizer notes).
std::u32string undot_word_u32(std::u32string_view word,
                              bool positional_overrides = true);
std::string undot_word(std::string_view word,
                       bool positional_overrides = true);

}  // namespace rasm
