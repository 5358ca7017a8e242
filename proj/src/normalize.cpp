#include "rasm/normalize.hpp"

#include "rasm/alphabet.hpp"
#include "rasm/util.hpp"

namespace rasm {

namespace {

bool is_ws(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\r' || c == U'\n' || c == U'\f' ||
         c == U'\v' || c == U' ';
}

void push_with_space(std::u32string& out, bool& pending_space, char32_t c) {
  if (pending_space && !out.empty()) out.push_back(U' ');
  pending_space = false;
  out.push_back(c);
}

}  // namespace

std::u32string preprocess_u32(std::u32string_view text, LanguageMode mode,
                              DropHistogram* drops) {
  const AlphabetSpec& a = alphabet();
  std::u32string out;
  out.reserve(text.size());
  bool pending_space = false;

  for (char32_t c : text) {
    if (is_ws(c)) {
      pending_space = true;
      continue;
    }
    if (mode == LanguageMode::latin) {
      if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
      if (c >= U'a' && c <= U'z') {
        push_with_space(out, pending_space, c);
      } else if (drops) {
        drops->add(c);
      }
      continue;
    }
    switch (a.classify(c)) {
      case CharClass::letter_dotted:
      case CharClass::letter_dotless:  // rasm text passes through unchanged
        push_with_space(out, pending_space, c);
        break;
      case CharClass::hamza_carrier_form:
        push_with_space(out, pending_space, a.hamza_carrier(c));
        break;
      case CharClass::diacritic:
      case CharClass::other:
        if (drops) drops->add(c);
        break;
      case CharClass::space:
        pending_space = true;
        break;
    }
  }
  return out;
}

std::string preprocess(std::string_view text, LanguageMode mode,
                       DropHistogram* drops) {
  return encode_utf8(preprocess_u32(decode_utf8(text), mode, drops));
}

namespace {

char32_t undot_letter(const AlphabetSpec& a, char32_t c, bool word_final,
                      bool overrides, std::size_t offset) {
  const char32_t r =
      (word_final || !overrides) ? a.rasm_final(c) : a.rasm_nonfinal(c);
  if (r == 0) {
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "cannot undot U+%04X at offset %zu: not an Arabic letter",
                  static_cast<unsigned>(c), offset);
    throw Error(buf);
  }
  return r;
}

}  // namespace

std::u32string undot_u32(std::u32string_view text, bool positional_overrides) {
  const AlphabetSpec& a = alphabet();
  std::u32string out(text.size(), U'\0');
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (c == U' ') {
      out[i] = U' ';
      continue;
    }
    const bool word_final = i + 1 == text.size() || text[i + 1] == U' ';
    out[i] = undot_letter(a, c, word_final, positional_overrides, i);
  }
  return out;
}

std::string undot(std::string_view text, bool positional_overrides) {
  return encode_utf8(undot_u32(decode_utf8(text), positional_overrides));
}

std::u32string undot_word_u32(std::u32string_view word,
                              bool positional_overrides) {
  const AlphabetSpec& a = alphabet();
  std::u32string out(word.size(), U'\0');
  for (std::size_t i = 0; i < word.size(); ++i) {
    out[i] = undot_letter(a, word[i], i + 1 == word.size(),
                          positional_overrides, i);
  }
  return out;
}

std::string undot_word(std::string_view word, bool positional_overrides) {
  return encode_utf8(undot_word_u32(decode_utf8(word), positional_overrides));
}

}  // namespace rasm
