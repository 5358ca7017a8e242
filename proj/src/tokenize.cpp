#include "rasm/tokenize.hpp"

#include <algorithm>

#include "rasm/alphabet.hpp"
#include "rasm/normalize.hpp"

namespace rasm {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::word: return "word";
    case Scheme::character: return "char";
    case Scheme::disjoint: return "disjoint";
    case Scheme::morph: return "morph";
  }
  return "?";
}

Scheme scheme_from_name(std::string_view name) {
  if (name == "word") return Scheme::word;
  if (name == "char" || name == "character") return Scheme::character;
  if (name == "disjoint") return Scheme::disjoint;
  if (name == "morph" || name == "farasa") return Scheme::morph;
  throw Error("unknown tokenization scheme: " + std::string(name));
}

std::uint32_t TokenStream::intern(std::string_view tok) {
  auto it = index_.find(tok);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(pool.size());
  pool.emplace_back(tok);
  index_.emplace(pool.back(), id);
  return id;
}

void tokenize_word_sample(std::string_view sample, TokenStream& out) {
  std::size_t start = 0;
  while (start < sample.size()) {
    while (start < sample.size() && sample[start] == ' ') ++start;
    if (start >= sample.size()) break;
    std::size_t end = sample.find(' ', start);
    if (end == std::string_view::npos) end = sample.size();
    out.push(sample.substr(start, end - start), true);
    start = end;
  }
}

void tokenize_char_sample(std::string_view sample, TokenStream& out) {
  const std::u32string cps = decode_utf8(sample);
  std::string buf;
  for (char32_t c : cps) {
    if (c == U' ') {
      out.push(kSpaceToken, false);
    } else {
      buf.clear();
      append_utf8(buf, c);
      out.push(buf, false);
    }
  }
}

void tokenize_disjoint_sample(std::string_view sample, TokenStream& out) {
  const AlphabetSpec& a = alphabet();
  const std::u32string cps = decode_utf8(sample);
  std::u32string piece;
  for (std::size_t i = 0; i <= cps.size(); ++i) {
    const bool at_end = i == cps.size();
    const char32_t c = at_end ? U' ' : cps[i];
    if (c == U' ') {
      if (!piece.empty()) {
        out.push(encode_utf8(piece), true);
        piece.clear();
      }
      continue;
    }
    piece.push_back(c);
    // A non-connector never joins to the next letter: close the piece here
    // unless the word ends anyway.
    if (a.is_non_connector(c) && i + 1 < cps.size() && cps[i + 1] != U' ') {
      out.push(encode_utf8(piece), false);
      piece.clear();
    }
  }
}

TokenStream tokenize(const Corpus& corpus, Scheme scheme) {
  if (scheme == Scheme::morph) {
    throw Error("morph tokenization requires a segmented companion file");
  }
  TokenStream out;
  out.scheme = scheme;
  for (const std::string& sample : corpus.samples) {
    switch (scheme) {
      case Scheme::word: tokenize_word_sample(sample, out); break;
      case Scheme::character: tokenize_char_sample(sample, out); break;
      case Scheme::disjoint: tokenize_disjoint_sample(sample, out); break;
      case Scheme::morph: break;
    }
    out.end_sample();
  }
  return out;
}

TokenStream morph_stream_from_lines(const std::vector<std::string>& lines,
                                    std::string_view delimiter,
                                    const Corpus& companion) {
  if (delimiter.empty()) throw Error("morph delimiter must be non-empty");
  if (lines.size() != companion.samples.size()) {
    throw Error("segmented corpus has " + std::to_string(lines.size()) +
                " samples but companion corpus has " +
                std::to_string(companion.samples.size()));
  }
  TokenStream out;
  out.scheme = Scheme::morph;

  std::vector<std::string_view> seg_words, ref_words;
  auto split_ws = [](std::string_view s, std::vector<std::string_view>& w) {
    w.clear();
    std::size_t start = 0;
    while (start < s.size()) {
      while (start < s.size() && s[start] == ' ') ++start;
      if (start >= s.size()) break;
      std::size_t end = s.find(' ', start);
      if (end == std::string_view::npos) end = s.size();
      w.push_back(s.substr(start, end - start));
      start = end;
    }
  };

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    split_ws(lines[ln], seg_words);
    split_ws(companion.samples[ln], ref_words);
    if (seg_words.size() != ref_words.size()) {
      throw Error("line " + std::to_string(ln + 1) + ": segmentation has " +
                  std::to_string(seg_words.size()) + " words, corpus has " +
                  std::to_string(ref_words.size()));
    }
    for (std::size_t w = 0; w < seg_words.size(); ++w) {
      std::string_view word = seg_words[w];
      std::string joined;
      std::vector<std::string_view> pieces;
      std::size_t start = 0;
      while (start <= word.size()) {
        std::size_t end = word.find(delimiter, start);
        if (end == std::string_view::npos) end = word.size();
        std::string_view piece = word.substr(start, end - start);
        if (!piece.empty()) {
          pieces.push_back(piece);
          joined += piece;
        }
        if (end == word.size()) break;
        start = end + delimiter.size();
      }
      if (joined != ref_words[w]) {
        throw Error("line " + std::to_string(ln + 1) +
                    ": segmented word does not reconstruct the corpus word (" +
                    joined + " vs " + std::string(ref_words[w]) + ")");
      }
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        out.push(pieces[p], p + 1 == pieces.size());
      }
    }
    out.end_sample();
  }
  return out;
}

TokenStream load_morph_segmentation(const std::string& path,
                                    std::string_view delimiter,
                                    const Corpus& companion) {
  const std::string text = read_file(path);
  std::size_t bad = 0;
  if (!validate_utf8(text, &bad)) {
    throw Error(path + ": invalid UTF-8 at offset " + std::to_string(bad));
  }
  std::vector<std::string> lines;
  for (std::string& l : split_lines(text)) {
    if (!l.empty()) lines.push_back(std::move(l));
  }
  return morph_stream_from_lines(lines, delimiter, companion);
}

std::vector<std::string> detokenize(const TokenStream& stream) {
  std::vector<std::string> samples;
  samples.reserve(stream.sample_count());
  for (std::size_t s = 0; s < stream.sample_count(); ++s) {
    std::string text;
    const std::size_t begin = stream.sample_offsets[s];
    const std::size_t end = stream.sample_offsets[s + 1];
    for (std::size_t i = begin; i < end; ++i) {
      const std::string_view tok = stream.token(i);
      switch (stream.scheme) {
        case Scheme::word:
          if (i > begin) text += ' ';
          text += tok;
          break;
        case Scheme::character:
          text += tok == kSpaceToken ? std::string_view(" ") : tok;
          break;
        case Scheme::disjoint:
        case Scheme::morph:
          text += tok;
          if (stream.space_after[i] && i + 1 < end) text += ' ';
          break;
      }
    }
    samples.push_back(std::move(text));
  }
  return samples;
}

namespace {

// Per-type undotting for the word scheme: positional context is the word
// itself.
TokenStream undot_by_pool(const TokenStream& stream, bool overrides) {
  std::vector<std::string> mapped(stream.pool.size());
  for (std::size_t i = 0; i < stream.pool.size(); ++i) {
    mapped[i] = undot_word(stream.pool[i], overrides);
  }
  TokenStream out;
  out.scheme = stream.scheme;
  out.sample_offsets = stream.sample_offsets;
  out.space_after = stream.space_after;
  out.ids.reserve(stream.ids.size());
  std::vector<std::uint32_t> remap(stream.pool.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    remap[i] = out.intern(mapped[i]);
  }
  for (std::uint32_t id : stream.ids) out.ids.push_back(remap[id]);
  return out;
}

// Disjoint pieces undot context-free: a piece breaks only after a
// non-connector, so a piece whose last letter is a connector must be
// word-final, and non-connector letters have no positional override at all.
// That makes the standalone-word rule exact for every piece.
TokenStream undot_disjoint(const TokenStream& stream, bool overrides) {
  return undot_by_pool(stream, overrides);
}

TokenStream undot_char(const TokenStream& stream, bool overrides) {
  const AlphabetSpec& a = alphabet();
  TokenStream out;
  out.scheme = stream.scheme;
  out.sample_offsets = stream.sample_offsets;
  out.space_after = stream.space_after;
  out.ids.reserve(stream.ids.size());

  const std::uint32_t npos = UINT32_MAX;
  std::uint32_t space_id = npos;
  for (std::size_t i = 0; i < stream.pool.size(); ++i) {
    if (stream.pool[i] == kSpaceToken) space_id = static_cast<std::uint32_t>(i);
  }

  std::string buf;
  for (std::size_t s = 0; s < stream.sample_count(); ++s) {
    const std::size_t begin = stream.sample_offsets[s];
    const std::size_t end = stream.sample_offsets[s + 1];
    for (std::size_t i = begin; i < end; ++i) {
      if (stream.ids[i] == space_id) {
        out.ids.push_back(out.intern(kSpaceToken));
        continue;
      }
      const std::u32string cps = decode_utf8(stream.token(i));
      if (cps.size() != 1) {
        throw Error("character stream token is not a single code point");
      }
      const bool word_final = i + 1 == end || stream.ids[i + 1] == space_id;
      const char32_t r = (word_final || !overrides) ? a.rasm_final(cps[0])
                                                    : a.rasm_nonfinal(cps[0]);
      if (r == 0) {
        throw Error("cannot undot character token at position " +
                    std::to_string(i));
      }
      buf.clear();
      append_utf8(buf, r);
      out.ids.push_back(out.intern(buf));
    }
  }
  return out;
}

// Morph pieces carry no usable position on their own; rebuild each word from
// its pieces, undot it once, and slice the result back at the same piece
// lengths (undotting preserves length).
TokenStream undot_morph(const TokenStream& stream, bool overrides) {
  TokenStream out;
  out.scheme = stream.scheme;
  out.sample_offsets = stream.sample_offsets;
  out.space_after = stream.space_after;
  out.ids.reserve(stream.ids.size());

  std::vector<std::u32string> pieces;
  std::u32string word;
  auto flush_word = [&]() {
    if (word.empty()) return;
    const std::u32string rasm = undot_word_u32(word, overrides);
    std::size_t pos = 0;
    for (const std::u32string& p : pieces) {
      out.ids.push_back(
          out.intern(encode_utf8(rasm.substr(pos, p.size()))));
      pos += p.size();
    }
    pieces.clear();
    word.clear();
  };

  for (std::size_t s = 0; s < stream.sample_count(); ++s) {
    const std::size_t begin = stream.sample_offsets[s];
    const std::size_t end = stream.sample_offsets[s + 1];
    for (std::size_t i = begin; i < end; ++i) {
      const std::u32string cps = decode_utf8(stream.token(i));
      pieces.push_back(cps);
      word += cps;
      if (stream.space_after[i] || i + 1 == end) flush_word();
    }
    flush_word();
  }
  return out;
}

}  // namespace

TokenStream undot_stream(const TokenStream& stream, bool positional_overrides) {
  switch (stream.scheme) {
    case Scheme::word: return undot_by_pool(stream, positional_overrides);
    case Scheme::disjoint: return undot_disjoint(stream, positional_overrides);
    case Scheme::character: return undot_char(stream, positional_overrides);
    case Scheme::morph: return undot_morph(stream, positional_overrides);
  }
  throw Error("unknown scheme");
}

void write_tokens(const TokenStream& stream, const std::string& path) {
  std::string out;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    out += stream.token(i);
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace rasm
