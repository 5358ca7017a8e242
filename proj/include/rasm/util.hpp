#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rasm {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Transparent hash so unordered maps keyed by std::string accept
// std::string_view lookups without an allocation.
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// --- UTF-8 ---------------------------------------------------------------

/// Decodes UTF-8 into code points. Throws Error naming the byte offset of
/// the first invalid sequence.
std::u32string decode_utf8(std::string_view text);

/// True if `text` is well-formed UTF-8; on failure `bad_offset` receives the
/// byte offset of the offending sequence.
bool validate_utf8(std::string_view text, std::size_t* bad_offset = nullptr);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view text);

/// Code-point length of a UTF-8 string (input must be valid UTF-8).
std::size_t utf8_length(std::string_view text);

// --- formatting ----------------------------------------------------------

/// Shortest-ish deterministic decimal rendering ("%.12g"). Used for every
/// number written to report files so reruns are byte-identical.
std::string fmt_double(double v, int precision = 12);

// --- deterministic randomness ---------------------------------------------

// std::uniform_int_distribution is implementation-defined; this is not.
inline std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

// --- file helpers ----------------------------------------------------------

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::vector<std::string> split_lines(std::string_view text);

}  // namespace rasm
