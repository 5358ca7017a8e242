#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rasm {

// Code points of the Arabic script as used throughout this library. The
// working inventory is the 28 base letters plus standalone Hamza,
// Teh-Marbuta and Alef-Maksura (31 "dotted" characters) and the 19-letter
// rasm inventory they collapse onto (18 skeleton letters plus Hamza).
namespace cp {
inline constexpr char32_t hamza = U'ء';
inline constexpr char32_t alef_madda = U'آ';
inline constexpr char32_t alef_hamza_above = U'أ';
inline constexpr char32_t waw_hamza = U'ؤ';
inline constexpr char32_t alef_hamza_below = U'إ';
inline constexpr char32_t yeh_hamza = U'ئ';
inline constexpr char32_t alef = U'ا';
inline constexpr char32_t beh = U'ب';
inline constexpr char32_t teh_marbuta = U'ة';
inline constexpr char32_t teh = U'ت';
inline constexpr char32_t theh = U'ث';
inline constexpr char32_t jeem = U'ج';
inline constexpr char32_t hah = U'ح';
inline constexpr char32_t khah = U'خ';
inline constexpr char32_t dal = U'د';
inline constexpr char32_t thal = U'ذ';
inline constexpr char32_t reh = U'ر';
inline constexpr char32_t zain = U'ز';
inline constexpr char32_t seen = U'س';
inline constexpr char32_t sheen = U'ش';
inline constexpr char32_t sad = U'ص';
inline constexpr char32_t dad = U'ض';
inline constexpr char32_t tah = U'ط';
inline constexpr char32_t zah = U'ظ';
inline constexpr char32_t ain = U'ع';
inline constexpr char32_t ghain = U'غ';
inline constexpr char32_t feh = U'ف';
inline constexpr char32_t qaf = U'ق';
inline constexpr char32_t kaf = U'ك';
inline constexpr char32_t lam = U'ل';
inline constexpr char32_t meem = U'م';
inline constexpr char32_t noon = U'ن';
inline constexpr char32_t heh = U'ه';
inline constexpr char32_t waw = U'و';
inline constexpr char32_t alef_maksura = U'ى';
inline constexpr char32_t yeh = U'ي';
// Rasm-only letters (dotless skeletons that are not plain letters).
inline constexpr char32_t dotless_beh = U'ٮ';
inline constexpr char32_t dotless_qaf = U'ٯ';
inline constexpr char32_t dotless_feh = U'ڡ';
inline constexpr char32_t noon_ghunna = U'ں';
// Diacritics (tashkeel), U+064B..U+0652.
inline constexpr char32_t fathatan = U'ً';
inline constexpr char32_t sukun = U'ْ';
inline constexpr char32_t tatweel = U'ـ';
}  // namespace cp

enum class CharClass : std::uint8_t {
  letter_dotted,      // member of the 31-character dotted inventory
  letter_dotless,     // rasm-only letter (not itself in the dotted set)
  diacritic,          // one of the 8 tashkeel marks
  hamza_carrier_form, // seated hamza (replaced by its carrier on preprocess)
  space,
  other,
};

/// The character inventory: dotted and dotless sets, diacritics, seated
/// hamza forms with their carriers, the non-connector set, and the
/// letter-to-rasm mapping with its positional overrides.
class AlphabetSpec {
 public:
  AlphabetSpec();

  const std::vector<char32_t>& dotted_letters() const { return dotted_; }
  const std::vector<char32_t>& dotless_letters() const { return dotless_; }
  const std::vector<char32_t>& diacritics() const { return diacritics_; }
  const std::vector<std::pair<char32_t, char32_t>>& hamza_carriers() const {
    return hamza_carriers_;
  }
  const std::vector<char32_t>& non_connectors() const {
    return non_connectors_;
  }

  CharClass classify(char32_t c) const {
    return c < kTableSize ? class_[c]
                          : (c == U' ' ? CharClass::space : CharClass::other);
  }
  bool is_dotted(char32_t c) const {
    return classify(c) == CharClass::letter_dotted;
  }
  bool is_letter(char32_t c) const {
    const CharClass k = classify(c);
    return k == CharClass::letter_dotted || k == CharClass::letter_dotless;
  }
  bool is_diacritic(char32_t c) const {
    return classify(c) == CharClass::diacritic;
  }
  bool is_non_connector(char32_t c) const {
    return c < kTableSize && non_connector_[c];
  }

  /// Rasm of `c` in word-final position (the base mapping). Dotless letters
  /// are fixed points. Returns 0 for characters outside the letter sets.
  char32_t rasm_final(char32_t c) const {
    return c < kTableSize ? base_map_[c] : 0;
  }
  /// Rasm of `c` in initial/medial position (base mapping plus the
  /// noon/yeh/qaf overrides).
  char32_t rasm_nonfinal(char32_t c) const {
    return c < kTableSize ? nonfinal_map_[c] : 0;
  }
  /// Carrier letter for a seated hamza form, 0 otherwise.
  char32_t hamza_carrier(char32_t c) const {
    return c < kTableSize ? carrier_map_[c] : 0;
  }

 private:
  static constexpr std::size_t kTableSize = 0x700;

  std::vector<char32_t> dotted_;
  std::vector<char32_t> dotless_;
  std::vector<char32_t> diacritics_;
  std::vector<std::pair<char32_t, char32_t>> hamza_carriers_;
  std::vector<char32_t> non_connectors_;

  std::array<CharClass, kTableSize> class_{};
  std::array<char32_t, kTableSize> base_map_{};
  std::array<char32_t, kTableSize> nonfinal_map_{};
  std::array<char32_t, kTableSize> carrier_map_{};
  std::array<bool, kTableSize> non_connector_{};
};

/// The process-wide alphabet (immutable after construction, thread-safe).
const AlphabetSpec& alphabet();

CharClass char_class(char32_t c);

/// Reference JSON describing the full inventory and mapping; this document
/// is the cross-implementation contract (`rasm alphabet dump`).
std::string dump_alphabet_json();

}  // namespace rasm
