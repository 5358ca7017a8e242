#include "rasm/alphabet.hpp"

#include <algorithm>

#include "json.hpp"
#include "rasm/util.hpp"

namespace rasm {

AlphabetSpec::AlphabetSpec() {
  using namespace cp;

  class_.fill(CharClass::other);

  // Letter -> rasm, final position. Dotless targets beyond the plain
  // letters: U+066E (dotless beh), U+066F (dotless qaf), U+06A1 (dotless
  // feh), U+06BA (noon ghunna).
  static constexpr std::pair<char32_t, char32_t> kBaseMap[] = {
      {hamza, hamza},     {alef, alef},        {beh, dotless_beh},
      {teh_marbuta, heh}, {teh, dotless_beh},  {theh, dotless_beh},
      {jeem, hah},        {hah, hah},          {khah, hah},
      {dal, dal},         {thal, dal},         {reh, reh},
      {zain, reh},        {seen, seen},        {sheen, seen},
      {sad, sad},         {dad, sad},          {tah, tah},
      {zah, tah},         {ain, ain},          {ghain, ain},
      {feh, dotless_feh}, {qaf, dotless_qaf},  {kaf, kaf},
      {lam, lam},         {meem, meem},        {noon, noon_ghunna},
      {heh, heh},         {waw, waw},          {alef_maksura, alef_maksura},
      {yeh, alef_maksura},
  };

  for (const auto& [from, to] : kBaseMap) {
    dotted_.push_back(from);
    class_[from] = CharClass::letter_dotted;
    base_map_[from] = to;
    nonfinal_map_[from] = to;
  }
  // Cursive-shape overrides: noon and yeh take the beh skeleton, qaf the feh
  // skeleton, whenever the letter is not word-final.
  nonfinal_map_[noon] = dotless_beh;
  nonfinal_map_[yeh] = dotless_beh;
  nonfinal_map_[qaf] = dotless_feh;

  // Dotless inventory = image of the dotted set; every member is a fixed
  // point of both maps so undotting is idempotent.
  for (const auto& [from, to] : kBaseMap) {
    if (std::find(dotless_.begin(), dotless_.end(), to) == dotless_.end())
      dotless_.push_back(to);
  }
  std::sort(dotless_.begin(), dotless_.end());
  for (char32_t c : dotless_) {
    if (class_[c] != CharClass::letter_dotted)
      class_[c] = CharClass::letter_dotless;
    base_map_[c] = c;
    nonfinal_map_[c] = c;
  }
  for (char32_t c = 0x064B; c <= 0x0652; ++c) {
    diacritics_.push_back(c);
    class_[c] = CharClass::diacritic;
  }

  hamza_carriers_ = {
      {alef_madda, alef}, {alef_hamza_above, alef}, {waw_hamza, waw},
      {alef_hamza_below, alef}, {yeh_hamza, yeh},
  };
  for (const auto& [seated, carrier] : hamza_carriers_) {
    class_[seated] = CharClass::hamza_carrier_form;
    carrier_map_[seated] = carrier;
  }

  class_[U' '] = CharClass::space;

  // Letters that do not join to the following letter. Closed under the
  // rasm map (thal -> dal, zain -> reh).
  non_connectors_ = {alef, dal, thal, reh, zain, waw};
  for (char32_t c : non_connectors_) non_connector_[c] = true;

  std::sort(dotted_.begin(), dotted_.end());
}

const AlphabetSpec& alphabet() {
  static const AlphabetSpec spec;
  return spec;
}

CharClass char_class(char32_t c) { return alphabet().classify(c); }

std::string dump_alphabet_json() {
  const AlphabetSpec& a = alphabet();
  nlohmann::ordered_json doc;

  auto hex = [](char32_t c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%04X", static_cast<unsigned>(c));
    return std::string(buf);
  };
  auto chr = [](char32_t c) {
    std::string s;
    append_utf8(s, c);
    return s;
  };

  doc["dotted_count"] = a.dotted_letters().size();
  doc["dotless_count"] = a.dotless_letters().size();

  auto& dotted = doc["dotted"] = nlohmann::ordered_json::array();
  for (char32_t c : a.dotted_letters()) {
    nlohmann::ordered_json e;
    e["letter"] = chr(c);
    e["codepoint"] = hex(c);
    e["rasm"] = chr(a.rasm_final(c));
    if (a.rasm_nonfinal(c) != a.rasm_final(c))
      e["rasm_nonfinal"] = chr(a.rasm_nonfinal(c));
    e["non_connector"] = a.is_non_connector(c);
    dotted.push_back(std::move(e));
  }

  auto& dotless = doc["dotless"] = nlohmann::ordered_json::array();
  for (char32_t c : a.dotless_letters()) {
    nlohmann::ordered_json e;
    e["letter"] = chr(c);
    e["codepoint"] = hex(c);
    e["non_connector"] = a.is_non_connector(c);
    dotless.push_back(std::move(e));
  }

  auto& marks = doc["diacritics"] = nlohmann::ordered_json::array();
  for (char32_t c : a.diacritics()) marks.push_back(hex(c));

  auto& seats = doc["hamza_carriers"] = nlohmann::ordered_json::object();
  for (const auto& [seated, carrier] : a.hamza_carriers())
    seats[chr(seated)] = chr(carrier);

  return doc.dump(2) + "\n";
}

}  // namespace rasm
