#include "diactk/script.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "diactk/utf8.hpp"

namespace diactk {

namespace {

struct LetterRow {
  char32_t cp;
  LetterClass klass;
};

// The supported alphabet. Classical letters first, then the extension letters
// that show up in transliterated foreign names.
constexpr LetterRow kLetters[] = {
    {0x0621, LetterClass::PlainConsonant},   // hamza
    {0x0622, LetterClass::AlifMadda},        // alef with madda
    {0x0623, LetterClass::AlifHamzaAbove},   // alef with hamza above
    {0x0624, LetterClass::WawHamza},         // waw with hamza
    {0x0625, LetterClass::AlifHamzaBelow},   // alef with hamza below
    {0x0626, LetterClass::YaHamza},          // yeh with hamza
    {0x0627, LetterClass::AlifBare},         // alef
    {0x0628, LetterClass::PlainConsonant},   // beh
    {0x0629, LetterClass::TaMarbuta},        // teh marbuta
    {0x062A, LetterClass::PlainConsonant},   // teh
    {0x062B, LetterClass::PlainConsonant},   // theh
    {0x062C, LetterClass::PlainConsonant},   // jeem
    {0x062D, LetterClass::PlainConsonant},   // hah
    {0x062E, LetterClass::PlainConsonant},   // khah
    {0x062F, LetterClass::PlainConsonant},   // dal
    {0x0630, LetterClass::PlainConsonant},   // thal
    {0x0631, LetterClass::PlainConsonant},   // reh
    {0x0632, LetterClass::PlainConsonant},   // zain
    {0x0633, LetterClass::PlainConsonant},   // seen
    {0x0634, LetterClass::PlainConsonant},   // sheen
    {0x0635, LetterClass::PlainConsonant},   // sad
    {0x0636, LetterClass::PlainConsonant},   // dad
    {0x0637, LetterClass::PlainConsonant},   // tah
    {0x0638, LetterClass::PlainConsonant},   // zah
    {0x0639, LetterClass::PlainConsonant},   // ain
    {0x063A, LetterClass::PlainConsonant},   // ghain
    {0x0641, LetterClass::PlainConsonant},   // feh
    {0x0642, LetterClass::PlainConsonant},   // qaf
    {0x0643, LetterClass::PlainConsonant},   // kaf
    {0x0644, LetterClass::PlainConsonant},   // lam
    {0x0645, LetterClass::PlainConsonant},   // meem
    {0x0646, LetterClass::PlainConsonant},   // noon
    {0x0647, LetterClass::PlainConsonant},   // heh
    {0x0648, LetterClass::Waw},              // waw
    {0x0649, LetterClass::PlainConsonant},   // alef maqsura (word-final only)
    {0x064A, LetterClass::Ya},               // yeh
    {0x0671, LetterClass::AlifWasla},        // alef wasla
    {0x067E, LetterClass::ForeignExtension}, // peh
    {0x0686, LetterClass::ForeignExtension}, // tcheh
    {0x0698, LetterClass::ForeignExtension}, // jeh
    {0x06A4, LetterClass::ForeignExtension}, // veh
    {0x06A9, LetterClass::ForeignExtension}, // keheh
    {0x06AF, LetterClass::ForeignExtension}, // gaf
    {0x06C1, LetterClass::ForeignExtension}, // heh goal
    {0x06CC, LetterClass::ForeignExtension}, // farsi yeh
    {0x06D5, LetterClass::ForeignExtension}, // ae
};

constexpr char32_t kFatha = 0x064E;
constexpr char32_t kDamma = 0x064F;
constexpr char32_t kKasra = 0x0650;
constexpr char32_t kShadda = 0x0651;
constexpr char32_t kSukun = 0x0652;
constexpr char32_t kDaggerAlif = 0x0670;

const std::vector<char32_t>& letter_codepoints() {
  static const std::vector<char32_t> cps = [] {
    std::vector<char32_t> v;
    for (const auto& row : kLetters) v.push_back(row.cp);
    return v;
  }();
  return cps;
}

}  // namespace

char32_t mark_codepoint(Mark mark) {
  switch (mark) {
    case Mark::Fatha: return kFatha;
    case Mark::Damma: return kDamma;
    case Mark::Kasra: return kKasra;
    case Mark::Sukun: return kSukun;
    case Mark::Shadda: return kShadda;
    case Mark::DaggerAlif: return kDaggerAlif;
  }
  return 0;
}

std::optional<Mark> mark_of(char32_t cp) {
  switch (cp) {
    case kFatha: return Mark::Fatha;
    case kDamma: return Mark::Damma;
    case kKasra: return Mark::Kasra;
    case kSukun: return Mark::Sukun;
    case kShadda: return Mark::Shadda;
    case kDaggerAlif: return Mark::DaggerAlif;
    default: return std::nullopt;
  }
}

bool is_nunation(char32_t cp) { return cp >= 0x064B && cp <= 0x064D; }

bool is_short_vowel(Mark mark) {
  return mark == Mark::Fatha || mark == Mark::Damma || mark == Mark::Kasra;
}

std::optional<LetterClass> letter_class_of(char32_t cp) {
  for (const auto& row : kLetters) {
    if (row.cp == cp) return row.klass;
  }
  return std::nullopt;
}

bool is_supported_letter(char32_t cp) { return letter_class_of(cp).has_value(); }

std::span<const char32_t> supported_letters() {
  return {letter_codepoints().data(), letter_codepoints().size()};
}

bool Segment::has(Mark m) const {
  return std::find(marks.begin(), marks.end(), m) != marks.end();
}

bool Segment::has_short_vowel() const {
  for (Mark m : marks) {
    if (is_short_vowel(m)) return true;
  }
  return false;
}

std::string DiacritizedWord::render() const {
  std::u32string out;
  for (const Segment& seg : segments_) {
    out.push_back(seg.letter);
    for (Mark m : seg.marks) out.push_back(mark_codepoint(m));
  }
  return utf8::encode(out);
}

std::string DiacritizedWord::skeleton() const {
  return utf8::encode(skeleton_u32());
}

std::u32string DiacritizedWord::skeleton_u32() const {
  std::u32string out;
  out.reserve(segments_.size());
  for (const Segment& seg : segments_) out.push_back(seg.letter);
  return out;
}

ParseError::ParseError(Code code, size_t position)
    : std::runtime_error(std::string(parse_error_name(code)) + " at position " +
                         std::to_string(position)),
      code_(code),
      position_(position) {}

const char* parse_error_name(ParseError::Code code) {
  switch (code) {
    case ParseError::Code::UnsupportedCharacter: return "unsupported-character";
    case ParseError::Code::LeadingDiacritic: return "leading-diacritic";
    case ParseError::Code::OversizedCluster: return "oversized-cluster";
    case ParseError::Code::NunationMark: return "nunation-mark";
  }
  return "parse-error";
}

DiacritizedWord parse_arabic(std::string_view text) {
  std::u32string cps = utf8::decode(text);
  std::vector<Segment> segments;
  for (size_t i = 0; i < cps.size(); ++i) {
    char32_t cp = cps[i];
    if (is_nunation(cp)) throw ParseError(ParseError::Code::NunationMark, i);
    if (auto mark = mark_of(cp)) {
      if (segments.empty())
        throw ParseError(ParseError::Code::LeadingDiacritic, i);
      auto& marks = segments.back().marks;
      if (marks.size() >= 2)
        throw ParseError(ParseError::Code::OversizedCluster, i);
      if (marks.size() == 1) {
        // The only legal two-mark cluster is shadda plus a short vowel,
        // in either order. Everything else - including shadda+sukun -
        // cannot be represented.
        Mark first = marks[0];
        bool ok = (first == Mark::Shadda && is_short_vowel(*mark)) ||
                  (*mark == Mark::Shadda && is_short_vowel(first));
        if (!ok) throw ParseError(ParseError::Code::OversizedCluster, i);
      }
      marks.push_back(*mark);
      continue;
    }
    auto klass = letter_class_of(cp);
    if (!klass) throw ParseError(ParseError::Code::UnsupportedCharacter, i);
    segments.push_back(Segment{cp, *klass, {}});
  }
  return DiacritizedWord(std::move(segments));
}

std::string strip_diacritics(const DiacritizedWord& word) {
  return word.skeleton();
}

HsbError::HsbError(size_t position)
    : std::runtime_error("unknown romanization symbol at position " +
                         std::to_string(position)),
      position_(position) {}

namespace {

// Romanization rows. One symbol per codepoint on both sides so the mapping
// stays reversible without lookahead.
constexpr std::pair<char32_t, char32_t> kHsbRows[] = {
    {0x0621, U'\''},   // hamza
    {0x0622, U'Ā'},  // alef madda -> A-macron
    {0x0623, U'Â'},  // alef hamza above -> A-circumflex
    {0x0624, U'ŵ'},  // waw hamza -> w-circumflex
    {0x0625, U'Ă'},  // alef hamza below -> A-breve
    {0x0626, U'ŷ'},  // yeh hamza -> y-circumflex
    {0x0627, U'A'},
    {0x0628, U'b'},
    {0x0629, U'ħ'},  // teh marbuta -> h-bar
    {0x062A, U't'},
    {0x062B, U'θ'},  // theh -> theta
    {0x062C, U'j'},
    {0x062D, U'H'},
    {0x062E, U'x'},
    {0x062F, U'd'},
    {0x0630, U'ð'},  // thal -> eth
    {0x0631, U'r'},
    {0x0632, U'z'},
    {0x0633, U's'},
    {0x0634, U'š'},  // sheen -> s-caron
    {0x0635, U'S'},
    {0x0636, U'D'},
    {0x0637, U'T'},
    {0x0638, U'Ď'},  // zah -> D-caron
    {0x0639, U'ς'},  // ain -> final sigma
    {0x063A, U'γ'},  // ghain -> gamma
    {0x0641, U'f'},
    {0x0642, U'q'},
    {0x0643, U'k'},
    {0x0644, U'l'},
    {0x0645, U'm'},
    {0x0646, U'n'},
    {0x0647, U'h'},
    {0x0648, U'w'},
    {0x0649, U'ý'},  // alef maqsura -> y-acute
    {0x064A, U'y'},
    {0x0671, U'Ä'},  // alef wasla -> A-diaeresis
    {0x067E, U'p'},
    {0x0686, U'č'},  // tcheh -> c-caron
    {0x0698, U'ž'},  // jeh -> z-caron
    {0x06A4, U'v'},
    {0x06A9, U'ǩ'},  // keheh -> k-caron
    {0x06AF, U'g'},
    {0x06C1, U'ḧ'},  // heh goal -> h-diaeresis
    {0x06CC, U'ÿ'},  // farsi yeh -> y-diaeresis
    {0x06D5, U'ḣ'},  // ae -> h-dot
    {0x064E, U'a'},       // fatha
    {0x064F, U'u'},       // damma
    {0x0650, U'i'},       // kasra
    {0x0652, U'.'},       // sukun
    {0x0651, U'~'},       // shadda
    {0x0670, U'á'},  // dagger alif -> a-acute
};

}  // namespace

HsbTable HsbTable::from_rows(std::vector<std::pair<char32_t, char32_t>> rows) {
  // Bijectivity and coverage checks; a bad table is a configuration error,
  // not something to limp through.
  std::map<char32_t, char32_t> fwd, rev;
  for (const auto& [ar, ro] : rows) {
    if (!fwd.emplace(ar, ro).second)
      throw std::runtime_error("romanization table: duplicate Arabic codepoint");
    if (!rev.emplace(ro, ar).second)
      throw std::runtime_error("romanization table: duplicate romanized symbol");
  }
  for (char32_t letter : supported_letters()) {
    if (!fwd.count(letter))
      throw std::runtime_error("romanization table: missing letter row");
  }
  for (Mark m : {Mark::Fatha, Mark::Damma, Mark::Kasra, Mark::Sukun,
                 Mark::Shadda, Mark::DaggerAlif}) {
    if (!fwd.count(mark_codepoint(m)))
      throw std::runtime_error("romanization table: missing mark row");
  }
  HsbTable table;
  table.rows_ = std::move(rows);
  return table;
}

const HsbTable& HsbTable::standard() {
  static const HsbTable table = [] {
    std::vector<std::pair<char32_t, char32_t>> rows(std::begin(kHsbRows),
                                                    std::end(kHsbRows));
    return from_rows(std::move(rows));
  }();
  return table;
}

HsbTable HsbTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open romanization table: " + path);
  std::vector<std::pair<char32_t, char32_t>> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("romanization table line " +
                               std::to_string(lineno) + ": expected two columns");
    std::u32string ar = utf8::decode(line.substr(0, tab));
    std::u32string ro = utf8::decode(line.substr(tab + 1));
    if (ar.size() != 1 || ro.size() != 1)
      throw std::runtime_error("romanization table line " +
                               std::to_string(lineno) +
                               ": cells must be single codepoints");
    rows.emplace_back(ar[0], ro[0]);
  }
  return from_rows(std::move(rows));
}

std::optional<char32_t> HsbTable::to_roman(char32_t arabic) const {
  for (const auto& [ar, ro] : rows_) {
    if (ar == arabic) return ro;
  }
  return std::nullopt;
}

std::optional<char32_t> HsbTable::to_arabic(char32_t roman) const {
  for (const auto& [ar, ro] : rows_) {
    if (ro == roman) return ar;
  }
  return std::nullopt;
}

std::string to_hsb(const DiacritizedWord& word, const HsbTable& table) {
  std::u32string out;
  for (const Segment& seg : word.segments()) {
    out.push_back(*table.to_roman(seg.letter));
    for (Mark m : seg.marks) out.push_back(*table.to_roman(mark_codepoint(m)));
  }
  return utf8::encode(out);
}

DiacritizedWord from_hsb(std::string_view hsb, const HsbTable& table) {
  std::u32string symbols = utf8::decode(hsb);
  std::u32string arabic;
  arabic.reserve(symbols.size());
  for (size_t i = 0; i < symbols.size(); ++i) {
    auto cp = table.to_arabic(symbols[i]);
    if (!cp) throw HsbError(i);
    arabic.push_back(*cp);
  }
  // Symbol positions map one-to-one onto Arabic codepoint positions, so any
  // ParseError position is meaningful for the romanized input as well.
  return parse_arabic(utf8::encode(arabic));
}

}  // namespace diactk
