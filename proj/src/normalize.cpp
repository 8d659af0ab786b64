#include "diactk/normalize.hpp"

#include <fstream>
#include <sstream>

#include "diactk/utf8.hpp"

namespace diactk {

namespace {

// Default replacements for extension letters, chosen to match common Arabic
// renderings of the borrowed sounds.
constexpr std::pair<char32_t, char32_t> kForeignRows[] = {
    {0x067E, 0x0628},  // peh -> beh
    {0x06A4, 0x0641},  // veh -> feh
    {0x06AF, 0x0643},  // gaf -> kaf
    {0x0686, 0x062C},  // tcheh -> jeem
    {0x0698, 0x0632},  // jeh -> zain
    {0x06A9, 0x0643},  // keheh -> kaf
    {0x06CC, 0x064A},  // farsi yeh -> yeh
    {0x06C1, 0x0647},  // heh goal -> heh
    {0x06D5, 0x0647},  // ae -> heh
};

bool prior_has(const std::vector<Segment>& segs, size_t i, Mark mark) {
  return i > 0 && segs[i - 1].has(mark);
}

bool prior_is_long_alif(const std::vector<Segment>& segs, size_t i) {
  return i > 0 && segs[i - 1].klass == LetterClass::AlifBare &&
         segs[i - 1].unmarked();
}

// Letters the sukun-insertion step leaves alone when unmarked: the alif
// family is inherently vocalic, and waw/ya in a long-vowel or post-/a:/
// glide position are part of the vowel itself.
bool sukun_exempt(const std::vector<Segment>& segs, size_t i) {
  const Segment& seg = segs[i];
  switch (seg.klass) {
    case LetterClass::AlifBare:
    case LetterClass::AlifMadda:
    case LetterClass::AlifWasla:
      return true;
    case LetterClass::Waw:
      return prior_has(segs, i, Mark::Damma) || prior_is_long_alif(segs, i);
    case LetterClass::Ya:
      return prior_has(segs, i, Mark::Kasra) || prior_is_long_alif(segs, i);
    default:
      return false;
  }
}

}  // namespace

const char* repair_step_name(RepairStep step) {
  switch (step) {
    case RepairStep::MapForeignLetter: return "map-foreign-letter";
    case RepairStep::ReorderShaddaVowel: return "reorder-shadda-vowel";
    case RepairStep::InsertFathaBeforeAlif: return "insert-fatha-before-alif";
    case RepairStep::InsertKasraBelowHamza: return "insert-kasra-below-hamza";
    case RepairStep::RemoveFathaAfterMadda: return "remove-fatha-after-madda";
    case RepairStep::InsertSukun: return "insert-sukun";
    case RepairStep::RemoveFinalMark: return "remove-final-mark";
  }
  return "?";
}

const ForeignLetterMap& ForeignLetterMap::standard() {
  static const ForeignLetterMap map = [] {
    ForeignLetterMap m;
    m.rows_.assign(std::begin(kForeignRows), std::end(kForeignRows));
    return m;
  }();
  return map;
}

ForeignLetterMap ForeignLetterMap::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open foreign letter map: " + path);
  ForeignLetterMap map;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("foreign letter map line " +
                               std::to_string(lineno) + ": expected two columns");
    std::u32string from = utf8::decode(line.substr(0, tab));
    std::u32string to = utf8::decode(line.substr(tab + 1));
    if (from.size() != 1 || to.size() != 1)
      throw std::runtime_error("foreign letter map line " +
                               std::to_string(lineno) +
                               ": cells must be single codepoints");
    if (!is_supported_letter(to[0]))
      throw std::runtime_error("foreign letter map line " +
                               std::to_string(lineno) +
                               ": replacement is not a supported letter");
    map.rows_.emplace_back(from[0], to[0]);
  }
  return map;
}

std::optional<char32_t> ForeignLetterMap::lookup(char32_t letter) const {
  for (const auto& [from, to] : rows_) {
    if (from == letter) return to;
  }
  return std::nullopt;
}

NormalizeResult normalize(const DiacritizedWord& word,
                          const ForeignLetterMap& map) {
  std::vector<Segment> segs = word.segments();
  std::vector<RepairAction> trace;
  const size_t n = segs.size();
  if (n == 0) return {DiacritizedWord{}, {}};

  // S1: replace foreign extension letters, marks untouched.
  for (size_t i = 0; i < n; ++i) {
    if (segs[i].klass != LetterClass::ForeignExtension) continue;
    if (auto repl = map.lookup(segs[i].letter)) {
      segs[i].letter = *repl;
      segs[i].klass = *letter_class_of(*repl);
      trace.push_back({RepairStep::MapForeignLetter, i});
    }
  }

  // S2: canonical cluster order is shadda first.
  for (size_t i = 0; i < n; ++i) {
    auto& marks = segs[i].marks;
    if (marks.size() == 2 && is_short_vowel(marks[0]) &&
        marks[1] == Mark::Shadda) {
      std::swap(marks[0], marks[1]);
      trace.push_back({RepairStep::ReorderShaddaVowel, i});
    }
  }

  // S3: a bare non-initial alif spells /a:/; give the preceding letter its
  // fatha when that letter has no vowel yet. Runs before sukun insertion so
  // the preceding letter is still unmarked here. Only consonant-like priors
  // are repaired: putting a fatha on an unmarked vowel letter would turn it
  // into a consonant, which is a guess, not a repair.
  auto fatha_repairable = [](const Segment& seg) {
    switch (seg.klass) {
      case LetterClass::PlainConsonant:
      case LetterClass::AlifHamzaAbove:
      case LetterClass::WawHamza:
      case LetterClass::YaHamza:
      case LetterClass::TaMarbuta:
      case LetterClass::ForeignExtension:
        return true;
      default:
        return false;
    }
  };
  for (size_t i = 1; i < n; ++i) {
    if (segs[i].klass != LetterClass::AlifBare || !segs[i].unmarked()) continue;
    Segment& prior = segs[i - 1];
    if (!fatha_repairable(prior)) continue;
    if (prior.has_short_vowel()) continue;
    if (prior.unmarked()) {
      prior.marks = {Mark::Fatha};
      trace.push_back({RepairStep::InsertFathaBeforeAlif, i - 1});
    } else if (prior.marks.size() == 1 && prior.marks[0] == Mark::Shadda) {
      prior.marks = {Mark::Shadda, Mark::Fatha};
      trace.push_back({RepairStep::InsertFathaBeforeAlif, i - 1});
    }
    // A sukun or dagger alif on the prior letter is left for the validator;
    // guessing a vowel there would invent pronunciation.
  }

  // S4: hamza below alif forces kasra.
  for (size_t i = 0; i < n; ++i) {
    if (segs[i].klass != LetterClass::AlifHamzaBelow) continue;
    if (segs[i].has(Mark::Kasra)) continue;
    bool shadda = segs[i].has(Mark::Shadda);
    segs[i].marks = shadda ? std::vector<Mark>{Mark::Shadda, Mark::Kasra}
                           : std::vector<Mark>{Mark::Kasra};
    trace.push_back({RepairStep::InsertKasraBelowHamza, i});
  }

  // S5: drop the redundant fatha on alif madda.
  for (size_t i = 0; i < n; ++i) {
    if (segs[i].klass != LetterClass::AlifMadda) continue;
    if (!segs[i].has(Mark::Fatha)) continue;
    std::erase(segs[i].marks, Mark::Fatha);
    trace.push_back({RepairStep::RemoveFathaAfterMadda, i});
  }

  // S6: every unmarked non-final letter that is not spelling a long vowel
  // gets a sukun. Consecutive sukuns are legitimate consonant clusters.
  for (size_t i = 0; i + 1 < n; ++i) {
    if (!segs[i].unmarked()) continue;
    if (sukun_exempt(segs, i)) continue;
    segs[i].marks = {Mark::Sukun};
    trace.push_back({RepairStep::InsertSukun, i});
  }

  // S7: lemma forms end bare; shadda and dagger alif survive.
  {
    auto& marks = segs[n - 1].marks;
    size_t before = marks.size();
    std::erase_if(marks, [](Mark m) {
      return is_short_vowel(m) || m == Mark::Sukun;
    });
    if (marks.size() != before)
      trace.push_back({RepairStep::RemoveFinalMark, n - 1});
  }

  return {DiacritizedWord(std::move(segs)), std::move(trace)};
}

std::string serialize_trace(const std::vector<RepairAction>& trace) {
  std::ostringstream out;
  for (size_t i = 0; i < trace.size(); ++i) {
    if (i) out << ' ';
    out << repair_step_name(trace[i].step) << '@' << trace[i].position;
  }
  return out.str();
}

}  // namespace diactk
