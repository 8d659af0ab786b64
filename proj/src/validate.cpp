#include "diactk/validate.hpp"

#include <algorithm>
#include <sstream>

#include "diactk/lemma.hpp"
#include "diactk/utf8.hpp"

namespace diactk {

namespace {

constexpr char32_t kLam = 0x0644;

bool prior_has(const std::vector<Segment>& segs, size_t i, Mark mark) {
  return i > 0 && segs[i - 1].has(mark);
}

// An undecorated bare alif: the written shape of a long /a:/. A glide
// following one is written without its own sukun.
bool prior_is_long_alif(const std::vector<Segment>& segs, size_t i) {
  return i > 0 && segs[i - 1].klass == LetterClass::AlifBare &&
         segs[i - 1].unmarked();
}

Mark long_vowel_for(LetterClass klass) {
  return klass == LetterClass::Waw ? Mark::Damma : Mark::Kasra;
}

// Letters the missing-mark rule covers: everything consonantal. The alif
// family and unmarked waw/ya are judged by the long-vowel rule instead.
bool missing_mark_applies(LetterClass klass) {
  switch (klass) {
    case LetterClass::PlainConsonant:
    case LetterClass::AlifHamzaAbove:
    case LetterClass::AlifHamzaBelow:
    case LetterClass::WawHamza:
    case LetterClass::YaHamza:
    case LetterClass::TaMarbuta:
    case LetterClass::ForeignExtension:
      return true;
    default:
      return false;
  }
}

void check_long_vowel_context(const std::vector<Segment>& segs, size_t i,
                              ValidationMode mode,
                              std::vector<Violation>& out) {
  const Segment& seg = segs[i];
  const bool final = i + 1 == segs.size();
  switch (seg.klass) {
    case LetterClass::AlifBare: {
      if (i == 0) {
        // Word-initial alif is a carrier and must spell out its vowel.
        if (!seg.has_short_vowel())
          out.push_back({RuleCode::LongVowelContext, i,
                         "word-initial alif must carry a short vowel"});
      } else if (!(seg.unmarked() && prior_has(segs, i, Mark::Fatha))) {
        out.push_back({RuleCode::LongVowelContext, i,
                       "long-vowel alif needs a preceding fatha and no mark of "
                       "its own"});
      }
      return;
    }
    case LetterClass::Waw:
    case LetterClass::Ya: {
      if (seg.has_short_vowel() || seg.has(Mark::DaggerAlif)) return;  // consonant
      const char* what = seg.klass == LetterClass::Waw ? "waw" : "ya";
      if (seg.unmarked()) {
        if (prior_has(segs, i, long_vowel_for(seg.klass))) return;  // long vowel
        if (prior_is_long_alif(segs, i)) return;  // glide after /a:/
        if (final && prior_has(segs, i, Mark::Fatha)) return;  // final glide
        out.push_back({RuleCode::LongVowelContext, i,
                       std::string("unmarked ") + what +
                           " is neither a long vowel nor a glide here"});
        return;
      }
      if (seg.marks.size() == 1 && seg.marks[0] == Mark::Sukun) {
        if (prior_has(segs, i, Mark::Fatha) || prior_is_long_alif(segs, i))
          return;  // glide
        out.push_back({RuleCode::LongVowelContext, i,
                       std::string("glide ") + what +
                           " needs a preceding fatha or long alif"});
        return;
      }
      if (seg.marks.size() == 1 && seg.marks[0] == Mark::Shadda) {
        if (prior_has(segs, i, Mark::Fatha) ||
            prior_has(segs, i, long_vowel_for(seg.klass)))
          return;  // geminated glide / geminated long vowel
        out.push_back({RuleCode::LongVowelContext, i,
                       std::string("geminated ") + what +
                           " needs a preceding fatha or matching short vowel"});
      }
      return;
    }
    case LetterClass::AlifWasla: {
      if (mode == ValidationMode::Lemma) {
        out.push_back({RuleCode::LongVowelContext, i,
                       "alif wasla is not used in lemma forms"});
      } else if (i != 0) {
        out.push_back({RuleCode::LongVowelContext, i,
                       "alif wasla is only valid word-initially"});
      }
      return;
    }
    default:
      return;
  }
}

}  // namespace

const char* rule_code_name(RuleCode code) {
  switch (code) {
    case RuleCode::ClusterOrder: return "R1";
    case RuleCode::LongVowelContext: return "R2";
    case RuleCode::FinalShortVowel: return "R3";
    case RuleCode::MissingMark: return "R4";
    case RuleCode::MaddaFollowedByFatha: return "R5";
    case RuleCode::HamzaBelowVowel: return "R6";
    case RuleCode::ForeignLetter: return "R7";
    case RuleCode::LeadingDeterminer: return "R8";
  }
  return "R?";
}

std::vector<Violation> validate(const DiacritizedWord& word,
                                ValidationMode mode) {
  return validate(word, mode, std::string_view{});
}

std::vector<Violation> validate(const DiacritizedWord& word,
                                ValidationMode mode,
                                std::string_view input_skeleton) {
  const auto& segs = word.segments();
  std::vector<Violation> out;

  for (size_t i = 0; i < segs.size(); ++i) {
    const Segment& seg = segs[i];
    const bool final = i + 1 == segs.size();

    // R1: clusters must write shadda before the vowel.
    if (seg.marks.size() == 2 && is_short_vowel(seg.marks[0]) &&
        seg.marks[1] == Mark::Shadda) {
      out.push_back({RuleCode::ClusterOrder, i,
                     "short vowel written before shadda"});
    }

    check_long_vowel_context(segs, i, mode, out);

    // R3: lemma forms end bare (a lone shadda is fine).
    if (mode == ValidationMode::Lemma && final &&
        (seg.has_short_vowel() || seg.has(Mark::Sukun))) {
      out.push_back({RuleCode::FinalShortVowel, i,
                     "final letter of a lemma carries a short vowel or sukun"});
    }

    // R4: maximal diacritization - non-final consonants carry a mark.
    if (!final && seg.unmarked() && missing_mark_applies(seg.klass)) {
      out.push_back({RuleCode::MissingMark, i,
                     "non-final letter carries no diacritic"});
    }

    // R5: madda already encodes the long /a:/.
    if (seg.klass == LetterClass::AlifMadda && seg.has(Mark::Fatha)) {
      out.push_back({RuleCode::MaddaFollowedByFatha, i,
                     "alif madda followed by a redundant fatha"});
    }

    // R6: hamza seated below alif demands a kasra.
    if (seg.klass == LetterClass::AlifHamzaBelow && !seg.has(Mark::Kasra)) {
      out.push_back({RuleCode::HamzaBelowVowel, i,
                     "alif with hamza below must carry kasra"});
    }

    // R7: extension letters do not belong in normalized Arabic output.
    if (seg.klass == LetterClass::ForeignExtension) {
      out.push_back({RuleCode::ForeignLetter, i,
                     "foreign extension letter"});
    }
  }

  // R8: a lemma should not keep a determiner its source could shed. Only
  // checked when the caller supplies the undiacritized source word.
  if (mode == ValidationMode::Lemma && !input_skeleton.empty() &&
      segs.size() > 2 && segs[0].klass == LetterClass::AlifBare &&
      segs[1].letter == kLam) {
    std::u32string lemma_skel = word.skeleton_u32();
    std::u32string sans_det = lemma_skel.substr(2);
    std::u32string input = utf8::decode(input_skeleton);
    if (auto match = reach_skeleton(input, sans_det);
        match && match->used_det_removal) {
      out.push_back({RuleCode::LeadingDeterminer, 0,
                     "lemma retains a removable determiner"});
    }
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const Violation& a, const Violation& b) {
                     if (a.position != b.position) return a.position < b.position;
                     return static_cast<int>(a.code) < static_cast<int>(b.code);
                   });
  return out;
}

std::string serialize_violations(std::span<const Violation> violations) {
  std::ostringstream out;
  for (const Violation& v : violations) {
    out << rule_code_name(v.code) << '\t' << v.position << '\t' << v.message
        << '\n';
  }
  return out.str();
}

}  // namespace diactk
