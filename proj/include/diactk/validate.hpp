#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diactk/script.hpp"

namespace diactk {

enum class RuleCode {
  ClusterOrder,          // R1: vowel written before shadda
  LongVowelContext,      // R2: alif/waw/ya without its licensing context
  FinalShortVowel,       // R3: final letter carries a short vowel or sukun
  MissingMark,           // R4: unmarked non-final consonant
  MaddaFollowedByFatha,  // R5: alif madda carrying a redundant fatha
  HamzaBelowVowel,       // R6: alif hamza-below without kasra
  ForeignLetter,         // R7: extension letter present
  LeadingDeterminer,     // R8: lemma retains a removable determiner
};

const char* rule_code_name(RuleCode code);  // "R1".."R8"

struct Violation {
  RuleCode code;
  size_t position;  // segment index
  std::string message;
};

// Lemma mode applies the dictionary-form conventions (no final short vowel or
// sukun, no leading determiner, no alif wasla). Surface mode drops those.
enum class ValidationMode { Lemma, Surface };

// Reports every violation, ordered by position then code.
std::vector<Violation> validate(const DiacritizedWord& word, ValidationMode mode);

// Same, but with the undiacritized source word available so the leading-
// determiner check can run. Only lemma mode uses the extra context.
std::vector<Violation> validate(const DiacritizedWord& word, ValidationMode mode,
                                std::string_view input_skeleton);

// One line per violation: code<TAB>position<TAB>message.
std::string serialize_violations(std::span<const Violation> violations);

}  // namespace diactk
