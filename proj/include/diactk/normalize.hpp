#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diactk/script.hpp"

namespace diactk {

// Repair steps, in the order normalize applies them.
enum class RepairStep {
  MapForeignLetter,       // S1
  ReorderShaddaVowel,     // S2
  InsertFathaBeforeAlif,  // S3
  InsertKasraBelowHamza,  // S4
  RemoveFathaAfterMadda,  // S5
  InsertSukun,            // S6
  RemoveFinalMark,        // S7
};

const char* repair_step_name(RepairStep step);

struct RepairAction {
  RepairStep step;
  size_t position;  // segment index the repair touched
};

// Replacement table for foreign extension letters.
class ForeignLetterMap {
 public:
  static const ForeignLetterMap& standard();
  static ForeignLetterMap from_file(const std::string& path);

  std::optional<char32_t> lookup(char32_t letter) const;
  const std::vector<std::pair<char32_t, char32_t>>& rows() const { return rows_; }

 private:
  std::vector<std::pair<char32_t, char32_t>> rows_;
};

struct NormalizeResult {
  DiacritizedWord word;
  std::vector<RepairAction> trace;
};

// Deterministic repair pipeline. Idempotent; letter identity is preserved
// except for the foreign-letter replacements in the map.
NormalizeResult normalize(const DiacritizedWord& word,
                          const ForeignLetterMap& map = ForeignLetterMap::standard());

std::string serialize_trace(const std::vector<RepairAction>& trace);

}  // namespace diactk
