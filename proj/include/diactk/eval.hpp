#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diactk/script.hpp"

namespace diactk {

enum class ErrorClass { ExactMatch, DiacOnly, Awy, LetterSub, Multiple };

const char* error_class_name(ErrorClass klass);

// Scored comparison of one prediction against its reference.
struct EvalRecord {
  std::string id;
  std::string prediction;  // rendered text
  std::string reference;   // rendered text
  bool exact = false;
  int distance = 0;
  ErrorClass error_class = ErrorClass::Multiple;
  // Set for letter-sub records: the (reference, prediction) letter pair.
  std::optional<std::pair<char32_t, char32_t>> letter_pair;
  double freeman = 0.0;
  long long frequency = 0;
};

bool exact_match(const DiacritizedWord& prediction,
                 const DiacritizedWord& reference);

// Levenshtein over the full rendered codepoint sequences, marks included.
int edit_distance(const DiacritizedWord& prediction,
                  const DiacritizedWord& reference);
int edit_distance_u32(std::u32string_view a, std::u32string_view b);

// Configured set of confusable letter pairs (unordered).
class LetterSubPairs {
 public:
  static const LetterSubPairs& standard();
  static LetterSubPairs from_file(const std::string& path);

  bool contains(char32_t a, char32_t b) const;
  const std::vector<std::pair<char32_t, char32_t>>& rows() const { return rows_; }

 private:
  std::vector<std::pair<char32_t, char32_t>> rows_;
};

struct Classification {
  ErrorClass klass = ErrorClass::Multiple;
  std::optional<std::pair<char32_t, char32_t>> letter_pair;
};

// Error taxonomy: exact text match, diacritic-only difference, skeleton
// differences confined to the long-vowel letters, a confusable-pair
// substitution, or anything else.
Classification classify_error(const DiacritizedWord& prediction,
                              const DiacritizedWord& reference,
                              const LetterSubPairs& pairs = LetterSubPairs::standard());

// Sound-class table shared between Arabic letters and Latin glyphs.
class FreemanTable {
 public:
  static const FreemanTable& standard();
  static FreemanTable from_file(const std::string& path);

  std::optional<std::string> class_of(char32_t cp) const;
  const std::vector<std::pair<char32_t, std::string>>& rows() const {
    return rows_;
  }

 private:
  std::vector<std::pair<char32_t, std::string>> rows_;
};

// Class sequence for a piece of text. Arabic input must be undiacritized;
// Latin text is lowercased (ASCII) first. Symbols without a class - spaces,
// hyphens, digits - are skipped.
std::vector<std::string> class_sequence(std::string_view text,
                                        const FreemanTable& table = FreemanTable::standard());

// 2*LCS / (|a|+|b|) over class sequences; 1.0 when both are empty.
double class_sequence_similarity(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b);

// Similarity between an undiacritized Arabic skeleton and an English gloss.
// Throws std::invalid_argument when the gloss has no classifiable symbols.
double freeman_similarity(std::string_view arabic_skeleton,
                          std::string_view gloss,
                          const FreemanTable& table = FreemanTable::standard());

// Relative count difference per mark over the given records (callers pass the
// diacritic-only subset). Marks absent from the references are omitted.
std::vector<std::pair<Mark, double>> diacritic_confusion(
    std::span<const EvalRecord> records);

const char* mark_name(Mark mark);

// ---- batch scoring ----------------------------------------------------

struct ScorePair {
  std::string id;
  DiacritizedWord prediction;
  DiacritizedWord reference;
  std::string arabic_skeleton;  // undiacritized source, for the similarity score
  std::string gloss;
  long long frequency = 0;
};

// Reference implementation: plain sequential loop.
std::vector<EvalRecord> score_pairs_serial(
    std::span<const ScorePair> pairs,
    const LetterSubPairs& subs = LetterSubPairs::standard(),
    const FreemanTable& freeman = FreemanTable::standard());

// Parallel kernel. Records are written by index, so the output order - and
// content - is identical to the serial form.
std::vector<EvalRecord> score_pairs_parallel(
    std::span<const ScorePair> pairs,
    const LetterSubPairs& subs = LetterSubPairs::standard(),
    const FreemanTable& freeman = FreemanTable::standard());

// Dispatches to the parallel kernel for large batches.
std::vector<EvalRecord> score_pairs(
    std::span<const ScorePair> pairs,
    const LetterSubPairs& subs = LetterSubPairs::standard(),
    const FreemanTable& freeman = FreemanTable::standard());

// ---- binned analysis ---------------------------------------------------

enum class BinKey { Freeman, Frequency };

struct BinScheme {
  // Either explicit ascending edges (b bins need b+1 edges) or quartiles.
  static BinScheme from_edges(std::vector<double> edges);
  static BinScheme quartiles();

  bool use_quartiles = false;
  std::vector<double> edges;
};

struct BinRow {
  std::string label;
  size_t instances = 0;
  double avg_frequency = 0.0;
  size_t matches = 0;
  double accuracy = 0.0;
  double avg_distance = 0.0;
  double avg_freeman = 0.0;
};

struct Correlations {
  std::optional<double> accuracy_distance;
  std::optional<double> frequency_freeman;
  std::optional<double> freeman_accuracy;
  std::optional<double> frequency_accuracy;
};

struct BinReport {
  std::vector<BinRow> rows;  // non-empty bins, ascending
  Correlations correlations; // over the bin aggregates; degenerate = absent
};

// Groups records by the chosen key. Throws std::invalid_argument on empty
// input, non-ascending edges, or values outside the edge span.
BinReport bin_analysis(std::span<const EvalRecord> records, BinKey key,
                       const BinScheme& scheme);

// TSV with a header row; correlations appended as comment lines.
std::string write_bin_report(const BinReport& report, BinKey key);

}  // namespace diactk
