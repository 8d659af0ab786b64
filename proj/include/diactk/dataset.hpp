#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "diactk/script.hpp"

namespace diactk {

enum class EntityClass { Location, Name, Organization, Unknown };

const char* entity_class_name(EntityClass klass);

struct Entry {
  std::string id;             // row id plus '#' plus 1-based gloss ordinal
  std::string arabic_input;   // undiacritized
  std::string gloss;
  std::optional<DiacritizedWord> gold_lemma;
  long long frequency = 0;
  EntityClass entity_class = EntityClass::Unknown;
};

class DatasetError : public std::runtime_error {
 public:
  enum class Code {
    MissingColumn,
    MalformedRow,
    DiacriticInInput,
    EmptyGloss,
    BadLemma,
    LemmaIntegrity,
    InvalidFrequency,
    MalformedFrequencyRow,
    EmptyInput,
  };

  DatasetError(Code code, size_t row, const std::string& message)
      : std::runtime_error(message), code_(code), row_(row) {}

  Code code() const { return code_; }
  size_t row() const { return row_; }  // 1-based source line; 0 = whole file

 private:
  Code code_;
  size_t row_;
};

// Maps canonical column names to the headers actually present in the file.
struct ColumnMap {
  std::string id = "id";
  std::string arabic_input = "arabic_input";
  std::string gloss = "gloss";
  std::string gold_lemma = "gold_lemma";
  std::string frequency = "frequency";
  std::string entity_class = "entity_class";
};

// Loads a TSV dataset, splitting multi-gloss rows ("A'ana; Ana; Anna") into
// one entry per gloss. id/arabic_input/gloss are required columns; the rest
// are optional. Gold lemmas are parsed and checked against the input skeleton.
std::vector<Entry> load_entries(const std::string& path,
                                const ColumnMap& columns = {});

// Overwrites each entry's frequency by exact skeleton lookup in a two-column
// (word, count) TSV; absent words get 0. Returns warnings (duplicate rows).
std::vector<std::string> attach_frequencies(std::vector<Entry>& entries,
                                            const std::string& freq_path);

struct CorpusStats {
  size_t unique_arabic = 0;
  size_t pair_count = 0;
  double glosses_per_entry = 0.0;  // rounded to 2 decimals
  double avg_frequency = 0.0;      // rounded to 2 decimals
  double median_frequency = 0.0;   // average-of-middles for even sizes
  double avg_freeman = 0.0;        // rounded to 2 decimals
  size_t class_counts[4] = {0, 0, 0, 0};  // indexed by EntityClass
};

CorpusStats summarize(std::span<const Entry> entries);

// Key/value TSV rendering of the stats.
std::string write_stats(const CorpusStats& stats);

}  // namespace diactk
