#include "diactk/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "diactk/eval.hpp"
#include "diactk/lemma.hpp"
#include "diactk/tsv.hpp"
#include "diactk/utf8.hpp"

namespace diactk {
namespace {

double round2(double value) { return std::round(value * 100.0) / 100.0; }

bool has_diacritic(std::string_view text) {
  for (char32_t cp : utf8::decode(text)) {
    if (mark_of(cp) || is_nunation(cp)) return true;
  }
  return false;
}

EntityClass parse_entity_class(std::string_view text) {
  if (text == "location") return EntityClass::Location;
  if (text == "name") return EntityClass::Name;
  if (text == "organization") return EntityClass::Organization;
  return EntityClass::Unknown;
}

std::vector<std::string> split_glosses(std::string_view field) {
  std::vector<std::string> glosses;
  size_t start = 0;
  while (true) {
    size_t semi = field.find(';', start);
    std::string_view piece = semi == std::string_view::npos
                                 ? field.substr(start)
                                 : field.substr(start, semi - start);
    glosses.push_back(tsv::trim(piece));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return glosses;
}

}  // namespace

const char* entity_class_name(EntityClass klass) {
  switch (klass) {
    case EntityClass::Location: return "location";
    case EntityClass::Name: return "name";
    case EntityClass::Organization: return "organization";
    case EntityClass::Unknown: return "unknown";
  }
  return "?";
}

std::vector<Entry> load_entries(const std::string& path,
                                const ColumnMap& columns) {
  std::vector<tsv::Row> rows = tsv::read_rows(path);
  if (rows.empty()) {
    throw DatasetError(DatasetError::Code::MissingColumn, 0,
                       path + ": empty file, no header row");
  }

  const std::vector<std::string>& header = rows.front().cells;
  auto column_index = [&header](const std::string& name) -> std::optional<size_t> {
    for (size_t i = 0; i < header.size(); ++i) {
      if (tsv::trim(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  auto required = [&](const std::string& name) {
    auto idx = column_index(name);
    if (!idx) {
      throw DatasetError(DatasetError::Code::MissingColumn, rows.front().line,
                         path + ": missing required column \"" + name + "\"");
    }
    return *idx;
  };
  size_t id_col = required(columns.id);
  size_t input_col = required(columns.arabic_input);
  size_t gloss_col = required(columns.gloss);
  std::optional<size_t> lemma_col = column_index(columns.gold_lemma);
  std::optional<size_t> freq_col = column_index(columns.frequency);
  std::optional<size_t> class_col = column_index(columns.entity_class);

  std::vector<Entry> entries;
  for (size_t r = 1; r < rows.size(); ++r) {
    const tsv::Row& row = rows[r];
    if (row.cells.size() != header.size()) {
      throw DatasetError(DatasetError::Code::MalformedRow, row.line,
                         path + ":" + std::to_string(row.line) + ": expected " +
                             std::to_string(header.size()) + " columns, got " +
                             std::to_string(row.cells.size()));
    }
    Entry base;
    base.id = tsv::trim(row.cells[id_col]);
    base.arabic_input = tsv::trim(row.cells[input_col]);
    if (base.arabic_input.empty()) {
      throw DatasetError(DatasetError::Code::MalformedRow, row.line,
                         path + ":" + std::to_string(row.line) +
                             ": empty arabic_input");
    }
    if (has_diacritic(base.arabic_input)) {
      throw DatasetError(DatasetError::Code::DiacriticInInput, row.line,
                         path + ":" + std::to_string(row.line) +
                             ": arabic_input carries diacritics");
    }

    if (lemma_col) {
      std::string lemma_text = tsv::trim(row.cells[*lemma_col]);
      if (!lemma_text.empty()) {
        try {
          base.gold_lemma = parse_arabic(lemma_text);
        } catch (const ParseError& e) {
          throw DatasetError(DatasetError::Code::BadLemma, row.line,
                             path + ":" + std::to_string(row.line) +
                                 ": gold_lemma does not parse (" +
                                 parse_error_name(e.code()) + " at " +
                                 std::to_string(e.position()) + ")");
        }
        IntegrityReport report =
            check_integrity(base.arabic_input, *base.gold_lemma);
        if (!report.ok) {
          throw DatasetError(
              DatasetError::Code::LemmaIntegrity, row.line,
              path + ":" + std::to_string(row.line) +
                  ": gold_lemma skeleton is not reachable from arabic_input" +
                  (report.diff ? " (first difference at position " +
                                     std::to_string(*report.diff) + ")"
                               : ""));
        }
      }
    }
    if (freq_col) {
      std::string raw = tsv::trim(row.cells[*freq_col]);
      if (!raw.empty()) {
        try {
          size_t used = 0;
          long long value = std::stoll(raw, &used);
          if (used != raw.size() || value < 0) throw std::invalid_argument(raw);
          base.frequency = value;
        } catch (const std::exception&) {
          throw DatasetError(DatasetError::Code::InvalidFrequency, row.line,
                             path + ":" + std::to_string(row.line) +
                                 ": bad frequency \"" + raw + "\"");
        }
      }
    }
    if (class_col) {
      base.entity_class = parse_entity_class(tsv::trim(row.cells[*class_col]));
    }

    std::vector<std::string> glosses = split_glosses(row.cells[gloss_col]);
    for (const std::string& gloss : glosses) {
      if (gloss.empty()) {
        throw DatasetError(DatasetError::Code::EmptyGloss, row.line,
                           path + ":" + std::to_string(row.line) +
                               ": empty gloss");
      }
    }
    for (size_t g = 0; g < glosses.size(); ++g) {
      Entry entry = base;
      entry.id = base.id + "#" + std::to_string(g + 1);
      entry.gloss = glosses[g];
      entries.push_back(std::move(entry));
    }
  }
  return entries;
}

std::vector<std::string> attach_frequencies(std::vector<Entry>& entries,
                                            const std::string& freq_path) {
  std::vector<std::string> warnings;
  std::unordered_map<std::string, long long> table;
  for (const tsv::Row& row : tsv::read_rows(freq_path)) {
    if (row.cells.size() != 2) {
      throw DatasetError(DatasetError::Code::MalformedFrequencyRow, row.line,
                         freq_path + ":" + std::to_string(row.line) +
                             ": expected <word>\\t<count>");
    }
    std::string word = tsv::trim(row.cells[0]);
    std::string raw = tsv::trim(row.cells[1]);
    long long count = 0;
    try {
      size_t used = 0;
      count = std::stoll(raw, &used);
      if (used != raw.size() || count < 0) throw std::invalid_argument(raw);
    } catch (const std::exception&) {
      throw DatasetError(DatasetError::Code::MalformedFrequencyRow, row.line,
                         freq_path + ":" + std::to_string(row.line) +
                             ": bad count \"" + raw + "\"");
    }
    if (auto it = table.find(word); it != table.end()) {
      warnings.push_back(freq_path + ":" + std::to_string(row.line) +
                         ": duplicate word \"" + word + "\", last value wins");
      it->second = count;
    } else {
      table.emplace(std::move(word), count);
    }
  }
  for (Entry& entry : entries) {
    auto it = table.find(entry.arabic_input);
    entry.frequency = it == table.end() ? 0 : it->second;
  }
  return warnings;
}

CorpusStats summarize(std::span<const Entry> entries) {
  if (entries.empty()) {
    throw DatasetError(DatasetError::Code::EmptyInput, 0,
                       "summarize: no entries");
  }
  CorpusStats stats;
  stats.pair_count = entries.size();

  std::set<std::string> unique;
  std::vector<double> frequencies;
  frequencies.reserve(entries.size());
  double freq_sum = 0.0, freeman_sum = 0.0;
  for (const Entry& entry : entries) {
    unique.insert(entry.arabic_input);
    frequencies.push_back(static_cast<double>(entry.frequency));
    freq_sum += static_cast<double>(entry.frequency);
    freeman_sum += freeman_similarity(entry.arabic_input, entry.gloss);
    stats.class_counts[static_cast<size_t>(entry.entity_class)] += 1;
  }
  stats.unique_arabic = unique.size();

  double n = static_cast<double>(entries.size());
  stats.glosses_per_entry =
      round2(n / static_cast<double>(stats.unique_arabic));
  stats.avg_frequency = round2(freq_sum / n);
  stats.avg_freeman = round2(freeman_sum / n);

  std::sort(frequencies.begin(), frequencies.end());
  size_t mid = frequencies.size() / 2;
  stats.median_frequency = frequencies.size() % 2 == 1
                               ? frequencies[mid]
                               : (frequencies[mid - 1] + frequencies[mid]) / 2.0;
  return stats;
}

std::string write_stats(const CorpusStats& stats) {
  std::ostringstream out;
  auto put = [&out](const char* key, const auto& value) {
    out << key << '\t' << value << '\n';
  };
  put("unique_arabic", stats.unique_arabic);
  put("pair_count", stats.pair_count);
  put("glosses_per_entry", stats.glosses_per_entry);
  put("avg_frequency", stats.avg_frequency);
  put("median_frequency", stats.median_frequency);
  put("avg_freeman", stats.avg_freeman);
  for (size_t i = 0; i < 4; ++i) {
    out << "class_" << entity_class_name(static_cast<EntityClass>(i)) << '\t'
        << stats.class_counts[i] << '\n';
  }
  return out.str();
}

}  // namespace diactk
