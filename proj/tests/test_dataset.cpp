#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "diactk/dataset.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace diactk;

namespace {

// Writes a throwaway TSV under the system temp directory.
class TempFile {
 public:
  TempFile(const std::string& name, const std::string& content) {
    path_ = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

DatasetError capture_error(const std::string& content,
                           const ColumnMap& columns = {}) {
  TempFile file("diactk_dataset_case.tsv", content);
  try {
    load_entries(file.path(), columns);
  } catch (const DatasetError& e) {
    return e;
  }
  FAIL("expected DatasetError");
  return DatasetError(DatasetError::Code::EmptyInput, 0, "unreachable");
}

std::vector<std::string> stat_keys(const std::string& rendered) {
  std::vector<std::string> keys;
  std::istringstream in(rendered);
  std::string line;
  while (std::getline(in, line)) {
    keys.push_back(line.substr(0, line.find('\t')));
  }
  return keys;
}

}  // namespace

TEST_CASE("mini dataset loads with one entry per gloss") {
  std::vector<Entry> entries = load_entries(testutil::fixture("mini_dataset.tsv"));
  REQUIRE(entries.size() == 7);

  const char* ids[] = {"m1#1", "m1#2", "m1#3", "m2#1", "m3#1", "m4#1", "m5#1"};
  const char* glosses[] = {"A'ana", "Ana",     "Anna", "Karam",
                           "Stockholm", "Ajam", "London"};
  const long long freqs[] = {30, 30, 30, 10, 0, 0, 75};
  for (size_t i = 0; i < entries.size(); ++i) {
    CHECK(entries[i].id == ids[i]);
    CHECK(entries[i].gloss == glosses[i]);
    CHECK(entries[i].frequency == freqs[i]);
    REQUIRE(entries[i].gold_lemma.has_value());
  }
  CHECK(entries[0].arabic_input == "آنا");
  CHECK(entries[0].gold_lemma->render() == "آنَا");
  CHECK(entries[3].gold_lemma->render() == "كَرَم");
  CHECK(entries[4].gold_lemma->render() == "سْتُوكْهُولْم");
  CHECK(entries[6].gold_lemma->render() == "لَنْدَن");
  CHECK(entries[0].entity_class == EntityClass::Name);
  CHECK(entries[3].entity_class == EntityClass::Name);
  CHECK(entries[4].entity_class == EntityClass::Location);
  CHECK(entries[6].entity_class == EntityClass::Location);
}

TEST_CASE("summarize: mini dataset") {
  std::vector<Entry> entries = load_entries(testutil::fixture("mini_dataset.tsv"));
  CorpusStats stats = summarize(entries);
  CHECK(stats.unique_arabic == 5);
  CHECK(stats.pair_count == 7);
  CHECK(stats.glosses_per_entry == 1.4);
  CHECK(stats.avg_frequency == 25.0);
  CHECK(stats.median_frequency == 30.0);
  CHECK(stats.avg_freeman == 0.87);
  CHECK(stats.class_counts[0] == 3);  // location
  CHECK(stats.class_counts[1] == 4);  // name
  CHECK(stats.class_counts[2] == 0);
  CHECK(stats.class_counts[3] == 0);
}

TEST_CASE("summarize: even-sized set uses average-of-middles median") {
  std::vector<Entry> entries = load_entries(testutil::fixture("freq_stats.tsv"));
  REQUIRE(entries.size() == 4);
  CHECK(!entries[0].gold_lemma.has_value());

  CorpusStats stats = summarize(entries);
  CHECK(stats.unique_arabic == 2);
  CHECK(stats.pair_count == 4);
  CHECK(stats.glosses_per_entry == 2.0);
  CHECK(stats.avg_frequency == 10.0);
  CHECK(stats.median_frequency == 5.0);  // (0 + 10) / 2
  CHECK(stats.class_counts[3] == 4);     // no class column -> unknown

  std::string rendered = write_stats(stats);
  CHECK(rendered.find("unique_arabic\t2\n") != std::string::npos);
  CHECK(rendered.find("median_frequency\t5\n") != std::string::npos);
  CHECK(rendered.find("class_unknown\t4\n") != std::string::npos);
}

TEST_CASE("summarize rejects an empty entry list") {
  try {
    summarize({});
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(e.code() == DatasetError::Code::EmptyInput);
    CHECK(e.row() == 0);
    CHECK(std::string(e.what()) == "summarize: no entries");
  }
}

TEST_CASE("write_stats emits keys in a fixed order") {
  CorpusStats stats;
  stats.unique_arabic = 3;
  stats.pair_count = 4;
  stats.glosses_per_entry = 1.33;
  stats.avg_frequency = 2.5;
  stats.median_frequency = 2.0;
  stats.avg_freeman = 0.9;
  stats.class_counts[0] = 1;
  stats.class_counts[1] = 2;
  stats.class_counts[3] = 1;

  CHECK(write_stats(stats) ==
        "unique_arabic\t3\n"
        "pair_count\t4\n"
        "glosses_per_entry\t1.33\n"
        "avg_frequency\t2.5\n"
        "median_frequency\t2\n"
        "avg_freeman\t0.9\n"
        "class_location\t1\n"
        "class_name\t2\n"
        "class_organization\t0\n"
        "class_unknown\t1\n");

  std::vector<std::string> expected = {
      "unique_arabic",  "pair_count",   "glosses_per_entry", "avg_frequency",
      "median_frequency", "avg_freeman", "class_location",   "class_name",
      "class_organization", "class_unknown"};
  CHECK(stat_keys(write_stats(summarize(
            load_entries(testutil::fixture("mini_dataset.tsv"))))) == expected);
}

TEST_CASE("attach_frequencies: lookup, defaults, duplicate warning") {
  std::vector<Entry> entries = load_entries(testutil::fixture("mini_dataset.tsv"));
  std::string path = testutil::fixture("duplicate_freq.tsv");
  std::vector<std::string> warnings = attach_frequencies(entries, path);

  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0] == path + ":4: duplicate word \"لندن\", last value wins");

  CHECK(entries[0].frequency == 0);   // m1#1: absent from the list
  CHECK(entries[1].frequency == 0);
  CHECK(entries[2].frequency == 0);
  CHECK(entries[3].frequency == 20);  // m2 كرم
  CHECK(entries[4].frequency == 0);
  CHECK(entries[5].frequency == 0);
  CHECK(entries[6].frequency == 75);  // m5 لندن: last duplicate wins
}

TEST_CASE("glosses split on semicolons and trim whitespace") {
  TempFile file("diactk_gloss_split.tsv",
                "id\tarabic_input\tgloss\n"
                "g1\tكرم\tA; B ;C\n");
  std::vector<Entry> entries = load_entries(file.path());
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].gloss == "A");
  CHECK(entries[1].gloss == "B");
  CHECK(entries[2].gloss == "C");
  CHECK(entries[0].id == "g1#1");
  CHECK(entries[2].id == "g1#3");
  CHECK(!entries[0].gold_lemma.has_value());
  CHECK(entries[0].entity_class == EntityClass::Unknown);
}

TEST_CASE("column map renames every column") {
  TempFile file("diactk_column_map.tsv",
                "rowid\tword\tmeaning\tlemma_form\tcount\tkind\n"
                "c1\tكرم\tKaram\tكَرَم\t12\torganization\n");
  ColumnMap columns;
  columns.id = "rowid";
  columns.arabic_input = "word";
  columns.gloss = "meaning";
  columns.gold_lemma = "lemma_form";
  columns.frequency = "count";
  columns.entity_class = "kind";

  std::vector<Entry> entries = load_entries(file.path(), columns);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].id == "c1#1");
  CHECK(entries[0].arabic_input == "كرم");
  CHECK(entries[0].gloss == "Karam");
  CHECK(entries[0].gold_lemma->render() == "كَرَم");
  CHECK(entries[0].frequency == 12);
  CHECK(entries[0].entity_class == EntityClass::Organization);
}

TEST_CASE("unrecognized entity classes fall back to unknown") {
  TempFile file("diactk_entity_class.tsv",
                "id\tarabic_input\tgloss\tentity_class\n"
                "e1\tكرم\tKaram\tcity\n");
  std::vector<Entry> entries = load_entries(file.path());
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].entity_class == EntityClass::Unknown);
}

TEST_CASE("load errors carry a code and source row") {
  SUBCASE("missing required column") {
    DatasetError e = capture_error("id\tarabic_input\nx\tكرم\n");
    CHECK(e.code() == DatasetError::Code::MissingColumn);
    CHECK(e.row() == 1);
  }
  SUBCASE("empty file") {
    DatasetError e = capture_error("");
    CHECK(e.code() == DatasetError::Code::MissingColumn);
    CHECK(e.row() == 0);
  }
  SUBCASE("comment-only file") {
    DatasetError e = capture_error("# nothing here\n");
    CHECK(e.code() == DatasetError::Code::MissingColumn);
    CHECK(e.row() == 0);
  }
  SUBCASE("wrong cell count") {
    DatasetError e = capture_error("id\tarabic_input\tgloss\nx\tكرم\n");
    CHECK(e.code() == DatasetError::Code::MalformedRow);
    CHECK(e.row() == 2);
  }
  SUBCASE("empty arabic input") {
    DatasetError e = capture_error("id\tarabic_input\tgloss\nx\t\tGloss\n");
    CHECK(e.code() == DatasetError::Code::MalformedRow);
    CHECK(e.row() == 2);
  }
  SUBCASE("diacritic in the input column") {
    DatasetError e = capture_error("id\tarabic_input\tgloss\nx\tكَرم\tKaram\n");
    CHECK(e.code() == DatasetError::Code::DiacriticInInput);
    CHECK(e.row() == 2);
  }
  SUBCASE("empty gloss piece") {
    DatasetError e = capture_error("id\tarabic_input\tgloss\nx\tكرم\tA;;B\n");
    CHECK(e.code() == DatasetError::Code::EmptyGloss);
    CHECK(e.row() == 2);
  }
  SUBCASE("unparseable gold lemma") {
    DatasetError e = capture_error(
        "id\tarabic_input\tgloss\tgold_lemma\nx\tكرم\tKaram\tكَرًم\n");
    CHECK(e.code() == DatasetError::Code::BadLemma);
    CHECK(e.row() == 2);
  }
  SUBCASE("lemma unreachable from the input") {
    DatasetError e = capture_error(
        "id\tarabic_input\tgloss\tgold_lemma\nx\tكرم\tKaram\tبَرَك\n");
    CHECK(e.code() == DatasetError::Code::LemmaIntegrity);
    CHECK(e.row() == 2);
  }
  SUBCASE("non-numeric frequency") {
    DatasetError e = capture_error(
        "id\tarabic_input\tgloss\tfrequency\nx\tكرم\tKaram\t12x\n");
    CHECK(e.code() == DatasetError::Code::InvalidFrequency);
    CHECK(e.row() == 2);
  }
  SUBCASE("negative frequency") {
    DatasetError e = capture_error(
        "id\tarabic_input\tgloss\tfrequency\nx\tكرم\tKaram\t-3\n");
    CHECK(e.code() == DatasetError::Code::InvalidFrequency);
    CHECK(e.row() == 2);
  }
}

TEST_CASE("frequency file errors") {
  std::vector<Entry> entries = load_entries(testutil::fixture("mini_dataset.tsv"));

  SUBCASE("wrong column count") {
    TempFile file("diactk_freq_cols.tsv", "كرم\t5\textra\n");
    try {
      attach_frequencies(entries, file.path());
      FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
      CHECK(e.code() == DatasetError::Code::MalformedFrequencyRow);
      CHECK(e.row() == 1);
    }
  }
  SUBCASE("non-numeric count") {
    TempFile file("diactk_freq_count.tsv", "كرم\tfive\n");
    try {
      attach_frequencies(entries, file.path());
      FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
      CHECK(e.code() == DatasetError::Code::MalformedFrequencyRow);
      CHECK(e.row() == 1);
    }
  }
}

TEST_CASE("full corpus loads and matches the recorded statistics") {
  std::vector<Entry> entries =
      load_entries(testutil::data_file("cp_wiki_d3k.tsv"));
  REQUIRE(entries.size() == 3362);
  for (const Entry& entry : entries) {
    REQUIRE(entry.gold_lemma.has_value());
  }

  CorpusStats stats = summarize(entries);
  CHECK(stats.unique_arabic == 3000);
  CHECK(stats.pair_count == 3362);
  CHECK(stats.glosses_per_entry == 1.12);
  CHECK(stats.median_frequency == 75.0);
  CHECK(stats.avg_freeman == 0.91);

  // frequencies were drawn from the bundled list, so re-attaching is a no-op
  std::string before = write_stats(stats);
  std::vector<std::string> warnings =
      attach_frequencies(entries, testutil::data_file("frequency_list.tsv"));
  CHECK(warnings.empty());
  CHECK(write_stats(summarize(entries)) == before);
}
