#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "diactk/bench.hpp"
#include "diactk/digest.hpp"
#include "diactk/tsv.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace diactk;

namespace {

class TempFile {
 public:
  explicit TempFile(const std::string& name) {
    path_ = (std::filesystem::temp_directory_path() / name).string();
    std::filesystem::remove(path_);
  }
  TempFile(const std::string& name, const std::string& content) : TempFile(name) {
    std::ofstream out(path_, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

template <class Fn>
BenchError expect_bench_error(Fn&& fn) {
  try {
    fn();
  } catch (const BenchError& e) {
    return e;
  }
  FAIL("expected a BenchError");
  return BenchError(BenchError::Code::BadConfig, "unreachable");
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

const std::vector<Entry>& taxonomy_entries() {
  static const std::vector<Entry> entries =
      load_entries(testutil::fixture("taxonomy_dataset.tsv"));
  return entries;
}

constexpr char kExpectedZeroShotGloss[] =
    "You are an expert in Arabic.\n"
    "\n"
    "You are given the undiacritized proper noun in Arabic and its English gloss.\n"
    "Your task is to generate the corresponding diacritized proper noun lemma in Arabic.\n"
    "Arabic lemmas are dictionary entries that have no attached definite article (ال).\n"
    "Diacritization is adding the correct diacritic markings to undiacritized words.\n"
    "\n"
    "Remove the Arabic definite article (ال) when present.\n"
    "Do not add, remove, or substitute any other letters in the input.\n"
    "Determine the most accurate diacritization that matches the English gloss pronunciation.\n"
    "\n"
    "The user will provide a Markdown table with 1 rows.\n"
    "Each row contains an undiacritized proper noun in Arabic in the "
    "“Input” column and its English gloss in the “Gloss” column.\n"
    "\n"
    "Return exactly 1 diacritized lemmas, one per line.\n"
    "Do not include extra text, explanations, or formatting.";

}  // namespace

TEST_CASE("mode names are stable") {
  CHECK(std::string(shots_name(Shots::Zero)) == "zero");
  CHECK(std::string(shots_name(Shots::One)) == "one");
  CHECK(std::string(shots_name(Shots::Few)) == "few");
  CHECK(std::string(input_format_name(InputFormat::ArabicGloss)) ==
        "arabic+gloss");
  CHECK(std::string(input_format_name(InputFormat::ArabicOnly)) ==
        "arabic-only");
}

TEST_CASE("zero-shot gloss prompt renders the exact template") {
  std::span<const Entry> batch(taxonomy_entries().data(), 1);
  Prompt prompt = build_prompt(PromptConfig{}, batch, {});
  CHECK(prompt.system_message == kExpectedZeroShotGloss);
  CHECK(prompt.user_message ==
        "| Input | Gloss |\n| --- | --- |\n| العمود | Al-Amud |\n");
}

TEST_CASE("arabic-only prompts drop the gloss machinery") {
  std::span<const Entry> batch(taxonomy_entries().data(), 2);
  PromptConfig config;
  config.format = InputFormat::ArabicOnly;
  Prompt prompt = build_prompt(config, batch, {});

  CHECK(prompt.system_message.find(
            "You are given the undiacritized proper noun in Arabic.\n") !=
        std::string::npos);
  CHECK(prompt.system_message.find("gloss") == std::string::npos);
  CHECK(prompt.system_message.find("Gloss") == std::string::npos);
  CHECK(prompt.system_message.find("pronunciation") == std::string::npos);
  CHECK(prompt.system_message.find(
            "The user will provide a Markdown table with 2 rows.\n") !=
        std::string::npos);
  CHECK(prompt.system_message.find(
            "Return exactly 2 diacritized lemmas, one per line.\n") !=
        std::string::npos);
  CHECK(prompt.user_message ==
        "| Input |\n| --- |\n| العمود |\n| أفراموفو |\n");
}

TEST_CASE("one-shot prompts append exactly the first example") {
  std::vector<FewShotExample> examples =
      load_examples(testutil::data_file("few_shot_examples.tsv"));
  REQUIRE(examples.size() == 80);
  CHECK(examples[0].arabic_input == "ايدكس");
  CHECK(examples[0].gloss == "IDEX");
  CHECK(examples[0].lemma == "إِيدِكس");

  std::span<const Entry> batch(taxonomy_entries().data(), 1);
  PromptConfig config;
  config.shots = Shots::One;
  Prompt prompt = build_prompt(config, batch, examples);

  CHECK(prompt.system_message.find(
            "Here are some examples of triplets of an undiacritized proper "
            "noun in Arabic (“Input”), its respective English gloss "
            "(“Gloss”), and its diacritized lemma (“Output”) for reference\n") !=
        std::string::npos);
  CHECK(prompt.system_message.find("| ايدكس | IDEX | إِيدِكس |\n") !=
        std::string::npos);
  CHECK(prompt.system_message.find("Guardian") == std::string::npos);
  // table header + separator + one example row
  CHECK(count_occurrences(prompt.system_message, " |\n") == 3);
}

TEST_CASE("few-shot prompts append the requested number of examples") {
  std::vector<FewShotExample> examples =
      load_examples(testutil::data_file("few_shot_examples.tsv"));
  std::span<const Entry> batch(taxonomy_entries().data(), 1);
  PromptConfig config;
  config.shots = Shots::Few;
  config.few_count = 80;
  Prompt prompt = build_prompt(config, batch, examples);
  CHECK(count_occurrences(prompt.system_message, " |\n") == 82);
  CHECK(prompt.system_message.find("| ايدكس | IDEX | إِيدِكس |\n") !=
        std::string::npos);
  CHECK(prompt.system_message.find("Guardian") != std::string::npos);

  PromptConfig arabic_only = config;
  arabic_only.format = InputFormat::ArabicOnly;
  Prompt two_col = build_prompt(arabic_only, batch, examples);
  CHECK(two_col.system_message.find(
            "Here are some examples of pairs of an undiacritized proper noun "
            "in Arabic (“Input”), and its diacritized lemma (“Output”) "
            "for reference\n") != std::string::npos);
  CHECK(two_col.system_message.find("| ايدكس | إِيدِكس |\n") !=
        std::string::npos);
  CHECK(two_col.system_message.find("IDEX") == std::string::npos);
}

TEST_CASE("prompt construction rejects unusable requests") {
  std::span<const Entry> batch(taxonomy_entries().data(), 1);

  PromptConfig one;
  one.shots = Shots::One;
  BenchError no_examples =
      expect_bench_error([&] { build_prompt(one, batch, {}); });
  CHECK(no_examples.code() == BenchError::Code::InsufficientExamples);
  CHECK(std::string(no_examples.what()) == "need 1 examples, have 0");

  std::vector<FewShotExample> examples =
      load_examples(testutil::data_file("few_shot_examples.tsv"));
  PromptConfig few;
  few.shots = Shots::Few;
  few.few_count = 81;
  BenchError short_pool =
      expect_bench_error([&] { build_prompt(few, batch, examples); });
  CHECK(short_pool.code() == BenchError::Code::InsufficientExamples);
  CHECK(std::string(short_pool.what()) == "need 81 examples, have 80");

  BenchError empty_batch =
      expect_bench_error([&] { build_prompt(PromptConfig{}, {}, {}); });
  CHECK(empty_batch.code() == BenchError::Code::BadConfig);
  CHECK(std::string(empty_batch.what()) == "empty prompt batch");
}

TEST_CASE("load_examples rejects rows with the wrong shape") {
  TempFile file("diactk_examples_bad.tsv", "كرم\tKaram\n");
  BenchError e = expect_bench_error([&] { load_examples(file.path()); });
  CHECK(e.code() == BenchError::Code::BadConfig);
  CHECK(std::string(e.what()).find("expected <arabic_input>") !=
        std::string::npos);
}

TEST_CASE("parse_response trims, skips blanks, and polices the payload") {
  std::vector<std::string> lines = parse_response("كَرَم\n\n لَنْدَن \n", 2);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "كَرَم");
  CHECK(lines[1] == "لَنْدَن");

  BenchError mismatch =
      expect_bench_error([] { parse_response("كَرَم\nلَنْدَن\n", 3); });
  CHECK(mismatch.code() == BenchError::Code::LineCountMismatch);
  CHECK(std::string(mismatch.what()) == "expected 3 lines, got 2");

  BenchError latin = expect_bench_error([] { parse_response("hello\n", 1); });
  CHECK(latin.code() == BenchError::Code::NonArabicPayload);

  BenchError spaced =
      expect_bench_error([] { parse_response("كرم لندن\n", 1); });
  CHECK(spaced.code() == BenchError::Code::NonArabicPayload);

  // nunation is Arabic script: it passes the payload check and is rejected
  // later, by the parser
  std::vector<std::string> nunated = parse_response("كَرَمً\n", 1);
  CHECK(nunated[0] == "كَرَمً");
}

TEST_CASE("request digests pin the recording key scheme") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex(std::string(55, 'x')) ==
        "d5e285683cd4efc02d021a5c62014694958901005d6f71e89e0989fac77e4072");
  CHECK(sha256_hex(std::string(64, 'y')) ==
        "ffbf30ab94107b2c14d75cfb455ec94f200400ddc5ce304e0c21894090db055f");

  CHECK(request_digest("a", "b") ==
        "d30a11ae896cfd9828c66c826156c80a42e6c401f767ced8dcde831b7a729bdc");
  // the record separator keeps message boundaries from colliding
  CHECK(request_digest("ab", "") != request_digest("a", "b"));
  CHECK(request_digest("", "ab") != request_digest("a", "b"));
  CHECK(request_digest("a", "b") != request_digest("b", "a"));
}

TEST_CASE("replay client answers by digest and rejects bad logs") {
  ReplayClient client(testutil::fixture("bench_replay.jsonl"));
  CHECK(client.size() == 16);

  BenchError missing =
      expect_bench_error([&] { client.complete("nope", "nope"); });
  CHECK(missing.code() == BenchError::Code::MissingRecording);
  CHECK(std::string(missing.what()).find("no recorded response for digest") ==
        0);

  TempFile bad("diactk_replay_bad.jsonl",
               "{\"digest\":\"d\",\"response\":\"r\"}\n{\"digest\":\"d2\"}\n");
  BenchError parse = expect_bench_error([&] { ReplayClient{bad.path()}; });
  CHECK(parse.code() == BenchError::Code::BadConfig);
  CHECK(std::string(parse.what()) == bad.path() + ":2: bad replay record");
}

TEST_CASE("replayed benchmark reproduces the recorded run") {
  const std::vector<Entry>& entries = taxonomy_entries();
  REQUIRE(entries.size() == 16);
  CHECK(entries[0].id == "t01#1");

  ReplayClient client(testutil::fixture("bench_replay.jsonl"));
  BenchResult result = run_benchmark(entries, client, PromptConfig{});

  REQUIRE(result.records.size() == 16);
  CHECK(result.summary.total == 16);
  CHECK(result.summary.failed == 0);
  CHECK(result.summary.accuracy == 0.1875);
  CHECK(result.summary.mean_distance == 1.1875);

  const int expected_distance[] = {0, 0, 0, 1, 1, 1, 2, 2,
                                   1, 1, 1, 1, 2, 2, 2, 2};
  const ErrorClass expected_class[] = {
      ErrorClass::ExactMatch, ErrorClass::ExactMatch, ErrorClass::ExactMatch,
      ErrorClass::DiacOnly,   ErrorClass::DiacOnly,   ErrorClass::DiacOnly,
      ErrorClass::Awy,        ErrorClass::Awy,        ErrorClass::Awy,
      ErrorClass::LetterSub,  ErrorClass::LetterSub,  ErrorClass::LetterSub,
      ErrorClass::Multiple,   ErrorClass::Multiple,   ErrorClass::Multiple,
      ErrorClass::Multiple};
  for (size_t i = 0; i < result.records.size(); ++i) {
    const BenchRecord& rec = result.records[i];
    CHECK(rec.id == entries[i].id);
    CHECK(!rec.failed);
    CHECK(rec.distance == expected_distance[i]);
    CHECK(rec.raw_distance == expected_distance[i]);  // replies are canonical
    CHECK(rec.error_class == expected_class[i]);
    CHECK(rec.exact == (expected_distance[i] == 0));
    CHECK(rec.normalized == rec.raw);
    CHECK(rec.repair_trace.empty());
  }
  REQUIRE(result.records[9].letter_pair.has_value());
  CHECK(result.records[9].letter_pair->first == U'غ');
  CHECK(result.records[9].letter_pair->second == U'ج');
  REQUIRE(result.records[11].letter_pair.has_value());
  CHECK(result.records[11].letter_pair->first == U'ة');
  CHECK(result.records[11].letter_pair->second == U'ه');

  CHECK(write_summary(result.summary) ==
        "shots\tzero\n"
        "format\tarabic+gloss\n"
        "batch_size\t1\n"
        "total\t16\n"
        "failed\t0\n"
        "accuracy\t0.1875\n"
        "mean_distance\t1.1875\n"
        "class_awy\t3\n"
        "class_diac-only\t3\n"
        "class_exact-match\t3\n"
        "class_letter-sub\t3\n"
        "class_multiple\t4\n"
        "confusion_fatha\t+0.5000\n"
        "confusion_damma\t+1.0000\n"
        "confusion_kasra\t-0.2000\n"
        "confusion_sukun\t-0.2500\n");

  std::string records_tsv = write_records(result.records);
  CHECK(records_tsv.find(
            "id\traw\tnormalized\texact\tdistance\traw_distance\terror_class\t"
            "repair_trace\terror\n") == 0);
  CHECK(records_tsv.find("t01#1\tعَمُود\tعَمُود\t1\t0\t0\texact-match\t\t\n") !=
        std::string::npos);
  CHECK(records_tsv.find("letter-sub(غ↔ج)") != std::string::npos);
  CHECK(records_tsv.find("letter-sub(خ↔ه)") != std::string::npos);

  // identical run, identical output
  BenchResult again = run_benchmark(entries, client, PromptConfig{});
  CHECK(write_records(again.records) == records_tsv);
  CHECK(write_summary(again.summary) == write_summary(result.summary));
}

TEST_CASE("recording a run reproduces the replay log byte for byte") {
  const std::vector<Entry>& entries = taxonomy_entries();
  ReplayClient client(testutil::fixture("bench_replay.jsonl"));

  TempFile recorded("diactk_recorded_run.jsonl");
  BenchOptions options;
  options.record_path = recorded.path();
  run_benchmark(entries, client, PromptConfig{}, options);

  CHECK(tsv::read_file(recorded.path()) ==
        tsv::read_file(testutil::fixture("bench_replay.jsonl")));

  ReplayClient rerun(recorded.path());
  CHECK(rerun.size() == 16);
  BenchResult result = run_benchmark(entries, rerun, PromptConfig{});
  CHECK(result.summary.accuracy == 0.1875);
}

TEST_CASE("a configuration drift turns every batch into failed records") {
  const std::vector<Entry>& entries = taxonomy_entries();
  ReplayClient client(testutil::fixture("bench_replay.jsonl"));
  PromptConfig config;
  config.batch_size = 2;  // recorded digests were made with batches of 1

  BenchResult result = run_benchmark(entries, client, config);
  CHECK(result.summary.total == 16);
  CHECK(result.summary.failed == 16);
  CHECK(result.summary.accuracy == 0.0);
  CHECK(result.summary.mean_distance == 0.0);
  CHECK(result.summary.class_histogram.empty());
  for (const BenchRecord& rec : result.records) {
    CHECK(rec.failed);
    CHECK(rec.error.find("no recorded response") == 0);
  }
  CHECK(write_records(result.records)
            .find("\t\t-\t-\t-\tfailed\t-\tno recorded response") !=
        std::string::npos);
}

TEST_CASE("run_benchmark validates its inputs up front") {
  ReplayClient client(testutil::fixture("bench_replay.jsonl"));

  std::vector<Entry> no_gold = load_entries(testutil::fixture("freq_stats.tsv"));
  BenchError missing_gold = expect_bench_error(
      [&] { run_benchmark(no_gold, client, PromptConfig{}); });
  CHECK(missing_gold.code() == BenchError::Code::BadConfig);
  CHECK(std::string(missing_gold.what()) == "entry f1#1 has no gold lemma");

  PromptConfig few;
  few.shots = Shots::Few;
  BenchError no_source = expect_bench_error(
      [&] { run_benchmark(taxonomy_entries(), client, few); });
  CHECK(no_source.code() == BenchError::Code::BadConfig);

  few.few_shot_source = testutil::data_file("few_shot_examples.tsv");
  few.few_count = 200;
  BenchError short_pool = expect_bench_error(
      [&] { run_benchmark(taxonomy_entries(), client, few); });
  CHECK(short_pool.code() == BenchError::Code::InsufficientExamples);
}

TEST_CASE("http client refuses to start without credentials or scheme") {
  HttpClientConfig config;
  config.endpoint = "https://api.example.com/v1/chat/completions";
  config.model = "test-model";

  BenchError no_key = expect_bench_error([&] { HttpModelClient{config}; });
  CHECK(no_key.code() == BenchError::Code::BadConfig);
  CHECK(std::string(no_key.what()) == "missing credentials: set MODEL_API_KEY");

  config.api_key = "k";
  config.endpoint = "api.example.com/v1/chat/completions";
  BenchError no_scheme = expect_bench_error([&] { HttpModelClient{config}; });
  CHECK(no_scheme.code() == BenchError::Code::BadConfig);
  CHECK(std::string(no_scheme.what()).find("endpoint must include a scheme") ==
        0);
}

TEST_CASE("live endpoint smoke test (skipped without MODEL_API_KEY)") {
  const char* key = std::getenv("MODEL_API_KEY");
  const char* endpoint = std::getenv("MODEL_API_ENDPOINT");
  if (key == nullptr || *key == '\0' || endpoint == nullptr ||
      *endpoint == '\0') {
    MESSAGE("MODEL_API_KEY/MODEL_API_ENDPOINT not set; skipping live call");
    return;
  }
  HttpClientConfig config;
  config.endpoint = endpoint;
  config.api_key = key;
  const char* model = std::getenv("MODEL_API_MODEL");
  config.model = model != nullptr ? model : "gpt-4o-2024-11-20";

  HttpModelClient client(config);
  std::span<const Entry> one(taxonomy_entries().data(), 1);
  BenchResult result = run_benchmark(one, client, PromptConfig{});
  CHECK(result.summary.total == 1);
}
