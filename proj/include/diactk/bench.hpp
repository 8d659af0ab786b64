#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "diactk/dataset.hpp"
#include "diactk/eval.hpp"
#include "diactk/normalize.hpp"
#include "diactk/script.hpp"

namespace diactk {

enum class Shots { Zero, One, Few };
enum class InputFormat { ArabicGloss, ArabicOnly };

const char* shots_name(Shots shots);
const char* input_format_name(InputFormat format);

class BenchError : public std::runtime_error {
 public:
  enum class Code {
    InsufficientExamples,
    LineCountMismatch,
    NonArabicPayload,
    MissingRecording,
    Transport,
    BadConfig,
  };

  BenchError(Code code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct FewShotExample {
  std::string arabic_input;  // undiacritized
  std::string gloss;
  std::string lemma;         // diacritized reference
};

// Loads examples from a 3-column TSV (arabic_input, gloss, lemma).
std::vector<FewShotExample> load_examples(const std::string& path);

struct PromptConfig {
  Shots shots = Shots::Zero;
  InputFormat format = InputFormat::ArabicGloss;
  size_t batch_size = 1;
  size_t few_count = 80;          // examples used when shots == Few
  std::string few_shot_source;    // examples file; loaded by run_benchmark
};

struct Prompt {
  std::string system_message;
  std::string user_message;
};

// Renders the system template for the (shots, format) cell with the row count
// interpolated, plus the user-side Markdown table for the batch. Throws
// BenchError(InsufficientExamples) when the example pool is short.
Prompt build_prompt(const PromptConfig& config, std::span<const Entry> batch,
                    std::span<const FewShotExample> examples);

// Splits a completion into exactly `expected_count` trimmed, non-empty,
// Arabic-script-only lines. Throws BenchError on anything else.
std::vector<std::string> parse_response(std::string_view text,
                                        size_t expected_count);

class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string complete(const std::string& system_message,
                               const std::string& user_message) = 0;
};

// Deterministic offline client: answers from a recorded digest->response log
// (one JSON object per line: {"digest": ..., "response": ...}).
class ReplayClient : public ModelClient {
 public:
  explicit ReplayClient(const std::string& path);

  std::string complete(const std::string& system_message,
                       const std::string& user_message) override;

  size_t size() const { return responses_.size(); }

 private:
  std::map<std::string, std::string> responses_;
};

struct HttpClientConfig {
  std::string endpoint;  // e.g. https://api.example.com/v1/chat/completions
  std::string model;
  std::string api_key;   // from MODEL_API_KEY
  int max_retries = 3;
  int backoff_ms = 500;  // doubled per retry
  int timeout_s = 120;
};

// Chat-completion client. Optional request parameters are left at server
// defaults; only model and the two messages are sent.
class HttpModelClient : public ModelClient {
 public:
  explicit HttpModelClient(HttpClientConfig config);

  std::string complete(const std::string& system_message,
                       const std::string& user_message) override;

 private:
  HttpClientConfig config_;
  std::string scheme_host_;
  std::string path_;
};

struct BenchRecord {
  std::string id;
  std::string raw;         // verbatim model line (or whole response on failure)
  std::string normalized;  // rendered repaired prediction
  bool failed = false;
  std::string error;       // failure reason when failed
  bool exact = false;
  int distance = 0;        // against the reference, after repair
  int raw_distance = 0;    // against the reference, before repair
  ErrorClass error_class = ErrorClass::Multiple;
  std::optional<std::pair<char32_t, char32_t>> letter_pair;
  std::string repair_trace;
};

struct BenchSummary {
  size_t total = 0;
  size_t failed = 0;
  double accuracy = 0.0;       // over non-failed records
  double mean_distance = 0.0;  // over non-failed records
  std::map<std::string, size_t> class_histogram;
  std::vector<std::pair<Mark, double>> confusion;  // over diac-only records
  std::map<std::string, size_t> repair_counts;
  Shots shots = Shots::Zero;
  InputFormat format = InputFormat::ArabicGloss;
  size_t batch_size = 1;
};

struct BenchOptions {
  size_t max_inflight = 4;        // bounded concurrent requests
  std::string record_path;        // when set, append digest/response lines
};

struct BenchResult {
  std::vector<BenchRecord> records;  // ordered by input index
  BenchSummary summary;
};

// Full pipeline: prompt -> complete -> parse -> parse_arabic -> normalize ->
// score. Per-entry failures become failed records; the run only throws for
// unusable configuration (missing examples file, empty example pool).
BenchResult run_benchmark(std::span<const Entry> entries, ModelClient& client,
                          const PromptConfig& config,
                          const BenchOptions& options = {});

// One TSV line per record: id, raw, normalized, exact, distance, error class.
std::string write_records(std::span<const BenchRecord> records);

std::string write_summary(const BenchSummary& summary);

}  // namespace diactk
