#include "diactk/bench.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "diactk/digest.hpp"
#include "diactk/tsv.hpp"
#include "diactk/utf8.hpp"
#include "httplib.h"
#include "json.hpp"

namespace diactk {
namespace {

using nlohmann::json;

constexpr char kGlossIntro[] =
    "You are an expert in Arabic.\n"
    "\n"
    "You are given the undiacritized proper noun in Arabic and its English gloss.\n"
    "Your task is to generate the corresponding diacritized proper noun lemma in Arabic.\n"
    "Arabic lemmas are dictionary entries that have no attached definite article (ال).\n"
    "Diacritization is adding the correct diacritic markings to undiacritized words.\n"
    "\n"
    "Remove the Arabic definite article (ال) when present.\n"
    "Do not add, remove, or substitute any other letters in the input.\n"
    "Determine the most accurate diacritization that matches the English gloss pronunciation.\n";

constexpr char kArabicOnlyIntro[] =
    "You are an expert in Arabic.\n"
    "\n"
    "You are given the undiacritized proper noun in Arabic.\n"
    "Your task is to generate the corresponding diacritized proper noun lemma in Arabic.\n"
    "Arabic lemmas are dictionary entries that have no attached definite article (ال).\n"
    "Diacritization is adding the correct diacritic markings to undiacritized words.\n"
    "\n"
    "Remove the Arabic definite article (ال) when present.\n"
    "Do not add, remove, or substitute any other letters in the input.\n";

constexpr char kGlossColumns[] =
    "Each row contains an undiacritized proper noun in Arabic in the "
    "“Input” column and its English gloss in the “Gloss” "
    "column.\n";

constexpr char kArabicOnlyColumns[] =
    "Each row contains an undiacritized proper noun in Arabic in the "
    "“Input” column.\n";

constexpr char kGlossExamplesLead[] =
    "Here are some examples of triplets of an undiacritized proper noun in "
    "Arabic (“Input”), its respective English gloss "
    "(“Gloss”), and its diacritized lemma (“Output”) for "
    "reference\n";

constexpr char kArabicOnlyExamplesLead[] =
    "Here are some examples of pairs of an undiacritized proper noun in "
    "Arabic (“Input”), and its diacritized lemma (“Output”) "
    "for reference\n";

std::string example_table(std::span<const FewShotExample> examples,
                          InputFormat format) {
  std::ostringstream out;
  if (format == InputFormat::ArabicGloss) {
    out << "| Input | Gloss | Output |\n| --- | --- | --- |\n";
    for (const FewShotExample& ex : examples) {
      out << "| " << ex.arabic_input << " | " << ex.gloss << " | " << ex.lemma
          << " |\n";
    }
  } else {
    out << "| Input | Output |\n| --- | --- |\n";
    for (const FewShotExample& ex : examples) {
      out << "| " << ex.arabic_input << " | " << ex.lemma << " |\n";
    }
  }
  return out.str();
}

std::string batch_table(std::span<const Entry> batch, InputFormat format) {
  std::ostringstream out;
  if (format == InputFormat::ArabicGloss) {
    out << "| Input | Gloss |\n| --- | --- |\n";
    for (const Entry& entry : batch) {
      out << "| " << entry.arabic_input << " | " << entry.gloss << " |\n";
    }
  } else {
    out << "| Input |\n| --- |\n";
    for (const Entry& entry : batch) {
      out << "| " << entry.arabic_input << " |\n";
    }
  }
  return out.str();
}

}  // namespace

const char* shots_name(Shots shots) {
  switch (shots) {
    case Shots::Zero: return "zero";
    case Shots::One: return "one";
    case Shots::Few: return "few";
  }
  return "?";
}

const char* input_format_name(InputFormat format) {
  return format == InputFormat::ArabicGloss ? "arabic+gloss" : "arabic-only";
}

std::vector<FewShotExample> load_examples(const std::string& path) {
  std::vector<FewShotExample> examples;
  for (const tsv::Row& row : tsv::read_rows(path)) {
    if (row.cells.size() != 3) {
      throw BenchError(BenchError::Code::BadConfig,
                       path + ":" + std::to_string(row.line) +
                           ": expected <arabic_input>\\t<gloss>\\t<lemma>");
    }
    examples.push_back(FewShotExample{tsv::trim(row.cells[0]),
                                      tsv::trim(row.cells[1]),
                                      tsv::trim(row.cells[2])});
  }
  return examples;
}

Prompt build_prompt(const PromptConfig& config, std::span<const Entry> batch,
                    std::span<const FewShotExample> examples) {
  if (batch.empty()) {
    throw BenchError(BenchError::Code::BadConfig, "empty prompt batch");
  }
  size_t rows = batch.size();
  bool gloss = config.format == InputFormat::ArabicGloss;

  std::ostringstream system;
  system << (gloss ? kGlossIntro : kArabicOnlyIntro);
  system << "\nThe user will provide a Markdown table with " << rows
         << " rows.\n";
  system << (gloss ? kGlossColumns : kArabicOnlyColumns);
  system << "\nReturn exactly " << rows << " diacritized lemmas, one per line.\n"
         << "Do not include extra text, explanations, or formatting.";

  if (config.shots != Shots::Zero) {
    size_t need = config.shots == Shots::One ? 1 : config.few_count;
    if (examples.size() < need) {
      throw BenchError(BenchError::Code::InsufficientExamples,
                       "need " + std::to_string(need) + " examples, have " +
                           std::to_string(examples.size()));
    }
    system << "\n\n" << (gloss ? kGlossExamplesLead : kArabicOnlyExamplesLead)
           << "\n" << example_table(examples.first(need), config.format);
  }

  Prompt prompt;
  prompt.system_message = system.str();
  prompt.user_message = batch_table(batch, config.format);
  return prompt;
}

std::vector<std::string> parse_response(std::string_view text,
                                        size_t expected_count) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    std::string trimmed = tsv::trim(line);
    if (!trimmed.empty()) lines.push_back(std::move(trimmed));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (lines.size() != expected_count) {
    throw BenchError(BenchError::Code::LineCountMismatch,
                     "expected " + std::to_string(expected_count) +
                         " lines, got " + std::to_string(lines.size()));
  }
  for (const std::string& line : lines) {
    for (char32_t cp : utf8::decode(line)) {
      if (!is_supported_letter(cp) && !mark_of(cp) && !is_nunation(cp)) {
        throw BenchError(BenchError::Code::NonArabicPayload,
                         "non-Arabic content in line \"" + line + "\"");
      }
    }
  }
  return lines;
}

// ---- replay client ----------------------------------------------------------

ReplayClient::ReplayClient(const std::string& path) {
  std::string text = tsv::read_file(path);
  size_t pos = 0, line_no = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? std::string_view(text).substr(pos)
                                : std::string_view(text).substr(pos, nl - pos);
    ++line_no;
    if (!tsv::trim(line).empty()) {
      json record = json::parse(line, nullptr, false);
      if (record.is_discarded() || !record.contains("digest") ||
          !record.contains("response")) {
        throw BenchError(BenchError::Code::BadConfig,
                         path + ":" + std::to_string(line_no) +
                             ": bad replay record");
      }
      responses_[record["digest"].get<std::string>()] =
          record["response"].get<std::string>();
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

std::string ReplayClient::complete(const std::string& system_message,
                                   const std::string& user_message) {
  std::string digest = request_digest(system_message, user_message);
  auto it = responses_.find(digest);
  if (it == responses_.end()) {
    throw BenchError(BenchError::Code::MissingRecording,
                     "no recorded response for digest " + digest);
  }
  return it->second;
}

// ---- live client ------------------------------------------------------------

HttpModelClient::HttpModelClient(HttpClientConfig config)
    : config_(std::move(config)) {
  if (config_.api_key.empty()) {
    throw BenchError(BenchError::Code::BadConfig,
                     "missing credentials: set MODEL_API_KEY");
  }
  size_t scheme = config_.endpoint.find("://");
  if (scheme == std::string::npos) {
    throw BenchError(BenchError::Code::BadConfig,
                     "endpoint must include a scheme: " + config_.endpoint);
  }
  size_t slash = config_.endpoint.find('/', scheme + 3);
  scheme_host_ = config_.endpoint.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme_host_.starts_with("https://")) {
    throw BenchError(BenchError::Code::BadConfig,
                     "built without TLS support; use an http endpoint");
  }
#endif
}

std::string HttpModelClient::complete(const std::string& system_message,
                                      const std::string& user_message) {
  json body = {
      {"model", config_.model},
      {"messages",
       {{{"role", "system"}, {"content", system_message}},
        {{"role", "user"}, {"content", user_message}}}},
  };
  std::string payload = body.dump();
  httplib::Headers headers = {
      {"Authorization", "Bearer " + config_.api_key},
  };

  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config_.backoff_ms << (attempt - 1)));
    }
    httplib::Client client(scheme_host_);
    client.set_connection_timeout(config_.timeout_s, 0);
    client.set_read_timeout(config_.timeout_s, 0);
    httplib::Result res =
        client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      json reply = json::parse(res->body, nullptr, false);
      if (reply.is_discarded() || !reply.contains("choices") ||
          reply["choices"].empty()) {
        throw BenchError(BenchError::Code::Transport,
                         "malformed completion response");
      }
      return reply["choices"][0]["message"]["content"].get<std::string>();
    }
    last_error = "HTTP " + std::to_string(res->status);
    bool retriable = res->status == 429 || res->status >= 500;
    if (!retriable) break;
  }
  throw BenchError(BenchError::Code::Transport, last_error);
}

// ---- benchmark driver ---------------------------------------------------------

namespace {

struct BatchOutcome {
  std::vector<BenchRecord> records;
  std::string digest;
  std::string response;
  bool completed = false;  // a response came back and can be recorded
};

BenchRecord failed_record(const Entry& entry, const std::string& raw,
                          const std::string& error) {
  BenchRecord rec;
  rec.id = entry.id;
  rec.raw = raw;
  rec.failed = true;
  rec.error = error;
  return rec;
}

void score_batch(std::span<const Entry> batch,
                 const std::vector<std::string>& lines, BatchOutcome& out) {
  for (size_t i = 0; i < batch.size(); ++i) {
    const Entry& entry = batch[i];
    const std::string& line = lines[i];
    DiacritizedWord raw_word;
    try {
      raw_word = parse_arabic(line);
    } catch (const ParseError& e) {
      out.records.push_back(failed_record(
          entry, line,
          std::string("unparseable output: ") + parse_error_name(e.code()) +
              " at " + std::to_string(e.position())));
      continue;
    }
    NormalizeResult repaired = normalize(raw_word);
    const DiacritizedWord& reference = *entry.gold_lemma;

    BenchRecord rec;
    rec.id = entry.id;
    rec.raw = line;
    rec.normalized = repaired.word.render();
    rec.exact = rec.normalized == reference.render();
    rec.distance = edit_distance(repaired.word, reference);
    rec.raw_distance = edit_distance(raw_word, reference);
    Classification c = classify_error(repaired.word, reference);
    rec.error_class = c.klass;
    rec.letter_pair = c.letter_pair;
    rec.repair_trace = serialize_trace(repaired.trace);
    out.records.push_back(std::move(rec));
  }
}

}  // namespace

BenchResult run_benchmark(std::span<const Entry> entries, ModelClient& client,
                          const PromptConfig& config,
                          const BenchOptions& options) {
  for (const Entry& entry : entries) {
    if (!entry.gold_lemma) {
      throw BenchError(BenchError::Code::BadConfig,
                       "entry " + entry.id + " has no gold lemma");
    }
  }
  std::vector<FewShotExample> examples;
  if (config.shots != Shots::Zero) {
    if (config.few_shot_source.empty()) {
      throw BenchError(BenchError::Code::BadConfig,
                       "one/few-shot prompting needs an examples file");
    }
    examples = load_examples(config.few_shot_source);
    size_t need = config.shots == Shots::One ? 1 : config.few_count;
    if (examples.size() < need) {
      throw BenchError(BenchError::Code::InsufficientExamples,
                       "need " + std::to_string(need) + " examples, have " +
                           std::to_string(examples.size()));
    }
  }

  size_t batch_size = std::max<size_t>(1, config.batch_size);
  size_t batch_count = (entries.size() + batch_size - 1) / batch_size;
  std::vector<BatchOutcome> outcomes(batch_count);

  auto process_batch = [&](size_t b) {
    std::span<const Entry> batch = entries.subspan(
        b * batch_size, std::min(batch_size, entries.size() - b * batch_size));
    BatchOutcome& out = outcomes[b];
    Prompt prompt = build_prompt(config, batch, examples);
    out.digest = request_digest(prompt.system_message, prompt.user_message);
    std::string response;
    try {
      response = client.complete(prompt.system_message, prompt.user_message);
    } catch (const std::exception& e) {
      for (const Entry& entry : batch) {
        out.records.push_back(failed_record(entry, "", e.what()));
      }
      return;
    }
    out.response = response;
    out.completed = true;
    std::vector<std::string> lines;
    try {
      lines = parse_response(response, batch.size());
    } catch (const BenchError& e) {
      for (const Entry& entry : batch) {
        out.records.push_back(failed_record(entry, response, e.what()));
      }
      return;
    }
    score_batch(batch, lines, out);
  };

  size_t workers = std::min(std::max<size_t>(1, options.max_inflight), batch_count);
  if (workers <= 1) {
    for (size_t b = 0; b < batch_count; ++b) process_batch(b);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          size_t b = next.fetch_add(1);
          if (b >= batch_count) break;
          process_batch(b);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  if (!options.record_path.empty()) {
    std::ofstream log(options.record_path, std::ios::binary | std::ios::app);
    if (!log) {
      throw BenchError(BenchError::Code::BadConfig,
                       "cannot open " + options.record_path + " for writing");
    }
    for (const BatchOutcome& out : outcomes) {
      if (!out.completed) continue;
      json record = {{"digest", out.digest}, {"response", out.response}};
      log << record.dump() << '\n';
    }
  }

  BenchResult result;
  result.summary.shots = config.shots;
  result.summary.format = config.format;
  result.summary.batch_size = batch_size;

  std::vector<EvalRecord> diac_only;
  size_t scored = 0, matches = 0;
  long long distance_sum = 0;
  for (size_t b = 0; b < batch_count; ++b) {
    std::span<const Entry> batch = entries.subspan(
        b * batch_size, std::min(batch_size, entries.size() - b * batch_size));
    BatchOutcome& out = outcomes[b];
    for (size_t i = 0; i < out.records.size(); ++i) {
      BenchRecord& rec = out.records[i];
      if (rec.failed) {
        ++result.summary.failed;
      } else {
        ++scored;
        if (rec.exact) ++matches;
        distance_sum += rec.distance;
        ++result.summary.class_histogram[error_class_name(rec.error_class)];
        if (rec.error_class == ErrorClass::DiacOnly) {
          EvalRecord ev;
          ev.id = rec.id;
          ev.prediction = rec.normalized;
          ev.reference = batch[i].gold_lemma->render();
          diac_only.push_back(std::move(ev));
        }
        if (!rec.repair_trace.empty()) {
          std::istringstream steps(rec.repair_trace);
          std::string step;
          while (steps >> step) {
            size_t at = step.rfind('@');
            ++result.summary.repair_counts[step.substr(0, at)];
          }
        }
      }
      result.records.push_back(std::move(rec));
    }
  }
  result.summary.total = result.records.size();
  if (scored > 0) {
    result.summary.accuracy =
        static_cast<double>(matches) / static_cast<double>(scored);
    result.summary.mean_distance =
        static_cast<double>(distance_sum) / static_cast<double>(scored);
  }
  result.summary.confusion = diacritic_confusion(diac_only);
  return result;
}

std::string write_records(std::span<const BenchRecord> records) {
  // Failed records carry whole responses in `raw`; keep the TSV rectangular.
  auto sanitize = [](std::string text) {
    for (char& c : text) {
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return text;
  };
  std::ostringstream out;
  out << "id\traw\tnormalized\texact\tdistance\traw_distance\terror_class\t"
         "repair_trace\terror\n";
  for (const BenchRecord& rec : records) {
    out << rec.id << '\t' << sanitize(rec.raw) << '\t' << rec.normalized
        << '\t';
    if (rec.failed) {
      out << "-\t-\t-\tfailed\t-\t" << sanitize(rec.error) << '\n';
      continue;
    }
    out << (rec.exact ? 1 : 0) << '\t' << rec.distance << '\t'
        << rec.raw_distance << '\t' << error_class_name(rec.error_class);
    if (rec.letter_pair) {
      out << '(' << utf8::encode(rec.letter_pair->first) << "↔"
          << utf8::encode(rec.letter_pair->second) << ')';
    }
    out << '\t' << rec.repair_trace << "\t\n";
  }
  return out.str();
}

std::string write_summary(const BenchSummary& summary) {
  std::ostringstream out;
  char buf[64];
  out << "shots\t" << shots_name(summary.shots) << '\n';
  out << "format\t" << input_format_name(summary.format) << '\n';
  out << "batch_size\t" << summary.batch_size << '\n';
  out << "total\t" << summary.total << '\n';
  out << "failed\t" << summary.failed << '\n';
  std::snprintf(buf, sizeof(buf), "%.4f", summary.accuracy);
  out << "accuracy\t" << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.4f", summary.mean_distance);
  out << "mean_distance\t" << buf << '\n';
  for (const auto& [name, count] : summary.class_histogram) {
    out << "class_" << name << '\t' << count << '\n';
  }
  for (const auto& [mark, delta] : summary.confusion) {
    std::snprintf(buf, sizeof(buf), "%+.4f", delta);
    out << "confusion_" << mark_name(mark) << '\t' << buf << '\n';
  }
  for (const auto& [step, count] : summary.repair_counts) {
    out << "repair_" << step << '\t' << count << '\n';
  }
  return out.str();
}

}  // namespace diactk
