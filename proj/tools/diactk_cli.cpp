// Command-line front end: validate, normalize, hsb, check-lemma, stats,
// evaluate, analyze, bench. All I/O is TSV or one-word-per-line text.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diactk/bench.hpp"
#include "diactk/dataset.hpp"
#include "diactk/eval.hpp"
#include "diactk/lemma.hpp"
#include "diactk/normalize.hpp"
#include "diactk/script.hpp"
#include "diactk/tsv.hpp"
#include "diactk/utf8.hpp"
#include "diactk/validate.hpp"

namespace {

using namespace diactk;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    tsv::write_file(out_path, content);
  }
}

ValidationMode mode_of(const std::string& profile) {
  return profile == "surface" ? ValidationMode::Surface : ValidationMode::Lemma;
}

struct CommonOpts {
  std::string in_path;
  std::string out_path;
};

// ---- validate ---------------------------------------------------------------

int cmd_validate(const CommonOpts& io, const std::string& profile, bool gate) {
  size_t findings = 0;
  std::ostringstream out;
  for (const tsv::Row& row : tsv::read_rows(io.in_path)) {
    // Either "<word>" or "<undiacritized input>\t<word>"; the input column
    // feeds the leading-determiner check.
    const std::string& word_text =
        row.cells.size() >= 2 ? row.cells[1] : row.cells[0];
    std::string input_skeleton = row.cells.size() >= 2 ? row.cells[0] : "";
    std::vector<Violation> violations;
    try {
      DiacritizedWord word = parse_arabic(tsv::trim(word_text));
      violations = input_skeleton.empty()
                       ? validate(word, mode_of(profile))
                       : validate(word, mode_of(profile),
                                  tsv::trim(input_skeleton));
    } catch (const ParseError& e) {
      ++findings;
      out << row.line << '\t' << tsv::trim(word_text) << "\tparse\t"
          << e.position() << '\t' << parse_error_name(e.code()) << '\n';
      continue;
    }
    findings += violations.size();
    for (const Violation& v : violations) {
      out << row.line << '\t' << tsv::trim(word_text) << '\t'
          << rule_code_name(v.code) << '\t' << v.position << '\t' << v.message
          << '\n';
    }
  }
  emit(io.out_path, out.str());
  return gate && findings > 0 ? 1 : 0;
}

// ---- normalize ----------------------------------------------------------------

int cmd_normalize(const CommonOpts& io, bool trace,
                  const std::string& map_path) {
  ForeignLetterMap map =
      map_path.empty() ? ForeignLetterMap::standard()
                       : ForeignLetterMap::from_file(map_path);
  std::ostringstream out;
  for (const tsv::Row& row : tsv::read_rows(io.in_path)) {
    NormalizeResult result = normalize(parse_arabic(tsv::trim(row.cells[0])), map);
    out << result.word.render();
    if (trace) out << '\t' << serialize_trace(result.trace);
    out << '\n';
  }
  emit(io.out_path, out.str());
  return 0;
}

// ---- hsb -----------------------------------------------------------------------

int cmd_hsb(const CommonOpts& io, const std::string& dir,
            const std::string& table_path) {
  HsbTable table = table_path.empty() ? HsbTable::standard()
                                      : HsbTable::from_file(table_path);
  std::ostringstream out;
  for (const tsv::Row& row : tsv::read_rows(io.in_path)) {
    std::string text = tsv::trim(row.cells[0]);
    if (dir == "to") {
      out << to_hsb(parse_arabic(text), table) << '\n';
    } else {
      out << from_hsb(text, table).render() << '\n';
    }
  }
  emit(io.out_path, out.str());
  return 0;
}

// ---- check-lemma ----------------------------------------------------------------

int cmd_check_lemma(const CommonOpts& io) {
  std::ostringstream out;
  for (const tsv::Row& row : tsv::read_rows(io.in_path)) {
    if (row.cells.size() < 2) {
      throw std::runtime_error(io.in_path + ":" + std::to_string(row.line) +
                               ": expected <input>\\t<lemma>");
    }
    std::string input = tsv::trim(row.cells[0]);
    std::string lemma_text = tsv::trim(row.cells[1]);
    IntegrityReport report = check_integrity(input, parse_arabic(lemma_text));
    out << input << '\t' << lemma_text << '\t' << (report.ok ? "ok" : "fail")
        << '\t';
    for (size_t i = 0; i < report.transforms.size(); ++i) {
      if (i) out << ',';
      out << transform_kind_name(report.transforms[i]);
    }
    out << '\t';
    if (report.diff) out << *report.diff;
    out << '\n';
  }
  emit(io.out_path, out.str());
  return 0;
}

// ---- dataset loading shared by stats/evaluate/analyze/bench ---------------------

ColumnMap column_map_from(const std::vector<std::string>& overrides) {
  ColumnMap map;
  for (const std::string& spec : overrides) {
    size_t eq = spec.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--col expects canonical=actual, got " + spec);
    }
    std::string canonical = spec.substr(0, eq), actual = spec.substr(eq + 1);
    if (canonical == "id") map.id = actual;
    else if (canonical == "arabic_input") map.arabic_input = actual;
    else if (canonical == "gloss") map.gloss = actual;
    else if (canonical == "gold_lemma") map.gold_lemma = actual;
    else if (canonical == "frequency") map.frequency = actual;
    else if (canonical == "entity_class") map.entity_class = actual;
    else throw std::runtime_error("unknown canonical column " + canonical);
  }
  return map;
}

int cmd_stats(const CommonOpts& io, const std::string& freq_path,
              const std::vector<std::string>& cols) {
  std::vector<Entry> entries = load_entries(io.in_path, column_map_from(cols));
  if (!freq_path.empty()) {
    for (const std::string& warning : attach_frequencies(entries, freq_path)) {
      std::cerr << "warning: " << warning << '\n';
    }
  }
  emit(io.out_path, write_stats(summarize(entries)));
  return 0;
}

// ---- evaluate / analyze -----------------------------------------------------------

std::vector<ScorePair> load_score_pairs(const std::string& path) {
  std::vector<tsv::Row> rows = tsv::read_rows(path);
  if (rows.empty()) throw std::runtime_error(path + ": empty file");
  const std::vector<std::string>& header = rows.front().cells;
  auto col = [&](const std::string& name) -> std::optional<size_t> {
    for (size_t i = 0; i < header.size(); ++i) {
      if (tsv::trim(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  auto need = [&](const std::string& name) {
    auto idx = col(name);
    if (!idx) throw std::runtime_error(path + ": missing column " + name);
    return *idx;
  };
  size_t id_col = need("id"), input_col = need("arabic_input"),
         gloss_col = need("gloss"), ref_col = need("reference"),
         pred_col = need("prediction");
  std::optional<size_t> freq_col = col("frequency");

  std::vector<ScorePair> pairs;
  for (size_t r = 1; r < rows.size(); ++r) {
    const tsv::Row& row = rows[r];
    if (row.cells.size() != header.size()) {
      throw std::runtime_error(path + ":" + std::to_string(row.line) +
                               ": ragged row");
    }
    ScorePair pair;
    pair.id = tsv::trim(row.cells[id_col]);
    pair.arabic_skeleton = tsv::trim(row.cells[input_col]);
    pair.gloss = tsv::trim(row.cells[gloss_col]);
    pair.reference = parse_arabic(tsv::trim(row.cells[ref_col]));
    pair.prediction = parse_arabic(tsv::trim(row.cells[pred_col]));
    if (freq_col) pair.frequency = std::stoll(tsv::trim(row.cells[*freq_col]));
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

int cmd_evaluate(const CommonOpts& io, const std::string& pairs_path) {
  LetterSubPairs subs = pairs_path.empty()
                            ? LetterSubPairs::standard()
                            : LetterSubPairs::from_file(pairs_path);
  std::vector<ScorePair> pairs = load_score_pairs(io.in_path);
  std::vector<EvalRecord> records = score_pairs(pairs, subs);

  std::ostringstream out;
  out << "id\texact\tdistance\terror_class\tfreeman\tfrequency\n";
  size_t matches = 0;
  long long dist_sum = 0;
  std::map<std::string, size_t> histogram;
  std::vector<EvalRecord> diac_only;
  char buf[64];
  for (const EvalRecord& rec : records) {
    std::snprintf(buf, sizeof(buf), "%.4f", rec.freeman);
    out << rec.id << '\t' << (rec.exact ? 1 : 0) << '\t' << rec.distance
        << '\t' << error_class_name(rec.error_class);
    if (rec.letter_pair) {
      out << '(' << utf8::encode(rec.letter_pair->first) << "↔"
          << utf8::encode(rec.letter_pair->second) << ')';
    }
    out << '\t' << buf << '\t' << rec.frequency << '\n';
    if (rec.exact) ++matches;
    dist_sum += rec.distance;
    ++histogram[error_class_name(rec.error_class)];
    if (rec.error_class == ErrorClass::DiacOnly) diac_only.push_back(rec);
  }
  if (!records.empty()) {
    double n = static_cast<double>(records.size());
    std::snprintf(buf, sizeof(buf), "%.4f", static_cast<double>(matches) / n);
    out << "# accuracy: " << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%.4f", static_cast<double>(dist_sum) / n);
    out << "# mean_distance: " << buf << '\n';
    for (const auto& [name, count] : histogram) {
      out << "# class_" << name << ": " << count << '\n';
    }
    for (const auto& [mark, delta] : diacritic_confusion(diac_only)) {
      std::snprintf(buf, sizeof(buf), "%+.4f", delta);
      out << "# confusion_" << mark_name(mark) << ": " << buf << '\n';
    }
  }
  emit(io.out_path, out.str());
  return 0;
}

int cmd_analyze(const CommonOpts& io, const std::string& key_name,
                const std::string& bins, bool quartiles) {
  std::vector<ScorePair> pairs = load_score_pairs(io.in_path);
  std::vector<EvalRecord> records = score_pairs(pairs);
  BinKey key = key_name == "frequency" ? BinKey::Frequency : BinKey::Freeman;
  BinScheme scheme = BinScheme::quartiles();
  if (!quartiles) {
    if (bins.empty()) {
      throw std::runtime_error("analyze needs --bins or --quartiles");
    }
    std::vector<double> edges;
    std::istringstream parts(bins);
    std::string part;
    while (std::getline(parts, part, ',')) edges.push_back(std::stod(part));
    scheme = BinScheme::from_edges(std::move(edges));
  }
  emit(io.out_path, write_bin_report(bin_analysis(records, key, scheme), key));
  return 0;
}

// ---- bench -------------------------------------------------------------------------

int cmd_bench(const CommonOpts& io, const std::string& replay_path,
              const std::string& endpoint, const std::string& model,
              const std::string& config_preset, std::string shots_name_opt,
              std::string format_name_opt, const std::string& examples_path,
              size_t few_shots, size_t batch_size, size_t max_inflight,
              const std::string& record_path,
              const std::vector<std::string>& cols) {
  PromptConfig config;
  if (!config_preset.empty()) {
    // Presets: {zero,one,few} x {gloss,arabic}, e.g. "few_gloss".
    size_t underscore = config_preset.find('_');
    if (underscore == std::string::npos) {
      throw std::runtime_error("bad --config preset " + config_preset);
    }
    shots_name_opt = config_preset.substr(0, underscore);
    std::string kind = config_preset.substr(underscore + 1);
    format_name_opt = kind == "arabic" ? "arabic-only" : "arabic+gloss";
  }
  if (shots_name_opt == "zero" || shots_name_opt.empty()) config.shots = Shots::Zero;
  else if (shots_name_opt == "one") config.shots = Shots::One;
  else if (shots_name_opt == "few") config.shots = Shots::Few;
  else throw std::runtime_error("bad --shots " + shots_name_opt);
  if (format_name_opt == "arabic-only") config.format = InputFormat::ArabicOnly;
  else config.format = InputFormat::ArabicGloss;
  config.batch_size = batch_size;
  config.few_count = few_shots;
  config.few_shot_source = examples_path;

  std::vector<Entry> entries = load_entries(io.in_path, column_map_from(cols));

  std::unique_ptr<ModelClient> client;
  if (!replay_path.empty()) {
    client = std::make_unique<ReplayClient>(replay_path);
  } else {
    if (endpoint.empty()) {
      throw std::runtime_error("bench needs --replay or --endpoint");
    }
    HttpClientConfig http;
    http.endpoint = endpoint;
    http.model = model;
    const char* key = std::getenv("MODEL_API_KEY");
    http.api_key = key ? key : "";
    client = std::make_unique<HttpModelClient>(std::move(http));
  }

  BenchOptions options;
  options.max_inflight = max_inflight;
  options.record_path = record_path;
  BenchResult result = run_benchmark(entries, *client, config, options);

  if (!io.out_path.empty()) {
    tsv::write_file(io.out_path, write_records(result.records));
  }
  std::cout << write_summary(result.summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diacritized Arabic proper-noun toolkit"};
  app.require_subcommand(1);

  CommonOpts io;
  std::string profile = "lemma";
  bool gate = false;
  bool trace = false;
  std::string table_path, map_path, dir = "to";
  std::string freq_path, key_name = "freeman", bins;
  bool quartiles = false;
  std::string replay_path, endpoint, model = "gpt-4o-2024-11-20";
  std::string config_preset, shots = "zero", format = "arabic+gloss";
  std::string examples_path, record_path, pairs_path;
  size_t few_shots = 80, batch_size = 1, max_inflight = 4;
  std::vector<std::string> cols;

  auto add_io = [&io](CLI::App* cmd, bool need_out = false) {
    cmd->add_option("--in", io.in_path, "input file")->required();
    auto* out = cmd->add_option("--out", io.out_path, "output file (default stdout)");
    if (need_out) out->required();
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check well-formedness");
  add_io(validate_cmd);
  validate_cmd->add_option("--profile", profile, "lemma|surface")
      ->check(CLI::IsMember({"lemma", "surface"}));
  validate_cmd->add_flag("--gate", gate, "exit 1 when findings are present");

  CLI::App* normalize_cmd = app.add_subcommand("normalize", "repair malformed words");
  add_io(normalize_cmd);
  normalize_cmd->add_flag("--trace", trace, "append repair traces");
  normalize_cmd->add_option("--map", map_path, "foreign-letter map TSV");

  CLI::App* hsb_cmd = app.add_subcommand("hsb", "romanize or deromanize");
  add_io(hsb_cmd);
  hsb_cmd->add_option("--dir", dir, "to|from")
      ->check(CLI::IsMember({"to", "from"}));
  hsb_cmd->add_option("--table", table_path, "romanization table TSV");

  CLI::App* lemma_cmd = app.add_subcommand("check-lemma", "input/lemma integrity");
  add_io(lemma_cmd);

  CLI::App* stats_cmd = app.add_subcommand("stats", "corpus statistics");
  add_io(stats_cmd);
  stats_cmd->add_option("--freq", freq_path, "frequency list TSV");
  stats_cmd->add_option("--col", cols, "column mapping canonical=actual");

  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "score predictions");
  add_io(evaluate_cmd);
  evaluate_cmd->add_option("--pairs", pairs_path, "letter-sub pairs TSV");

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "binned analysis");
  add_io(analyze_cmd);
  analyze_cmd->add_option("--key", key_name, "freeman|frequency")
      ->check(CLI::IsMember({"freeman", "frequency"}));
  analyze_cmd->add_option("--bins", bins, "comma-separated ascending edges");
  analyze_cmd->add_flag("--quartiles", quartiles, "bin by value quartiles");

  CLI::App* bench_cmd = app.add_subcommand("bench", "prompt, repair, and score");
  add_io(bench_cmd);
  bench_cmd->add_option("--replay", replay_path, "replay log (offline)");
  bench_cmd->add_option("--endpoint", endpoint, "chat-completion URL");
  bench_cmd->add_option("--model", model, "model name");
  bench_cmd->add_option("--config", config_preset,
                        "preset {zero,one,few}_{gloss,arabic}");
  bench_cmd->add_option("--shots", shots, "zero|one|few")
      ->check(CLI::IsMember({"zero", "one", "few"}));
  bench_cmd->add_option("--format", format, "arabic+gloss|arabic-only")
      ->check(CLI::IsMember({"arabic+gloss", "arabic-only"}));
  bench_cmd->add_option("--examples", examples_path, "few-shot examples TSV");
  bench_cmd->add_option("--few-shots", few_shots, "examples used in few mode");
  bench_cmd->add_option("--batch-size", batch_size, "entries per request");
  bench_cmd->add_option("--max-inflight", max_inflight, "concurrent requests");
  bench_cmd->add_option("--record", record_path, "append digest/response log");
  bench_cmd->add_option("--col", cols, "column mapping canonical=actual");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(io, profile, gate);
    if (app.got_subcommand(normalize_cmd)) return cmd_normalize(io, trace, map_path);
    if (app.got_subcommand(hsb_cmd)) return cmd_hsb(io, dir, table_path);
    if (app.got_subcommand(lemma_cmd)) return cmd_check_lemma(io);
    if (app.got_subcommand(stats_cmd)) return cmd_stats(io, freq_path, cols);
    if (app.got_subcommand(evaluate_cmd)) return cmd_evaluate(io, pairs_path);
    if (app.got_subcommand(analyze_cmd)) {
      return cmd_analyze(io, key_name, bins, quartiles);
    }
    if (app.got_subcommand(bench_cmd)) {
      return cmd_bench(io, replay_path, endpoint, model, config_preset, shots,
                       format, examples_path, few_shots, batch_size,
                       max_inflight, record_path, cols);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
