// Builds a replay log for a dataset from a prediction table: for each entry,
// the prompt is constructed exactly as the bench harness would, and the
// recorded response is the given prediction. Any later prompt-template edit
// changes the digests and makes stale logs fail loudly.

#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "diactk/bench.hpp"
#include "diactk/dataset.hpp"
#include "diactk/digest.hpp"
#include "diactk/tsv.hpp"
#include "json.hpp"

using namespace diactk;

int main(int argc, char** argv) {
  std::string dataset_path, predictions_path, examples_path, out_path;
  std::string config_shots = "few", config_format = "arabic+gloss";
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    auto next = [&](std::string& slot) {
      if (i + 1 >= argc) {
        std::cerr << "missing value for " << arg << '\n';
        std::exit(2);
      }
      slot = argv[++i];
    };
    if (arg == "--dataset") next(dataset_path);
    else if (arg == "--predictions") next(predictions_path);
    else if (arg == "--examples") next(examples_path);
    else if (arg == "--out") next(out_path);
    else if (arg == "--shots") next(config_shots);
    else if (arg == "--format") next(config_format);
    else {
      std::cerr << "usage: make_replay --dataset D --predictions P "
                   "--examples E --out OUT [--shots S] [--format F]\n";
      return 2;
    }
  }
  if (dataset_path.empty() || predictions_path.empty() || out_path.empty()) {
    std::cerr << "--dataset, --predictions, and --out are required\n";
    return 2;
  }

  try {
    // Prediction table: header with at least id + prediction columns. Row ids
    // are matched against entry ids minus the gloss ordinal suffix.
    std::vector<tsv::Row> rows = tsv::read_rows(predictions_path);
    const std::vector<std::string>& header = rows.front().cells;
    size_t id_col = header.size(), pred_col = header.size();
    for (size_t i = 0; i < header.size(); ++i) {
      if (tsv::trim(header[i]) == "id") id_col = i;
      if (tsv::trim(header[i]) == "prediction") pred_col = i;
    }
    if (id_col == header.size() || pred_col == header.size()) {
      std::cerr << predictions_path << ": need id and prediction columns\n";
      return 2;
    }
    std::map<std::string, std::string> predictions;
    for (size_t r = 1; r < rows.size(); ++r) {
      predictions[tsv::trim(rows[r].cells[id_col])] =
          tsv::trim(rows[r].cells[pred_col]);
    }

    PromptConfig config;
    config.shots = config_shots == "zero"  ? Shots::Zero
                   : config_shots == "one" ? Shots::One
                                           : Shots::Few;
    config.format = config_format == "arabic-only" ? InputFormat::ArabicOnly
                                                   : InputFormat::ArabicGloss;
    std::vector<FewShotExample> examples;
    if (config.shots != Shots::Zero) examples = load_examples(examples_path);

    std::ostringstream log;
    for (const Entry& entry : load_entries(dataset_path)) {
      std::string row_id = entry.id.substr(0, entry.id.rfind('#'));
      auto it = predictions.find(row_id);
      if (it == predictions.end()) {
        std::cerr << "no prediction for row " << row_id << '\n';
        return 2;
      }
      Prompt prompt = build_prompt(config, {&entry, 1}, examples);
      nlohmann::json record = {
          {"digest", request_digest(prompt.system_message, prompt.user_message)},
          {"response", it->second + "\n"},
      };
      log << record.dump() << '\n';
    }
    tsv::write_file(out_path, log.str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::cout << "wrote " << out_path << '\n';
  return 0;
}
