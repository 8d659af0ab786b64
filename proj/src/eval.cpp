#include "diactk/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "diactk/tsv.hpp"
#include "diactk/utf8.hpp"

namespace diactk {
namespace {

std::string fmt_double(double value, const char* spec = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, value);
  return buf;
}

char32_t single_codepoint(const std::string& cell, const std::string& path,
                          size_t line) {
  std::u32string cps = utf8::decode(cell);
  if (cps.size() != 1) {
    throw std::runtime_error(path + ":" + std::to_string(line) +
                             ": expected a single codepoint, got \"" + cell +
                             "\"");
  }
  return cps[0];
}

}  // namespace

const char* error_class_name(ErrorClass klass) {
  switch (klass) {
    case ErrorClass::ExactMatch: return "exact-match";
    case ErrorClass::DiacOnly: return "diac-only";
    case ErrorClass::Awy: return "awy";
    case ErrorClass::LetterSub: return "letter-sub";
    case ErrorClass::Multiple: return "multiple";
  }
  return "?";
}

const char* mark_name(Mark mark) {
  switch (mark) {
    case Mark::Fatha: return "fatha";
    case Mark::Damma: return "damma";
    case Mark::Kasra: return "kasra";
    case Mark::Sukun: return "sukun";
    case Mark::Shadda: return "shadda";
    case Mark::DaggerAlif: return "dagger-alif";
  }
  return "?";
}

bool exact_match(const DiacritizedWord& prediction,
                 const DiacritizedWord& reference) {
  return prediction.render() == reference.render();
}

int edit_distance_u32(std::u32string_view a, std::u32string_view b) {
  const size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

int edit_distance(const DiacritizedWord& prediction,
                  const DiacritizedWord& reference) {
  return edit_distance_u32(utf8::decode(prediction.render()),
                           utf8::decode(reference.render()));
}

// ---- letter-sub pair set -------------------------------------------------

namespace {
constexpr std::pair<char32_t, char32_t> kDefaultPairs[] = {
    {0x062C, 0x063A},  // jiim / ghain
    {0x062E, 0x0647},  // khaa / haa
    {0x0629, 0x0647},  // taa marbuta / haa
};
}  // namespace

const LetterSubPairs& LetterSubPairs::standard() {
  static const LetterSubPairs table = [] {
    LetterSubPairs t;
    for (auto [a, b] : kDefaultPairs) t.rows_.emplace_back(a, b);
    return t;
  }();
  return table;
}

LetterSubPairs LetterSubPairs::from_file(const std::string& path) {
  LetterSubPairs table;
  for (const auto& row : tsv::read_rows(path)) {
    if (row.cells.size() != 2) {
      throw std::runtime_error(path + ":" + std::to_string(row.line) +
                               ": expected 2 columns");
    }
    table.rows_.emplace_back(single_codepoint(row.cells[0], path, row.line),
                             single_codepoint(row.cells[1], path, row.line));
  }
  return table;
}

bool LetterSubPairs::contains(char32_t a, char32_t b) const {
  for (auto [x, y] : rows_) {
    if ((a == x && b == y) || (a == y && b == x)) return true;
  }
  return false;
}

// ---- error taxonomy -------------------------------------------------------

namespace {

bool is_awy_letter(char32_t cp) {
  switch (cp) {
    case 0x0627:  // alef
    case 0x0623:  // alef hamza above
    case 0x0625:  // alef hamza below
    case 0x0622:  // alef madda
    case 0x0671:  // alef wasla
    case 0x0648:  // waw
    case 0x064A:  // ya
      return true;
    default:
      return false;
  }
}

enum class EditOp { Sub, Del, Ins };

struct Edit {
  EditOp op;
  char32_t from = 0;  // prediction side (Sub, Del)
  char32_t to = 0;    // reference side (Sub, Ins)
};

// Minimal edit script between prediction and reference, with a fixed
// tie-break (diagonal, then delete, then insert) so results are stable.
std::vector<Edit> edit_script(std::u32string_view pred,
                              std::u32string_view ref) {
  const size_t n = pred.size(), m = ref.size();
  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1));
  for (size_t i = 0; i <= n; ++i) dp[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) dp[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      int sub = dp[i - 1][j - 1] + (pred[i - 1] == ref[j - 1] ? 0 : 1);
      dp[i][j] = std::min({sub, dp[i - 1][j] + 1, dp[i][j - 1] + 1});
    }
  }
  std::vector<Edit> script;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        dp[i][j] == dp[i - 1][j - 1] + (pred[i - 1] == ref[j - 1] ? 0 : 1)) {
      if (pred[i - 1] != ref[j - 1]) {
        script.push_back({EditOp::Sub, pred[i - 1], ref[j - 1]});
      }
      --i, --j;
    } else if (i > 0 && dp[i][j] == dp[i - 1][j] + 1) {
      script.push_back({EditOp::Del, pred[i - 1], 0});
      --i;
    } else {
      script.push_back({EditOp::Ins, 0, ref[j - 1]});
      --j;
    }
  }
  std::reverse(script.begin(), script.end());
  return script;
}

}  // namespace

Classification classify_error(const DiacritizedWord& prediction,
                              const DiacritizedWord& reference,
                              const LetterSubPairs& pairs) {
  Classification result;
  if (exact_match(prediction, reference)) {
    result.klass = ErrorClass::ExactMatch;
    return result;
  }
  std::u32string pred_skel = prediction.skeleton_u32();
  std::u32string ref_skel = reference.skeleton_u32();
  if (pred_skel == ref_skel) {
    result.klass = ErrorClass::DiacOnly;
    return result;
  }
  std::vector<Edit> script = edit_script(pred_skel, ref_skel);

  bool all_awy = true;
  bool all_pair_subs = !script.empty();
  for (const Edit& e : script) {
    switch (e.op) {
      case EditOp::Sub:
        if (!is_awy_letter(e.from) || !is_awy_letter(e.to)) all_awy = false;
        if (!pairs.contains(e.from, e.to)) all_pair_subs = false;
        break;
      case EditOp::Del:
        if (!is_awy_letter(e.from)) all_awy = false;
        all_pair_subs = false;
        break;
      case EditOp::Ins:
        if (!is_awy_letter(e.to)) all_awy = false;
        all_pair_subs = false;
        break;
    }
  }
  if (all_awy) {
    result.klass = ErrorClass::Awy;
    return result;
  }
  if (all_pair_subs) {
    result.klass = ErrorClass::LetterSub;
    for (const Edit& e : script) {
      if (e.op == EditOp::Sub) {
        result.letter_pair = std::make_pair(e.to, e.from);  // (reference, prediction)
        break;
      }
    }
    return result;
  }
  result.klass = ErrorClass::Multiple;
  return result;
}

// ---- Freeman similarity ---------------------------------------------------

namespace {

struct FreemanRow {
  char32_t cp;
  const char* klass;
};

constexpr FreemanRow kFreemanRows[] = {
    // Arabic: long-vowel letters, hamza carriers, and ayn share the vowel class.
    {0x0627, "V"}, {0x0623, "V"}, {0x0625, "V"}, {0x0622, "V"}, {0x0671, "V"},
    {0x0649, "V"}, {0x0621, "V"}, {0x0639, "V"}, {0x064A, "V"}, {0x0626, "V"},
    {0x0648, "V"}, {0x0624, "V"}, {0x06CC, "V"},
    {0x0629, "H"}, {0x0647, "H"}, {0x062D, "H"}, {0x06C1, "H"}, {0x06D5, "H"},
    {0x062E, "X"},
    {0x0628, "B"}, {0x067E, "B"},
    {0x062A, "T"}, {0x0637, "T"}, {0x062B, "T"},
    {0x062C, "J"}, {0x0686, "J"},
    {0x062F, "D"}, {0x0636, "D"}, {0x0630, "D"}, {0x0638, "D"},
    {0x0631, "R"},
    {0x0632, "Z"}, {0x0698, "Z"},
    {0x0633, "S"}, {0x0635, "S"}, {0x0634, "S"},
    {0x063A, "G"}, {0x06AF, "G"},
    {0x0641, "F"}, {0x06A4, "F"},
    {0x0642, "K"}, {0x0643, "K"}, {0x06A9, "K"},
    {0x0644, "L"},
    {0x0645, "M"},
    {0x0646, "N"},
    // Latin, lowercased before lookup.
    {U'a', "V"}, {U'e', "V"}, {U'i', "V"}, {U'o', "V"}, {U'u', "V"},
    {U'w', "V"}, {U'y', "V"},
    {U'b', "B"}, {U'p', "B"},
    {U'c', "K"}, {U'k', "K"}, {U'q', "K"}, {U'x', "K"},
    {U'd', "D"},
    {U'f', "F"}, {U'v', "F"},
    {U'g', "G"},
    {U'h', "H"},
    {U'j', "J"},
    {U'l', "L"},
    {U'm', "M"},
    {U'n', "N"},
    {U'r', "R"},
    {U's', "S"},
    {U't', "T"},
    {U'z', "Z"},
};

}  // namespace

const FreemanTable& FreemanTable::standard() {
  static const FreemanTable table = [] {
    FreemanTable t;
    for (const auto& row : kFreemanRows) t.rows_.emplace_back(row.cp, row.klass);
    return t;
  }();
  return table;
}

FreemanTable FreemanTable::from_file(const std::string& path) {
  FreemanTable table;
  std::unordered_set<char32_t> seen;
  for (const auto& row : tsv::read_rows(path)) {
    if (row.cells.size() != 2 || row.cells[1].empty()) {
      throw std::runtime_error(path + ":" + std::to_string(row.line) +
                               ": expected <codepoint>\\t<class>");
    }
    char32_t cp = single_codepoint(row.cells[0], path, row.line);
    if (!seen.insert(cp).second) {
      throw std::runtime_error(path + ":" + std::to_string(row.line) +
                               ": duplicate symbol");
    }
    table.rows_.emplace_back(cp, row.cells[1]);
  }
  return table;
}

std::optional<std::string> FreemanTable::class_of(char32_t cp) const {
  for (const auto& [symbol, klass] : rows_) {
    if (symbol == cp) return klass;
  }
  return std::nullopt;
}

std::vector<std::string> class_sequence(std::string_view text,
                                        const FreemanTable& table) {
  std::vector<std::string> classes;
  for (char32_t cp : utf8::decode(text)) {
    if (cp >= U'A' && cp <= U'Z') cp += 0x20;
    if (auto klass = table.class_of(cp)) classes.push_back(*klass);
  }
  return classes;
}

double class_sequence_similarity(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  const size_t n = a.size(), m = b.size();
  std::vector<size_t> prev(m + 1, 0), cur(m + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return 2.0 * static_cast<double>(prev[m]) / static_cast<double>(n + m);
}

double freeman_similarity(std::string_view arabic_skeleton,
                          std::string_view gloss, const FreemanTable& table) {
  std::vector<std::string> gloss_seq = class_sequence(gloss, table);
  if (gloss_seq.empty()) {
    throw std::invalid_argument("empty gloss: no classifiable symbols in \"" +
                                std::string(gloss) + "\"");
  }
  return class_sequence_similarity(class_sequence(arabic_skeleton, table),
                                   gloss_seq);
}

// ---- diacritic confusion ---------------------------------------------------

std::vector<std::pair<Mark, double>> diacritic_confusion(
    std::span<const EvalRecord> records) {
  constexpr Mark kAll[] = {Mark::Fatha, Mark::Damma,  Mark::Kasra,
                           Mark::Sukun, Mark::Shadda, Mark::DaggerAlif};
  std::unordered_map<char32_t, long long> pred_counts, ref_counts;
  for (const EvalRecord& rec : records) {
    for (char32_t cp : utf8::decode(rec.prediction)) {
      if (mark_of(cp)) ++pred_counts[cp];
    }
    for (char32_t cp : utf8::decode(rec.reference)) {
      if (mark_of(cp)) ++ref_counts[cp];
    }
  }
  std::vector<std::pair<Mark, double>> table;
  for (Mark mark : kAll) {
    long long ref = ref_counts[mark_codepoint(mark)];
    if (ref == 0) continue;
    long long pred = pred_counts[mark_codepoint(mark)];
    table.emplace_back(mark, static_cast<double>(pred - ref) /
                                 static_cast<double>(ref));
  }
  return table;
}

// ---- batch scoring ----------------------------------------------------------

namespace {

EvalRecord score_one(const ScorePair& pair, const LetterSubPairs& subs,
                     const FreemanTable& freeman) {
  EvalRecord rec;
  rec.id = pair.id;
  rec.prediction = pair.prediction.render();
  rec.reference = pair.reference.render();
  rec.exact = rec.prediction == rec.reference;
  rec.distance = edit_distance(pair.prediction, pair.reference);
  Classification c = classify_error(pair.prediction, pair.reference, subs);
  rec.error_class = c.klass;
  rec.letter_pair = c.letter_pair;
  rec.freeman = freeman_similarity(pair.arabic_skeleton, pair.gloss, freeman);
  rec.frequency = pair.frequency;
  return rec;
}

}  // namespace

std::vector<EvalRecord> score_pairs_serial(std::span<const ScorePair> pairs,
                                           const LetterSubPairs& subs,
                                           const FreemanTable& freeman) {
  std::vector<EvalRecord> records(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    records[i] = score_one(pairs[i], subs, freeman);
  }
  return records;
}

std::vector<EvalRecord> score_pairs_parallel(std::span<const ScorePair> pairs,
                                             const LetterSubPairs& subs,
                                             const FreemanTable& freeman) {
  std::vector<EvalRecord> records(pairs.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pairs.size());
       ++i) {
    try {
      records[static_cast<size_t>(i)] =
          score_one(pairs[static_cast<size_t>(i)], subs, freeman);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<EvalRecord> score_pairs(std::span<const ScorePair> pairs,
                                    const LetterSubPairs& subs,
                                    const FreemanTable& freeman) {
  constexpr size_t kParallelThreshold = 64;
  return pairs.size() >= kParallelThreshold
             ? score_pairs_parallel(pairs, subs, freeman)
             : score_pairs_serial(pairs, subs, freeman);
}

// ---- binned analysis ---------------------------------------------------------

BinScheme BinScheme::from_edges(std::vector<double> edges) {
  BinScheme scheme;
  scheme.edges = std::move(edges);
  return scheme;
}

BinScheme BinScheme::quartiles() {
  BinScheme scheme;
  scheme.use_quartiles = true;
  return scheme;
}

namespace {

struct Bin {
  double lo, hi;
  std::string label;
  bool closed_lo;  // first bin includes its lower edge
};

std::optional<double> pearson(const std::vector<std::pair<double, double>>& points) {
  const size_t n = points.size();
  if (n < 2) return std::nullopt;
  double mean_x = 0, mean_y = 0;
  for (auto [x, y] : points) mean_x += x, mean_y += y;
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double cov = 0, var_x = 0, var_y = 0;
  for (auto [x, y] : points) {
    cov += (x - mean_x) * (y - mean_y);
    var_x += (x - mean_x) * (x - mean_x);
    var_y += (y - mean_y) * (y - mean_y);
  }
  if (var_x <= 0.0 || var_y <= 0.0) return std::nullopt;
  return cov / std::sqrt(var_x * var_y);
}

std::string edge_label(double lo, double hi, bool closed_lo) {
  std::ostringstream out;
  out << (closed_lo ? '[' : '(') << fmt_double(lo, "%g") << ", "
      << fmt_double(hi, "%g") << ']';
  return out.str();
}

}  // namespace

BinReport bin_analysis(std::span<const EvalRecord> records, BinKey key,
                       const BinScheme& scheme) {
  if (records.empty()) throw std::invalid_argument("bin_analysis: no records");
  auto value_of = [key](const EvalRecord& rec) {
    return key == BinKey::Freeman ? rec.freeman
                                  : static_cast<double>(rec.frequency);
  };

  std::vector<Bin> bins;
  if (scheme.use_quartiles) {
    std::vector<double> sorted(records.size());
    std::transform(records.begin(), records.end(), sorted.begin(), value_of);
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    std::vector<double> edges = {sorted.front(), sorted[n / 4], sorted[n / 2],
                                 sorted[3 * n / 4], sorted.back()};
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (edges.size() == 1) {
      bins.push_back({edges[0], edges[0], "Q1", true});
    } else {
      for (size_t i = 0; i + 1 < edges.size(); ++i) {
        bins.push_back({edges[i], edges[i + 1],
                        "Q" + std::to_string(i + 1), i == 0});
      }
    }
  } else {
    const auto& edges = scheme.edges;
    if (edges.size() < 2) {
      throw std::invalid_argument("bin_analysis: need at least two edges");
    }
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
      if (!(edges[i] < edges[i + 1])) {
        throw std::invalid_argument("bin_analysis: edges must be strictly increasing");
      }
      bins.push_back({edges[i], edges[i + 1],
                      edge_label(edges[i], edges[i + 1], i == 0), i == 0});
    }
  }

  struct Agg {
    size_t instances = 0;
    size_t matches = 0;
    double freq_sum = 0, dist_sum = 0, freeman_sum = 0;
  };
  std::vector<Agg> aggs(bins.size());
  for (const EvalRecord& rec : records) {
    double v = value_of(rec);
    size_t slot = bins.size();
    for (size_t i = 0; i < bins.size(); ++i) {
      bool above = bins[i].closed_lo ? v >= bins[i].lo : v > bins[i].lo;
      if (above && v <= bins[i].hi) {
        slot = i;
        break;
      }
    }
    if (slot == bins.size()) {
      throw std::invalid_argument("bin_analysis: value " + fmt_double(v, "%g") +
                                  " outside the bin edges");
    }
    Agg& agg = aggs[slot];
    ++agg.instances;
    if (rec.exact) ++agg.matches;
    agg.freq_sum += static_cast<double>(rec.frequency);
    agg.dist_sum += static_cast<double>(rec.distance);
    agg.freeman_sum += rec.freeman;
  }

  BinReport report;
  for (size_t i = 0; i < bins.size(); ++i) {
    const Agg& agg = aggs[i];
    if (agg.instances == 0) continue;
    BinRow row;
    row.label = bins[i].label;
    row.instances = agg.instances;
    row.matches = agg.matches;
    double count = static_cast<double>(agg.instances);
    row.avg_frequency = agg.freq_sum / count;
    row.accuracy = static_cast<double>(agg.matches) / count;
    row.avg_distance = agg.dist_sum / count;
    row.avg_freeman = agg.freeman_sum / count;
    report.rows.push_back(std::move(row));
  }

  std::vector<std::pair<double, double>> acc_dist, freq_free, free_acc, freq_acc;
  for (const BinRow& row : report.rows) {
    acc_dist.emplace_back(row.accuracy, row.avg_distance);
    freq_free.emplace_back(row.avg_frequency, row.avg_freeman);
    free_acc.emplace_back(row.avg_freeman, row.accuracy);
    freq_acc.emplace_back(row.avg_frequency, row.accuracy);
  }
  report.correlations.accuracy_distance = pearson(acc_dist);
  report.correlations.frequency_freeman = pearson(freq_free);
  report.correlations.freeman_accuracy = pearson(free_acc);
  report.correlations.frequency_accuracy = pearson(freq_acc);
  return report;
}

std::string write_bin_report(const BinReport& report, BinKey key) {
  std::ostringstream out;
  out << "# binned by " << (key == BinKey::Freeman ? "freeman" : "frequency")
      << "; correlations computed over bin-level aggregates\n";
  out << "bin\tinstances\tavg_frequency\tmatches\taccuracy\tavg_distance\tavg_freeman\n";
  for (const BinRow& row : report.rows) {
    out << row.label << '\t' << row.instances << '\t'
        << fmt_double(row.avg_frequency, "%.2f") << '\t' << row.matches << '\t'
        << fmt_double(row.accuracy) << '\t' << fmt_double(row.avg_distance)
        << '\t' << fmt_double(row.avg_freeman) << '\n';
  }
  auto corr_line = [&out](const char* name, const std::optional<double>& r) {
    out << "# correlation " << name << ": "
        << (r ? fmt_double(*r) : std::string("undefined")) << '\n';
  };
  corr_line("accuracy~avg_distance", report.correlations.accuracy_distance);
  corr_line("avg_frequency~avg_freeman", report.correlations.frequency_freeman);
  corr_line("avg_freeman~accuracy", report.correlations.freeman_accuracy);
  corr_line("avg_frequency~accuracy", report.correlations.frequency_accuracy);
  return out.str();
}

}  // namespace diactk
