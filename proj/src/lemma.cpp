#include "diactk/lemma.hpp"

#include <algorithm>

#include "diactk/utf8.hpp"

namespace diactk {

namespace {

constexpr char32_t kAlif = 0x0627;
constexpr char32_t kLam = 0x0644;
constexpr char32_t kWaw = 0x0648;
constexpr char32_t kYa = 0x064A;

// Hamza-seat equivalence classes.
int hamza_class(char32_t cp) {
  switch (cp) {
    case 0x0627:  // alef
    case 0x0622:  // alef madda
    case 0x0623:  // alef hamza above
    case 0x0625:  // alef hamza below
    case 0x0671:  // alef wasla
      return 1;
    case 0x0648:  // waw
    case 0x0624:  // waw hamza
      return 2;
    case 0x064A:  // yeh
    case 0x0626:  // yeh hamza
      return 3;
    default:
      return 0;
  }
}

bool starts_with_determiner(std::u32string_view w) {
  return w.size() > 2 && w[0] == kAlif && w[1] == kLam;
}

// Trailing waw+nun with a ya right before it, and at least one letter left
// after stripping.
bool has_3mp_suffix(std::u32string_view w) {
  return w.size() >= 4 && w[w.size() - 1] == 0x0646 /*noon*/ &&
         w[w.size() - 2] == kWaw && w[w.size() - 3] == kYa;
}

std::u32string drop_determiner(std::u32string_view w) {
  return std::u32string(w.substr(2));
}

std::u32string drop_3mp(std::u32string_view w) {
  return std::u32string(w.substr(0, w.size() - 2));
}

// Position-wise comparison under hamza equivalence. Returns whether the
// sequences match and whether any position needed the equivalence.
std::optional<bool> equivalent_match(std::u32string_view a,
                                     std::u32string_view b) {
  if (a.size() != b.size()) return std::nullopt;
  bool used = false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    int ca = hamza_class(a[i]);
    if (ca == 0 || ca != hamza_class(b[i])) return std::nullopt;
    used = true;
  }
  return used;
}

}  // namespace

const char* transform_kind_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::DetRemoval: return "det-removal";
    case TransformKind::Plural3mpRemoval: return "3mp-removal";
    case TransformKind::HamzaNormalization: return "hamza-normalization";
  }
  return "?";
}

bool hamza_equivalent(char32_t a, char32_t b) {
  if (a == b) return true;
  int ca = hamza_class(a);
  return ca != 0 && ca == hamza_class(b);
}

std::optional<SkeletonMatch> reach_skeleton(std::u32string_view input,
                                            std::u32string_view target) {
  // Try the transform subsets smallest-first so the minimal set wins.
  struct Option {
    bool det;
    bool p3m;
  };
  static constexpr Option kOptions[] = {
      {false, false}, {true, false}, {false, true}, {true, true}};
  for (const Option& opt : kOptions) {
    std::u32string candidate(input);
    if (opt.det) {
      if (!starts_with_determiner(candidate)) continue;
      candidate = drop_determiner(candidate);
    }
    if (opt.p3m) {
      if (!has_3mp_suffix(candidate)) continue;
      candidate = drop_3mp(candidate);
    }
    if (auto used_hamza = equivalent_match(candidate, target)) {
      SkeletonMatch match;
      match.used_det_removal = opt.det;
      match.used_3mp_removal = opt.p3m;
      match.used_hamza_normalization = *used_hamza;
      return match;
    }
  }
  return std::nullopt;
}

IntegrityReport check_integrity(std::string_view input_skeleton,
                                const DiacritizedWord& lemma) {
  std::u32string input = utf8::decode(input_skeleton);
  for (size_t i = 0; i < input.size(); ++i) {
    if (mark_of(input[i]) || is_nunation(input[i]))
      throw std::invalid_argument("input skeleton carries a diacritic at " +
                                  std::to_string(i));
  }
  std::u32string target = lemma.skeleton_u32();

  IntegrityReport report;
  if (auto match = reach_skeleton(input, target)) {
    report.ok = true;
    if (match->used_det_removal)
      report.transforms.push_back(TransformKind::DetRemoval);
    if (match->used_3mp_removal)
      report.transforms.push_back(TransformKind::Plural3mpRemoval);
    if (match->used_hamza_normalization)
      report.transforms.push_back(TransformKind::HamzaNormalization);
    return report;
  }

  // Not reachable: report where the plain comparison first diverges.
  size_t n = std::min(input.size(), target.size());
  size_t diff = n;
  for (size_t i = 0; i < n; ++i) {
    if (!hamza_equivalent(input[i], target[i])) {
      diff = i;
      break;
    }
  }
  report.diff = diff;
  return report;
}

std::vector<std::string> derive_candidates(std::string_view input_skeleton) {
  std::u32string input = utf8::decode(input_skeleton);
  std::vector<std::u32string> raw;
  raw.push_back(input);
  if (starts_with_determiner(input)) raw.push_back(drop_determiner(input));
  if (has_3mp_suffix(input)) raw.push_back(drop_3mp(input));
  if (starts_with_determiner(input)) {
    std::u32string both = drop_determiner(input);
    if (has_3mp_suffix(both)) raw.push_back(drop_3mp(both));
  }
  std::vector<std::string> out;
  for (const auto& cand : raw) {
    std::string enc = utf8::encode(cand);
    if (std::find(out.begin(), out.end(), enc) == out.end())
      out.push_back(std::move(enc));
  }
  return out;
}

}  // namespace diactk
