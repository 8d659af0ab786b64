#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diactk/script.hpp"

namespace diactk {

enum class TransformKind {
  DetRemoval,           // strip a leading alif+lam determiner
  Plural3mpRemoval,     // strip a trailing waw+nun after ya
  HamzaNormalization,   // hamza-seat equivalence (alif family, waw, ya)
};

const char* transform_kind_name(TransformKind kind);

struct IntegrityReport {
  bool ok = false;
  // Transforms needed to reach the lemma, minimal set, enum order.
  std::vector<TransformKind> transforms;
  // First offending codepoint position when not ok.
  std::optional<size_t> diff;
};

// True when the two letters are interchangeable under hamza normalization:
// {alif, alif-hamza-above, alif-hamza-below, alif-madda, alif-wasla},
// {waw, waw-hamza}, {ya, ya-hamza}.
bool hamza_equivalent(char32_t a, char32_t b);

// Checks that the lemma's skeleton is reachable from the undiacritized input
// through the allowed transforms. Never throws on unreachable input; the
// report carries the first differing position instead.
IntegrityReport check_integrity(std::string_view input_skeleton,
                                const DiacritizedWord& lemma);

// Candidate lemma skeletons for an input: the identity plus every applicable
// combination of determiner and plural removal, in that order, deduplicated.
std::vector<std::string> derive_candidates(std::string_view input_skeleton);

// Internal matching core, exposed for the determiner check and for tests.
struct SkeletonMatch {
  bool used_det_removal = false;
  bool used_3mp_removal = false;
  bool used_hamza_normalization = false;
};
std::optional<SkeletonMatch> reach_skeleton(std::u32string_view input,
                                            std::u32string_view target);

}  // namespace diactk
