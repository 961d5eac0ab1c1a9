#pragma once

#include <vector>

#include "kpvote/types.hpp"

namespace kpvote {

// Tie detection tolerances: relative on the larger magnitude, with an
// absolute floor near zero.
inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

inline bool nearly_equal(double a, double b, double rel = kRelTol, double abs = kAbsTol) {
  double diff = a > b ? a - b : b - a;
  if (diff <= abs) return true;
  double scale = std::max(std::abs(a), std::abs(b));
  return diff <= rel * scale;
}

/// Weight a ballot of the given size contributes to each approved candidate:
/// 1 / size^{1/p}. Exactly 1 for p = infinity or size 1.
double lp_weight(int ballot_size, norm_exponent p);

/// Per-candidate score s_p: the multiplicity-weighted sum of lp_weight over
/// ballots approving the candidate.
double candidate_score(int candidate, const profile& pi, norm_exponent p);

/// Scores for every candidate in index order.
std::vector<double> candidate_scores(const profile& pi, norm_exponent p);

/// Sum of the member scores.
double committee_score(const committee& k, const profile& pi, norm_exponent p);

/// Candidate scores in a representation suitable for tie comparisons.
///
/// For p = infinity the values are plain multiplicity sums; for p = 1 they
/// are scaled by the lcm of the ballot sizes present, so that integral
/// profiles compare as exact integers. `exact` is set when every value is an
/// exactly-representable integer, in which case ties are exact equality;
/// otherwise the usual tolerances apply. The scaling preserves the relative
/// order and relative gaps of the true scores.
struct comparison_basis {
  std::vector<double> values;
  bool exact = false;
  double scale = 1.0;  // values ~= scale * s_p
};

comparison_basis comparison_scores(const profile& pi, norm_exponent p);

inline bool basis_tied(const comparison_basis& basis, double a, double b) {
  return basis.exact ? a == b : nearly_equal(a, b);
}

namespace detail {
/// lcm of the sizes of ballots with positive multiplicity, or 0 on overflow
/// of the 2^32 guard.
std::uint64_t ballot_size_lcm(const profile& pi);
}  // namespace detail

}  // namespace kpvote
