#pragma once

#include <functional>
#include <vector>

#include "kpvote/scores.hpp"
#include "kpvote/types.hpp"

namespace kpvote {

// Committee enumeration is guarded to keep C(n,k) tractable.
inline constexpr int kEnumerationMaxCandidates = 20;

/// All size-k committees over n candidates, in lexicographic index order.
std::vector<committee> all_committees(int n, int k);

/// Visits committees in the same order without materializing the list.
void for_each_committee(int n, int k, const std::function<void(const committee&)>& visit);

/// Tie-aware k,p-approval winners: every size-k committee maximizing the sum
/// of member scores. Computed by the tier method: candidates strictly above
/// the k-th score are locked in, and the boundary tie is completed with every
/// choice of tied candidates.
outcome winners(const profile& pi, int k, norm_exponent p);

/// Oracle for `winners`: enumerates every committee and keeps all within tie
/// tolerance of the maximum, scoring each committee by direct summation over
/// profile entries rather than per-candidate aggregation.
outcome winners_bruteforce(const profile& pi, int k, norm_exponent p);

/// All committees with maximal overlap with the ballot, i.e. committees K
/// with |K ∩ b| = min(|b|, k). The empty ballot yields every committee.
outcome winners_function(ballot b, int k, int n);

}  // namespace kpvote
