#pragma once

#include <utility>
#include <vector>

#include "kpvote/types.hpp"

namespace kpvote {

/// One voter casting ballot b.
profile single_ballot_profile(ballot b, int n);

/// The single-ballot profile scaled by |b|^{1/p}, so every approved candidate
/// scores exactly 1 under s_p.
profile unit_score_profile(ballot b, int n, norm_exponent p);

/// Pointwise linear combination with nonnegative coefficients. All profiles
/// must share a candidate universe.
profile combine(const std::vector<std::pair<double, profile>>& terms);

profile add(const profile& a, const profile& b);
profile scale(const profile& pi, double factor);

/// A profile supported on singletons only, with each singleton's multiplicity
/// equal to the candidate's score; it is score-identical to the input for the
/// same p.
profile canonical_singleton_profile(const profile& pi, norm_exponent p);

struct tier_term {
  double coefficient;
  ballot members;  // all candidates scoring at least this tier's score

  bool operator==(const tier_term&) const = default;
};

/// Decomposes a profile by its distinct candidate score levels t_1 > ... >
/// t_{z-1} > 0: term i pairs coefficient t_i - t_{i+1} (with 0 appended as
/// the final level) with the cumulative candidate set scoring >= t_i.
/// Recombining coefficient-scaled unit score profiles reproduces every
/// candidate score. All-zero scores yield an empty list.
std::vector<tier_term> tier_decomposition(const profile& pi, norm_exponent p);

/// Sum of coefficient * unit_score_profile(members) over the terms.
profile recombine_tiers(const std::vector<tier_term>& terms, int n, norm_exponent p);

}  // namespace kpvote
