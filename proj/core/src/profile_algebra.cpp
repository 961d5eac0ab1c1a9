#include "kpvote/profile_algebra.hpp"

#include <algorithm>

#include "kpvote/scores.hpp"

namespace kpvote {

profile single_ballot_profile(ballot b, int n) {
  profile pi(n);
  pi.add(b, 1.0);
  return pi;
}

profile unit_score_profile(ballot b, int n, norm_exponent p) {
  profile pi(n);
  double mult = p.is_infinite() ? 1.0 : std::pow(static_cast<double>(b.size()), 1.0 / p.value());
  pi.add(b, mult);
  return pi;
}

profile combine(const std::vector<std::pair<double, profile>>& terms) {
  if (terms.empty()) throw domain_error("combine requires at least one term");
  const int n = terms.front().second.candidate_count();
  profile out(n);
  for (const auto& [coeff, pi] : terms) {
    if (pi.candidate_count() != n) throw domain_error("profiles have mismatched candidate universes");
    if (!(coeff >= 0)) throw domain_error("combination coefficients must be nonnegative");
    if (coeff == 0) continue;
    for (const auto& [b, m] : pi.entries()) out.add(b, coeff * m);
  }
  return out;
}

profile add(const profile& a, const profile& b) { return combine({{1.0, a}, {1.0, b}}); }

profile scale(const profile& pi, double factor) { return combine({{factor, pi}}); }

profile canonical_singleton_profile(const profile& pi, norm_exponent p) {
  profile out(pi.candidate_count());
  std::vector<double> scores = candidate_scores(pi, p);
  for (int c = 0; c < pi.candidate_count(); ++c)
    if (scores[static_cast<std::size_t>(c)] > 0) out.add(ballot::single(c), scores[static_cast<std::size_t>(c)]);
  return out;
}

std::vector<tier_term> tier_decomposition(const profile& pi, norm_exponent p) {
  const int n = pi.candidate_count();
  std::vector<double> scores = candidate_scores(pi, p);

  // Group candidates into distinct score levels, descending.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) order[static_cast<std::size_t>(c)] = c;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });

  struct level {
    double value;
    std::uint32_t members;
  };
  std::vector<level> levels;
  for (int c : order) {
    double v = scores[static_cast<std::size_t>(c)];
    if (nearly_equal(v, 0.0)) continue;
    if (!levels.empty() && nearly_equal(levels.back().value, v))
      levels.back().members |= std::uint32_t{1} << c;
    else
      levels.push_back({v, std::uint32_t{1} << c});
  }

  std::vector<tier_term> terms;
  std::uint32_t cumulative = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    cumulative |= levels[i].members;
    double next = i + 1 < levels.size() ? levels[i + 1].value : 0.0;
    terms.push_back({levels[i].value - next, ballot::from_mask(cumulative)});
  }
  return terms;
}

profile recombine_tiers(const std::vector<tier_term>& terms, int n, norm_exponent p) {
  profile out(n);
  for (const tier_term& t : terms) {
    profile theta = unit_score_profile(t.members, n, p);
    for (const auto& [b, m] : theta.entries()) out.add(b, t.coefficient * m);
  }
  return out;
}

}  // namespace kpvote
