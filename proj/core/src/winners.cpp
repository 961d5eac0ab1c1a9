#include "kpvote/winners.hpp"

#include <algorithm>
#include <numeric>

namespace kpvote {

namespace {

void check_committee_args(int n, int k) {
  if (n < 1 || n > kMaxCandidates) throw domain_error("candidate count out of range");
  if (k < 1) throw domain_error("committee size must be positive");
  if (k > n) throw domain_error("committee size exceeds candidate count");
}

}  // namespace

void for_each_committee(int n, int k, const std::function<void(const committee&)>& visit) {
  check_committee_args(n, k);
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::uint32_t mask = 0;
    for (int i : idx) mask |= std::uint32_t{1} << i;
    visit(committee::from_mask(mask));
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::vector<committee> all_committees(int n, int k) {
  std::vector<committee> out;
  for_each_committee(n, k, [&](const committee& c) { out.push_back(c); });
  return out;
}

outcome winners(const profile& pi, int k, norm_exponent p) {
  const int n = pi.candidate_count();
  check_committee_args(n, k);
  if (!(pi.total() > 0)) throw domain_error("profile has no positive multiplicity");

  comparison_basis basis = comparison_scores(pi, p);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return basis.values[static_cast<std::size_t>(a)] > basis.values[static_cast<std::size_t>(b)];
  });

  const double boundary = basis.values[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])];
  std::uint32_t locked = 0;
  std::vector<int> tied;
  for (int c = 0; c < n; ++c) {
    double v = basis.values[static_cast<std::size_t>(c)];
    if (basis_tied(basis, v, boundary))
      tied.push_back(c);
    else if (v > boundary)
      locked |= std::uint32_t{1} << c;
  }
  const int locked_count = std::popcount(locked);
  const int need = k - locked_count;
  if (need < 0 || need > static_cast<int>(tied.size()))
    throw internal_error("tier decomposition of scores is inconsistent");

  std::vector<committee> result;
  if (need == 0) {
    result.push_back(committee::from_mask(locked));
  } else {
    std::vector<int> pick(static_cast<std::size_t>(need));
    std::iota(pick.begin(), pick.end(), 0);
    const int t = static_cast<int>(tied.size());
    while (true) {
      std::uint32_t mask = locked;
      for (int i : pick) mask |= std::uint32_t{1} << tied[static_cast<std::size_t>(i)];
      result.push_back(committee::from_mask(mask));
      int pos = need - 1;
      while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == t - need + pos) --pos;
      if (pos < 0) break;
      ++pick[static_cast<std::size_t>(pos)];
      for (int j = pos + 1; j < need; ++j)
        pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return outcome(std::move(result));
}

outcome winners_bruteforce(const profile& pi, int k, norm_exponent p) {
  const int n = pi.candidate_count();
  check_committee_args(n, k);
  if (n > kEnumerationMaxCandidates) throw resource_error("too many candidates to enumerate committees");
  if (!(pi.total() > 0)) throw domain_error("profile has no positive multiplicity");

  // Direct per-committee totals in the same comparison units as
  // comparison_scores: plain sums for p = inf, lcm-scaled for p = 1.
  std::uint64_t l = (!p.is_infinite() && p.is_one()) ? detail::ballot_size_lcm(pi) : 0;
  const bool use_scaled = l != 0;

  auto total_of = [&](const committee& c) {
    double s = 0;
    for (const auto& [b, m] : pi.entries()) {
      double overlap = static_cast<double>((b & c.members()).size());
      if (p.is_infinite())
        s += m * overlap;
      else if (use_scaled)
        s += m * overlap * static_cast<double>(l / static_cast<std::uint64_t>(b.size()));
      else
        s += m * overlap * lp_weight(b.size(), p);
    }
    return s;
  };

  bool exact = (p.is_infinite() || use_scaled) && pi.integral();
  std::vector<committee> cs = all_committees(n, k);
  std::vector<double> totals;
  totals.reserve(cs.size());
  double best = -1;
  for (const committee& c : cs) {
    double t = total_of(c);
    if (exact && t > 0x1p53) exact = false;
    totals.push_back(t);
    best = std::max(best, t);
  }

  std::vector<committee> result;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    bool tie = exact ? totals[i] == best : nearly_equal(totals[i], best);
    if (tie) result.push_back(cs[i]);
  }
  return outcome(std::move(result));
}

outcome winners_function(ballot b, int k, int n) {
  check_committee_args(n, k);
  if (!b.subset_of(ballot::universe(n))) throw domain_error("ballot outside candidate universe");
  const int target = std::min(b.size(), k);
  std::vector<committee> result;
  for_each_committee(n, k, [&](const committee& c) {
    if ((c.members() & b).size() == target) result.push_back(c);
  });
  return outcome(std::move(result));
}

}  // namespace kpvote
