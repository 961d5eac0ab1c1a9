#include "kpvote/distrat.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <queue>
#include <unordered_map>

#include "kpvote/scores.hpp"
#include "kpvote/winners.hpp"

namespace kpvote {

election::election(int candidate_count, std::vector<ballot> votes)
    : n_(candidate_count), votes_(std::move(votes)) {
  if (candidate_count < 1 || candidate_count > kMaxCandidates)
    throw domain_error("candidate count out of range");
  if (votes_.empty()) throw domain_error("election must contain at least one vote");
  const ballot universe = ballot::universe(n_);
  for (ballot v : votes_) {
    if (v.empty()) throw domain_error("votes must be nonempty");
    if (!v.subset_of(universe)) throw domain_error("vote outside candidate universe");
  }
}

profile election::to_profile() const {
  profile pi(n_);
  for (ballot v : votes_) pi.add(v, 1.0);
  return pi;
}

election election::with_vote(int i, ballot b) const {
  std::vector<ballot> votes = votes_;
  votes.at(static_cast<std::size_t>(i)) = b;
  return election(n_, std::move(votes));
}

bool election::unanimous_for(const committee& k) const {
  for (ballot v : votes_)
    if (!k.members().subset_of(v)) return false;
  return true;
}

int symdiff_distance(ballot a, ballot b) { return (a ^ b).size(); }

namespace {

/// Single-source shortest paths over the nonempty-subset lattice. Nodes are
/// masks 1..2^n-1; moving between b and b ∪ {c} costs 1/|b|^{1/p} in either
/// direction.
std::vector<double> layer_sssp(ballot source, int n, norm_exponent p) {
  const std::uint32_t node_count = ballot::universe(n).mask();
  std::vector<double> dist(static_cast<std::size_t>(node_count) + 1,
                           std::numeric_limits<double>::infinity());
  std::vector<double> weight_of_size(static_cast<std::size_t>(n) + 1, 0.0);
  for (int s = 1; s <= n; ++s) weight_of_size[static_cast<std::size_t>(s)] = lp_weight(s, p);

  using entry = std::pair<double, std::uint32_t>;
  std::priority_queue<entry, std::vector<entry>, std::greater<>> queue;
  dist[source.mask()] = 0;
  queue.push({0, source.mask()});
  while (!queue.empty()) {
    auto [d, node] = queue.top();
    queue.pop();
    if (d > dist[node]) continue;
    const int size = std::popcount(node);
    for (int c = 0; c < n; ++c) {
      const std::uint32_t bit = std::uint32_t{1} << c;
      std::uint32_t next;
      double cost;
      if ((node & bit) != 0) {
        next = node & ~bit;  // drop a member; the edge belongs to the smaller set
        if (next == 0) continue;
        cost = weight_of_size[static_cast<std::size_t>(size - 1)];
      } else {
        next = node | bit;
        cost = weight_of_size[static_cast<std::size_t>(size)];
      }
      if (dist[node] + cost < dist[next]) {
        dist[next] = dist[node] + cost;
        queue.push({dist[next], next});
      }
    }
  }
  return dist;
}

}  // namespace

double layer_distance(ballot a, ballot b, int n, norm_exponent p) {
  if (n < 1 || n > kLayerMaxCandidates)
    throw resource_error("layer metric requires 1 <= n <= 16");
  if (a.empty() || b.empty()) throw domain_error("layer distance is defined on nonempty ballots");
  if (!a.subset_of(ballot::universe(n)) || !b.subset_of(ballot::universe(n)))
    throw domain_error("ballot outside candidate universe");
  return layer_sssp(a, n, p)[b.mask()];
}

struct ballot_metric::impl {
  kind id;
  int n;
  norm_exponent p = norm_exponent::infinity();
  std::function<double(ballot, ballot)> custom_fn;

  mutable std::mutex memo_mutex;
  mutable std::unordered_map<std::uint32_t, std::shared_ptr<const std::vector<double>>> memo;

  double evaluate(ballot a, ballot b) const {
    switch (id) {
      case kind::symdiff:
        return static_cast<double>(symdiff_distance(a, b));
      case kind::layer: {
        std::shared_ptr<const std::vector<double>> row;
        {
          std::lock_guard lock(memo_mutex);
          auto it = memo.find(a.mask());
          if (it != memo.end()) row = it->second;
        }
        if (!row) {
          row = std::make_shared<const std::vector<double>>(layer_sssp(a, n, p));
          std::lock_guard lock(memo_mutex);
          memo.emplace(a.mask(), row);
        }
        return (*row)[b.mask()];
      }
      case kind::custom:
        return custom_fn(a, b);
    }
    throw internal_error("unknown metric kind");
  }
};

namespace {

std::vector<ballot> all_ballots(int n) {
  std::vector<ballot> out;
  const std::uint32_t full = ballot::universe(n).mask();
  out.reserve(full);
  for (std::uint32_t mask = 1; mask <= full; ++mask) out.push_back(ballot::from_mask(mask));
  return out;
}

/// Identity, symmetry, and the triangle inequality; exhaustive for n <= 4,
/// strided beyond that.
void spot_verify_metric(int n, const std::function<double(ballot, ballot)>& d) {
  std::vector<ballot> bs = all_ballots(n);
  std::size_t stride = 1;
  if (n > 4) stride = bs.size() / 12 + 1;
  for (std::size_t i = 0; i < bs.size(); i += stride) {
    if (!nearly_equal(d(bs[i], bs[i]), 0.0))
      throw domain_error("metric violates d(b,b) = 0");
    for (std::size_t j = 0; j < bs.size(); j += stride) {
      double dij = d(bs[i], bs[j]);
      if (dij < -kAbsTol) throw domain_error("metric produced a negative distance");
      if (!nearly_equal(dij, d(bs[j], bs[i])))
        throw domain_error("metric violates symmetry");
      for (std::size_t l = 0; l < bs.size(); l += stride) {
        double through = d(bs[i], bs[l]) + d(bs[l], bs[j]);
        if (dij > through + kRelTol * std::max(1.0, std::abs(through)))
          throw domain_error("metric violates the triangle inequality");
      }
    }
  }
}

}  // namespace

ballot_metric ballot_metric::symdiff(int n) {
  auto im = std::make_shared<impl>();
  im->id = kind::symdiff;
  im->n = n;
  if (n < 1 || n > kMaxCandidates) throw domain_error("candidate count out of range");
  if (n <= 4)
    spot_verify_metric(n, [&im](ballot a, ballot b) { return im->evaluate(a, b); });
  return ballot_metric(std::move(im));
}

ballot_metric ballot_metric::layer(int n, norm_exponent p) {
  if (n < 1 || n > kLayerMaxCandidates)
    throw resource_error("layer metric requires 1 <= n <= 16");
  auto im = std::make_shared<impl>();
  im->id = kind::layer;
  im->n = n;
  im->p = p;
  if (n <= 4)
    spot_verify_metric(n, [&im](ballot a, ballot b) { return im->evaluate(a, b); });
  return ballot_metric(std::move(im));
}

ballot_metric ballot_metric::custom(int n, std::function<double(ballot, ballot)> fn, bool verify) {
  if (n < 1 || n > kLayerMaxCandidates) throw domain_error("candidate count out of range");
  auto im = std::make_shared<impl>();
  im->id = kind::custom;
  im->n = n;
  im->custom_fn = std::move(fn);
  if (verify) spot_verify_metric(n, im->custom_fn);
  return ballot_metric(std::move(im));
}

ballot_metric ballot_metric::custom_unchecked(int n, std::function<double(ballot, ballot)> fn) {
  return custom(n, std::move(fn), false);
}

double ballot_metric::operator()(ballot a, ballot b) const { return impl_->evaluate(a, b); }
ballot_metric::kind ballot_metric::identifier() const { return impl_->id; }
int ballot_metric::candidate_count() const { return impl_->n; }
norm_exponent ballot_metric::layer_exponent() const { return impl_->p; }

double election_distance(const election& a, const election& b, const ballot_metric& metric) {
  if (a.vote_count() != b.vote_count())
    throw domain_error("election distance requires equal vote counts");
  double total = 0;
  for (int i = 0; i < a.vote_count(); ++i) total += metric(a.vote(i), b.vote(i));
  return total;
}

namespace {

/// Minimum distance from `vote` to any ballot containing `required`, plus one
/// minimizing ballot (the smallest mask on ties).
std::pair<double, ballot> per_vote_minimum(ballot vote, ballot required, int n,
                                           const ballot_metric& metric) {
  const std::uint32_t free = ballot::universe(n).minus(required).mask();
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = required.mask();
  // Enumerate b = required | sub over all subsets of the complement,
  // ascending so ties resolve to the smallest mask.
  std::uint32_t sub = 0;
  while (true) {
    std::uint32_t mask = required.mask() | sub;
    double d = metric(vote, ballot::from_mask(mask));
    if (d < best - kAbsTol) {
      best = d;
      best_mask = mask;
    }
    sub = (sub - free) & free;  // next subset of `free` in ascending order
    if (sub == 0) break;
  }
  return {best, ballot::from_mask(best_mask)};
}

}  // namespace

nearest_result nearest_unanimous(const election& e, const committee& k, const ballot_metric& metric) {
  const int n = e.candidate_count();
  if (!k.members().subset_of(ballot::universe(n)))
    throw domain_error("committee outside candidate universe");

  const bool symdiff_closed = metric.identifier() == ballot_metric::kind::symdiff;
  const bool layer_closed = metric.identifier() == ballot_metric::kind::layer && k.size() == 1;

  if (symdiff_closed || layer_closed) {
    // Closed form: adding the committee to every vote is per-vote optimal.
    std::vector<ballot> votes;
    votes.reserve(static_cast<std::size_t>(e.vote_count()));
    for (ballot v : e.votes()) votes.push_back(v | k.members());
    election witness(n, std::move(votes));

    double formula;
    if (symdiff_closed) {
      // m*k minus the sum of member approval counts.
      double approvals = 0;
      for (ballot v : e.votes()) approvals += static_cast<double>((v & k.members()).size());
      formula = static_cast<double>(e.vote_count()) * static_cast<double>(k.size()) - approvals;
    } else {
      // Sum of vote weights minus the candidate's score.
      const norm_exponent p = metric.layer_exponent();
      const int c = k.indices().front();
      formula = 0;
      for (ballot v : e.votes())
        if (!v.contains(c)) formula += lp_weight(v.size(), p);
    }

    double measured = election_distance(e, witness, metric);
    if (!nearly_equal(formula, measured))
      throw internal_error("closed-form nearest-unanimous distance disagrees with the metric");
    return {std::move(witness), formula};
  }

  std::vector<ballot> votes;
  votes.reserve(static_cast<std::size_t>(e.vote_count()));
  double total = 0;
  for (ballot v : e.votes()) {
    auto [d, b] = per_vote_minimum(v, k.members(), n, metric);
    total += d;
    votes.push_back(b);
  }
  return {election(n, std::move(votes)), total};
}

dr_result dr_winners(const election& e, int k, const ballot_metric& metric) {
  const int n = e.candidate_count();
  if (n > kEnumerationMaxCandidates) throw resource_error("too many candidates to enumerate committees");
  if (k < 1 || k > n) throw domain_error("committee size out of range");

  dr_result result;
  std::vector<std::pair<committee, election>> witnesses;
  double best = std::numeric_limits<double>::infinity();
  for (const committee& c : all_committees(n, k)) {
    nearest_result near = nearest_unanimous(e, c, metric);
    best = std::min(best, near.distance);
    result.scores.emplace_back(c, near.distance);
    witnesses.emplace_back(c, std::move(near.witness));
  }

  std::vector<committee> winning;
  for (std::size_t i = 0; i < result.scores.size(); ++i) {
    if (nearly_equal(result.scores[i].second, best)) {
      winning.push_back(result.scores[i].first);
      result.nearest.push_back(witnesses[i]);
    }
  }
  result.winners = outcome(std::move(winning));
  return result;
}

counterexample_result construct_counterexample(int k, norm_exponent p) {
  if (k < 2) throw domain_error("the counterexample family requires k >= 2");
  if (p.is_infinite()) throw domain_error("the counterexample family requires finite p");
  const int n = k + 1;

  // Candidates: a1, a2, a3 are indices 0, 1, 2; the k-2 fillers follow.
  const ballot fillers = ballot::universe(n).minus(ballot::of({0, 1, 2}));
  const ballot vote_a1a3 = ballot::of({0, 2}) | fillers;  // size k
  const ballot vote_a1 = ballot::of({0}) | fillers;       // size k-1
  const ballot vote_a2 = ballot::of({1}) | fillers;       // size k-1

  const double w_k = lp_weight(k, p);
  const double w_k1 = lp_weight(k - 1, p);

  auto build = [&](long m1, long m2, long m3) {
    std::vector<ballot> votes;
    votes.reserve(static_cast<std::size_t>(m1 + m2 + m3));
    for (long i = 0; i < m1; ++i) votes.push_back(vote_a1a3);
    for (long i = 0; i < m2; ++i) votes.push_back(vote_a1);
    for (long i = 0; i < m3; ++i) votes.push_back(vote_a2);
    return election(n, std::move(votes));
  };

  // Lexicographically smallest (m3, m1) with m3 < m1 and m1/k^{1/p} <
  // m3/(k-1)^{1/p}, then minimal m2 making a1's score strictly largest. The
  // strict chain must clear the tie tolerance by a wide margin.
  for (long m3 = 1; m3 < 1000; ++m3) {
    for (long m1 = m3 + 1; static_cast<double>(m1) * w_k < static_cast<double>(m3) * w_k1; ++m1) {
      const double s_a3 = static_cast<double>(m1) * w_k;
      const double s_a2 = static_cast<double>(m3) * w_k1;
      for (long m2 = 1; m2 < 1000; ++m2) {
        const double s_a1 = s_a3 + static_cast<double>(m2) * w_k1;
        const double margin = 1e3 * kRelTol * std::max({s_a1, s_a2, s_a3});
        if (s_a1 - s_a2 <= margin) continue;
        if (s_a2 - s_a3 <= margin) break;  // growing m2 cannot fix this pair
        counterexample_result result{build(m1, m2, m3),
                                     outcome({committee(ballot::of({0, 1}) | fillers)}), m1, m2, m3};
        if (winners(result.e.to_profile(), k, p) != result.expected)
          throw internal_error("counterexample construction failed its own winner check");
        return result;
      }
    }
  }
  throw internal_error("no counterexample block sizes found within the search bound");
}

std::optional<falsification> falsify_metric(const ballot_metric& metric, int k, norm_exponent p,
                                            const std::vector<election>& elections) {
  for (const election& e : elections) {
    dr_result dr = dr_winners(e, k, metric);
    outcome rule = winners(e.to_profile(), k, p);
    if (dr.winners != rule) return falsification{e, dr.winners, rule};
  }
  return std::nullopt;
}

replacement_verdict check_replacement_property(const ballot_metric& metric, const election& e, int k) {
  const int n = e.candidate_count();
  if (n > 5 || e.vote_count() > 6)
    throw resource_error("replacement check is limited to n <= 5 and m <= 6");
  if (k < 1 || k > n) throw domain_error("committee size out of range");

  const int m = e.vote_count();
  for (const committee& c : all_committees(n, k)) {
    // Per-vote minimum distances and argmin sets over ballots containing c.
    std::vector<double> vote_min(static_cast<std::size_t>(m), 0.0);
    std::vector<std::vector<ballot>> vote_arg(static_cast<std::size_t>(m));
    const std::uint32_t free = ballot::universe(n).minus(c.members()).mask();
    for (int i = 0; i < m; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t sub = 0;
      std::vector<std::pair<double, ballot>> options;
      while (true) {
        ballot b = ballot::from_mask(c.mask() | sub);
        options.emplace_back(metric(e.vote(i), b), b);
        sub = (sub - free) & free;
        if (sub == 0) break;
      }
      for (const auto& [d, b] : options) best = std::min(best, d);
      vote_min[static_cast<std::size_t>(i)] = best;
      for (const auto& [d, b] : options)
        if (nearly_equal(d, best)) vote_arg[static_cast<std::size_t>(i)].push_back(b);
    }
    double base = 0;
    for (double d : vote_min) base += d;

    // Enumerate the nearest unanimous elections as the product of per-vote
    // argmin sets (capped; ample at this scale).
    std::vector<std::size_t> choice(static_cast<std::size_t>(m), 0);
    long enumerated = 0;
    while (true) {
      if (++enumerated > 100000)
        throw resource_error("too many tied nearest unanimous elections to enumerate");
      for (int pos = 0; pos < m; ++pos) {
        ballot replaced = vote_arg[static_cast<std::size_t>(pos)][choice[static_cast<std::size_t>(pos)]];
        // After replacing vote `pos` with its counterpart in U, recompute the
        // nearest distance over the class and U's own distance.
        auto [new_min_pos, ignored] = per_vote_minimum(replaced, c.members(), n, metric);
        double class_min = base - vote_min[static_cast<std::size_t>(pos)] + new_min_pos;
        double u_distance = base - vote_min[static_cast<std::size_t>(pos)] + metric(replaced, replaced);
        if (u_distance > class_min + kAbsTol &&
            !nearly_equal(u_distance, class_min)) {
          replacement_verdict verdict;
          verdict.holds = false;
          verdict.detail = "replaced vote " + std::to_string(pos) + " for a committee of size " +
                           std::to_string(k) + " pushed the chosen election off the nearest set";
          return verdict;
        }
      }
      // Advance the mixed-radix choice vector.
      int idx = 0;
      while (idx < m) {
        std::size_t& slot = choice[static_cast<std::size_t>(idx)];
        if (++slot < vote_arg[static_cast<std::size_t>(idx)].size()) break;
        slot = 0;
        ++idx;
      }
      if (idx == m) break;
    }
  }
  return {};
}

}  // namespace kpvote
