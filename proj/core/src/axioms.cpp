#include "kpvote/axioms.hpp"

#include <algorithm>
#include <cmath>

#include "kpvote/profile_algebra.hpp"
#include "kpvote/scores.hpp"
#include "kpvote/winners.hpp"

namespace kpvote {

std::string to_string(axiom_id a) {
  switch (a) {
    case axiom_id::k_faithfulness: return "k-faithfulness";
    case axiom_id::consistency: return "consistency";
    case axiom_id::p_cancellation: return "p-cancellation";
    case axiom_id::p_disjoint_equality: return "p-disjoint-equality";
    case axiom_id::positive_scaling: return "positive-scaling";
  }
  throw internal_error("unknown axiom id");
}

std::optional<axiom_id> parse_axiom(const std::string& name) {
  for (axiom_id a : all_axioms())
    if (to_string(a) == name) return a;
  return std::nullopt;
}

std::vector<axiom_id> all_axioms() {
  return {axiom_id::k_faithfulness, axiom_id::consistency, axiom_id::p_cancellation,
          axiom_id::p_disjoint_equality, axiom_id::positive_scaling};
}

profile random_profile(int n, rng& gen, double max_multiplicity, bool real_valued) {
  const std::uint32_t full = ballot::universe(n).mask();
  while (true) {
    profile pi(n);
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      if (!gen.coin()) continue;
      double m = real_valued ? gen.uniform(0.0, max_multiplicity)
                             : static_cast<double>(gen.uniform_int(0, static_cast<int>(max_multiplicity)));
      pi.add(ballot::from_mask(mask), m);
    }
    if (pi.total() > 0) return pi;
  }
}

namespace {

outcome all_committees_outcome(int n, int k) { return outcome(all_committees(n, k)); }

/// Adds (target - score(c)) * theta_p^{{c}} for every candidate, which
/// equalizes all scores at the maximum. Singleton unit-score profiles have
/// multiplicity 1 regardless of p.
profile equalize_scores(const profile& pi, norm_exponent p) {
  std::vector<double> scores = candidate_scores(pi, p);
  double target = *std::max_element(scores.begin(), scores.end());
  profile out = pi;
  for (int c = 0; c < pi.candidate_count(); ++c) {
    double deficit = target - scores[static_cast<std::size_t>(c)];
    if (deficit > 0) out.add(ballot::single(c), deficit);
  }
  return out;
}

bool scores_all_equal(const profile& pi, norm_exponent p) {
  std::vector<double> scores = candidate_scores(pi, p);
  for (double s : scores)
    if (!nearly_equal(s, scores.front())) return false;
  return true;
}

audit_report found(axiom_id axiom, long trials, audit_witness w) {
  audit_report r;
  r.axiom = axiom;
  r.verdict = audit_verdict::counterexample;
  r.trials = trials;
  r.witness = std::move(w);
  return r;
}

audit_report audit_k_faithfulness(const voting_rule& rule, const audit_params& params) {
  long checked = 0;
  const std::uint32_t full = ballot::universe(params.n).mask();
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    ballot b = ballot::from_mask(mask);
    outcome expected = winners_function(b, params.k, params.n);
    outcome actual = rule(single_ballot_profile(b, params.n));
    ++checked;
    if (actual != expected) {
      audit_witness w;
      w.ballots = {b};
      w.profiles = {single_ballot_profile(b, params.n)};
      w.expected = expected;
      w.actual = actual;
      w.note = "rule(single ballot profile) differs from the winners function";
      return found(axiom_id::k_faithfulness, checked, std::move(w));
    }
  }
  return {axiom_id::k_faithfulness, audit_verdict::pass_within_budget, checked, std::nullopt};
}

audit_report audit_disjoint_equality(const voting_rule& rule, const audit_params& params) {
  long checked = 0;
  const std::uint32_t full = ballot::universe(params.n).mask();
  for (std::uint32_t m1 = 1; m1 <= full; ++m1) {
    for (std::uint32_t m2 = m1 + 1; m2 <= full; ++m2) {
      if ((m1 & m2) != 0) continue;
      ballot b = ballot::from_mask(m1), b2 = ballot::from_mask(m2);
      profile pi = add(unit_score_profile(b, params.n, params.p),
                       unit_score_profile(b2, params.n, params.p));
      outcome expected = winners_function(b | b2, params.k, params.n);
      outcome actual = rule(pi);
      ++checked;
      if (actual != expected) {
        audit_witness w;
        w.ballots = {b, b2};
        w.profiles = {pi};
        w.expected = expected;
        w.actual = actual;
        w.note = "rule(theta^b + theta^b') differs from the winners function of the union";
        return found(axiom_id::p_disjoint_equality, checked, std::move(w));
      }
    }
  }
  return {axiom_id::p_disjoint_equality, audit_verdict::pass_within_budget, checked, std::nullopt};
}

audit_report audit_cancellation(const voting_rule& rule, const audit_params& params,
                                const audit_budget& budget) {
  const outcome everything = all_committees_outcome(params.n, params.k);
  long checked = 0;

  auto try_profile = [&](const profile& pi) -> std::optional<audit_report> {
    if (!scores_all_equal(pi, params.p)) throw internal_error("cancellation instance not equalized");
    outcome actual = rule(pi);
    ++checked;
    if (actual != everything) {
      audit_witness w;
      w.profiles = {pi};
      w.expected = everything;
      w.actual = actual;
      w.note = "all candidate scores are equal but the rule does not return every committee";
      return found(axiom_id::p_cancellation, checked, std::move(w));
    }
    return std::nullopt;
  };

  // Complement pairs: theta_p^b + theta_p^{complement} gives every candidate
  // score exactly 1, as does theta_p on the full candidate set.
  const std::uint32_t full = ballot::universe(params.n).mask();
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    ballot b = ballot::from_mask(mask);
    profile pi = b.mask() == full
                     ? unit_score_profile(b, params.n, params.p)
                     : add(unit_score_profile(b, params.n, params.p),
                           unit_score_profile(b.complement(params.n), params.n, params.p));
    if (auto r = try_profile(pi)) return *r;
  }

  for (long trial = 0; trial < budget.trials; ++trial) {
    rng gen = rng::for_trial(budget.seed, static_cast<std::uint64_t>(trial));
    profile pi = random_profile(params.n, gen, budget.max_multiplicity, trial % 2 == 1);
    if (auto r = try_profile(equalize_scores(pi, params.p))) return *r;
  }
  return {axiom_id::p_cancellation, audit_verdict::pass_within_budget, checked, std::nullopt};
}

audit_report audit_consistency(const voting_rule& rule, const audit_params& params,
                               const audit_budget& budget) {
  long checked = 0;

  std::optional<audit_report> failure;
  auto check_pair = [&](const profile& left, const outcome& lo, const profile& right) {
    outcome ro = rule(right);
    outcome overlap = lo.intersect(ro);
    if (overlap.empty()) return false;
    ++checked;
    outcome combined = rule(add(left, right));
    if (combined != overlap) {
      audit_witness w;
      w.profiles = {left, right};
      w.expected = overlap;
      w.actual = combined;
      w.note = "combined profile outcome differs from the intersection of outcomes";
      failure = found(axiom_id::consistency, checked, std::move(w));
    }
    return true;
  };

  for (long trial = 0; trial < budget.trials && !failure; ++trial) {
    rng gen = rng::for_trial(budget.seed, static_cast<std::uint64_t>(trial));
    const bool real_valued = trial % 2 == 1;
    profile left = random_profile(params.n, gen, budget.max_multiplicity, real_valued);
    outcome lo = rule(left);

    switch (trial % 3) {
      case 0: {
        // Rejection-sample a partner whose outcome overlaps, sweeping scaled
        // copies of each draw; the sweep walks the combined profile across
        // score boundaries where non-additive rules betray themselves.
        static const double sweep[] = {0.25, 0.5, 1.0, 2.0, 4.0};
        bool matched = false;
        for (int attempt = 0; attempt < 8 && !matched && !failure; ++attempt) {
          profile draw = random_profile(params.n, gen, budget.max_multiplicity, real_valued);
          for (double t : sweep) {
            if (check_pair(left, lo, scale(draw, t))) matched = true;
            if (failure) break;
          }
        }
        break;
      }
      case 1:  // a scaled copy always shares its outcome with the original
        check_pair(left, lo, scale(left, gen.uniform(0.25, 4.0)));
        break;
      default: {  // boost a winning committee of `left` to the top of a fresh draw
        profile right = random_profile(params.n, gen, budget.max_multiplicity, real_valued);
        const committee& target =
            lo.committees()[static_cast<std::size_t>(gen.uniform_int(0, static_cast<int>(lo.size()) - 1))];
        double boost = 2.0 * (right.total() + left.total()) + 1.0;
        for (int c : target.indices()) right.add(ballot::single(c), boost);
        check_pair(left, lo, right);
        break;
      }
    }
  }
  if (failure) return *failure;
  return {axiom_id::consistency, audit_verdict::pass_within_budget, checked, std::nullopt};
}

audit_report audit_positive_scaling(const voting_rule& rule, const audit_params& params,
                                    const audit_budget& budget) {
  static const double fixed_factors[] = {1.0 / 3.0, 0.7, 1.4142135623730951, 3.141592653589793, 10.0};
  long checked = 0;
  for (long trial = 0; trial < budget.trials; ++trial) {
    rng gen = rng::for_trial(budget.seed, static_cast<std::uint64_t>(trial));
    profile pi = random_profile(params.n, gen, budget.max_multiplicity, trial % 2 == 1);
    double factor = trial % 2 == 0
                        ? fixed_factors[static_cast<std::size_t>(trial / 2) % std::size(fixed_factors)]
                        : gen.uniform(0.1, 10.0);
    outcome base = rule(pi);
    outcome scaled = rule(scale(pi, factor));
    ++checked;
    if (scaled != base) {
      audit_witness w;
      w.profiles = {pi};
      w.scalar = factor;
      w.expected = base;
      w.actual = scaled;
      w.note = "scaling the profile changed the outcome";
      return found(axiom_id::positive_scaling, checked, std::move(w));
    }
  }
  return {axiom_id::positive_scaling, audit_verdict::pass_within_budget, checked, std::nullopt};
}

}  // namespace

audit_report audit(const voting_rule& rule, axiom_id axiom, const audit_params& params,
                   const audit_budget& budget) {
  if (params.n < 1 || params.n > 10) throw resource_error("audit requires 1 <= n <= 10");
  if (params.k < 1 || params.k > params.n) throw domain_error("committee size out of range");
  audit_report report;
  switch (axiom) {
    case axiom_id::k_faithfulness: report = audit_k_faithfulness(rule, params); break;
    case axiom_id::consistency: report = audit_consistency(rule, params, budget); break;
    case axiom_id::p_cancellation: report = audit_cancellation(rule, params, budget); break;
    case axiom_id::p_disjoint_equality: report = audit_disjoint_equality(rule, params); break;
    case axiom_id::positive_scaling: report = audit_positive_scaling(rule, params, budget); break;
  }
  if (report.verdict == audit_verdict::counterexample &&
      !witness_violates(rule, axiom, params, *report.witness))
    throw internal_error("audit produced a witness that does not re-verify");
  return report;
}

bool witness_violates(const voting_rule& rule, axiom_id axiom, const audit_params& params,
                      const audit_witness& witness) {
  switch (axiom) {
    case axiom_id::k_faithfulness: {
      if (witness.ballots.size() != 1) return false;
      ballot b = witness.ballots.front();
      return rule(single_ballot_profile(b, params.n)) != winners_function(b, params.k, params.n);
    }
    case axiom_id::p_disjoint_equality: {
      if (witness.ballots.size() != 2) return false;
      ballot b = witness.ballots[0], b2 = witness.ballots[1];
      if (!b.disjoint_with(b2)) return false;
      profile pi = add(unit_score_profile(b, params.n, params.p),
                       unit_score_profile(b2, params.n, params.p));
      return rule(pi) != winners_function(b | b2, params.k, params.n);
    }
    case axiom_id::p_cancellation: {
      if (witness.profiles.size() != 1) return false;
      const profile& pi = witness.profiles.front();
      return scores_all_equal(pi, params.p) &&
             rule(pi) != outcome(all_committees(params.n, params.k));
    }
    case axiom_id::consistency: {
      if (witness.profiles.size() != 2) return false;
      outcome lo = rule(witness.profiles[0]), ro = rule(witness.profiles[1]);
      outcome overlap = lo.intersect(ro);
      if (overlap.empty()) return false;
      return rule(add(witness.profiles[0], witness.profiles[1])) != overlap;
    }
    case axiom_id::positive_scaling: {
      if (witness.profiles.size() != 1 || !witness.scalar) return false;
      if (!(*witness.scalar > 0)) return false;
      return rule(scale(witness.profiles.front(), *witness.scalar)) != rule(witness.profiles.front());
    }
  }
  return false;
}

voting_rule kp_rule(int k, norm_exponent p) {
  return [k, p](const profile& pi) { return winners(pi, k, p); };
}

namespace {

/// Scores committees by negated candidate scores; the "least approved"
/// committees win. Fails k-faithfulness immediately.
outcome argmin_rule(const profile& pi, int k, norm_exponent p) {
  comparison_basis basis = comparison_scores(pi, p);
  std::vector<committee> cs = all_committees(pi.candidate_count(), k);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> totals;
  totals.reserve(cs.size());
  for (const committee& c : cs) {
    double t = 0;
    for (int i : c.indices()) t += basis.values[static_cast<std::size_t>(i)];
    totals.push_back(t);
    best = std::min(best, t);
  }
  std::vector<committee> result;
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (basis.exact ? totals[i] == best : nearly_equal(totals[i], best)) result.push_back(cs[i]);
  return outcome(std::move(result));
}

/// Resolute variant: returns only the lexicographically first tied committee.
/// Consistent, but fails every axiom whose expected outcome has ties.
outcome tiebreak_lex_rule(const profile& pi, int k, norm_exponent p) {
  outcome full = winners(pi, k, p);
  return outcome({full.committees().front()});
}

/// Iteratively eliminates the lowest-scoring candidate, re-normalizing each
/// ballot by the count of its surviving members, until k remain. An
/// instant-runoff flavor of approval; not consistent.
outcome eliminate_lowest_rule(const profile& pi, int k, norm_exponent p) {
  const int n = pi.candidate_count();
  ballot active = ballot::universe(n);
  while (active.size() > k) {
    std::vector<double> scores(static_cast<std::size_t>(n), 0.0);
    for (const auto& [b, m] : pi.entries()) {
      ballot live = b & active;
      if (live.empty()) continue;
      double w = m * lp_weight(live.size(), p);
      for (int c : live.indices()) scores[static_cast<std::size_t>(c)] += w;
    }
    int victim = -1;
    for (int c : active.indices())
      if (victim < 0 || scores[static_cast<std::size_t>(c)] <
                            scores[static_cast<std::size_t>(victim)] - kAbsTol)
        victim = c;
    active = active.minus(ballot::single(victim));
  }
  return outcome({committee(active)});
}

/// Truncates multiplicities to integers before scoring, so scaling by a
/// fractional factor changes the effective profile.
outcome floor_multiplicities_rule(const profile& pi, int k, norm_exponent p) {
  profile floored(pi.candidate_count());
  for (const auto& [b, m] : pi.entries()) floored.add(b, std::floor(m));
  if (!(floored.total() > 0)) return outcome(all_committees(pi.candidate_count(), k));
  return winners(floored, k, p);
}

}  // namespace

voting_rule broken_rule(const std::string& name, int k, norm_exponent p) {
  if (name == "argmin")
    return [k, p](const profile& pi) { return argmin_rule(pi, k, p); };
  if (name == "tiebreak-lex")
    return [k, p](const profile& pi) { return tiebreak_lex_rule(pi, k, p); };
  if (name == "eliminate-lowest")
    return [k, p](const profile& pi) { return eliminate_lowest_rule(pi, k, p); };
  if (name == "floor-multiplicities")
    return [k, p](const profile& pi) { return floor_multiplicities_rule(pi, k, p); };
  throw domain_error("unknown rule variant '" + name + "'");
}

std::vector<std::string> broken_rule_names() {
  return {"argmin", "tiebreak-lex", "eliminate-lowest", "floor-multiplicities"};
}

}  // namespace kpvote
