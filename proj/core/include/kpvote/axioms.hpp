#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kpvote/random.hpp"
#include "kpvote/types.hpp"

namespace kpvote {

enum class axiom_id {
  k_faithfulness,
  consistency,
  p_cancellation,
  p_disjoint_equality,
  positive_scaling,
};

std::string to_string(axiom_id a);
std::optional<axiom_id> parse_axiom(const std::string& name);
std::vector<axiom_id> all_axioms();

/// A voting rule under audit. Committee size and norm exponent, if the rule
/// has them, are baked into the callable.
using voting_rule = std::function<outcome(const profile&)>;

struct audit_params {
  int n = 3;
  int k = 1;
  norm_exponent p = norm_exponent::infinity();
};

struct audit_budget {
  long trials = 1000;
  std::uint64_t seed = 0;
  double max_multiplicity = 10.0;
};

enum class audit_verdict { pass_within_budget, counterexample };

/// Everything needed to independently re-evaluate a reported violation.
struct audit_witness {
  std::vector<profile> profiles;
  std::vector<ballot> ballots;
  std::optional<double> scalar;
  outcome expected;
  outcome actual;
  std::string note;
};

struct audit_report {
  axiom_id axiom;
  audit_verdict verdict = audit_verdict::pass_within_budget;
  long trials = 0;
  std::optional<audit_witness> witness;
};

/// Searches for a counterexample to the axiom for the supplied rule.
///
/// k-faithfulness and p-disjoint equality are exhausted over all ballots /
/// disjoint ballot pairs. p-cancellation first sweeps the complement-pair
/// family theta_p^b + theta_p^{b complement} (every candidate scores 1), then
/// random profiles with scores equalized by adding singleton unit-score
/// terms. Consistency and positive scaling run seeded random trials;
/// consistency alternates independent pairs, scaled copies, and pairs whose
/// second profile is engineered to share a winning committee.
audit_report audit(const voting_rule& rule, axiom_id axiom, const audit_params& params,
                   const audit_budget& budget);

/// Re-evaluates a witness against the axiom's defining equation.
bool witness_violates(const voting_rule& rule, axiom_id axiom, const audit_params& params,
                      const audit_witness& witness);

/// F_{k,p} as a rule value.
voting_rule kp_rule(int k, norm_exponent p);

/// Deliberately defective rules, each named for the axiom it demonstrably
/// fails: "argmin" (k-faithfulness), "tiebreak-lex" (p-cancellation),
/// "eliminate-lowest" (consistency), "floor-multiplicities" (positive
/// scaling). A builtin with a mismatched exponent covers p-disjoint equality.
voting_rule broken_rule(const std::string& name, int k, norm_exponent p);
std::vector<std::string> broken_rule_names();

/// Random profile: each nonempty ballot is present with probability 1/2,
/// with multiplicity uniform on {0,...,max} (integer mode) or [0,max] (real
/// mode). Redraws until some multiplicity is positive.
profile random_profile(int n, rng& gen, double max_multiplicity, bool real_valued);

}  // namespace kpvote
