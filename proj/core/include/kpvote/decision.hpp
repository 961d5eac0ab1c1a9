#pragma once

#include <functional>
#include <string>

#include "kpvote/types.hpp"

namespace kpvote {

/// Parameters of the linear utility family U(b,K) = U0 + (alpha*|b∩K| +
/// beta*|b\K|) / |b|^{1/p}. Requires alpha > beta so larger committees of
/// high-scoring candidates are preferred.
struct utility_params {
  double u0 = 0;
  double alpha = 1;
  double beta = 0;
  norm_exponent p = norm_exponent::infinity();
};

double utility_value(ballot b, const committee& k, const utility_params& params);

using utility_fn = std::function<double(ballot, const committee&)>;

utility_fn make_utility(const utility_params& params);

/// Committees maximizing total voter utility sum_b pi(b) * U(b, K).
outcome um_winners(const profile& pi, int k, const utility_fn& utility);

struct generalized_utility_params {
  double u0 = 0;
  double alpha = 1;
  double beta = 0;
  double gamma = 0;   // weight on |K \ b|
  double delta = 0;   // weight on candidates outside both K and b
  int k = 1;
  int m = 1;          // total candidate count
  norm_exponent p = norm_exponent::infinity();
};

/// The reduction of the four-term utility to the two-term family: the gamma
/// and delta terms fold into a per-ballot offset plus adjusted alpha and
/// beta. UM winners are unchanged.
struct reduced_utility {
  utility_params base;       // u0 and alpha' = alpha - gamma, beta' = beta - delta
  double offset_coefficient; // per-ballot offset is offset_coefficient / |b|^{1/p}
};

reduced_utility reduce_generalized_utility(const generalized_utility_params& params);

/// Evaluates the four-term utility directly (for cross-checking the reduction).
double generalized_utility_value(ballot b, const committee& k,
                                 const generalized_utility_params& params);

/// A committee-conditioned ballot distribution. `unnormalized` evaluates the
/// relative likelihood of a ballot given a committee; `normalizer` is the
/// committee-invariant constant that scales it to a probability (1 when the
/// model is already proportional to a probability and the constant is folded
/// away).
struct noise_model {
  int n = 0;
  int k = 0;
  std::function<double(const committee&, ballot)> unnormalized;
  double normalizer = 1.0;
  std::string label;
};

/// The model P(K,b) proportional to alpha^{|b∩K|/|b|^{1/p}} *
/// beta^{|b\K|/|b|^{1/p}} with alpha > beta > 0. The normalizer is computed
/// by explicit summation over all nonempty ballots and verified to be
/// committee-invariant.
noise_model kp_noise_model(norm_exponent p, double alpha, double beta, int n, int k);

struct sequential_params {
  double p_in = 0.9;   // approval probability for committee members
  double p_out = 0.1;  // approval probability for everyone else
};

/// Independent per-candidate approvals: committee members are approved with
/// probability p_in, others with p_out < p_in. Left unnormalized over
/// nonempty ballots; the argmax is unaffected.
noise_model sequential_noise_model(int n, int k, const sequential_params& params);

/// Committees maximizing the log-likelihood sum_b pi(b) * ln P(K,b). A zero
/// likelihood on a present ballot sends the committee to -infinity; such
/// committees are excluded unless every committee is.
outcome mle_winners(const profile& pi, int k, const noise_model& model);

/// Builds the noise model e^{U(b,K)} / Z(K); requires the induced Z to be
/// committee-invariant (verified, failing with a diagnostic otherwise).
noise_model noise_from_utility(const utility_fn& utility, int n, int k);

/// The log-likelihood as a utility; requires strictly positive likelihoods.
utility_fn utility_from_noise(const noise_model& model);

}  // namespace kpvote
