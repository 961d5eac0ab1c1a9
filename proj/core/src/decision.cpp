#include "kpvote/decision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kpvote/scores.hpp"
#include "kpvote/winners.hpp"

namespace kpvote {

namespace {

double size_weight(ballot b, norm_exponent p) { return lp_weight(b.size(), p); }

void check_model_scale(int n) {
  if (n < 1 || n > kEnumerationMaxCandidates)
    throw resource_error("noise model requires 1 <= n <= 20 for explicit normalization");
}

/// argmax over committees of a total, with tie tolerance; -infinity entries
/// lose unless everything is -infinity.
outcome argmax_committees(int n, int k, const std::function<double(const committee&)>& total) {
  std::vector<committee> cs = all_committees(n, k);
  std::vector<double> values;
  values.reserve(cs.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const committee& c : cs) {
    double v = total(c);
    values.push_back(v);
    best = std::max(best, v);
  }
  std::vector<committee> result;
  if (std::isinf(best) && best < 0) return outcome(std::move(cs));  // all impossible: full tie
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (std::isfinite(values[i]) && nearly_equal(values[i], best)) result.push_back(cs[i]);
  return outcome(std::move(result));
}

}  // namespace

double utility_value(ballot b, const committee& k, const utility_params& params) {
  if (b.empty()) throw domain_error("utility is defined on nonempty ballots");
  double w = static_cast<double>((b & k.members()).size());
  double l = static_cast<double>(b.minus(k.members()).size());
  return params.u0 + (params.alpha * w + params.beta * l) * size_weight(b, params.p);
}

utility_fn make_utility(const utility_params& params) {
  if (!(params.alpha > params.beta)) throw domain_error("utility requires alpha > beta");
  return [params](ballot b, const committee& k) { return utility_value(b, k, params); };
}

outcome um_winners(const profile& pi, int k, const utility_fn& utility) {
  const int n = pi.candidate_count();
  if (n > kEnumerationMaxCandidates) throw resource_error("too many candidates to enumerate committees");
  if (k < 1 || k > n) throw domain_error("committee size out of range");
  if (!(pi.total() > 0)) throw domain_error("profile has no positive multiplicity");
  return argmax_committees(n, k, [&](const committee& c) {
    double t = 0;
    for (const auto& [b, m] : pi.entries()) t += m * utility(b, c);
    return t;
  });
}

double generalized_utility_value(ballot b, const committee& k,
                                 const generalized_utility_params& params) {
  if (b.empty()) throw domain_error("utility is defined on nonempty ballots");
  double w = static_cast<double>((b & k.members()).size());
  double l = static_cast<double>(b.minus(k.members()).size());
  double outside = static_cast<double>(params.m - params.k) - l;
  double inside_missed = static_cast<double>(params.k) - w;
  return params.u0 + (params.alpha * w + params.beta * l + params.gamma * inside_missed +
                      params.delta * outside) *
                         size_weight(b, params.p);
}

reduced_utility reduce_generalized_utility(const generalized_utility_params& params) {
  double alpha = params.alpha - params.gamma;
  double beta = params.beta - params.delta;
  if (!(alpha > beta))
    throw domain_error("reduction requires alpha - gamma > beta - delta");
  reduced_utility out;
  out.base = {params.u0, alpha, beta, params.p};
  out.offset_coefficient = params.gamma * static_cast<double>(params.k) +
                           params.delta * static_cast<double>(params.m - params.k);
  return out;
}

namespace {

/// Sums the unnormalized model over every nonempty ballot for each committee
/// and checks the totals agree. Returns the shared normalizer.
/// When the full committee sweep is too large, a deterministic strided
/// sample is checked instead.
double committee_invariant_normalizer(const noise_model& model, const char* what) {
  const std::uint32_t full = ballot::universe(model.n).mask();
  std::vector<committee> cs = all_committees(model.n, model.k);
  std::size_t stride = 1;
  const double work = static_cast<double>(cs.size()) * static_cast<double>(full);
  if (work > 2e7) stride = static_cast<std::size_t>(work / 2e7) + 1;
  double reference = 0;
  bool have_reference = false;
  for (std::size_t i = 0; i < cs.size(); i += stride) {
    double z = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask)
      z += model.unnormalized(cs[i], ballot::from_mask(mask));
    if (!have_reference) {
      reference = z;
      have_reference = true;
    } else if (!nearly_equal(z, reference)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "%s: normalization varies across committees (%.17g vs %.17g)", what, reference,
                    z);
      throw domain_error(buf);
    }
  }
  return reference;
}

}  // namespace

noise_model kp_noise_model(norm_exponent p, double alpha, double beta, int n, int k) {
  check_model_scale(n);
  if (k < 1 || k > n) throw domain_error("committee size out of range");
  // alpha == beta degenerates to the uniform model; the winner equivalence
  // needs strict inequality, which callers check where it matters.
  if (!(alpha >= beta) || !(beta > 0))
    throw domain_error("noise model requires alpha >= beta > 0");
  noise_model model;
  model.n = n;
  model.k = k;
  model.label = "kp";
  model.unnormalized = [p, alpha, beta](const committee& c, ballot b) {
    if (b.empty()) return 0.0;
    double w = static_cast<double>((b & c.members()).size());
    double l = static_cast<double>(b.minus(c.members()).size());
    double weight = lp_weight(b.size(), p);
    return std::pow(alpha, w * weight) * std::pow(beta, l * weight);
  };
  model.normalizer = committee_invariant_normalizer(model, "kp noise model");
  return model;
}

noise_model sequential_noise_model(int n, int k, const sequential_params& params) {
  check_model_scale(n);
  if (k < 1 || k > n) throw domain_error("committee size out of range");
  // p_in == p_out makes the ballot's membership split irrelevant (the
  // probability depends only on ballot size); below that the model is upside
  // down.
  if (!(params.p_out > 0) || !(params.p_in < 1) || !(params.p_in >= params.p_out))
    throw domain_error("sequential model requires 0 < p2 <= p1 < 1");
  noise_model model;
  model.n = n;
  model.k = k;
  model.label = "sequential";
  const double p1 = params.p_in, p2 = params.p_out;
  model.unnormalized = [n, k, p1, p2](const committee& c, ballot b) {
    double w = static_cast<double>((b & c.members()).size());
    double l = static_cast<double>(b.minus(c.members()).size());
    return std::pow(p1, w) * std::pow(1 - p1, static_cast<double>(k) - w) * std::pow(p2, l) *
           std::pow(1 - p2, static_cast<double>(n - k) - l);
  };
  model.normalizer = 1.0;  // already a probability over all subsets; empty ballots never occur
  return model;
}

outcome mle_winners(const profile& pi, int k, const noise_model& model) {
  const int n = pi.candidate_count();
  if (n != model.n) throw domain_error("profile and noise model candidate universes differ");
  if (k != model.k) throw domain_error("committee size does not match the noise model");
  if (!(pi.total() > 0)) throw domain_error("profile has no positive multiplicity");
  const double log_z = std::log(model.normalizer);
  return argmax_committees(n, k, [&](const committee& c) {
    double loglik = 0;
    for (const auto& [b, m] : pi.entries()) {
      double value = model.unnormalized(c, b);
      if (!(value > 0)) return -std::numeric_limits<double>::infinity();
      loglik += m * (std::log(value) - log_z);
    }
    return loglik;
  });
}

noise_model noise_from_utility(const utility_fn& utility, int n, int k) {
  check_model_scale(n);
  noise_model model;
  model.n = n;
  model.k = k;
  model.label = "from-utility";
  model.unnormalized = [utility](const committee& c, ballot b) {
    return b.empty() ? 0.0 : std::exp(utility(b, c));
  };
  model.normalizer = committee_invariant_normalizer(model, "utility-induced model");
  return model;
}

utility_fn utility_from_noise(const noise_model& model) {
  const double log_z = std::log(model.normalizer);
  auto evaluate = model.unnormalized;
  return [evaluate, log_z](ballot b, const committee& c) {
    double value = evaluate(c, b);
    if (!(value > 0)) throw domain_error("log-likelihood utility requires positive likelihoods");
    return std::log(value) - log_z;
  };
}

}  // namespace kpvote
