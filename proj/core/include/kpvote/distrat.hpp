#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kpvote/types.hpp"

namespace kpvote {

// The layer metric materializes the subset lattice (2^n - 1 nodes).
inline constexpr int kLayerMaxCandidates = 16;

/// A fixed-length ordered sequence of nonempty ballots.
class election {
 public:
  election(int candidate_count, std::vector<ballot> votes);

  int candidate_count() const { return n_; }
  int vote_count() const { return static_cast<int>(votes_.size()); }
  const std::vector<ballot>& votes() const { return votes_; }
  ballot vote(int i) const { return votes_[static_cast<std::size_t>(i)]; }

  /// The induced profile (vote order forgotten).
  profile to_profile() const;

  /// A copy with position i replaced.
  election with_vote(int i, ballot b) const;

  /// True when every vote contains the committee.
  bool unanimous_for(const committee& k) const;

  bool operator==(const election&) const = default;

 private:
  int n_;
  std::vector<ballot> votes_;
};

/// A metric on ballots. Construction through `symdiff` / `layer` / `custom`
/// spot-verifies the metric axioms (exhaustively for n <= 4, sampled above);
/// `custom_unchecked` skips verification so deliberately broken distances can
/// be studied.
class ballot_metric {
 public:
  enum class kind { symdiff, layer, custom };

  static ballot_metric symdiff(int n);
  static ballot_metric layer(int n, norm_exponent p);
  static ballot_metric custom(int n, std::function<double(ballot, ballot)> fn, bool verify = true);
  static ballot_metric custom_unchecked(int n, std::function<double(ballot, ballot)> fn);

  double operator()(ballot a, ballot b) const;
  kind identifier() const;
  int candidate_count() const;
  /// Only meaningful for the layer kind.
  norm_exponent layer_exponent() const;

 private:
  struct impl;
  explicit ballot_metric(std::shared_ptr<impl> im) : impl_(std::move(im)) {}
  std::shared_ptr<impl> impl_;
};

/// Cardinality of the symmetric difference.
int symdiff_distance(ballot a, ballot b);

/// Shortest-path distance on the ballot lattice where the edge between a set
/// and its one-element extension costs 1/|smaller set|^{1/p}. One-off
/// computation; prefer ballot_metric::layer for repeated queries (it memoizes
/// per-source searches).
double layer_distance(ballot a, ballot b, int n, norm_exponent p);

/// Positional sum of ballot distances; elections must have equal length.
double election_distance(const election& a, const election& b, const ballot_metric& metric);

struct nearest_result {
  election witness;
  double distance;
};

/// The nearest election (under the induced positional metric) in which every
/// vote contains the committee. Each vote is minimized independently; the
/// symmetric-difference and single-candidate layer cases use their closed
/// forms (adding the committee to each vote), verified against the metric.
nearest_result nearest_unanimous(const election& e, const committee& k, const ballot_metric& metric);

struct dr_result {
  std::vector<std::pair<committee, double>> scores;  // every committee, lex order
  outcome winners;
  std::vector<std::pair<committee, election>> nearest;  // witnesses for the winners
};

/// Distance-rationalized winners: committees whose nearest unanimous election
/// is closest.
dr_result dr_winners(const election& e, int k, const ballot_metric& metric);

struct counterexample_result {
  election e;
  outcome expected;  // the k,p winners of e
  long m1, m2, m3;   // block sizes of the three vote groups
};

/// The three-block election family separating F_{k,p} (k >= 2, p finite) from
/// every vote-induced distance rationalization: m1 votes {a1,a3,b...}, m2
/// votes {a1,b...}, m3 votes {a2,b...} over n = k+1 candidates, with the
/// smallest block sizes giving s_p(a1) > s_p(a2) > s_p(a3).
counterexample_result construct_counterexample(int k, norm_exponent p);

struct falsification {
  election witness;
  outcome dr;
  outcome rule;
};

/// First election where the metric's DR winners differ from the k,p winners.
std::optional<falsification> falsify_metric(const ballot_metric& metric, int k, norm_exponent p,
                                            const std::vector<election>& elections);

struct replacement_verdict {
  bool holds = true;
  std::string detail;  // set when the property fails
};

/// Checks, for every committee K and every nearest K-unanimous election U,
/// that replacing any single vote of E by the corresponding vote of U leaves
/// U among the nearest K-unanimous elections. Brute-force scale only.
replacement_verdict check_replacement_property(const ballot_metric& metric, const election& e, int k);

}  // namespace kpvote
