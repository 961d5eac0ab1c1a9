// Acceptance suite: one pass/fail line per criterion. Usage:
//   acceptance <path-to-kpvote-cli> <fixtures-dir>
// Exits nonzero when any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kpvote/axioms.hpp"
#include "kpvote/decision.hpp"
#include "kpvote/distrat.hpp"
#include "kpvote/io.hpp"
#include "kpvote/profile_algebra.hpp"
#include "kpvote/random.hpp"
#include "kpvote/scores.hpp"
#include "kpvote/winners.hpp"

using namespace kpvote;
using clock_type = std::chrono::steady_clock;

namespace {

std::string g_cli_path;
std::string g_fixture_dir;
int g_failures = 0;

struct check_failure {
  std::string message;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw check_failure{message};
}

void run_criterion(int number, const std::string& title, const std::function<void()>& body) {
  auto start = clock_type::now();
  std::string failure;
  try {
    body();
  } catch (const check_failure& f) {
    failure = f.message;
  } catch (const std::exception& e) {
    failure = std::string("unexpected exception: ") + e.what();
  }
  double seconds = std::chrono::duration<double>(clock_type::now() - start).count();
  if (failure.empty()) {
    std::printf("PASS criterion %d: %s (%.2fs)\n", number, title.c_str(), seconds);
  } else {
    ++g_failures;
    std::printf("FAIL criterion %d: %s (%.2fs)\n      %s\n", number, title.c_str(), seconds,
                failure.c_str());
  }
  std::fflush(stdout);
}

std::string fixture(const std::string& name) { return g_fixture_dir + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct command_result {
  int exit_code;
  std::string output;
};

command_result run_command(const std::string& args, bool merge_stderr, bool raw = false) {
  std::string cmd = raw ? args : g_cli_path + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  require(pipe != nullptr, "popen failed for: " + cmd);
  std::string output;
  std::array<char, 4096> chunk{};
  std::size_t got;
  while ((got = fread(chunk.data(), 1, chunk.size(), pipe)) > 0) output.append(chunk.data(), got);
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, output};
}

const norm_exponent p1 = norm_exponent::finite(1);
const norm_exponent p2 = norm_exponent::finite(2);
const norm_exponent pinf = norm_exponent::infinity();

outcome single(int index) { return outcome({committee::of({index})}); }

election random_election(int n, int m, rng& gen) {
  std::vector<ballot> votes;
  const int full = static_cast<int>(ballot::universe(n).mask());
  for (int i = 0; i < m; ++i)
    votes.push_back(ballot::from_mask(static_cast<std::uint32_t>(gen.uniform_int(1, full))));
  return election(n, std::move(votes));
}

void criterion_1_showcase_scores() {
  profile_document doc = parse_profile(read_file(fixture("example_sweep.profile")));
  const profile& pi = doc.entries;

  require(candidate_scores(pi, p1) == std::vector<double>{1161, 1133, 916},
          "p=1 scores are not exactly (1161, 1133, 916)");
  const double expected2[] = {1310.53, 1353.78, 1244.89};
  for (int c = 0; c < 3; ++c)
    require(std::abs(candidate_score(c, pi, p2) - expected2[c]) <= 0.01,
            "p=2 score out of tolerance for candidate " + std::to_string(c + 1));
  require(candidate_scores(pi, pinf) == std::vector<double>{1522, 1666, 1710},
          "p=inf scores are not exactly (1522, 1666, 1710)");

  require(winners(pi, 1, p1) == single(0), "p=1 winner is not c1");
  require(winners(pi, 1, p2) == single(1), "p=2 winner is not c2");
  require(winners(pi, 1, pinf) == single(2), "p=inf winner is not c3");
}

void criterion_2_small_profiles() {
  profile a = parse_profile(read_file(fixture("approval_a.profile"))).entries;
  profile b = parse_profile(read_file(fixture("approval_b.profile"))).entries;

  require(candidate_scores(a, pinf) == std::vector<double>{4, 5, 3}, "approval scores of A");
  require(candidate_scores(b, pinf) == std::vector<double>{2, 3, 3}, "approval scores of B");
  require(winners(a, 1, pinf) == single(1), "approval winner of A is not c2");
  require(winners(b, 1, pinf) == outcome({committee::of({1}), committee::of({2})}),
          "approval winners of B are not {c2, c3}");

  require(candidate_scores(a, p1) == std::vector<double>{3, 2.5, 1.5},
          "size-normalized scores of A are not (3, 2.5, 1.5)");
  require(candidate_scores(b, p1) == std::vector<double>{2, 1.5, 1.5},
          "size-normalized scores of B are not (2, 1.5, 1.5)");
  require(candidate_score(1, a, p1) == 2.5, "s_1(c2) must evaluate to 2.5 on profile A");
  require(winners(a, 1, p1) == single(0), "size-normalized winner of A is not c1");
  require(winners(b, 1, p1) == single(0), "size-normalized winner of B is not c1");
  require(winners_bruteforce(a, 1, p1) == single(0), "enumeration oracle disagrees on A");
}

void criterion_3_oracle_equivalence() {
  const std::vector<norm_exponent> ps = {p1, norm_exponent::finite(1.5), p2,
                                         norm_exponent::finite(3), pinf};
  long checked = 0;
  for (long instance = 0; instance < 5000; ++instance) {
    rng gen = rng::for_trial(1729, static_cast<std::uint64_t>(instance));
    int n = gen.uniform_int(2, 8);
    int k = gen.uniform_int(1, std::min(4, n));
    profile pi = random_profile(n, gen, 10, instance % 2 == 1);
    norm_exponent p = ps[static_cast<std::size_t>(instance) % ps.size()];
    if (winners(pi, k, p) != winners_bruteforce(pi, k, p))
      require(false, "tier/brute-force mismatch at instance " + std::to_string(instance));
    ++checked;
  }
  require(checked >= 5000, "fewer than 5000 instances checked");
}

void criterion_4_axiom_suite() {
  const std::vector<norm_exponent> ps = {p1, p2, pinf};
  for (int k : {1, 2, 3}) {
    for (const norm_exponent& p : ps) {
      voting_rule rule = kp_rule(k, p);
      audit_budget budget{1000, 20240521, 10.0};
      // Exhaustive axioms across every admissible size up to 5; randomized
      // axioms at the largest.
      for (int n = std::max(2, k); n <= 5; ++n) {
        for (axiom_id axiom : {axiom_id::k_faithfulness, axiom_id::p_disjoint_equality}) {
          audit_report report = audit(rule, axiom, {n, k, p}, budget);
          require(report.verdict == audit_verdict::pass_within_budget,
                  "rule k=" + std::to_string(k) + " p=" + p.to_string() + " failed axiom " +
                      to_string(axiom) + " at n=" + std::to_string(n));
        }
      }
      for (axiom_id axiom :
           {axiom_id::consistency, axiom_id::p_cancellation, axiom_id::positive_scaling}) {
        audit_report report = audit(rule, axiom, {5, k, p}, budget);
        require(report.verdict == audit_verdict::pass_within_budget,
                "rule k=" + std::to_string(k) + " p=" + p.to_string() + " failed axiom " +
                    to_string(axiom));
      }
    }
  }

  // Each deliberately broken rule must be caught within the 1000-trial
  // budget by the axiom it was built to violate.
  auto expect_caught = [](const std::string& name, const voting_rule& rule, axiom_id axiom,
                          const audit_params& params) {
    audit_report report = audit(rule, axiom, params, {1000, 2024, 10.0});
    require(report.verdict == audit_verdict::counterexample,
            name + " was not caught by " + to_string(axiom));
    require(witness_violates(rule, axiom, params, *report.witness),
            name + " witness does not re-verify");
  };
  for (int k : {1, 2, 3}) {
    expect_caught("argmin", broken_rule("argmin", k, p1), axiom_id::k_faithfulness, {5, k, p1});
    expect_caught("tiebreak-lex", broken_rule("tiebreak-lex", k, p1), axiom_id::p_cancellation,
                  {5, k, p1});
    expect_caught("floor-multiplicities", broken_rule("floor-multiplicities", k, p1),
                  axiom_id::positive_scaling, {5, k, p1});
    // Two elimination rounds at least; a single round is still consistent.
    int n = k + 3 > 5 ? 6 : 5;
    expect_caught("eliminate-lowest", broken_rule("eliminate-lowest", k, p1),
                  axiom_id::consistency, {n, k, p1});
    // A rule evaluated at the wrong exponent violates p-disjoint equality.
    expect_caught("builtin (exponent mismatch)", kp_rule(k, pinf), axiom_id::p_disjoint_equality,
                  {5, k, p1});
  }
}

void criterion_5_um_mle() {
  long agreements = 0;
  for (long instance = 0; instance < 1000; ++instance) {
    rng gen = rng::for_trial(271828, static_cast<std::uint64_t>(instance));
    int n = gen.uniform_int(2, 6);
    int k = gen.uniform_int(1, std::min(3, n));
    norm_exponent p = instance % 4 == 0 ? pinf : norm_exponent::finite(gen.uniform(1, 3));
    profile pi = random_profile(n, gen, 10, instance % 2 == 1);
    double beta = gen.uniform(0.05, 2);
    double alpha = beta + gen.uniform(0.05, 3);

    outcome by_score = winners(pi, k, p);
    require(um_winners(pi, k, make_utility({gen.uniform(-1, 1), alpha, beta, p})) == by_score,
            "UM mismatch at instance " + std::to_string(instance));
    require(mle_winners(pi, k, kp_noise_model(p, alpha, beta, n, k)) == by_score,
            "MLE mismatch at instance " + std::to_string(instance));
    ++agreements;
  }
  require(agreements >= 1000, "fewer than 1000 kp instances");

  long sequential_hits = 0;
  for (long instance = 0; instance < 1000; ++instance) {
    rng gen = rng::for_trial(314159, static_cast<std::uint64_t>(instance));
    int n = gen.uniform_int(2, 6);
    int k = gen.uniform_int(1, std::min(3, n));
    profile pi = random_profile(n, gen, 10, instance % 2 == 1);
    double p_out = gen.uniform(0.05, 0.45);
    double p_in = p_out + gen.uniform(0.05, 0.5);
    require(mle_winners(pi, k, sequential_noise_model(n, k, {p_in, p_out})) ==
                winners(pi, k, pinf),
            "sequential MLE mismatch at instance " + std::to_string(instance));
    ++sequential_hits;
  }
  require(sequential_hits >= 1000, "fewer than 1000 sequential instances");

  // Normalizer symmetry by explicit summation up to n = 10.
  for (int n : {4, 7, 10}) {
    for (int k : {1, 2, 3}) {
      noise_model model = kp_noise_model(p2, 2.2, 0.7, n, k);
      noise_model seq = sequential_noise_model(n, k, {0.8, 0.25});
      const std::uint32_t full = ballot::universe(n).mask();
      double z_ref = -1, seq_ref = -1;
      for (const committee& c : all_committees(n, k)) {
        double z = 0, zs = 0;
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
          z += model.unnormalized(c, ballot::from_mask(mask));
          zs += seq.unnormalized(c, ballot::from_mask(mask));
        }
        if (z_ref < 0) {
          z_ref = z;
          seq_ref = zs;
        }
        require(std::abs(z - z_ref) <= 1e-9 * std::max(std::abs(z), std::abs(z_ref)),
                "kp normalizer varies across committees at n=" + std::to_string(n));
        require(std::abs(zs - seq_ref) <= 1e-9 * std::max(std::abs(zs), std::abs(seq_ref)),
                "sequential mass varies across committees at n=" + std::to_string(n));
      }
    }
  }
}

void criterion_6_dr_positive() {
  const std::vector<norm_exponent> layer_ps = {p1, norm_exponent::finite(1.5), p2, pinf};
  long checked = 0;
  for (long instance = 0; instance < 500; ++instance) {
    rng gen = rng::for_trial(60901, static_cast<std::uint64_t>(instance));
    int n = gen.uniform_int(2, 5);
    int m = gen.uniform_int(1, 6);
    int k = gen.uniform_int(1, std::min(3, n));
    election e = random_election(n, m, gen);
    profile pi = e.to_profile();

    ballot_metric sym = ballot_metric::symdiff(n);
    require(dr_winners(e, k, sym).winners == winners(pi, k, pinf),
            "symdiff DR mismatch at instance " + std::to_string(instance));

    norm_exponent lp = layer_ps[static_cast<std::size_t>(instance) % layer_ps.size()];
    ballot_metric layer = ballot_metric::layer(n, lp);
    require(dr_winners(e, 1, layer).winners == winners(pi, 1, lp),
            "layer DR mismatch at instance " + std::to_string(instance));

    // Closed forms against direct per-vote enumeration, both metrics.
    for (const committee& c : all_committees(n, k)) {
      nearest_result closed = nearest_unanimous(e, c, sym);
      double direct = 0;
      const std::uint32_t free = ballot::universe(n).minus(c.members()).mask();
      for (ballot v : e.votes()) {
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t sub = 0;
        while (true) {
          best = std::min(best, sym(v, ballot::from_mask(c.mask() | sub)));
          sub = (sub - free) & free;
          if (sub == 0) break;
        }
        direct += best;
      }
      require(closed.distance == direct, "closed-form symdiff distance is not exact");
    }
    for (const committee& c : all_committees(n, 1)) {
      nearest_result closed = nearest_unanimous(e, c, layer);
      double direct = 0;
      const std::uint32_t free = ballot::universe(n).minus(c.members()).mask();
      for (ballot v : e.votes()) {
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t sub = 0;
        while (true) {
          best = std::min(best, layer(v, ballot::from_mask(c.mask() | sub)));
          sub = (sub - free) & free;
          if (sub == 0) break;
        }
        direct += best;
      }
      require(closed.distance == direct, "closed-form layer distance is not exact");
    }

    // Replacement property on a subsample (brute-force scale).
    if (instance % 10 == 0) {
      require(check_replacement_property(sym, e, k).holds, "symdiff replacement property failed");
      require(check_replacement_property(layer, e, std::min(k, n - 1)).holds,
              "layer replacement property failed");
    }
    ++checked;
  }
  require(checked >= 500, "fewer than 500 elections tested");
}

void criterion_7_dr_negative() {
  counterexample_result base = construct_counterexample(2, p1);
  require(base.m1 == 3 && base.m2 == 1 && base.m3 == 2, "block sizes are not (3, 1, 2)");
  std::vector<ballot> expected_votes = {ballot::of({0, 2}), ballot::of({0, 2}), ballot::of({0, 2}),
                                        ballot::of({0}),    ballot::of({1}),    ballot::of({1})};
  require(base.e == election(3, expected_votes), "constructed election differs");
  require(winners(base.e.to_profile(), 2, p1) == outcome({committee::of({0, 1})}),
          "rule winners of the constructed election are not {a1, a2}");

  auto sym_witness = falsify_metric(ballot_metric::symdiff(3), 2, p1, {base.e});
  require(sym_witness.has_value(), "symdiff metric was not falsified");
  require(sym_witness->dr == outcome({committee::of({0, 2})}),
          "symdiff DR winners are not {a1, a3}");

  for (int k : {2, 3}) {
    for (const norm_exponent& p : {p1, p2}) {
      counterexample_result r = construct_counterexample(k, p);
      int n = r.e.candidate_count();
      require(falsify_metric(ballot_metric::symdiff(n), k, p, {r.e}).has_value(),
              "symdiff not falsified at k=" + std::to_string(k) + " p=" + p.to_string());
      require(falsify_metric(ballot_metric::layer(n, p), k, p, {r.e}).has_value(),
              "layer not falsified at k=" + std::to_string(k) + " p=" + p.to_string());
    }
  }
}

void criterion_8_cli() {
  const std::string sweep_args =
      "sweep --profile " + fixture("example_sweep.profile") + " --k 1 --p 1,2,inf";
  command_result first = run_command(sweep_args, false);
  command_result second = run_command(sweep_args, false);
  require(first.exit_code == 0, "sweep exited nonzero");
  require(!first.output.empty(), "sweep produced no output");
  require(first.output == second.output, "sweep output differs between runs");

  // The sweep elects c1, c2, c3 as p walks through 1, 2, inf.
  nlohmann::json sweep = nlohmann::json::parse(first.output);
  require(sweep["results"].size() == 3, "sweep did not produce three blocks");
  const char* expected_winner[] = {"c1", "c2", "c3"};
  for (int i = 0; i < 3; ++i) {
    const auto& block = sweep["results"][static_cast<std::size_t>(i)];
    require(block["winners"].size() == 1 && block["winners"][0][0] == expected_winner[i],
            std::string("sweep block winner is not ") + expected_winner[i]);
  }

  // The three views agree on the showcase profile through the CLI as well.
  command_result umle = run_command(
      "umle --profile " + fixture("example_sweep.profile") + " --k 1 --p 1 --alpha 2 --beta 1",
      false);
  require(umle.exit_code == 0, "umle exited nonzero");
  nlohmann::json umle_doc = nlohmann::json::parse(umle.output);
  require(umle_doc["agree"] == true, "umle reports disagreement");
  for (const char* key : {"um_winners", "mle_winners", "score_winners"})
    require(umle_doc[key][0][0] == "c1", std::string(key) + " is not [[\"c1\"]]");

  command_result dr = run_command(
      "distrat --election " + fixture("two_votes.election") + " --k 1 --metric layer --p 1",
      false);
  require(dr.exit_code == 0, "distrat exited nonzero");
  nlohmann::json dr_doc = nlohmann::json::parse(dr.output);
  require(dr_doc["winners"].size() == 1 && dr_doc["winners"][0][0] == "c1",
          "distrat winners are not [[\"c1\"]]");
  require(dr_doc["scores"]["c1"] == 0.5, "distrat score of c1 is not 0.5");

  const std::pair<std::string, std::string> error_fixtures[] = {
      {"bad_unknown.profile", "line 2"},
      {"bad_empty_ballot.profile", "line 3"},
      {"bad_negative.profile", "line 2"},
      {"bad_noheader.profile", "line 2"},
      {"bad_dup_candidate.profile", "line 1"},
  };
  for (const auto& [name, line_tag] : error_fixtures) {
    command_result r =
        run_command("winners --profile " + fixture(name) + " --k 1 --p inf", true);
    require(r.exit_code == 2, name + " did not exit with code 2");
    require(r.output.find("error:") != std::string::npos, name + " missing error diagnostic");
    require(r.output.find(line_tag) != std::string::npos,
            name + " diagnostic does not name " + line_tag);
  }

  // Tied winners surface as multiple committees.
  command_result tied =
      run_command("winners --profile " + fixture("approval_b.profile") + " --k 1 --p inf", false);
  require(tied.exit_code == 0, "winners on the tied profile exited nonzero");
  nlohmann::json tied_doc = nlohmann::json::parse(tied.output);
  require(tied_doc["winners"] == nlohmann::json::parse(R"([["c2"],["c3"]])"),
          "tied winners are not [[\"c2\"],[\"c3\"]]");

  // A found counterexample or falsification witness exits with 1.
  command_result caught = run_command(
      "audit --axiom p-cancellation --n 3 --k 1 --p inf --rule builtin --rule-p 1 --seed 5", false);
  require(caught.exit_code == 1, "audit counterexample did not exit with code 1");
  require(nlohmann::json::parse(caught.output)["verdict"] == "counterexample",
          "audit verdict is not 'counterexample'");
  command_result falsified = run_command("falsify --metric symdiff --k 2 --p 1", false);
  require(falsified.exit_code == 1, "falsify witness did not exit with code 1");
  require(!nlohmann::json::parse(falsified.output)["witness"].is_null(),
          "falsify reported no witness");

  // Flag-level failures exit with 3.
  command_result oversized =
      run_command("winners --profile " + fixture("example_sweep.profile") + " --k 4 --p 1", true);
  require(oversized.exit_code == 3, "k > n did not exit with code 3");
  command_result sub_one =
      run_command("winners --profile " + fixture("example_sweep.profile") + " --k 1 --p 0.5", true);
  require(sub_one.exit_code == 3, "p < 1 did not exit with code 3");
  command_result bad_axiom = run_command("audit --axiom nonsense --n 3 --k 1 --p 1", true);
  require(bad_axiom.exit_code == 3, "unknown axiom did not exit with code 3");

  // KPVOTE_SEED substitutes for --seed and produces the same report.
  const std::string audit_args = "audit --axiom consistency --n 4 --k 1 --p 2 --trials 200";
  command_result flagged = run_command(audit_args + " --seed 31337", false);
  command_result env_seeded = run_command(
      std::string("env KPVOTE_SEED=31337 ") + g_cli_path + " " + audit_args + " 2>/dev/null", false,
      true);
  require(flagged.exit_code == 0, "seeded audit failed");
  require(flagged.output == env_seeded.output, "KPVOTE_SEED does not reproduce --seed output");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <kpvote-cli> <fixtures-dir>\n");
    return 2;
  }
  g_cli_path = argv[1];
  g_fixture_dir = argv[2];

  auto timed = [](const std::function<void()>& body, double limit, const char* what) {
    return [body, limit, what]() {
      auto start = clock_type::now();
      body();
      double seconds = std::chrono::duration<double>(clock_type::now() - start).count();
      require(seconds < limit,
              std::string(what) + " exceeded its time budget (" + std::to_string(seconds) + "s)");
    };
  };

  run_criterion(1, "showcase profile scores and winners across p",
                timed(criterion_1_showcase_scores, 1.0, "showcase reproduction"));
  run_criterion(2, "small approval/satisfaction profiles", criterion_2_small_profiles);
  run_criterion(3, "tier winners equal brute force on 5000 seeded profiles",
                timed(criterion_3_oracle_equivalence, 60.0, "oracle equivalence"));
  run_criterion(4, "axiom suite passes for the rule family and catches broken variants",
                criterion_4_axiom_suite);
  run_criterion(5, "UM and MLE winners coincide with score winners", criterion_5_um_mle);
  run_criterion(6, "distance rationalizability positive checks", criterion_6_dr_positive);
  run_criterion(7, "distance rationalizability negative construction", criterion_7_dr_negative);
  run_criterion(8, "CLI determinism and parse diagnostics", criterion_8_cli);

  if (g_failures != 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
