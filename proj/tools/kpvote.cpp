// Command-line frontend: winners, sweep, audit, distrat, falsify, umle.
//
// Exit codes: 0 success / property passed; 1 counterexample or falsification
// witness found; 2 input file parse error; 3 invalid flags or parameters.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kpvote/axioms.hpp"
#include "kpvote/decision.hpp"
#include "kpvote/distrat.hpp"
#include "kpvote/io.hpp"
#include "kpvote/profile_algebra.hpp"
#include "kpvote/scores.hpp"
#include "kpvote/winners.hpp"

namespace {

using namespace kpvote;

constexpr int kExitWitness = 1;
constexpr int kExitParse = 2;
constexpr int kExitUsage = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw domain_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

jdoc p_to_json(const norm_exponent& p) {
  return p.is_infinite() ? jdoc::str("inf") : jdoc::real(p.value());
}

jdoc scores_to_json(const std::vector<double>& scores, const candidate_list& names) {
  jdoc obj = jdoc::object();
  for (int c = 0; c < names.count(); ++c)
    obj.set(names.name(c), jdoc::real(scores[static_cast<std::size_t>(c)]));
  return obj;
}

void emit(const jdoc& doc) { std::cout << doc.dump() << '\n'; }

std::string tsv_committee(const committee& c, const candidate_list& names) {
  std::string out;
  for (int i : c.indices()) {
    if (!out.empty()) out += ',';
    out += names.name(i);
  }
  return out;
}

void emit_scores_tsv(std::ostream& out, const norm_exponent& p,
                     const std::vector<double>& scores, const outcome& won,
                     const candidate_list& names) {
  out << "p\t" << p.to_string() << '\n';
  for (int c = 0; c < names.count(); ++c)
    out << "score\t" << names.name(c) << '\t' << format_real(scores[static_cast<std::size_t>(c)])
        << '\n';
  for (const committee& c : won) out << "winner\t" << tsv_committee(c, names) << '\n';
}

struct score_command_options {
  std::string profile_path;
  int k = 1;
  std::string p_text;
  std::string format = "json";
};

int run_winners(const score_command_options& opt) {
  norm_exponent p = norm_exponent::parse(opt.p_text);
  profile_document doc = parse_profile(read_file(opt.profile_path));
  std::vector<double> scores = candidate_scores(doc.entries, p);
  outcome won = winners(doc.entries, opt.k, p);

  if (opt.format == "tsv") {
    emit_scores_tsv(std::cout, p, scores, won, doc.candidates);
    return 0;
  }
  jdoc out = jdoc::object();
  out.set("command", jdoc::str("winners"));
  jdoc params = jdoc::object();
  params.set("profile", jdoc::str(opt.profile_path));
  params.set("k", jdoc::integer(opt.k));
  params.set("p", p_to_json(p));
  out.set("parameters", std::move(params));
  out.set("scores", scores_to_json(scores, doc.candidates));
  out.set("winners", outcome_to_json(won, doc.candidates));
  emit(out);
  return 0;
}

int run_sweep(const score_command_options& opt) {
  std::vector<norm_exponent> ps;
  std::stringstream list(opt.p_text);
  std::string token;
  while (std::getline(list, token, ',')) ps.push_back(norm_exponent::parse(token));
  if (ps.empty()) throw domain_error("empty exponent list");

  profile_document doc = parse_profile(read_file(opt.profile_path));

  if (opt.format == "tsv") {
    for (const norm_exponent& p : ps)
      emit_scores_tsv(std::cout, p, candidate_scores(doc.entries, p),
                      winners(doc.entries, opt.k, p), doc.candidates);
    return 0;
  }

  jdoc out = jdoc::object();
  out.set("command", jdoc::str("sweep"));
  jdoc params = jdoc::object();
  params.set("profile", jdoc::str(opt.profile_path));
  params.set("k", jdoc::integer(opt.k));
  jdoc plist = jdoc::array();
  for (const norm_exponent& p : ps) plist.push(p_to_json(p));
  params.set("p_list", std::move(plist));
  out.set("parameters", std::move(params));

  jdoc results = jdoc::array();
  for (const norm_exponent& p : ps) {
    jdoc block = jdoc::object();
    block.set("p", p_to_json(p));
    block.set("scores", scores_to_json(candidate_scores(doc.entries, p), doc.candidates));
    block.set("winners", outcome_to_json(winners(doc.entries, opt.k, p), doc.candidates));
    results.push(std::move(block));
  }
  out.set("results", std::move(results));
  emit(out);
  return 0;
}

struct audit_options {
  std::string axiom;
  int n = 3;
  int k = 1;
  std::string p_text;
  long trials = 1000;
  std::optional<std::uint64_t> seed;
  double max_multiplicity = 10;
  std::string rule = "builtin";
  std::optional<int> rule_k;
  std::string rule_p_text;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("KPVOTE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw domain_error("KPVOTE_SEED is not an unsigned integer");
    }
  }
  return 0;
}

jdoc witness_to_json(const audit_witness& w, const candidate_list& names) {
  jdoc out = jdoc::object();
  if (!w.profiles.empty()) {
    jdoc profiles = jdoc::array();
    for (const profile& pi : w.profiles) profiles.push(profile_to_json(pi, names));
    out.set("profiles", std::move(profiles));
  }
  if (!w.ballots.empty()) {
    jdoc ballots = jdoc::array();
    for (ballot b : w.ballots) {
      jdoc members = jdoc::array();
      for (const std::string& name : names.ballot_names(b)) members.push(jdoc::str(name));
      ballots.push(std::move(members));
    }
    out.set("ballots", std::move(ballots));
  }
  if (w.scalar) out.set("scalar", jdoc::real(*w.scalar));
  out.set("expected", outcome_to_json(w.expected, names));
  out.set("actual", outcome_to_json(w.actual, names));
  out.set("note", jdoc::str(w.note));
  return out;
}

int run_audit(const audit_options& opt) {
  std::optional<axiom_id> axiom = parse_axiom(opt.axiom);
  if (!axiom) throw domain_error("unknown axiom '" + opt.axiom + "'");
  norm_exponent p = norm_exponent::parse(opt.p_text);
  norm_exponent rule_p = opt.rule_p_text.empty() ? p : norm_exponent::parse(opt.rule_p_text);
  int rule_k = opt.rule_k.value_or(opt.k);
  std::uint64_t seed = resolve_seed(opt.seed);

  voting_rule rule = opt.rule == "builtin" ? kp_rule(rule_k, rule_p)
                                           : broken_rule(opt.rule, rule_k, rule_p);

  audit_params params{opt.n, opt.k, p};
  audit_budget budget{opt.trials, seed, opt.max_multiplicity};
  audit_report report = audit(rule, *axiom, params, budget);

  candidate_list names = default_candidates(opt.n);
  jdoc out = jdoc::object();
  out.set("command", jdoc::str("audit"));
  jdoc jparams = jdoc::object();
  jparams.set("axiom", jdoc::str(to_string(*axiom)));
  jparams.set("n", jdoc::integer(opt.n));
  jparams.set("k", jdoc::integer(opt.k));
  jparams.set("p", p_to_json(p));
  jparams.set("trials", jdoc::integer(opt.trials));
  jparams.set("seed", jdoc::integer(static_cast<long long>(seed)));
  jparams.set("max_multiplicity", jdoc::real(opt.max_multiplicity));
  jparams.set("rule", jdoc::str(opt.rule));
  jparams.set("rule_k", jdoc::integer(rule_k));
  jparams.set("rule_p", p_to_json(rule_p));
  out.set("parameters", std::move(jparams));
  out.set("verdict", jdoc::str(report.verdict == audit_verdict::counterexample
                                   ? "counterexample"
                                   : "pass-within-budget"));
  out.set("checks", jdoc::integer(report.trials));
  if (report.witness) out.set("witness", witness_to_json(*report.witness, names));
  emit(out);
  return report.verdict == audit_verdict::counterexample ? kExitWitness : 0;
}

struct distrat_options {
  std::string election_path;
  int k = 1;
  std::string metric = "symdiff";
  std::string p_text = "1";
  std::string format = "json";
};

ballot_metric make_metric(const std::string& name, int n, const norm_exponent& p) {
  if (name == "symdiff") return ballot_metric::symdiff(n);
  if (name == "layer") return ballot_metric::layer(n, p);
  throw domain_error("unknown metric '" + name + "'");
}

int run_distrat(const distrat_options& opt) {
  norm_exponent p = norm_exponent::parse(opt.p_text);
  election_document doc = parse_election(read_file(opt.election_path));
  ballot_metric metric = make_metric(opt.metric, doc.candidates.count(), p);
  dr_result result = dr_winners(doc.votes, opt.k, metric);

  if (opt.format == "tsv") {
    std::cout << "metric\t" << opt.metric << '\n';
    if (opt.metric == "layer") std::cout << "p\t" << p.to_string() << '\n';
    for (const auto& [c, score] : result.scores)
      std::cout << "score\t" << tsv_committee(c, doc.candidates) << '\t' << format_real(score)
                << '\n';
    for (const committee& c : result.winners)
      std::cout << "winner\t" << tsv_committee(c, doc.candidates) << '\n';
    return 0;
  }

  jdoc out = jdoc::object();
  out.set("command", jdoc::str("distrat"));
  jdoc params = jdoc::object();
  params.set("election", jdoc::str(opt.election_path));
  params.set("k", jdoc::integer(opt.k));
  params.set("metric", jdoc::str(opt.metric));
  if (opt.metric == "layer") params.set("p", p_to_json(p));
  out.set("parameters", std::move(params));

  jdoc scores = jdoc::object();
  for (const auto& [c, score] : result.scores)
    scores.set(doc.candidates.committee_label(c), jdoc::real(score));
  out.set("scores", std::move(scores));
  out.set("winners", outcome_to_json(result.winners, doc.candidates));
  jdoc nearest = jdoc::object();
  for (const auto& [c, witness] : result.nearest)
    nearest.set(doc.candidates.committee_label(c), election_to_json(witness, doc.candidates));
  out.set("nearest", std::move(nearest));
  emit(out);
  return 0;
}

struct falsify_options {
  std::string metric = "symdiff";
  int k = 2;
  std::string p_text = "1";
  std::string election_path;
};

candidate_list counterexample_names(int k) {
  std::vector<std::string> names = {"a1", "a2", "a3"};
  for (int i = 1; i <= k - 2; ++i) names.push_back("b" + std::to_string(i));
  return candidate_list(std::move(names));
}

int run_falsify(const falsify_options& opt) {
  norm_exponent p = norm_exponent::parse(opt.p_text);

  std::vector<election> elections;
  std::optional<candidate_list> names;
  jdoc constructed = jdoc::null();
  if (!opt.election_path.empty()) {
    election_document doc = parse_election(read_file(opt.election_path));
    names.emplace(doc.candidates);
    elections.push_back(doc.votes);
  } else {
    counterexample_result built = construct_counterexample(opt.k, p);
    names.emplace(counterexample_names(opt.k));
    jdoc info = jdoc::object();
    info.set("m1", jdoc::integer(built.m1));
    info.set("m2", jdoc::integer(built.m2));
    info.set("m3", jdoc::integer(built.m3));
    info.set("election", election_to_json(built.e, *names));
    info.set("rule_winners", outcome_to_json(built.expected, *names));
    constructed = std::move(info);
    elections.push_back(built.e);
  }

  ballot_metric metric = make_metric(opt.metric, names->count(), p);
  std::optional<falsification> witness = falsify_metric(metric, opt.k, p, elections);

  jdoc out = jdoc::object();
  out.set("command", jdoc::str("falsify"));
  jdoc params = jdoc::object();
  params.set("metric", jdoc::str(opt.metric));
  params.set("k", jdoc::integer(opt.k));
  params.set("p", p_to_json(p));
  if (!opt.election_path.empty()) params.set("election", jdoc::str(opt.election_path));
  out.set("parameters", std::move(params));
  if (constructed.dump(0) != "null") out.set("constructed", std::move(constructed));

  if (witness) {
    jdoc w = jdoc::object();
    w.set("election", election_to_json(witness->witness, *names));
    w.set("dr_winners", outcome_to_json(witness->dr, *names));
    w.set("rule_winners", outcome_to_json(witness->rule, *names));
    out.set("witness", std::move(w));
  } else {
    out.set("witness", jdoc::null());
  }
  emit(out);
  return witness ? kExitWitness : 0;
}

struct umle_options {
  std::string profile_path;
  int k = 1;
  std::string p_text = "inf";
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> p1;
  std::optional<double> p2;
  std::string format = "json";
};

int run_umle(const umle_options& opt) {
  profile_document doc = parse_profile(read_file(opt.profile_path));
  const int n = doc.candidates.count();

  const bool kp_mode = opt.alpha.has_value() || opt.beta.has_value();
  const bool seq_mode = opt.p1.has_value() || opt.p2.has_value();
  if (kp_mode == seq_mode)
    throw domain_error("provide either --alpha/--beta or --p1/--p2");

  norm_exponent p = norm_exponent::parse(opt.p_text);
  outcome um, mle, by_score;
  jdoc params = jdoc::object();
  params.set("profile", jdoc::str(opt.profile_path));
  params.set("k", jdoc::integer(opt.k));

  if (kp_mode) {
    if (!opt.alpha || !opt.beta) throw domain_error("--alpha and --beta go together");
    if (!(*opt.alpha > *opt.beta)) throw domain_error("--alpha must exceed --beta");
    params.set("p", p_to_json(p));
    params.set("alpha", jdoc::real(*opt.alpha));
    params.set("beta", jdoc::real(*opt.beta));
    um = um_winners(doc.entries, opt.k, make_utility({0, *opt.alpha, *opt.beta, p}));
    mle = mle_winners(doc.entries, opt.k, kp_noise_model(p, *opt.alpha, *opt.beta, n, opt.k));
    by_score = winners(doc.entries, opt.k, p);
  } else {
    if (!opt.p1 || !opt.p2) throw domain_error("--p1 and --p2 go together");
    if (!(*opt.p1 > *opt.p2)) throw domain_error("--p1 must exceed --p2");
    params.set("p1", jdoc::real(*opt.p1));
    params.set("p2", jdoc::real(*opt.p2));
    noise_model model = sequential_noise_model(n, opt.k, {*opt.p1, *opt.p2});
    mle = mle_winners(doc.entries, opt.k, model);
    um = um_winners(doc.entries, opt.k, utility_from_noise(model));
    by_score = winners(doc.entries, opt.k, norm_exponent::infinity());
  }

  bool agree = um == mle && mle == by_score;
  if (opt.format == "tsv") {
    auto block = [&](const char* label, const outcome& o) {
      for (const committee& c : o)
        std::cout << label << '\t' << tsv_committee(c, doc.candidates) << '\n';
    };
    block("um_winner", um);
    block("mle_winner", mle);
    block("score_winner", by_score);
    std::cout << "agree\t" << (agree ? "true" : "false") << '\n';
    return 0;
  }

  jdoc out = jdoc::object();
  out.set("command", jdoc::str("umle"));
  out.set("parameters", std::move(params));
  out.set("um_winners", outcome_to_json(um, doc.candidates));
  out.set("mle_winners", outcome_to_json(mle, doc.candidates));
  out.set("score_winners", outcome_to_json(by_score, doc.candidates));
  out.set("agree", jdoc::boolean(agree));
  emit(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k,p-approval voting: scores, winners, axiom audits, UM/MLE and"
               " distance-rationalizability checks"};
  app.require_subcommand(1);

  score_command_options winners_opt;
  CLI::App* winners_cmd = app.add_subcommand("winners", "score a profile and report the winning committees");
  winners_cmd->add_option("--profile", winners_opt.profile_path, "profile file")->required();
  winners_cmd->add_option("--k", winners_opt.k, "committee size")->required()->check(CLI::PositiveNumber);
  winners_cmd->add_option("--p", winners_opt.p_text, "norm exponent (decimal >= 1 or 'inf')")->required();
  winners_cmd->add_option("--format", winners_opt.format)->check(CLI::IsMember({"json", "tsv"}));

  score_command_options sweep_opt;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run winners across a list of exponents");
  sweep_cmd->add_option("--profile", sweep_opt.profile_path)->required();
  sweep_cmd->add_option("--k", sweep_opt.k)->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--p", sweep_opt.p_text, "comma-separated exponents")->required();
  sweep_cmd->add_option("--format", sweep_opt.format)->check(CLI::IsMember({"json", "tsv"}));

  audit_options audit_opt;
  CLI::App* audit_cmd = app.add_subcommand("audit", "search for axiom counterexamples");
  audit_cmd->add_option("--axiom", audit_opt.axiom,
                        "k-faithfulness | consistency | p-cancellation | p-disjoint-equality | positive-scaling")
      ->required();
  audit_cmd->add_option("--n", audit_opt.n, "candidate count")->required()->check(CLI::Range(1, 10));
  audit_cmd->add_option("--k", audit_opt.k)->required()->check(CLI::PositiveNumber);
  audit_cmd->add_option("--p", audit_opt.p_text, "axiom exponent")->required();
  audit_cmd->add_option("--trials", audit_opt.trials)->check(CLI::PositiveNumber);
  audit_cmd->add_option("--seed", audit_opt.seed, "defaults to KPVOTE_SEED, then 0");
  audit_cmd->add_option("--max-mult", audit_opt.max_multiplicity)->check(CLI::PositiveNumber);
  audit_cmd->add_option("--rule", audit_opt.rule,
                        "builtin | argmin | tiebreak-lex | eliminate-lowest | floor-multiplicities");
  audit_cmd->add_option("--rule-k", audit_opt.rule_k, "committee size of the audited rule");
  audit_cmd->add_option("--rule-p", audit_opt.rule_p_text, "exponent of the audited rule");

  distrat_options distrat_opt;
  CLI::App* distrat_cmd = app.add_subcommand("distrat", "distance-rationalized winners");
  distrat_cmd->add_option("--election", distrat_opt.election_path)->required();
  distrat_cmd->add_option("--k", distrat_opt.k)->required()->check(CLI::PositiveNumber);
  distrat_cmd->add_option("--metric", distrat_opt.metric)->required()->check(CLI::IsMember({"symdiff", "layer"}));
  distrat_cmd->add_option("--p", distrat_opt.p_text, "layer metric exponent");
  distrat_cmd->add_option("--format", distrat_opt.format)->check(CLI::IsMember({"json", "tsv"}));

  falsify_options falsify_opt;
  CLI::App* falsify_cmd = app.add_subcommand(
      "falsify", "compare DR winners with k,p winners; builds the counterexample family when no election is given");
  falsify_cmd->add_option("--metric", falsify_opt.metric)->required()->check(CLI::IsMember({"symdiff", "layer"}));
  falsify_cmd->add_option("--k", falsify_opt.k)->required()->check(CLI::PositiveNumber);
  falsify_cmd->add_option("--p", falsify_opt.p_text)->required();
  falsify_cmd->add_option("--election", falsify_opt.election_path, "election file (optional)");

  umle_options umle_opt;
  CLI::App* umle_cmd = app.add_subcommand("umle", "compare UM, MLE, and score winners side by side");
  umle_cmd->add_option("--profile", umle_opt.profile_path)->required();
  umle_cmd->add_option("--k", umle_opt.k)->required()->check(CLI::PositiveNumber);
  umle_cmd->add_option("--p", umle_opt.p_text, "norm exponent for --alpha/--beta mode");
  umle_cmd->add_option("--alpha", umle_opt.alpha);
  umle_cmd->add_option("--beta", umle_opt.beta);
  umle_cmd->add_option("--p1", umle_opt.p1, "member approval probability");
  umle_cmd->add_option("--p2", umle_opt.p2, "non-member approval probability");
  umle_cmd->add_option("--format", umle_opt.format)->check(CLI::IsMember({"json", "tsv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (winners_cmd->parsed()) return run_winners(winners_opt);
    if (sweep_cmd->parsed()) return run_sweep(sweep_opt);
    if (audit_cmd->parsed()) return run_audit(audit_opt);
    if (distrat_cmd->parsed()) return run_distrat(distrat_opt);
    if (falsify_cmd->parsed()) return run_falsify(falsify_opt);
    if (umle_cmd->parsed()) return run_umle(umle_opt);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
