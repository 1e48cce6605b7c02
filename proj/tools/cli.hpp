#ifndef TIECONTEST_TOOLS_CLI_HPP
#define TIECONTEST_TOOLS_CLI_HPP

// tiecontest command-line front end. run() is separate from main() so the
// test suite can drive it with captured streams.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tiecontest/audit.hpp"
#include "tiecontest/designer.hpp"
#include "tiecontest/equilibrium.hpp"
#include "tiecontest/io.hpp"
#include "tiecontest/oracle.hpp"

namespace tiecontest::cli {

enum ExitCode : int { ok = 0, domain_failure = 1, convergence_failure = 2, verification_failure = 3 };

namespace detail {

struct SpecFlags {
  std::string spec_file;
  std::string family;
  std::optional<double> r, k, v1, v2, q;
  std::string cost;
};

struct Options {
  SpecFlags spec;
  std::string out;
  std::string emit_spec;
  std::string format = "json";
  bool force = false;
  int points = 101;
  std::string rule = "0:0.5,1:0.5";
  std::optional<double> theta_min, theta_max;
  std::size_t theta_points = audit_defaults::points;
  std::optional<int> steps;
  std::optional<double> x_max, eps;
};

inline std::string family_help() {
  std::string s = "Families:\n";
  for (const auto& f : family_table) {
    s += "  ";
    s += f.name;
    s += std::string(18 - f.name.size(), ' ');
    s += f.constraints;
    s += '\n';
  }
  s += "\nExit codes: 0 ok, 1 invalid input or failed audit, 2 no convergence, 3 verification failed.\n";
  return s;
}

inline void add_spec_flags(CLI::App* sub, SpecFlags& f) {
  sub->add_option("--spec", f.spec_file, "Read the contest from a JSON file instead of flags");
  sub->add_option("--family", f.family, "CSF family name (see the list below)");
  sub->add_option("--r", f.r, "Exponent r");
  sub->add_option("--k", f.k, "Tie parameter k");
  sub->add_option("--v1", f.v1, "Player 1 valuation");
  sub->add_option("--v2", f.v2, "Player 2 valuation");
  sub->add_option("--q", f.q, "Probability a tie is awarded to player 1");
  sub->add_option("--cost", f.cost, "Cost function: linear or quadratic (default: the family's own)");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("spec: cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline bool any_inline(const SpecFlags& f) {
  return !f.family.empty() || f.r || f.k || f.v1 || f.v2 || f.q || !f.cost.empty();
}

inline void check_single_source(const SpecFlags& f) {
  if (!f.spec_file.empty() && any_inline(f))
    throw domain_error("spec: give either --spec FILE or inline flags, not both");
  if (f.spec_file.empty() && f.family.empty()) throw domain_error("family: required (--family NAME or --spec FILE)");
}

inline double need(const std::optional<double>& v, const char* name) {
  if (!v) throw domain_error(std::string(name) + ": required (--" + name + ")");
  return *v;
}

inline Csf csf_from_flags(const SpecFlags& f) {
  const FamilyKind kind = parse_family(f.family);
  const FamilyInfo& info = family_info(kind);
  const double r = info.uses_r ? need(f.r, "r") : 1.0;
  const double k = info.uses_k ? need(f.k, "k") : 1.0;
  if (!info.uses_r && f.r) throw domain_error("r: not a parameter of " + std::string(info.name));
  if (!info.uses_k && f.k) throw domain_error("k: not a parameter of " + std::string(info.name));
  return make_family(kind, r, k);
}

inline ContestSpec load_spec(const SpecFlags& f) {
  check_single_source(f);
  if (!f.spec_file.empty()) return io::spec_from_string(read_file(f.spec_file));
  std::optional<CostKind> cost;
  if (!f.cost.empty()) cost = parse_cost(f.cost);
  return ContestSpec(csf_from_flags(f), need(f.v1, "v1"), need(f.v2, "v2"), f.q.value_or(0.5), cost);
}

inline RandomTieRule parse_rule(const std::string& text) {
  std::vector<RandomTieRule::Atom> atoms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw domain_error("rule: expected q:w pairs, got '" + item + "'");
    double q = 0.0, w = 0.0;
    try {
      std::size_t used = 0;
      q = std::stod(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("q");
      const std::string ws = item.substr(colon + 1);
      w = std::stod(ws, &used);
      if (used != ws.size()) throw std::invalid_argument("w");
    } catch (const std::logic_error&) {
      throw domain_error("rule: cannot parse '" + item + "' as q:w");
    }
    try {
      atoms.push_back({TieRule(q), w});
    } catch (const domain_error& e) {
      throw domain_error(std::string("rule: ") + e.what());
    }
  }
  try {
    return RandomTieRule(std::move(atoms));
  } catch (const domain_error& e) {
    throw domain_error(std::string("rule: ") + e.what());
  }
}

/// Sweep in the caller's labels: q runs over the same grid, efforts swap.
inline EffortCurve to_user_labels(EffortCurve c, bool swapped) {
  if (!swapped) return c;
  std::reverse(c.samples.begin(), c.samples.end());
  const auto qs = numerics::linspace(0.0, 1.0, c.samples.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    c.samples[i].q = qs[i];
    std::swap(c.samples[i].x1, c.samples[i].x2);
  }
  c.shape = certify(c.samples);
  return c;
}

inline void emit(const std::string& doc, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    out << doc;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw domain_error("out: cannot write '" + o.out + "'");
  f << doc;
}

inline void write_spec(const ContestSpec& spec, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw domain_error("emit-spec: cannot write '" + path + "'");
  f << io::dump(io::spec_to_json(spec));
}

inline int cmd_solve(const Options& o, std::ostream& out) {
  const ContestSpec spec = load_spec(o.spec);
  if (!o.emit_spec.empty()) write_spec(spec, o.emit_spec);
  const Equilibrium eq = in_user_labels(solve(spec, {.force = o.force, .audit = true}), spec);
  io::Json j;
  j["spec"] = io::spec_to_json(spec);
  j["equilibrium"] = io::to_json(eq);
  emit(io::dump(j), o, out);
  return ok;
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
  const ContestSpec spec = load_spec(o.spec);
  if (!o.emit_spec.empty()) write_spec(spec, o.emit_spec);
  const EffortCurve curve = to_user_labels(sweep(spec, o.points, {.force = o.force, .audit = true}), spec.swapped());
  if (o.format == "csv") {
    emit(io::to_csv(curve), o, out);
  } else {
    io::Json j;
    j["spec"] = io::spec_to_json(spec);
    j["curve"] = io::to_json(curve);
    emit(io::dump(j), o, out);
  }
  return ok;
}

inline int cmd_optimize(const Options& o, std::ostream& out) {
  const ContestSpec spec = load_spec(o.spec);
  if (!o.emit_spec.empty()) write_spec(spec, o.emit_spec);
  const OptimalRule best = optimal_q(spec, {.force = o.force, .audit = false});
  io::Json j;
  j["spec"] = io::spec_to_json(spec);
  j["q"] = spec.swapped() ? 1.0 - best.q.q() : best.q.q();
  j["R"] = best.R;
  j["rationale"] = to_string(best.rationale);
  emit(io::dump(j), o, out);
  return ok;
}

inline int cmd_expected(const Options& o, std::ostream& out) {
  const ContestSpec spec = load_spec(o.spec);
  if (!o.emit_spec.empty()) write_spec(spec, o.emit_spec);
  const RandomTieRule rule = parse_rule(o.rule);
  std::vector<RandomTieRule::Atom> normalized;
  for (const auto& a : rule.atoms())
    normalized.push_back({spec.swapped() ? a.rule.mirrored() : a.rule, a.weight});
  const double value = expected_effort(spec, RandomTieRule(normalized), {.force = o.force, .audit = false});
  io::Json j;
  j["spec"] = io::spec_to_json(spec);
  io::Json atoms = io::Json::array();
  for (const auto& a : rule.atoms()) atoms.push_back(io::Json{{"q", a.rule.q()}, {"weight", a.weight}});
  j["rule"] = atoms;
  j["mean"] = rule.mean();
  j["unbiased"] = rule.is_unbiased();
  j["expected_effort"] = value;
  emit(io::dump(j), o, out);
  return ok;
}

inline int cmd_audit(const Options& o, std::ostream& out) {
  const SpecFlags& f = o.spec;
  check_single_source(f);
  Csf csf = make_family(FamilyKind::jia_ratio, 1.0, 1.0);
  std::optional<double> v1 = f.v1;
  if (!f.spec_file.empty()) {
    const ContestSpec spec = io::spec_from_string(read_file(f.spec_file));
    csf = spec.csf();
    v1 = spec.values().v1();
  } else {
    csf = csf_from_flags(f);
  }
  const auto qs = audit_defaults::q_grid();
  AuditReport rep;
  if (const auto* c = std::get_if<RatioCsf>(&csf)) {
    const double lo = o.theta_min.value_or(std::pow(10.0, audit_defaults::ratio_log10_min));
    const double hi = o.theta_max.value_or(std::pow(10.0, audit_defaults::ratio_log10_max));
    if (!(lo > 0.0 && hi > lo)) throw domain_error("theta-min: ratio grids need 0 < theta-min < theta-max");
    rep = audit_ratio(*c, numerics::logspace(std::log10(lo), std::log10(hi), o.theta_points), qs);
  } else if (const auto* d = std::get_if<DiffCsf>(&csf)) {
    const double lo = o.theta_min.value_or(audit_defaults::diff_min);
    const double hi = o.theta_max.value_or(audit_defaults::diff_max);
    if (!(hi > lo)) throw domain_error("theta-min: must be below theta-max");
    rep = audit_diff(*d, need(v1, "v1"), numerics::linspace(lo, hi, o.theta_points), qs);
  } else {
    rep = audit_concave(std::get<ConcaveCsf>(csf));
  }
  emit(io::dump(io::to_json(rep)), o, out);
  return rep.all_pass() ? ok : domain_failure;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  const ContestSpec spec = load_spec(o.spec);
  if (!o.emit_spec.empty()) write_spec(spec, o.emit_spec);
  const Equilibrium eq = solve(spec, {.force = o.force, .audit = true});
  GridSpec grid = GridSpec::for_contest(spec, o.steps.value_or(2001));
  if (o.x_max) grid = GridSpec(*o.x_max, o.steps.value_or(2001));
  if (o.eps) grid = GridSpec(grid.x_max, grid.steps, *o.eps);
  VerificationReport rep = verify(spec, eq, grid);
  if (spec.swapped()) {
    std::swap(rep.payoff_loss[0], rep.payoff_loss[1]);
    std::swap(rep.band[0], rep.band[1]);
    std::swap(rep.best_deviation[0], rep.best_deviation[1]);
    if (rep.nearest) rep.nearest = EffortProfile{rep.nearest->x2, rep.nearest->x1};
  }
  io::Json j;
  j["spec"] = io::spec_to_json(spec);
  j["equilibrium"] = io::to_json(in_user_labels(eq, spec));
  j["grid"] = io::Json{{"x_max", grid.x_max}, {"steps", grid.steps}};
  j["verification"] = io::to_json(rep);
  emit(io::dump(j), o, out);
  return rep.pass ? ok : verification_failure;
}

}  // namespace detail

/// Runs one subcommand. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace detail;
  CLI::App app{"Equilibrium effort and tie-rule design for two-player contests with ties.", "tiecontest"};
  app.footer(family_help());
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub, bool spec_flags = true) {
    if (spec_flags) add_spec_flags(sub, o.spec);
    sub->add_option("--out", o.out, "Write the result to FILE instead of stdout");
    sub->add_option("--format", o.format, "Output format (json; csv for sweep)")->check(CLI::IsMember({"json", "csv"}));
  };
  const auto emits = [&](CLI::App* sub) {
    sub->add_option("--emit-spec", o.emit_spec, "Also write the contest as a JSON spec to FILE");
    sub->add_flag("--force", o.force, "Solve ratio families whose equilibrium precondition fails");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "Pure-strategy equilibrium efforts");
  common(solve_cmd);
  emits(solve_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Equilibria across tie rules q in [0, 1]");
  common(sweep_cmd);
  emits(sweep_cmd);
  sweep_cmd->add_option("--points", o.points, "Number of equally spaced q values")->check(CLI::Range(2, 1000000));

  CLI::App* opt_cmd = app.add_subcommand("optimize", "Effort-maximizing deterministic tie rule");
  common(opt_cmd);
  emits(opt_cmd);

  CLI::App* exp_cmd = app.add_subcommand("expected", "Expected total effort under a random tie rule");
  common(exp_cmd);
  emits(exp_cmd);
  exp_cmd->add_option("--rule", o.rule, "Random rule as q:weight pairs, e.g. 0:0.5,1:0.5")->capture_default_str();

  CLI::App* audit_cmd = app.add_subcommand("audit", "Grid check of the family's regularity assumptions");
  common(audit_cmd);
  audit_cmd->add_option("--theta-min", o.theta_min, "Smallest probed theta");
  audit_cmd->add_option("--theta-max", o.theta_max, "Largest probed theta");
  audit_cmd->add_option("--theta-points", o.theta_points, "Probed theta count")->check(CLI::Range(3, 10000000));

  CLI::App* verify_cmd = app.add_subcommand("verify", "Check the solver against a brute-force grid search");
  common(verify_cmd);
  emits(verify_cmd);
  verify_cmd->add_option("--steps", o.steps, "Grid points per axis")->check(CLI::Range(2, 100000));
  verify_cmd->add_option("--x-max", o.x_max, "Effort ceiling of the grid");
  verify_cmd->add_option("--eps", o.eps, "Payoff slack (default: 2 * Lipschitz bound * step)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return domain_failure;
  }

  try {
    if (o.format == "csv" && !sweep_cmd->parsed()) throw domain_error("format: csv is only available for sweep");
    if (solve_cmd->parsed()) return cmd_solve(o, out);
    if (sweep_cmd->parsed()) {
      if (!sweep_cmd->count("--format")) o.format = "csv";
      return cmd_sweep(o, out);
    }
    if (opt_cmd->parsed()) return cmd_optimize(o, out);
    if (exp_cmd->parsed()) return cmd_expected(o, out);
    if (audit_cmd->parsed()) return cmd_audit(o, out);
    return cmd_verify(o, out);
  } catch (const domain_error& e) {
    err << "error: " << e.what() << '\n';
    return domain_failure;
  } catch (const convergence_error& e) {
    err << "error: " << e.what() << '\n';
    return convergence_failure;
  }
}

}  // namespace tiecontest::cli

#endif  // TIECONTEST_TOOLS_CLI_HPP
