#ifndef TIECONTEST_DESIGNER_HPP
#define TIECONTEST_DESIGNER_HPP

// The designer's side: total effort R(q) = x1*(q) + x2*(q) as a function of
// the tie rule, its shape, the best deterministic rule, and expected effort
// under random rules drawn before the contest.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tiecontest/contest.hpp"
#include "tiecontest/equilibrium.hpp"
#include "tiecontest/numerics.hpp"

namespace tiecontest {

namespace shape_tolerance {
inline constexpr double constant = 1e-10;
inline constexpr double linear = 1e-10;
inline constexpr double monotone = 1e-12;
inline constexpr double convex = 1e-10;
}  // namespace shape_tolerance

struct ShapeCertificate {
  bool holds = true;
  double worst_violation = 0.0;
};

struct CurveShape {
  ShapeCertificate monotone_decreasing;
  ShapeCertificate constant;
  ShapeCertificate linear;
  ShapeCertificate convex;
};

struct CurveSample {
  double q = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double R = 0.0;
};

struct EffortCurve {
  std::vector<CurveSample> samples;
  CurveShape shape;
  std::vector<std::string> warnings;
};

/// Shape certificates for samples with strictly increasing q. Linearity and
/// convexity compare each interior R to the chord through its neighbours.
inline CurveShape certify(const std::vector<CurveSample>& s) {
  CurveShape c;
  if (s.empty()) return c;
  double lo = s.front().R, hi = s.front().R;
  for (const auto& p : s) {
    lo = std::min(lo, p.R);
    hi = std::max(hi, p.R);
  }
  c.constant = {hi - lo <= shape_tolerance::constant, hi - lo};

  double rise = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) rise = std::max(rise, s[i].R - s[i - 1].R);
  c.monotone_decreasing = {rise <= shape_tolerance::monotone, rise};

  double off_line = 0.0, concave_dip = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double t = (s[i].q - s[i - 1].q) / (s[i + 1].q - s[i - 1].q);
    const double chord = s[i - 1].R + t * (s[i + 1].R - s[i - 1].R);
    const double dev = s[i].R - chord;
    off_line = std::max(off_line, std::abs(dev));
    // For equal spacing, 2 * (chord - R_i) is the second difference.
    concave_dip = std::max(concave_dip, 2.0 * dev);
  }
  c.linear = {off_line <= shape_tolerance::linear, off_line};
  c.convex = {concave_dip <= shape_tolerance::convex, concave_dip};
  return c;
}

namespace detail {

template <class Fn>
auto at_q(double q, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const convergence_error& e) {
    throw convergence_error("q = " + fmt_num(q) + ": " + e.what());
  } catch (const domain_error& e) {
    throw domain_error("q = " + fmt_num(q) + ": " + e.what());
  }
}

inline void merge_warnings(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& w : from)
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
}

}  // namespace detail

/// Equilibrium total effort R(q) for the game with its tie rule replaced.
inline double total_effort(const ContestSpec& spec, TieRule q, const SolveOptions& opt = {.force = false, .audit = false}) {
  return detail::at_q(q.q(), [&] { return solve(spec.with_tie(q), opt).total(); });
}

/// Equilibria at q_count equally spaced tie rules on [0, 1]. The spec's own
/// tie rule is ignored. Assumptions are audited once, not per point.
inline EffortCurve sweep(const ContestSpec& spec, int q_count, const SolveOptions& opt = {}) {
  detail::require(q_count >= 2, "points: sweep needs at least 2 points, got " + std::to_string(q_count));
  EffortCurve curve;
  SolveOptions per_point = opt;
  per_point.audit = false;
  if (opt.audit) {
    const Equilibrium first = solve(spec.with_tie(TieRule(0.0)), opt);
    for (const auto& w : first.warnings)
      if (w != "assumptions not audited") curve.warnings.push_back(w);
  }
  const std::vector<double> qs = numerics::linspace(0.0, 1.0, static_cast<std::size_t>(q_count));
  curve.samples.reserve(qs.size());
  for (double q : qs) {
    const Equilibrium eq = detail::at_q(q, [&] { return solve(spec.with_tie(TieRule(q)), per_point); });
    curve.samples.push_back({q, eq.x1, eq.x2, eq.total()});
    std::vector<std::string> w;
    for (const auto& s : eq.warnings)
      if (s != "assumptions not audited") w.push_back(s);
    detail::merge_warnings(curve.warnings, w);
  }
  curve.shape = certify(curve.samples);
  return curve;
}

enum class Rationale { theorem, indifferent, numeric };

inline const char* to_string(Rationale r) noexcept {
  switch (r) {
    case Rationale::theorem: return "theorem";
    case Rationale::indifferent: return "indifferent";
    case Rationale::numeric: return "numeric";
  }
  return "?";
}

struct OptimalRule {
  TieRule q;
  double R = 0.0;
  Rationale rationale = Rationale::numeric;
};

namespace designer_config {
inline constexpr double golden_tolerance = 1e-6;
inline constexpr int cross_check_points = 101;
}  // namespace designer_config

/// Effort-maximizing deterministic tie rule. Ratio and difference contests
/// favour the weaker player (q = 0); with equal valuations every rule gives
/// the same effort and q = 0 is returned. Concave contests are searched
/// numerically. Every answer is cross-checked against a 101-point sweep and
/// the better of the two is returned.
inline OptimalRule optimal_q(const ContestSpec& spec, const SolveOptions& opt = {.force = false, .audit = false}) {
  OptimalRule best;
  bool from_theory = false;
  if (spec.family_class() != FamilyClass::concave) {
    best.q = TieRule(0.0);
    best.R = total_effort(spec, best.q, opt);
    best.rationale = spec.values().symmetric() ? Rationale::indifferent : Rationale::theorem;
    from_theory = true;
  } else {
    const auto m = numerics::golden_section_max([&](double q) { return total_effort(spec, TieRule(q), opt); }, 0.0,
                                                1.0, designer_config::golden_tolerance);
    best = {TieRule(m.x), m.fx, Rationale::numeric};
  }

  SolveOptions quiet = opt;
  quiet.audit = false;
  const EffortCurve curve = sweep(spec, designer_config::cross_check_points, quiet);
  const CurveSample* top = &curve.samples.front();
  for (const auto& s : curve.samples)
    if (s.R > top->R) top = &s;
  // Against a theorem, only a gain beyond the curve tolerance counts.
  const double margin = from_theory ? shape_tolerance::constant * std::max(1.0, std::abs(best.R)) : 0.0;
  if (top->R > best.R + margin || (!from_theory && top->R == best.R && top->q < best.q.q()))
    best = {TieRule(top->q), top->R, Rationale::numeric};
  return best;
}

/// E[R(Q)] for a finite random tie rule.
inline double expected_effort(const ContestSpec& spec, const RandomTieRule& rule,
                              const SolveOptions& opt = {.force = false, .audit = false}) {
  double total = 0.0;
  for (const auto& a : rule.atoms()) total += a.weight * total_effort(spec, a.rule, opt);
  return total;
}

struct ConvexityCheck {
  bool holds = false;
  bool degenerate = false;
  /// Largest p0'' on the grid (must be negative for the check to hold).
  double worst = 0.0;
  double worst_theta = 0.0;
  /// First grid theta where p0'' is not strictly negative, if any.
  std::optional<double> sign_change_theta;
  double theta_max = 0.0;
};

/// Grid check of p0'' < 0 on [0, sqrt(2 v1)], the range that contains every
/// equilibrium effort gap. When it holds, R(q) is convex for difference
/// contests and a fair coin over q in {0, 1} beats q = 0.5.
inline ConvexityCheck convexity_precondition(const DiffCsf& csf, double v1, std::size_t points = 2001) {
  detail::require(v1 > 0.0, "v1: must be positive, got " + detail::fmt_num(v1));
  ConvexityCheck out;
  out.theta_max = std::sqrt(2.0 * v1);
  const auto grid = numerics::linspace(0.0, out.theta_max, points);
  out.worst = -std::numeric_limits<double>::infinity();
  double max_tie = 0.0;
  for (double th : grid) {
    const ReducedEvaluation e = csf.evaluate(th);
    max_tie = std::max(max_tie, std::abs(e.p0.value));
    const double d2 = e.p0.d2;
    if (d2 > out.worst) {
      out.worst = d2;
      out.worst_theta = th;
    }
    if (!(d2 < -audit_defaults::strict_slack) && !out.sign_change_theta) out.sign_change_theta = th;
  }
  out.degenerate = max_tie <= audit_defaults::degenerate_tie_mass;
  out.holds = !out.degenerate && !out.sign_change_theta;
  return out;
}

}  // namespace tiecontest

#endif  // TIECONTEST_DESIGNER_HPP
