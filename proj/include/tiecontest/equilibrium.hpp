#ifndef TIECONTEST_EQUILIBRIUM_HPP
#define TIECONTEST_EQUILIBRIUM_HPP

// Pure-strategy equilibrium solvers.
//
//   ratio form:      x_i = V_i * beta * z_q'(beta), beta = V1 / V2
//   difference form: x_i = V_i * z_q'(beta(q)), beta(q) the root of
//                    theta = (V1 - V2) z_q'(theta)
//   concave class:   simultaneous first-order conditions on the head-start
//                    impacts g_1 = x_1^r + q, g_2 = x_2^r + 1 - q
//
// All solvers work in normalized labels (V1 >= V2).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "tiecontest/audit.hpp"
#include "tiecontest/contest.hpp"
#include "tiecontest/families.hpp"
#include "tiecontest/numerics.hpp"

namespace tiecontest {

/// Frozen solver tolerances.
struct SolverConfig {
  static constexpr double closed_form_residual = 1e-10;
  static constexpr double iterative_residual = 1e-9;
  static constexpr double beta_residual = 1e-12;
  static constexpr int bracket_expansions = 100;
  static constexpr int max_iterations = 100000;
  static constexpr double damping = 0.5;
  /// Cells in the fallback sweep of the concave solver.
  static constexpr int fallback_cells = 2000;
};

enum class SolveMethod { closed_form, root_find, foc_solve };

inline const char* to_string(SolveMethod m) noexcept {
  switch (m) {
    case SolveMethod::closed_form: return "closed_form";
    case SolveMethod::root_find: return "root_find";
    case SolveMethod::foc_solve: return "foc_solve";
  }
  return "?";
}

struct Equilibrium {
  double x1 = 0.0;
  double x2 = 0.0;
  /// x1 / x2 for ratio contests, x1 - x2 for difference contests; unused
  /// (x1 - x2) for concave contests.
  double beta = 0.0;
  SolveMethod method = SolveMethod::closed_form;
  /// Per-player first-order-condition residuals; at a corner, the amount by
  /// which the marginal payoff at zero effort is positive (0 if none).
  std::array<double, 2> residuals{};
  std::array<bool, 2> corner{};
  int iterations = 0;
  std::vector<std::string> warnings;

  double total() const noexcept { return x1 + x2; }
  EffortProfile profile() const { return {x1, x2}; }
};

struct SolveOptions {
  /// Solve even when the family's equilibrium precondition fails.
  bool force = false;
  /// Run the default-grid audit and record a warning if it fails.
  bool audit = true;
};

/// Closed form for ratio-form contests.
inline Equilibrium solve_ratio(const RatioCsf& csf, const Valuations& v, TieRule q, const SolveOptions& opt = {}) {
  Equilibrium eq;
  if (!csf.precondition_holds()) {
    if (!opt.force)
      throw domain_error("params: " + std::string(family_info(csf.kind()).name) + " requires " +
                         csf.precondition_text() + "; pass --force to solve anyway");
    eq.warnings.push_back("equilibrium precondition violated (" + csf.precondition_text() + "); solved under force");
  }
  if (opt.audit) {
    if (!audit_ratio(csf).all_pass()) eq.warnings.push_back("assumption audit failed on the default grid");
  } else {
    eq.warnings.push_back("assumptions not audited");
  }
  const double beta = v.ratio();
  const double zp = csf.z_prime(beta, q);
  eq.x1 = v.v1() * beta * zp;
  eq.x2 = v.v2() * beta * zp;
  eq.beta = beta;
  eq.method = SolveMethod::closed_form;
  const double theta = eq.x1 / eq.x2;
  const double zt = csf.z_prime(theta, q);
  eq.residuals = {v.v1() * zt / eq.x2 - 1.0, eq.x1 * v.v2() * zt / (eq.x2 * eq.x2) - 1.0};
  return eq;
}

/// Root beta(q) >= 0 of theta = (V1 - V2) z_q'(theta); exactly 0 when V1 = V2.
inline double solve_beta(const DiffCsf& csf, const Valuations& v, TieRule q) {
  const double gap = v.v1() - v.v2();
  if (gap == 0.0) return 0.0;
  const auto F = [&](double th) { return th - gap * csf.z_prime(th, q); };
  double sup_zp = 0.0;
  for (double th : audit_defaults::diff_grid()) sup_zp = std::max(sup_zp, csf.z_prime(th, q));
  const double lo = 0.0;
  const double f_lo = F(lo);
  double hi = gap * sup_zp + 1.0;
  double f_hi = F(hi);
  for (int i = 0; f_hi <= 0.0; ++i) {
    if (i == SolverConfig::bracket_expansions)
      throw convergence_error("beta: no sign change after " + std::to_string(SolverConfig::bracket_expansions) +
                              " bracket expansions; the regularity assumptions likely fail");
    hi *= 2.0;
    f_hi = F(hi);
  }
  return numerics::bracketed_root(F, lo, hi, f_lo, f_hi).x;
}

inline Equilibrium solve_diff(const DiffCsf& csf, const Valuations& v, TieRule q, const SolveOptions& opt = {}) {
  Equilibrium eq;
  if (opt.audit) {
    if (!audit_diff(csf, v.v1()).all_pass())
      eq.warnings.push_back("assumption audit failed on the default grid for v1 = " + detail::fmt_num(v.v1()));
  } else {
    eq.warnings.push_back("assumptions not audited");
  }
  const double beta = solve_beta(csf, v, q);
  const double zp = csf.z_prime(beta, q);
  eq.x1 = v.v1() * zp;
  eq.x2 = v.v2() * zp;
  eq.beta = beta;
  eq.method = SolveMethod::root_find;
  const double zt = csf.z_prime(eq.x1 - eq.x2, q);
  eq.residuals = {v.v1() * zt - eq.x1, v.v2() * zt - eq.x2};
  return eq;
}

namespace detail {

/// One player's side of the concave contest with linear cost.
struct ConcaveSide {
  const ConcaveCsf& csf;
  double value;
  double share;  // own head-start: q for player 1, 1 - q for player 2

  double head_other() const noexcept { return 1.0 - share; }

  /// d payoff / d own effort, for x > 0.
  double marginal(double x, double x_other) const {
    const double g_other = csf.impact(x_other) + head_other();
    const double g_own = csf.impact(x) + share;
    const double s = g_own + g_other;
    return value * csf.r() * std::pow(x, csf.r() - 1.0) * g_other / (s * s) - 1.0;
  }

  double best_response(double x_other) const {
    const double g_other = csf.impact(x_other) + head_other();
    // Opponent has no impact and no head-start: any own impact wins outright.
    if (g_other == 0.0) return 0.0;
    if (csf.r() == 1.0) {
      const double x = std::sqrt(value * g_other) - g_other - share;
      return std::max(0.0, x);
    }
    // Marginal payoff falls from +inf at 0 to below zero at x = value.
    const auto f = [&](double x) { return marginal(x, x_other); };
    const double hi = value;
    return numerics::bracketed_root(f, 0.0, hi, 1.0, f(hi)).x;
  }

  /// FOC residual at x: the marginal payoff when interior, the positive part
  /// of the marginal payoff at zero when at the corner.
  double residual(double x, double x_other) const {
    if (x > 0.0) return marginal(x, x_other);
    const double g_other = csf.impact(x_other) + head_other();
    if (g_other == 0.0) return 0.0;
    if (csf.r() < 1.0) return std::numeric_limits<double>::infinity();
    const double s = share + g_other;
    return std::max(0.0, value * g_other / (s * s) - 1.0);
  }
};

inline bool same_effort(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }

}  // namespace detail

/// Concave (Blavatskyy, f = x^r) contest with linear cost.
inline Equilibrium solve_concave(const ConcaveCsf& csf, const Valuations& v, TieRule q) {
  const detail::ConcaveSide one{csf, v.v1(), q.q()};
  const detail::ConcaveSide two{csf, v.v2(), 1.0 - q.q()};
  Equilibrium eq;
  const auto finish = [&](double x1, double x2) {
    eq.x1 = x1;
    eq.x2 = x2;
    eq.beta = x1 - x2;
    eq.corner = {x1 == 0.0, x2 == 0.0};
    eq.residuals = {one.residual(x1, x2), two.residual(x2, x1)};
    return eq;
  };

  if (csf.r() == 1.0) {
    eq.method = SolveMethod::closed_form;
    const double s = v.v1() + v.v2();
    const double x1 = v.v1() * v.v1() * v.v2() / (s * s) - q.q();
    const double x2 = v.v1() * v.v2() * v.v2() / (s * s) - (1.0 - q.q());
    if (x1 >= 0.0 && x2 >= 0.0) return finish(x1, x2);

    // The closed form leaves the nonnegative orthant. Clamp and keep the
    // clamped profile only if it is a mutual best response.
    const double c1 = std::max(0.0, x1), c2 = std::max(0.0, x2);
    if (detail::same_effort(one.best_response(c2), c1) && detail::same_effort(two.best_response(c1), c2)) {
      eq.warnings.push_back("closed form negative; clamped profile is a mutual best response");
      return finish(c1, c2);
    }
    // Otherwise look for the equilibrium with one player out.
    for (int out = 0; out < 2; ++out) {
      const double a = out == 0 ? 0.0 : one.best_response(0.0);
      const double b = out == 1 ? 0.0 : two.best_response(0.0);
      if (detail::same_effort(one.best_response(b), a) && detail::same_effort(two.best_response(a), b)) {
        eq.warnings.push_back(
            "closed form negative; corner equilibrium found by best-response search (uniqueness not asserted)");
        return finish(a, b);
      }
    }
    throw convergence_error("no equilibrium: closed form is negative and no corner profile is a mutual best response");
  }

  eq.method = SolveMethod::foc_solve;
  const double tol = SolverConfig::iterative_residual;
  const auto converged = [&](double x1, double x2) {
    return std::abs(one.residual(x1, x2)) < tol && std::abs(two.residual(x2, x1)) < tol;
  };

  double x1 = v.v1() / 4.0, x2 = v.v2() / 4.0;
  const double w = SolverConfig::damping;
  for (int it = 1; it <= SolverConfig::max_iterations; ++it) {
    const double b1 = one.best_response(x2);
    const double b2 = two.best_response(x1);
    const double n1 = (1.0 - w) * x1 + w * b1;
    const double n2 = (1.0 - w) * x2 + w * b2;
    const bool stalled = n1 == x1 && n2 == x2;
    x1 = n1;
    x2 = n2;
    if (converged(x1, x2)) {
      eq.iterations = it;
      return finish(x1, x2);
    }
    if (stalled) break;
  }

  // Fallback: player 2's effort solves BR2(BR1(x2)) = x2 on [0, V2].
  const auto h = [&](double y) { return two.best_response(one.best_response(y)) - y; };
  const double top = v.v2();
  double lo = 0.0, f_lo = h(lo);
  for (int i = 1; i <= SolverConfig::fallback_cells; ++i) {
    const double hi = top * i / SolverConfig::fallback_cells;
    const double f_hi = h(hi);
    if ((f_lo <= 0.0) != (f_hi <= 0.0) || f_lo == 0.0) {
      const double y = numerics::bracketed_root(h, lo, hi, f_lo, f_hi).x;
      const double y1 = one.best_response(y);
      if (converged(y1, y)) {
        eq.warnings.push_back("damped best-response iteration did not converge; used fallback sweep");
        eq.iterations = SolverConfig::max_iterations;
        return finish(y1, y);
      }
    }
    lo = hi;
    f_lo = f_hi;
  }
  throw convergence_error("concave solver: no profile with residual below " + detail::fmt_num(tol) + " after " +
                          std::to_string(SolverConfig::max_iterations) + " iterations (last iterate " +
                          detail::fmt_num(x1) + ", " + detail::fmt_num(x2) + ")");
}

/// Dispatches on the family class. The cost must be the one the class is
/// solved for: linear for ratio and concave, x^2/2 for difference.
inline Equilibrium solve(const ContestSpec& spec, const SolveOptions& opt = {}) {
  const CostKind want = natural_cost(spec.family_class());
  if (spec.cost_kind() != want)
    throw domain_error(std::string("cost: ") + std::string(family_info(spec.kind()).name) + " is solved with " +
                       to_string(want) + " cost, got " + to_string(spec.cost_kind()));
  if (const auto* c = std::get_if<RatioCsf>(&spec.csf())) return solve_ratio(*c, spec.values(), spec.tie(), opt);
  if (const auto* c = std::get_if<DiffCsf>(&spec.csf())) return solve_diff(*c, spec.values(), spec.tie(), opt);
  return solve_concave(std::get<ConcaveCsf>(spec.csf()), spec.values(), spec.tie());
}

/// Equilibrium relabeled to the caller's original player order.
inline Equilibrium in_user_labels(Equilibrium eq, const ContestSpec& spec) {
  if (!spec.swapped()) return eq;
  std::swap(eq.x1, eq.x2);
  std::swap(eq.residuals[0], eq.residuals[1]);
  std::swap(eq.corner[0], eq.corner[1]);
  return eq;
}

}  // namespace tiecontest

#endif  // TIECONTEST_EQUILIBRIUM_HPP
