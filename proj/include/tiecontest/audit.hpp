#ifndef TIECONTEST_AUDIT_HPP
#define TIECONTEST_AUDIT_HPP

// Grid certification of the regularity conditions the equilibrium results
// rest on. A report never claims a universally quantified property: it
// records the grid and states that no violation was found on it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tiecontest/families.hpp"
#include "tiecontest/numerics.hpp"

namespace tiecontest {

namespace audit_defaults {
inline constexpr double ratio_log10_min = -3.0;
inline constexpr double ratio_log10_max = 3.0;
inline constexpr double diff_min = -10.0;
inline constexpr double diff_max = 10.0;
inline constexpr std::size_t points = 2001;
/// A value must exceed this to count as strictly positive.
inline constexpr double strict_slack = 1e-12;
/// Tolerance for the z(0+) = 0 and z(inf) = 1 tail checks.
inline constexpr double tail_tolerance = 1e-3;
/// Geometric tail probes go this many decades past the grid ends.
inline constexpr int tail_decades = 12;
/// p0 below this everywhere on the grid is treated as identically zero.
inline constexpr double degenerate_tie_mass = 1e-14;

inline std::vector<double> ratio_grid() { return numerics::logspace(ratio_log10_min, ratio_log10_max, points); }
inline std::vector<double> diff_grid() { return numerics::linspace(diff_min, diff_max, points); }
inline std::vector<double> q_grid() { return {0.0, 0.25, 0.5, 0.75, 1.0}; }
}  // namespace audit_defaults

struct ConditionRecord {
  std::string id;
  bool pass = true;
  /// Largest amount by which the condition was missed; 0 when it holds.
  double worst_violation = 0.0;
  std::optional<double> witness_theta;
  std::optional<double> witness_q;
  std::string note;
};

struct GridRecord {
  std::string spacing;
  double theta_min = 0.0;
  double theta_max = 0.0;
  std::size_t theta_points = 0;
  std::vector<double> q_values;
};

struct AuditReport {
  std::string family;
  std::vector<ConditionRecord> conditions;
  /// inf and sup of z'' over the probed (theta, q) grid.
  double m = 0.0;
  double M = 0.0;
  std::optional<double> vbar;
  GridRecord grid;
  std::string disclaimer = "grid evidence, not proof: no violation found on the probed grid";

  bool all_pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
  }

  const ConditionRecord* find(const std::string& id) const {
    for (const auto& c : conditions)
      if (c.id == id) return &c;
    return nullptr;
  }
};

namespace detail {

/// Tracks the worst violation of one condition. Ties on magnitude go to the
/// smallest theta, then the smallest q, so the result does not depend on scan
/// order.
class ViolationTracker {
 public:
  explicit ViolationTracker(std::string id) { rec_.id = std::move(id); }

  void observe(bool violated, double magnitude, double theta, std::optional<double> q = std::nullopt) {
    if (!violated) return;
    const bool first = rec_.pass;
    rec_.pass = false;
    const double qv = q.value_or(-1.0);
    const double wq = rec_.witness_q.value_or(-1.0);
    const bool better = first || magnitude > rec_.worst_violation ||
                        (magnitude == rec_.worst_violation &&
                         (theta < *rec_.witness_theta || (theta == *rec_.witness_theta && qv < wq)));
    if (better) {
      rec_.worst_violation = magnitude;
      rec_.witness_theta = theta;
      rec_.witness_q = q;
    }
  }

  void note(std::string n) { rec_.note = std::move(n); }
  ConditionRecord take() { return std::move(rec_); }

 private:
  ConditionRecord rec_;
};

inline GridRecord make_grid_record(const std::string& spacing, const std::vector<double>& thetas,
                                   const std::vector<double>& qs) {
  const auto [lo, hi] = std::minmax_element(thetas.begin(), thetas.end());
  return {spacing, *lo, *hi, thetas.size(), qs};
}

inline void require_grids(const std::vector<double>& thetas, const std::vector<double>& qs) {
  require(!thetas.empty(), "grid: theta grid must be nonempty");
  require(!qs.empty(), "grid: q grid must be nonempty");
  for (double q : qs) TieRule{q};
}

/// p0 unimodality with its peak at `peak`: increasing to the left, decreasing
/// to the right, flat at the peak itself. The peak point is exempt from the
/// strict inequalities.
template <class Csf>
ConditionRecord tie_unimodality(const Csf& csf, const std::vector<double>& thetas, double peak) {
  ViolationTracker t("tie_unimodal");
  double max_tie = 0.0;
  for (double th : thetas) max_tie = std::max(max_tie, std::abs(csf.p0(th)));
  if (max_tie <= audit_defaults::degenerate_tie_mass) {
    t.note("degenerate: p0 == 0 (no ties)");
    return t.take();
  }
  const double slack = audit_defaults::strict_slack;
  for (double th : thetas) {
    const double d = csf.p0_prime(th);
    if (std::abs(th - peak) <= 1e-9 * std::max(1.0, std::abs(peak))) {
      t.observe(std::abs(d) > slack, std::abs(d), th);
    } else if (th < peak) {
      t.observe(!(d > slack), slack - d, th);
    } else {
      t.observe(!(d < -slack), d + slack, th);
    }
  }
  return t.take();
}

}  // namespace detail

/// Ratio-form conditions: z' > 0, z'' < 0, 2 z' + theta z'' > 0, the tail
/// limits z(0+) = 0 and z(inf) = 1, and p0 unimodal with its peak at 1.
inline AuditReport audit_ratio(const RatioCsf& csf, const std::vector<double>& thetas,
                               const std::vector<double>& qs) {
  detail::require_grids(thetas, qs);
  for (double th : thetas) detail::require(th > 0.0, "grid: ratio-form theta grid must be positive");
  const double slack = audit_defaults::strict_slack;

  AuditReport rep;
  rep.family = std::string(family_info(csf.kind()).name);
  rep.grid = detail::make_grid_record("log", thetas, qs);
  rep.m = std::numeric_limits<double>::infinity();
  rep.M = -rep.m;

  detail::ViolationTracker zp("z_prime_positive"), zpp("z_double_prime_negative"),
      so("second_order_ratio");
  for (double th : thetas) {
    const ReducedEvaluation e = csf.evaluate(th);
    for (double q : qs) {
      const double d1 = e.z_prime(q), d2 = e.z_double_prime(q);
      rep.m = std::min(rep.m, d2);
      rep.M = std::max(rep.M, d2);
      zp.observe(!(d1 > slack), slack - d1, th, q);
      zpp.observe(!(d2 < -slack), d2 + slack, th, q);
      const double s = 2.0 * d1 + th * d2;
      so.observe(!(s > slack), slack - s, th, q);
    }
  }
  rep.conditions.push_back(zp.take());
  rep.conditions.push_back(zpp.take());
  rep.conditions.push_back(so.take());

  const double tol = audit_defaults::tail_tolerance;
  const auto [lo_it, hi_it] = std::minmax_element(thetas.begin(), thetas.end());
  detail::ViolationTracker lower("zero_effort_limit"), upper("saturation_limit");
  for (double q : qs) {
    // Exact limit at 0, then geometric probes toward it.
    const double at_zero = csf.p(0.0) + q * csf.p0(0.0);
    lower.observe(at_zero > tol, at_zero, 0.0, q);
    double th = *lo_it, z = csf.z(th, TieRule(q));
    for (int j = 0; j < audit_defaults::tail_decades && z > tol; ++j) {
      th /= 10.0;
      z = csf.z(th, TieRule(q));
    }
    lower.observe(z > tol, z, th, q);

    th = *hi_it;
    z = csf.z(th, TieRule(q));
    for (int j = 0; j < audit_defaults::tail_decades && 1.0 - z > tol; ++j) {
      th *= 10.0;
      z = csf.z(th, TieRule(q));
    }
    upper.observe(1.0 - z > tol, 1.0 - z, th, q);
  }
  lower.note("tail probes down to theta_min * 1e-" + std::to_string(audit_defaults::tail_decades));
  upper.note("tail probes up to theta_max * 1e" + std::to_string(audit_defaults::tail_decades));
  rep.conditions.push_back(lower.take());
  rep.conditions.push_back(upper.take());

  rep.conditions.push_back(detail::tie_unimodality(csf, thetas, RatioCsf::symmetric_point));
  return rep;
}

inline AuditReport audit_ratio(const RatioCsf& csf) {
  return audit_ratio(csf, audit_defaults::ratio_grid(), audit_defaults::q_grid());
}

/// Difference-form conditions for a given V1: z' > 0, |z''| <= 1 / V1, and
/// p0 unimodal with its peak at 0. Also reports the bound vbar = 1 / max |z''|.
inline AuditReport audit_diff(const DiffCsf& csf, double v1, const std::vector<double>& thetas,
                              const std::vector<double>& qs) {
  detail::require_grids(thetas, qs);
  detail::require(v1 > 0.0, "v1: must be positive, got " + detail::fmt_num(v1));
  const double slack = audit_defaults::strict_slack;
  const double bound = 1.0 / v1;

  AuditReport rep;
  rep.family = std::string(family_info(csf.kind()).name);
  rep.grid = detail::make_grid_record("linear", thetas, qs);
  rep.m = std::numeric_limits<double>::infinity();
  rep.M = -rep.m;

  detail::ViolationTracker zp("z_prime_positive"), zb("z_double_prime_bound");
  for (double th : thetas) {
    const ReducedEvaluation e = csf.evaluate(th);
    for (double q : qs) {
      const double d1 = e.z_prime(q), d2 = e.z_double_prime(q);
      rep.m = std::min(rep.m, d2);
      rep.M = std::max(rep.M, d2);
      zp.observe(!(d1 > slack), slack - d1, th, q);
      zb.observe(std::abs(d2) > bound + slack, std::abs(d2) - bound, th, q);
    }
  }
  zb.note("bound 1/v1 = " + detail::fmt_num(bound));
  rep.conditions.push_back(zp.take());
  rep.conditions.push_back(zb.take());
  rep.conditions.push_back(detail::tie_unimodality(csf, thetas, DiffCsf::symmetric_point));

  const double worst = std::max(std::abs(rep.m), std::abs(rep.M));
  if (worst > 0.0) rep.vbar = 1.0 / worst;
  return rep;
}

inline AuditReport audit_diff(const DiffCsf& csf, double v1) {
  return audit_diff(csf, v1, audit_defaults::diff_grid(), audit_defaults::q_grid());
}

/// Largest V1 for which |z''| <= 1 / V1 holds on the grid.
inline double estimate_vbar(const DiffCsf& csf, const std::vector<double>& thetas, const std::vector<double>& qs) {
  detail::require_grids(thetas, qs);
  double worst = 0.0;
  for (double th : thetas) {
    const ReducedEvaluation e = csf.evaluate(th);
    for (double q : qs) worst = std::max(worst, std::abs(e.z_double_prime(q)));
  }
  detail::require(worst > 0.0, "grid: z'' vanishes on the whole grid, vbar is unbounded");
  return 1.0 / worst;
}

inline double estimate_vbar(const DiffCsf& csf) {
  return estimate_vbar(csf, audit_defaults::diff_grid(), audit_defaults::q_grid());
}

/// Impact function f(x) = x^r of the concave class: strictly increasing and
/// concave on x > 0. Takes the raw exponent so it can judge values the
/// family constructor would reject.
inline AuditReport audit_concave_impact(double r, const std::vector<double>& xs) {
  detail::require(!xs.empty(), "grid: effort grid must be nonempty");
  detail::require(std::isfinite(r) && r > 0.0, "r: must be positive, got " + detail::fmt_num(r));
  const double slack = audit_defaults::strict_slack;
  AuditReport rep;
  rep.family = "blavatskyy-power";
  rep.grid = detail::make_grid_record("log", xs, {});
  rep.m = std::numeric_limits<double>::infinity();
  rep.M = -rep.m;
  detail::ViolationTracker inc("impact_increasing"), conc("impact_concave");
  for (double x : xs) {
    detail::require(x > 0.0, "grid: effort grid must be positive");
    const double d1 = r * std::pow(x, r - 1.0);
    const double d2 = r * (r - 1.0) * std::pow(x, r - 2.0);
    rep.m = std::min(rep.m, d2);
    rep.M = std::max(rep.M, d2);
    inc.observe(!(d1 > slack), slack - d1, x);
    conc.observe(d2 > slack, d2 - slack, x);
  }
  rep.conditions.push_back(inc.take());
  rep.conditions.push_back(conc.take());
  return rep;
}

inline AuditReport audit_concave(const ConcaveCsf& csf) {
  return audit_concave_impact(csf.r(), audit_defaults::ratio_grid());
}

}  // namespace tiecontest

#endif  // TIECONTEST_AUDIT_HPP
