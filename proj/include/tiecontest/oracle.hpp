#ifndef TIECONTEST_ORACLE_HPP
#define TIECONTEST_ORACLE_HPP

// Brute-force reference: discretize both effort axes and check Nash
// conditions by exhaustive payoff comparison. Only payoff evaluation is used
// here, never the analytic derivatives or closed forms being validated.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "tiecontest/contest.hpp"
#include "tiecontest/equilibrium.hpp"

namespace tiecontest {

struct GridSpec {
  /// Search ceiling for each player's effort.
  double x_max = 1.0;
  /// Number of grid points on [0, x_max], including both ends.
  int steps = 2001;
  /// Best-response payoff slack. Unset means the automatic band 2 * L * h.
  std::optional<double> eps;

  GridSpec() = default;
  GridSpec(double xmax, int n, std::optional<double> slack = std::nullopt) : x_max(xmax), steps(n), eps(slack) {
    detail::require(std::isfinite(xmax) && xmax > 0.0, "grid: x_max must be positive, got " + detail::fmt_num(xmax));
    detail::require(n >= 2, "grid: steps must be at least 2, got " + std::to_string(n));
    detail::require(!slack || *slack >= 0.0, "grid: eps must be nonnegative");
  }

  double h() const noexcept { return x_max / (steps - 1); }
  double point(int i) const noexcept { return i == steps - 1 ? x_max : x_max * i / (steps - 1); }

  /// Grid whose ceiling dominates every best response: effort above
  /// max(V1, sqrt(2 V1)) costs more than the prize. The ceiling is that bound
  /// plus one grid step.
  static GridSpec for_contest(const ContestSpec& spec, int steps = 2001) {
    const double v1 = spec.values().v1();
    const double bound = std::max(v1, std::sqrt(2.0 * v1));
    return {bound * (steps - 1) / (steps - 2.0), steps};
  }
};

namespace oracle_config {
/// Cells used to probe the payoff's Lipschitz constant in own effort. Fixed so
/// the automatic band scales exactly with the grid step.
inline constexpr int lipschitz_cells = 1024;
/// Fewer grid points than this is flagged as too coarse to judge anything.
inline constexpr int min_steps = 11;
}  // namespace oracle_config

struct GridResponse {
  double x = 0.0;
  double payoff = 0.0;
};

namespace detail {

inline EffortProfile profile_for(PlayerId player, double own, double other) {
  return player == PlayerId::one ? EffortProfile{own, other} : EffortProfile{other, own};
}

inline double payoff_at(const ContestSpec& spec, PlayerId player, double own, double other) {
  return payoff(spec, profile_for(player, own, other), player);
}

}  // namespace detail

/// Largest slope of the player's payoff in own effort, probed on a fixed
/// partition of [x_max / N, x_max]. The first cell is skipped: ratio-form
/// payoffs jump at zero effort when the opponent is also at zero.
inline double probe_lipschitz(const ContestSpec& spec, PlayerId player, double opponent, double x_max) {
  const int n = oracle_config::lipschitz_cells;
  const double d = x_max / n;
  double prev = detail::payoff_at(spec, player, d, opponent);
  double worst = 0.0;
  for (int k = 2; k <= n; ++k) {
    const double cur = detail::payoff_at(spec, player, d * k, opponent);
    worst = std::max(worst, std::abs(cur - prev) / d);
    prev = cur;
  }
  return worst;
}

inline double auto_band(const ContestSpec& spec, PlayerId player, double opponent, const GridSpec& grid) {
  return 2.0 * probe_lipschitz(spec, player, opponent, grid.x_max) * grid.h();
}

/// Grid point maximizing the player's payoff against a fixed opponent
/// effort. Ties go to the smaller effort.
inline GridResponse grid_best_response(const ContestSpec& spec, PlayerId player, double opponent_effort,
                                       const GridSpec& grid) {
  detail::require(opponent_effort >= 0.0 && opponent_effort <= grid.x_max * (1.0 + 1e-12),
                  "opponent effort must lie in [0, x_max], got " + detail::fmt_num(opponent_effort));
  GridResponse best{0.0, detail::payoff_at(spec, player, 0.0, opponent_effort)};
  for (int i = 1; i < grid.steps; ++i) {
    const double x = grid.point(i);
    const double pay = detail::payoff_at(spec, player, x, opponent_effort);
    if (pay > best.payoff) best = {x, pay};
  }
  return best;
}

/// All grid profiles where each player's payoff is within eps of the grid
/// best-response payoff against the other. Sorted lexicographically (x1, x2).
inline std::vector<EffortProfile> grid_nash(const ContestSpec& spec, const GridSpec& grid) {
  const int n = grid.steps;
  std::vector<double> br2(n), band2(n);
  for (int i = 0; i < n; ++i) {
    const double x1 = grid.point(i);
    br2[i] = grid_best_response(spec, PlayerId::two, x1, grid).payoff;
    band2[i] = grid.eps ? *grid.eps : auto_band(spec, PlayerId::two, x1, grid);
  }
  std::vector<EffortProfile> out;
  std::vector<double> row(n);
  for (int j = 0; j < n; ++j) {
    const double x2 = grid.point(j);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      row[i] = detail::payoff_at(spec, PlayerId::one, grid.point(i), x2);
      best = std::max(best, row[i]);
    }
    const double band1 = grid.eps ? *grid.eps : auto_band(spec, PlayerId::one, x2, grid);
    for (int i = 0; i < n; ++i) {
      if (!(row[i] >= best - band1)) continue;
      const double x1 = grid.point(i);
      if (detail::payoff_at(spec, PlayerId::two, x2, x1) >= br2[i] - band2[i]) out.emplace_back(x1, x2);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const EffortProfile& a, const EffortProfile& b) { return a.x1 != b.x1 ? a.x1 < b.x1 : a.x2 < b.x2; });
  return out;
}

struct VerificationReport {
  /// max over grid deviations of (payoff at deviation - payoff at eq), per player.
  std::array<double, 2> payoff_loss{};
  std::array<double, 2> best_deviation{};
  /// Acceptance band per player (explicit eps or 2 * L * h).
  std::array<double, 2> band{};
  double h = 0.0;
  std::size_t grid_equilibria = 0;
  /// Max-norm distance to the nearest grid equilibrium; inf when none.
  double nearest_distance = std::numeric_limits<double>::infinity();
  std::optional<EffortProfile> nearest;
  bool resolution_too_coarse = false;
  bool zero_convention_used = false;
  bool pass = false;
};

struct VerifyOptions {
  /// Also enumerate grid equilibria to measure the distance to the nearest one.
  bool locate_grid_equilibria = true;
};

inline VerificationReport verify(const ContestSpec& spec, const EffortProfile& eq, const GridSpec& grid,
                                 const VerifyOptions& opt = {}) {
  VerificationReport rep;
  rep.h = grid.h();
  rep.resolution_too_coarse = grid.steps < oracle_config::min_steps;
  const bool ratio = class_of(spec.csf()) == FamilyClass::ratio;
  rep.zero_convention_used = ratio && (eq.x1 == 0.0 || eq.x2 == 0.0);
  const std::array<PlayerId, 2> players{PlayerId::one, PlayerId::two};
  for (int p = 0; p < 2; ++p) {
    const PlayerId who = players[p];
    const double other = eq.effort(who == PlayerId::one ? PlayerId::two : PlayerId::one);
    detail::require(other <= grid.x_max, "grid: x_max " + detail::fmt_num(grid.x_max) +
                                             " is below the equilibrium effort " + detail::fmt_num(other));
    const GridResponse br = grid_best_response(spec, who, other, grid);
    rep.payoff_loss[p] = br.payoff - payoff(spec, eq, who);
    rep.best_deviation[p] = br.x;
    rep.band[p] = grid.eps ? *grid.eps : auto_band(spec, who, other, grid);
  }
  if (opt.locate_grid_equilibria && !rep.resolution_too_coarse) {
    const auto nash = grid_nash(spec, grid);
    // The exhaustive scan always visits (0, 0).
    rep.zero_convention_used = ratio;
    rep.grid_equilibria = nash.size();
    for (const auto& g : nash) {
      const double d = std::max(std::abs(g.x1 - eq.x1), std::abs(g.x2 - eq.x2));
      if (d < rep.nearest_distance) {
        rep.nearest_distance = d;
        rep.nearest = g;
      }
    }
  }
  rep.pass = !rep.resolution_too_coarse && rep.payoff_loss[0] <= rep.band[0] && rep.payoff_loss[1] <= rep.band[1];
  return rep;
}

inline VerificationReport verify(const ContestSpec& spec, const Equilibrium& eq, const GridSpec& grid,
                                 const VerifyOptions& opt = {}) {
  return verify(spec, eq.profile(), grid, opt);
}

}  // namespace tiecontest

#endif  // TIECONTEST_ORACLE_HPP
