#ifndef TIECONTEST_NUMERICS_HPP
#define TIECONTEST_NUMERICS_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "tiecontest/core.hpp"

namespace tiecontest::numerics {

/// n points from lo to hi inclusive; the endpoints and the midpoint of an odd
/// grid over a symmetric interval are exact.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  detail::require(n >= 2, "grid: need at least two points");
  std::vector<double> out(n);
  const double span = hi - lo;
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + span * static_cast<double>(i) / last;
  out.back() = hi;
  return out;
}

/// n points 10^e with e equally spaced over [lo_exp, hi_exp].
inline std::vector<double> logspace(double lo_exp, double hi_exp, std::size_t n) {
  std::vector<double> out = linspace(lo_exp, hi_exp, n);
  for (double& e : out) e = std::pow(10.0, e);
  return out;
}

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Root of f on [lo, hi] given f(lo) and f(hi) of opposite sign. Secant
/// (false-position) steps alternate with bisections, so the bracket at least
/// halves every two iterations; the loop runs until the bracket is down to
/// adjacent doubles. Returns the endpoint with the smaller |f|.
template <class F>
RootResult bracketed_root(F&& f, double lo, double hi, double f_lo, double f_hi, int max_iter = 2000) {
  if (f_lo == 0.0) return {lo, 0.0, 0};
  if (f_hi == 0.0) return {hi, 0.0, 0};
  if ((f_lo < 0.0) == (f_hi < 0.0)) throw convergence_error("root bracket does not contain a sign change");
  int it = 0;
  for (; it < max_iter; ++it) {
    if (std::nextafter(lo, hi) >= hi) break;
    double mid = 0.5 * (lo + hi);
    if (it % 2 == 0) {
      const double s = lo - f_lo * (hi - lo) / (f_hi - f_lo);
      if (s > lo && s < hi) mid = s;
    }
    const double fm = f(mid);
    if (fm == 0.0) return {mid, 0.0, it + 1};
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
      f_hi = fm;
    }
  }
  if (it == max_iter) throw convergence_error("root finder exhausted its iteration budget");
  return std::abs(f_lo) <= std::abs(f_hi) ? RootResult{lo, f_lo, it} : RootResult{hi, f_hi, it};
}

struct MaxResult {
  double x = 0.0;
  double fx = 0.0;
};

/// Golden-section search for a maximum of f on [a, b], stopping once the
/// bracket is narrower than tol. Endpoints are compared at the end so a
/// monotone or convex objective returns the better endpoint.
template <class F>
MaxResult golden_section_max(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double a0 = a, b0 = b;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  MaxResult best = fc >= fd ? MaxResult{c, fc} : MaxResult{d, fd};
  for (double x : {a0, b0}) {
    const double fx = f(x);
    if (fx > best.fx || (fx == best.fx && x < best.x)) best = {x, fx};
  }
  return best;
}

}  // namespace tiecontest::numerics

#endif  // TIECONTEST_NUMERICS_HPP
