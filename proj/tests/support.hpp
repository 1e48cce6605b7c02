#ifndef TIECONTEST_TESTS_SUPPORT_HPP
#define TIECONTEST_TESTS_SUPPORT_HPP

#include <cmath>
#include <vector>

#include "tiecontest/families.hpp"

namespace tiecontest::testing {

/// Central difference with step h.
template <class F>
double central_diff(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// |a - b| / (1 + |a|).
inline double scaled_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / (1.0 + std::abs(analytic));
}

inline std::vector<RatioCsf> ratio_builtins() {
  return {RatioCsf::vesperoni(0.5, 2.0), RatioCsf::vesperoni(1.0, 1.0), RatioCsf::vesperoni(0.25, 3.0),
          RatioCsf::jia(1.0, 2.0),       RatioCsf::jia(0.5, 3.0),       RatioCsf::jia(1.0, 1.0)};
}

inline std::vector<DiffCsf> diff_builtins() {
  return {DiffCsf::vesperoni(1.0), DiffCsf::vesperoni(2.0), DiffCsf::vesperoni(3.5),
          DiffCsf::jia(1.0),       DiffCsf::jia(2.0),       DiffCsf::jia(4.0)};
}

}  // namespace tiecontest::testing

#endif  // TIECONTEST_TESTS_SUPPORT_HPP
