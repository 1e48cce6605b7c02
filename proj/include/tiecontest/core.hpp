#ifndef TIECONTEST_CORE_HPP
#define TIECONTEST_CORE_HPP

// Value types shared by every module: valuations, tie-breaking rules, costs,
// effort profiles and outcome distributions. All of them validate on
// construction and are immutable afterwards.

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tiecontest {

/// Invalid input: a parameter outside its admissible range, an unknown
/// family name, a malformed document.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure ran out of budget (bracket expansion, iteration cap).
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw domain_error(what);
}

}  // namespace detail

enum class PlayerId { one = 1, two = 2 };

/// Prize values with the labeling convention v1 >= v2 > 0. Inputs with
/// v2 > v1 are swapped and the swap is remembered so results can be reported
/// in the caller's labels.
class Valuations {
 public:
  Valuations(double v1, double v2) {
    detail::require(std::isfinite(v1) && v1 > 0.0,
                    "v1 must be a positive finite number, got " + detail::fmt_num(v1));
    detail::require(std::isfinite(v2) && v2 > 0.0,
                    "v2 must be a positive finite number, got " + detail::fmt_num(v2));
    if (v2 > v1) {
      std::swap(v1, v2);
      swapped_ = true;
    }
    v1_ = v1;
    v2_ = v2;
  }

  double v1() const noexcept { return v1_; }
  double v2() const noexcept { return v2_; }
  double value(PlayerId p) const noexcept { return p == PlayerId::one ? v1_ : v2_; }
  /// V1 / V2 >= 1.
  double ratio() const noexcept { return v1_ / v2_; }
  bool swapped() const noexcept { return swapped_; }
  bool symmetric() const noexcept { return v1_ == v2_; }

 private:
  double v1_ = 1.0;
  double v2_ = 1.0;
  bool swapped_ = false;
};

/// Probability q that a tie is awarded to player 1.
class TieRule {
 public:
  constexpr TieRule() = default;
  explicit TieRule(double q) : q_(q) {
    if (!(q >= 0.0 && q <= 1.0)) throw domain_error("q must lie in [0, 1], got " + detail::fmt_num(q));
  }

  double q() const noexcept { return q_; }
  /// Share of the tie mass going to `p`: q for player 1, 1 - q for player 2.
  double share(PlayerId p) const noexcept { return p == PlayerId::one ? q_ : 1.0 - q_; }
  TieRule mirrored() const { return TieRule(1.0 - q_); }

 private:
  double q_ = 0.5;
};

/// Finite distribution over tie rules, drawn before efforts are chosen.
class RandomTieRule {
 public:
  struct Atom {
    TieRule rule;
    double weight;
  };

  static constexpr double weight_tolerance = 1e-12;
  static constexpr double unbiased_tolerance = 1e-12;

  explicit RandomTieRule(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    detail::require(!atoms_.empty(), "random tie rule needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms_) {
      detail::require(std::isfinite(a.weight) && a.weight > 0.0,
                      "tie rule weights must be positive, got " + detail::fmt_num(a.weight));
      total += a.weight;
    }
    detail::require(std::abs(total - 1.0) <= weight_tolerance,
                    "tie rule weights must sum to 1, got " + detail::fmt_num(total));
  }

  static RandomTieRule point_mass(TieRule q) { return RandomTieRule({{q, 1.0}}); }
  /// Fair coin over q = 0 and q = 1.
  static RandomTieRule coin() { return RandomTieRule({{TieRule(0.0), 0.5}, {TieRule(1.0), 0.5}}); }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  double mean() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.weight * a.rule.q();
    return m;
  }

  bool is_unbiased() const noexcept { return std::abs(mean() - 0.5) <= unbiased_tolerance; }

 private:
  std::vector<Atom> atoms_;
};

enum class CostKind { linear, quadratic_half };

inline double cost(CostKind kind, double x) noexcept {
  return kind == CostKind::linear ? x : 0.5 * x * x;
}

inline double cost_prime(CostKind kind, double x) noexcept {
  return kind == CostKind::linear ? 1.0 : x;
}

inline const char* to_string(CostKind kind) noexcept {
  return kind == CostKind::linear ? "linear" : "quadratic_half";
}

inline CostKind parse_cost(const std::string& s) {
  if (s == "linear") return CostKind::linear;
  if (s == "quadratic_half") return CostKind::quadratic_half;
  throw domain_error("cost: unknown cost kind '" + s + "' (expected linear or quadratic_half)");
}

struct EffortProfile {
  double x1 = 0.0;
  double x2 = 0.0;

  EffortProfile() = default;
  EffortProfile(double a, double b) : x1(a), x2(b) {
    if (!(a >= 0.0 && b >= 0.0 && std::isfinite(a) && std::isfinite(b)))
      throw domain_error("efforts must be finite and nonnegative, got (" + detail::fmt_num(a) + ", " +
                         detail::fmt_num(b) + ")");
  }

  double effort(PlayerId p) const noexcept { return p == PlayerId::one ? x1 : x2; }
  friend bool operator==(const EffortProfile&, const EffortProfile&) = default;
};

/// Win/win/tie probabilities (p1, p2, p0).
struct OutcomeDistribution {
  static constexpr double sum_tolerance = 1e-12;

  double p1 = 0.0;
  double p2 = 0.0;
  double p0 = 1.0;

  OutcomeDistribution() = default;
  OutcomeDistribution(double a, double b, double tie) : p1(a), p2(b), p0(tie) {
    const auto in_unit = [](double v) { return v >= -sum_tolerance && v <= 1.0 + sum_tolerance; };
    if (!in_unit(a) || !in_unit(b) || !in_unit(tie) || std::abs(a + b + tie - 1.0) > sum_tolerance)
      throw std::logic_error("outcome distribution does not add up: (" + detail::fmt_num(a) + ", " +
                             detail::fmt_num(b) + ", " + detail::fmt_num(tie) + ")");
  }

  double win(PlayerId p) const noexcept { return p == PlayerId::one ? p1 : p2; }
};

}  // namespace tiecontest

#endif  // TIECONTEST_CORE_HPP
