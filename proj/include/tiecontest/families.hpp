#ifndef TIECONTEST_FAMILIES_HPP
#define TIECONTEST_FAMILIES_HPP

// Parametric contest success functions with ties.
//
// Ratio-form and difference-form families reduce to one-variable functions
// p(theta) (player 1 wins) and p0(theta) (tie), with theta = x1 / x2 or
// theta = x1 - x2. Both built-in shapes are logistic in a scale variable
// phi: phi = theta for difference families and phi = r * ln(theta) for ratio
// families. Working in phi keeps every evaluation finite for |theta| up to
// several hundred (difference) or theta over many decades (ratio); the
// theta-derivatives follow from the chain rule.
//
// The concave (Blavatskyy) class is not reducible to one variable and has its
// own type.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tiecontest/core.hpp"

namespace tiecontest {

enum class FamilyKind { vesperoni_ratio, jia_ratio, vesperoni_diff, jia_diff, blavatskyy_power };

enum class FamilyClass { ratio, difference, concave };

struct FamilyInfo {
  FamilyKind kind;
  std::string_view name;
  FamilyClass cls;
  bool uses_r;
  bool uses_k;
  std::string_view constraints;
};

inline constexpr FamilyInfo family_table[] = {
    {FamilyKind::vesperoni_ratio, "vesperoni-ratio", FamilyClass::ratio, true, true,
     "p(t) = t^(rk) / (1 + t^r)^k; r > 0, k >= 1; equilibrium theory needs r*k <= 1"},
    {FamilyKind::jia_ratio, "jia-ratio", FamilyClass::ratio, true, true,
     "p(t) = t^r / (t^r + k); r > 0, k >= 1; equilibrium theory needs r <= 1"},
    {FamilyKind::vesperoni_diff, "vesperoni-diff", FamilyClass::difference, false, true,
     "p(t) = e^(kt) / (1 + e^t)^k; k >= 1; V1 bounded by the audit's vbar"},
    {FamilyKind::jia_diff, "jia-diff", FamilyClass::difference, false, true,
     "p(t) = e^t / (k + e^t); k >= 1; V1 bounded by the audit's vbar"},
    {FamilyKind::blavatskyy_power, "blavatskyy-power", FamilyClass::concave, true, false,
     "p_i = x_i^r / (x_1^r + x_2^r + 1); 0 < r <= 1; linear cost"},
};

inline const FamilyInfo& family_info(FamilyKind kind) {
  for (const auto& f : family_table)
    if (f.kind == kind) return f;
  throw std::logic_error("unregistered family kind");
}

inline FamilyKind parse_family(std::string_view name) {
  for (const auto& f : family_table)
    if (f.name == name) return f.kind;
  std::string known;
  for (const auto& f : family_table) {
    if (!known.empty()) known += ", ";
    known += f.name;
  }
  throw domain_error("family: unknown family '" + std::string(name) + "' (known: " + known + ")");
}

/// Value and first two derivatives of a scalar function at a point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Everything a solver or audit needs about a reduced CSF at one theta.
/// z_q = p + q * p0 is linear in q, so its derivatives are assembled here.
struct ReducedEvaluation {
  Jet p;
  Jet p0;

  double z(double q) const noexcept { return p.value + q * p0.value; }
  double z_prime(double q) const noexcept { return p.d1 + q * p0.d1; }
  double z_double_prime(double q) const noexcept { return p.d2 + q * p0.d2; }
};

namespace detail {

/// Logistic sigma(x) = 1 / (1 + e^-x), evaluated without overflow.
inline double logistic(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline void check_k(double k) {
  require(std::isfinite(k) && k >= 1.0, "k: must satisfy k >= 1, got " + fmt_num(k));
}

inline void check_r(double r) {
  require(std::isfinite(r) && r > 0.0, "r: must satisfy r > 0, got " + fmt_num(r));
}

/// Reduced CSF in the scale variable phi. `p` is player 1's win probability,
/// `win_or_tie` is p + p0 (the q = 1 eventual-win probability). Both shapes
/// satisfy p(phi) + win_or_tie(-phi) = 1.
class Kernel {
 public:
  enum class Shape { vesperoni, jia };

  Kernel(Shape shape, double k) : shape_(shape), k_(k), log_k_(std::log(k)) {}

  double p(double phi) const noexcept {
    if (shape_ == Shape::jia) return logistic(phi - log_k_);
    return std::pow(logistic(phi), k_);
  }

  double p0(double phi) const noexcept {
    if (shape_ == Shape::jia) {
      if (k_ == 1.0) return 0.0;
      return logistic(phi + log_k_) - logistic(phi - log_k_);
    }
    if (k_ == 1.0) return 0.0;
    return 1.0 - std::pow(logistic(phi), k_) - std::pow(logistic(-phi), k_);
  }

  Jet p_jet(double phi) const noexcept {
    if (shape_ == Shape::jia) return logistic_jet(phi - log_k_);
    // p = s^k with s = sigma(phi), s' = s (1 - s).
    const double s = logistic(phi), sm = logistic(-phi);
    const double sk = std::pow(s, k_);
    return {sk, k_ * sk * sm, k_ * sk * sm * ((k_ - 1.0) * sm + (sm - s))};
  }

  Jet win_or_tie_jet(double phi) const noexcept {
    if (shape_ == Shape::jia) return logistic_jet(phi + log_k_);
    // 1 - (1 - s)^k.
    const double s = logistic(phi), sm = logistic(-phi);
    const double smk = std::pow(sm, k_);
    return {1.0 - smk, k_ * smk * s, k_ * smk * s * ((sm - s) - (k_ - 1.0) * s)};
  }

  double k() const noexcept { return k_; }
  Shape shape() const noexcept { return shape_; }

 private:
  static Jet logistic_jet(double x) noexcept {
    const double s = logistic(x), sm = logistic(-x);
    const double d1 = s * sm;
    return {s, d1, d1 * (sm - s)};
  }

  Shape shape_;
  double k_;
  double log_k_;
};

inline ReducedEvaluation reduce(const Kernel& kern, double phi, double p0_value) {
  const Jet p = kern.p_jet(phi);
  const Jet w = kern.win_or_tie_jet(phi);
  Jet tie{p0_value, w.d1 - p.d1, w.d2 - p.d2};
  if (kern.k() == 1.0) tie = Jet{};
  return {p, tie};
}

}  // namespace detail

/// Ratio-form CSF: p1 = p(x1 / x2), p2 = p(x2 / x1), p0 = p0(x1 / x2).
class RatioCsf {
 public:
  RatioCsf(FamilyKind kind, double r, double k) : kind_(kind), r_(r), kernel_(shape_for(kind), k) {
    detail::check_r(r);
    detail::check_k(k);
  }

  static RatioCsf vesperoni(double r, double k) { return {FamilyKind::vesperoni_ratio, r, k}; }
  static RatioCsf jia(double r, double k) { return {FamilyKind::jia_ratio, r, k}; }

  FamilyKind kind() const noexcept { return kind_; }
  double r() const noexcept { return r_; }
  double k() const noexcept { return kernel_.k(); }
  static constexpr double symmetric_point = 1.0;

  /// Sufficient condition under which the equilibrium characterization
  /// applies: r*k <= 1 (Vesperoni) or r <= 1 (Jia).
  bool precondition_holds() const noexcept {
    return kind_ == FamilyKind::vesperoni_ratio ? r_ * k() <= 1.0 : r_ <= 1.0;
  }

  std::string precondition_text() const {
    return kind_ == FamilyKind::vesperoni_ratio ? "r*k <= 1 (got r*k = " + detail::fmt_num(r_ * k()) + ")"
                                                : "r <= 1 (got r = " + detail::fmt_num(r_) + ")";
  }

  /// Defined on [0, +inf] with p(0) = 0 and p(inf) = 1.
  double p(double theta) const {
    check_nonnegative(theta);
    if (theta == 0.0) return 0.0;
    if (std::isinf(theta)) return 1.0;
    return kernel_.p(phi(theta));
  }

  /// Defined on [0, +inf] with p0(0) = p0(inf) = 0.
  double p0(double theta) const {
    check_nonnegative(theta);
    if (theta == 0.0 || std::isinf(theta)) return 0.0;
    return kernel_.p0(phi(theta));
  }

  ReducedEvaluation evaluate(double theta) const {
    check_positive(theta);
    const double ph = phi(theta);
    const ReducedEvaluation e = detail::reduce(kernel_, ph, kernel_.p0(ph));
    // d phi / d theta = r / theta, d2 phi / d theta2 = -r / theta^2.
    const double a = r_ / theta;
    const double b = -r_ / (theta * theta);
    const auto lift = [&](const Jet& j) { return Jet{j.value, j.d1 * a, j.d2 * a * a + j.d1 * b}; };
    return {lift(e.p), lift(e.p0)};
  }

  double z(double theta, TieRule q) const {
    check_positive(theta);
    return p(theta) + q.q() * p0(theta);
  }
  double z_prime(double theta, TieRule q) const { return evaluate(theta).z_prime(q.q()); }
  double z_double_prime(double theta, TieRule q) const { return evaluate(theta).z_double_prime(q.q()); }
  double p0_prime(double theta) const { return evaluate(theta).p0.d1; }
  double p0_double_prime(double theta) const { return evaluate(theta).p0.d2; }

 private:
  static detail::Kernel::Shape shape_for(FamilyKind kind) {
    if (kind == FamilyKind::vesperoni_ratio) return detail::Kernel::Shape::vesperoni;
    if (kind == FamilyKind::jia_ratio) return detail::Kernel::Shape::jia;
    throw domain_error("family: " + std::string(family_info(kind).name) + " is not a ratio-form family");
  }
  static void check_positive(double theta) {
    if (!(theta > 0.0) || std::isinf(theta))
      throw domain_error("theta: ratio-form functions need 0 < theta < inf, got " + detail::fmt_num(theta));
  }
  static void check_nonnegative(double theta) {
    if (!(theta >= 0.0))
      throw domain_error("theta: ratio-form functions need theta >= 0, got " + detail::fmt_num(theta));
  }
  double phi(double theta) const noexcept { return r_ * std::log(theta); }

  FamilyKind kind_;
  double r_;
  detail::Kernel kernel_;
};

/// Difference-form CSF: p1 = p(x1 - x2), p2 = p(x2 - x1), p0 = p0(x1 - x2).
class DiffCsf {
 public:
  DiffCsf(FamilyKind kind, double k) : kind_(kind), kernel_(shape_for(kind), k) { detail::check_k(k); }

  static DiffCsf vesperoni(double k) { return {FamilyKind::vesperoni_diff, k}; }
  static DiffCsf jia(double k) { return {FamilyKind::jia_diff, k}; }

  FamilyKind kind() const noexcept { return kind_; }
  double k() const noexcept { return kernel_.k(); }
  static constexpr double symmetric_point = 0.0;

  double p(double theta) const {
    check_finite(theta);
    return kernel_.p(theta);
  }
  double p0(double theta) const {
    check_finite(theta);
    return kernel_.p0(theta);
  }

  ReducedEvaluation evaluate(double theta) const {
    check_finite(theta);
    return detail::reduce(kernel_, theta, kernel_.p0(theta));
  }

  double z(double theta, TieRule q) const { return p(theta) + q.q() * p0(theta); }
  double z_prime(double theta, TieRule q) const { return evaluate(theta).z_prime(q.q()); }
  double z_double_prime(double theta, TieRule q) const { return evaluate(theta).z_double_prime(q.q()); }
  double p0_prime(double theta) const { return evaluate(theta).p0.d1; }
  double p0_double_prime(double theta) const { return evaluate(theta).p0.d2; }

 private:
  static detail::Kernel::Shape shape_for(FamilyKind kind) {
    if (kind == FamilyKind::vesperoni_diff) return detail::Kernel::Shape::vesperoni;
    if (kind == FamilyKind::jia_diff) return detail::Kernel::Shape::jia;
    throw domain_error("family: " + std::string(family_info(kind).name) +
                       " is not a difference-form family");
  }
  static void check_finite(double theta) {
    if (!std::isfinite(theta)) throw domain_error("theta: must be finite, got " + detail::fmt_num(theta));
  }

  FamilyKind kind_;
  detail::Kernel kernel_;
};

/// Concave (Blavatskyy) CSF with impact f(x) = x^r, 0 < r <= 1:
///   p_i = f(x_i) / (f(x_1) + f(x_2) + 1),  p0 = 1 / (f(x_1) + f(x_2) + 1).
/// A tie rule q turns into additive head-starts g_1 = f_1 + q and
/// g_2 = f_2 + (1 - q) on the eventual-win probabilities.
class ConcaveCsf {
 public:
  explicit ConcaveCsf(double r) : r_(r) {
    detail::require(admissible_exponent(r), "r: blavatskyy-power needs 0 < r <= 1, got " + detail::fmt_num(r));
  }

  static bool admissible_exponent(double r) noexcept { return std::isfinite(r) && r > 0.0 && r <= 1.0; }

  FamilyKind kind() const noexcept { return FamilyKind::blavatskyy_power; }
  double r() const noexcept { return r_; }

  double impact(double x) const noexcept { return x == 0.0 ? 0.0 : std::pow(x, r_); }

  OutcomeDistribution outcome(double x1, double x2) const {
    const double f1 = impact(x1), f2 = impact(x2);
    const double s = f1 + f2 + 1.0;
    return {f1 / s, f2 / s, 1.0 / s};
  }

  /// Derivatives in the player's own effort (x_own > 0) of the eventual-win
  /// probability P and of the tie probability p0.
  struct OwnPartials {
    Jet win;
    Jet tie;
  };

  OwnPartials own_partials(double x_own, double x_other, double own_share) const {
    if (!(x_own > 0.0 && std::isfinite(x_own)))
      throw domain_error("x: own effort must be positive for derivatives, got " + detail::fmt_num(x_own));
    const double f = std::pow(x_own, r_);
    const double f1 = r_ * std::pow(x_own, r_ - 1.0);
    const double f2 = r_ * (r_ - 1.0) * std::pow(x_own, r_ - 2.0);
    const double g_other = impact(x_other) + (1.0 - own_share);
    const double s = f + impact(x_other) + 1.0;
    const double s2 = s * s, s3 = s2 * s;
    Jet tie{1.0 / s, -f1 / s2, -f2 / s2 + 2.0 * f1 * f1 / s3};
    Jet win{(f + own_share) / s, f1 * g_other / s2, g_other * (f2 / s2 - 2.0 * f1 * f1 / s3)};
    return {win, tie};
  }

 private:
  double r_;
};

using Csf = std::variant<RatioCsf, DiffCsf, ConcaveCsf>;

/// Registry constructor. Parameters the family does not use are ignored.
inline Csf make_family(FamilyKind kind, double r, double k) {
  switch (kind) {
    case FamilyKind::vesperoni_ratio:
    case FamilyKind::jia_ratio:
      return RatioCsf(kind, r, k);
    case FamilyKind::vesperoni_diff:
    case FamilyKind::jia_diff:
      return DiffCsf(kind, k);
    case FamilyKind::blavatskyy_power:
      return ConcaveCsf(r);
  }
  throw std::logic_error("unhandled family kind");
}

inline FamilyKind kind_of(const Csf& csf) {
  return std::visit([](const auto& c) { return c.kind(); }, csf);
}

inline FamilyClass class_of(const Csf& csf) { return family_info(kind_of(csf)).cls; }

}  // namespace tiecontest

#endif  // TIECONTEST_FAMILIES_HPP
