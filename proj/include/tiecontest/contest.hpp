#ifndef TIECONTEST_CONTEST_HPP
#define TIECONTEST_CONTEST_HPP

#include <limits>
#include <optional>
#include <utility>

#include "tiecontest/core.hpp"
#include "tiecontest/families.hpp"

namespace tiecontest {

inline CostKind natural_cost(FamilyClass cls) noexcept {
  return cls == FamilyClass::difference ? CostKind::quadratic_half : CostKind::linear;
}

/// Full game description. Players are stored in normalized labels (V1 >= V2);
/// when the caller's valuations were swapped the tie rule is mirrored so that
/// ties still go to the same physical player.
class ContestSpec {
 public:
  ContestSpec(Csf csf, double v1, double v2, double q, std::optional<CostKind> cost = std::nullopt)
      : csf_(std::move(csf)),
        values_(v1, v2),
        tie_(values_.swapped() ? TieRule(q).mirrored() : TieRule(q)),
        cost_(cost.value_or(natural_cost(class_of(csf_)))) {}

  const Csf& csf() const noexcept { return csf_; }
  FamilyKind kind() const { return kind_of(csf_); }
  FamilyClass family_class() const { return class_of(csf_); }
  const Valuations& values() const noexcept { return values_; }
  TieRule tie() const noexcept { return tie_; }
  double q() const noexcept { return tie_.q(); }
  CostKind cost_kind() const noexcept { return cost_; }
  bool swapped() const noexcept { return values_.swapped(); }

  /// Same game with a different tie rule, given in normalized labels.
  ContestSpec with_tie(TieRule q) const {
    ContestSpec c = *this;
    c.tie_ = q;
    return c;
  }

  /// Parameters as the caller supplied them (original labels).
  double user_v1() const noexcept { return swapped() ? values_.v2() : values_.v1(); }
  double user_v2() const noexcept { return swapped() ? values_.v1() : values_.v2(); }
  double user_q() const noexcept { return swapped() ? 1.0 - tie_.q() : tie_.q(); }

 private:
  Csf csf_;
  Valuations values_;
  TieRule tie_;
  CostKind cost_;
};

/// True when a ratio-form family is evaluated at (0, 0), where the reduced
/// variable x1 / x2 is undefined and the theta = 1 convention applies.
inline bool uses_zero_convention(const Csf& csf, const EffortProfile& x) {
  return class_of(csf) == FamilyClass::ratio && x.x1 == 0.0 && x.x2 == 0.0;
}

inline OutcomeDistribution outcome_distribution(const Csf& csf, const EffortProfile& x) {
  if (const auto* c = std::get_if<RatioCsf>(&csf)) {
    if (x.x1 == 0.0 && x.x2 == 0.0) {
      const double p = c->p(1.0);
      return {p, p, c->p0(1.0)};
    }
    const double inf = std::numeric_limits<double>::infinity();
    const double theta = x.x2 == 0.0 ? inf : x.x1 / x.x2;
    const double inv = x.x1 == 0.0 ? inf : x.x2 / x.x1;
    return {c->p(theta), c->p(inv), c->p0(theta)};
  }
  if (const auto* c = std::get_if<DiffCsf>(&csf)) {
    const double theta = x.x1 - x.x2;
    return {c->p(theta), c->p(-theta), c->p0(theta)};
  }
  return std::get<ConcaveCsf>(csf).outcome(x.x1, x.x2);
}

/// Eventual win probabilities after tie-breaking: P1 = p1 + q p0, P2 = p2 + (1 - q) p0.
inline std::pair<double, double> eventual_win_prob(const ContestSpec& spec, const EffortProfile& x) {
  const OutcomeDistribution o = outcome_distribution(spec.csf(), x);
  const double q = spec.q();
  return {o.p1 + q * o.p0, o.p2 + (1.0 - q) * o.p0};
}

inline double payoff(const ContestSpec& spec, const EffortProfile& x, PlayerId player) {
  const OutcomeDistribution o = outcome_distribution(spec.csf(), x);
  const double win = o.win(player) + spec.tie().share(player) * o.p0;
  return spec.values().value(player) * win - cost(spec.cost_kind(), x.effort(player));
}

}  // namespace tiecontest

#endif  // TIECONTEST_CONTEST_HPP
