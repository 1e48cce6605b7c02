#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "support.hpp"
#include "tiecontest/designer.hpp"

using namespace tiecontest;

namespace {

const ContestSpec jia21(RatioCsf::jia(1.0, 2.0), 2.0, 1.0, 0.5);

}  // namespace

TEST(Sweep, JiaRatioIsLinearAndDecreasing) {
  const EffortCurve c = sweep(jia21, 11);
  ASSERT_EQ(c.samples.size(), 11u);
  for (const auto& s : c.samples) EXPECT_NEAR(s.R, 0.75 - 0.27 * s.q, 1e-12);
  EXPECT_NEAR(c.samples.front().R, 0.75, 1e-14);
  EXPECT_NEAR(c.samples.back().R, 0.48, 1e-14);
  EXPECT_TRUE(c.shape.linear.holds);
  EXPECT_TRUE(c.shape.monotone_decreasing.holds);
  EXPECT_FALSE(c.shape.constant.holds);
  EXPECT_TRUE(c.warnings.empty());
}

TEST(Sweep, IgnoresTheSpecTieRule) {
  const EffortCurve a = sweep(jia21, 5);
  const EffortCurve b = sweep(jia21.with_tie(TieRule(0.9)), 5);
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].R, b.samples[i].R);
}

TEST(Sweep, NeedsTwoPoints) { EXPECT_THROW(sweep(jia21, 1), domain_error); }

TEST(Sweep, SymmetricValuesGiveConstantCurves) {
  for (const auto& csf : tiecontest::testing::ratio_builtins())
    EXPECT_TRUE(sweep(ContestSpec(csf, 1.0, 1.0, 0.5), 21).shape.constant.holds);
  for (const auto& csf : tiecontest::testing::diff_builtins()) {
    const EffortCurve c = sweep(ContestSpec(csf, 1.0, 1.0, 0.5), 21);
    EXPECT_LE(c.shape.constant.worst_violation, 1e-8);
  }
}

TEST(Sweep, DifferenceFamilyDecreases) {
  const ContestSpec spec(DiffCsf::vesperoni(2.0), 1.2, 1.0, 0.5);
  ASSERT_TRUE(audit_diff(DiffCsf::vesperoni(2.0), 1.2).all_pass());
  const EffortCurve c = sweep(spec, 21);
  EXPECT_TRUE(c.shape.monotone_decreasing.holds);
  EXPECT_GT(c.samples.front().R - c.samples.back().R, 1e-6);
}

TEST(Sweep, MonotoneDecreaseWithStrictDrop) {
  for (const auto& csf : tiecontest::testing::ratio_builtins()) {
    if (!csf.precondition_holds()) continue;
    const EffortCurve c = sweep(ContestSpec(csf, 2.0, 1.0, 0.5), 21);
    EXPECT_TRUE(c.shape.monotone_decreasing.holds);
    if (std::abs(csf.p0_prime(2.0)) > 1e-9) { EXPECT_GT(c.samples.front().R, c.samples.back().R); }
  }
  for (const auto& csf : tiecontest::testing::diff_builtins()) {
    const EffortCurve c = sweep(ContestSpec(csf, 1.2, 1.0, 0.5), 21);
    EXPECT_TRUE(c.shape.monotone_decreasing.holds);
    if (csf.k() > 1.0) { EXPECT_GT(c.samples.front().R, c.samples.back().R); }
  }
}

TEST(Sweep, RatioLinearityOnRandomDraws) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double k = 1.0 + 4.0 * u(rng);
    const double r = 0.05 + 0.95 * u(rng);
    const RatioCsf csf = i % 2 ? RatioCsf::jia(r, k) : RatioCsf::vesperoni(r / k, k);
    const double v1 = 0.1 + 10.0 * u(rng);
    const ContestSpec spec(csf, v1, v1 * u(rng) + 1e-3, 0.5);
    const double r0 = total_effort(spec, TieRule(0.0)), r1 = total_effort(spec, TieRule(1.0));
    EXPECT_LE(std::abs(total_effort(spec, TieRule(0.5)) - 0.5 * (r0 + r1)), 1e-10);
  }
}

TEST(Certify, DetectsShapes) {
  std::vector<CurveSample> convex, concave;
  for (double q : numerics::linspace(0.0, 1.0, 11)) {
    convex.push_back({q, 0.0, 0.0, (q - 0.5) * (q - 0.5)});
    concave.push_back({q, 0.0, 0.0, -(q - 0.5) * (q - 0.5)});
  }
  EXPECT_TRUE(certify(convex).convex.holds);
  EXPECT_FALSE(certify(convex).linear.holds);
  EXPECT_FALSE(certify(convex).monotone_decreasing.holds);
  EXPECT_FALSE(certify(concave).convex.holds);
}

TEST(OptimalQ, RatioFavoursTheWeakPlayer) {
  const OptimalRule best = optimal_q(jia21);
  EXPECT_EQ(best.q.q(), 0.0);
  EXPECT_NEAR(best.R, 0.75, 1e-14);
  EXPECT_EQ(best.rationale, Rationale::theorem);
}

TEST(OptimalQ, SymmetricIsIndifferent) {
  for (const ContestSpec& spec : {ContestSpec(RatioCsf::jia(1.0, 2.0), 1.0, 1.0, 0.5),
                                  ContestSpec(DiffCsf::vesperoni(2.0), 1.0, 1.0, 0.5)}) {
    const OptimalRule best = optimal_q(spec);
    EXPECT_EQ(best.rationale, Rationale::indifferent);
    EXPECT_EQ(best.q.q(), 0.0);
    EXPECT_LE(sweep(spec, 11).shape.constant.worst_violation, 1e-8);
  }
}

TEST(OptimalQ, ConcaveFavoursOnePlayer) {
  const ContestSpec spec(ConcaveCsf(0.5), 4.0, 4.0, 0.5);
  const OptimalRule best = optimal_q(spec);
  EXPECT_TRUE(best.q.q() == 0.0 || best.q.q() == 1.0);
  EXPECT_NEAR(best.R, 5.0 / 9.0, 1e-8);
  EXPECT_GT(best.R, total_effort(spec, TieRule(0.5)));
  EXPECT_EQ(best.rationale, Rationale::numeric);
}

TEST(Expected, CoinMatchesFairRuleForRatioFamilies) {
  for (const auto& csf : tiecontest::testing::ratio_builtins()) {
    const ContestSpec spec(csf, 2.0, 1.0, 0.5);
    EXPECT_NEAR(expected_effort(spec, RandomTieRule::coin()), total_effort(spec, TieRule(0.5)), 1e-10);
  }
}

TEST(Expected, PointMassIsDeterministic) {
  for (double q : {0.0, 0.4, 1.0})
    EXPECT_EQ(expected_effort(jia21, RandomTieRule::point_mass(TieRule(q))), total_effort(jia21, TieRule(q)));
}

TEST(Convexity, VesperoniSmallValueHolds) {
  const ConvexityCheck c = convexity_precondition(DiffCsf::vesperoni(2.0), 0.5);
  EXPECT_TRUE(c.holds);
  EXPECT_FALSE(c.degenerate);
  EXPECT_LT(c.worst, 0.0);
  EXPECT_DOUBLE_EQ(c.theta_max, 1.0);
}

TEST(Convexity, TielessFamilyIsDegenerate) {
  const ConvexityCheck c = convexity_precondition(DiffCsf::jia(1.0), 0.5);
  EXPECT_FALSE(c.holds);
  EXPECT_TRUE(c.degenerate);
}

TEST(Convexity, LargeValueReportsSignChange) {
  const ConvexityCheck c = convexity_precondition(DiffCsf::vesperoni(2.0), 5.0);
  EXPECT_FALSE(c.holds);
  ASSERT_TRUE(c.sign_change_theta.has_value());
  EXPECT_NEAR(*c.sign_change_theta, 1.317, 0.01);
  EXPECT_GE(DiffCsf::vesperoni(2.0).p0_double_prime(*c.sign_change_theta), -1e-12);
}

TEST(Convexity, TransfersToCurveAndCoin) {
  for (const DiffCsf& csf : tiecontest::testing::diff_builtins()) {
    for (double v1 : {0.3, 0.5, 0.8, 2.0}) {
      if (!convexity_precondition(csf, v1).holds) continue;
      const ContestSpec spec(csf, v1, 0.8 * v1, 0.5);
      EXPECT_TRUE(sweep(spec, 21).shape.convex.holds);
      EXPECT_GE(expected_effort(spec, RandomTieRule::coin()), total_effort(spec, TieRule(0.5)));
    }
  }
}

TEST(Exploration, ConcaveSymmetricSweepsAreRecordedOnly) {
  // Unproven U-shape with minimum at q = 0.5: recorded, never asserted.
  for (double r : {0.25, 0.5, 0.75}) {
    for (double v : {2.0, 4.0, 10.0}) {
      const EffortCurve c = sweep(ContestSpec(ConcaveCsf(r), v, v, 0.5), 21);
      std::size_t arg_min = 0;
      for (std::size_t i = 1; i < c.samples.size(); ++i)
        if (c.samples[i].R < c.samples[arg_min].R) arg_min = i;
      char key[64];
      std::snprintf(key, sizeof key, "r%.2f_V%.0f", r, v);
      ::testing::Test::RecordProperty(std::string(key) + "_convex", c.shape.convex.holds ? "yes" : "no");
      ::testing::Test::RecordProperty(std::string(key) + "_argmin_q", std::to_string(c.samples[arg_min].q));
    }
  }
}
