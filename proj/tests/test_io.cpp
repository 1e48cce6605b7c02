#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "tiecontest/io.hpp"

using namespace tiecontest;

namespace {

std::string error_of(const std::string& text) {
  try {
    io::spec_from_string(text);
  } catch (const domain_error& e) {
    return e.what();
  }
  return "";
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

TEST(SpecJson, ParsesFullDocument) {
  const ContestSpec spec = io::spec_from_string(
      R"({"family": "jia-ratio", "params": {"r": 1, "k": 2}, "v1": 2, "v2": 1, "q": 0.25, "cost": "linear"})");
  EXPECT_EQ(spec.kind(), FamilyKind::jia_ratio);
  EXPECT_EQ(spec.values().v1(), 2.0);
  EXPECT_EQ(spec.q(), 0.25);
  EXPECT_EQ(std::get<RatioCsf>(spec.csf()).k(), 2.0);
}

TEST(SpecJson, OmittedTieRuleIsFair) {
  const ContestSpec spec = io::spec_from_string(R"({"family": "jia-diff", "params": {"k": 1}, "v1": 1, "v2": 1})");
  EXPECT_EQ(spec.q(), 0.5);
  EXPECT_EQ(spec.cost_kind(), CostKind::quadratic_half);
}

TEST(SpecJson, RoundTripKeepsUserLabels) {
  const ContestSpec spec(RatioCsf::vesperoni(0.5, 2.0), 1.0, 3.0, 0.1);
  const io::Json j = io::spec_to_json(spec);
  EXPECT_EQ(j["v1"].get<double>(), 1.0);
  EXPECT_EQ(j["v2"].get<double>(), 3.0);
  EXPECT_DOUBLE_EQ(j["q"].get<double>(), 0.1);
  const ContestSpec back = io::spec_from_json(j);
  EXPECT_EQ(io::dump(io::spec_to_json(back)), io::dump(j));
}

TEST(SpecJson, ParamsHoldOnlyFamilyParameters) {
  EXPECT_FALSE(io::spec_to_json(ContestSpec(DiffCsf::jia(2.0), 1.0, 1.0, 0.5))["params"].contains("r"));
  EXPECT_FALSE(io::spec_to_json(ContestSpec(ConcaveCsf(0.5), 1.0, 1.0, 0.5))["params"].contains("k"));
}

TEST(SpecJson, ErrorsNameTheField) {
  EXPECT_TRUE(starts_with(error_of("{not json"), "spec:"));
  EXPECT_TRUE(starts_with(error_of("[1, 2]"), "spec:"));
  EXPECT_TRUE(starts_with(error_of(R"({"v1": 1, "v2": 1})"), "family:"));
  EXPECT_TRUE(starts_with(error_of(R"({"family": "nope", "v1": 1, "v2": 1})"), "family:"));
  EXPECT_TRUE(starts_with(error_of(R"({"family": "jia-diff", "v1": 1, "v2": 1})"), "params:"));
  EXPECT_TRUE(starts_with(error_of(R"({"family": "jia-diff", "params": {}, "v1": 1, "v2": 1})"), "params.k:"));
  EXPECT_TRUE(starts_with(error_of(R"({"family": "jia-diff", "params": {"k": "2"}, "v1": 1, "v2": 1})"), "params.k:"));
  EXPECT_TRUE(starts_with(error_of(R"({"family": "jia-diff", "params": {"k": 2}, "v2": 1})"), "v1:"));
  EXPECT_TRUE(starts_with(error_of(R"({"family": "jia-diff", "params": {"k": 2}, "v1": 1, "v2": 1, "cost": "x"})"),
                          "cost:"));
  EXPECT_TRUE(starts_with(error_of(R"({"family": "jia-diff", "params": {"k": 0.5}, "v1": 1, "v2": 1})"), "k:"));
  EXPECT_TRUE(starts_with(error_of(R"({"family": "jia-diff", "params": {"k": 2}, "v1": -1, "v2": 1})"), "v1"));
}

TEST(Dump, SeventeenSignificantDigits) {
  io::Json j;
  j["a"] = 0.1;
  j["b"] = 1.0;
  j["c"] = std::numeric_limits<double>::infinity();
  j["d"] = std::vector<double>{0.5, 2.0 / 3.0};
  EXPECT_EQ(io::dump(j), "{\n  \"a\": 0.10000000000000001,\n  \"b\": 1,\n  \"c\": null,\n"
                         "  \"d\": [0.5, 0.66666666666666663]\n}\n");
}

TEST(Dump, ValuesSurviveParsing) {
  const double x = 0.41000000000000003;
  io::Json j;
  j["x"] = x;
  EXPECT_EQ(io::Json::parse(io::dump(j))["x"].get<double>(), x);
}

TEST(Csv, HeaderAndRows) {
  EffortCurve c;
  c.samples = {{0.0, 0.5, 0.25, 0.75}, {1.0, 0.32, 0.16, 0.48}};
  EXPECT_EQ(io::to_csv(c), "q,x1,x2,R\n0,0.5,0.25,0.75\n1,0.32000000000000001,0.16,0.47999999999999998\n");
}

TEST(Reports, EquilibriumFields) {
  const io::Json j = io::to_json(solve(ContestSpec(RatioCsf::jia(1.0, 2.0), 2.0, 1.0, 0.5)));
  for (const char* key : {"x1", "x2", "beta", "total", "method", "residuals", "corner_flags", "warnings"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["method"], "closed_form");
}

TEST(Reports, AuditFields) {
  const io::Json j = io::to_json(audit_diff(DiffCsf::jia(1.0), 20.0));
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_EQ(j["conditions"][1]["id"], "z_double_prime_bound");
  EXPECT_TRUE(j.contains("disclaimer"));
}
