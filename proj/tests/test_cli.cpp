#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using tiecontest::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "tiecontest_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::vector<std::string> jia_flags{"--family", "jia-ratio", "--r", "1", "--k", "2", "--v1", "2", "--v2", "1"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST(Cli, SolveJiaExample) {
  const Result r = call(with(with({"solve"}, jia_flags), {"--q", "0.5"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = tiecontest::io::Json::parse(r.out);
  EXPECT_NEAR(j["equilibrium"]["x1"].get<double>(), 0.41, 1e-14);
  EXPECT_NEAR(j["equilibrium"]["x2"].get<double>(), 0.205, 1e-14);
  EXPECT_EQ(j["equilibrium"]["method"], "closed_form");
  EXPECT_TRUE(j["equilibrium"].contains("residuals"));
  EXPECT_TRUE(j["equilibrium"].contains("corner_flags"));
}

TEST(Cli, SweepCsvExample) {
  const Result r = call(with(with({"sweep"}, jia_flags), {"--points", "11", "--format", "csv"}));
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "q,x1,x2,R");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0], "0,0.5,0.25,0.75");
}

TEST(Cli, SweepDefaultsToCsv) {
  const Result r = call(with(with({"sweep"}, jia_flags), {"--points", "3"}));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("q,x1,x2,R\n", 0), 0u);
  const Result j = call(with(with({"sweep"}, jia_flags), {"--points", "3", "--format", "json"}));
  EXPECT_TRUE(tiecontest::io::Json::accept(j.out));
}

TEST(Cli, SweepReportsInUserLabels) {
  const Result a = call({"sweep", "--family", "jia-ratio", "--r", "1", "--k", "2", "--v1", "1", "--v2", "2",
                         "--points", "3"});
  ASSERT_EQ(a.code, 0);
  // Player 1 is now the weak one, so q = 1 (ties to the weak player) maximizes effort.
  EXPECT_NE(a.out.find("\n1,0.25,0.5,0.75\n"), std::string::npos) << a.out;
}

TEST(Cli, AuditExampleFails) {
  const Result r = call({"audit", "--family", "jia-diff", "--k", "1", "--v1", "20"});
  EXPECT_EQ(r.code, 1);
  const auto j = tiecontest::io::Json::parse(r.out);
  EXPECT_FALSE(j["pass"].get<bool>());
  bool bound_failed = false;
  for (const auto& c : j["conditions"])
    if (c["id"] == "z_double_prime_bound") bound_failed = !c["pass"].get<bool>();
  EXPECT_TRUE(bound_failed);
}

TEST(Cli, AuditPassesAndAcceptsGridOverrides) {
  EXPECT_EQ(call({"audit", "--family", "jia-ratio", "--r", "1", "--k", "2"}).code, 0);
  const Result r = call({"audit", "--family", "jia-diff", "--k", "2", "--v1", "1", "--theta-min", "-5",
                         "--theta-max", "5", "--theta-points", "101"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(tiecontest::io::Json::parse(r.out)["grid"]["theta_points"].get<int>(), 101);
  EXPECT_EQ(call({"audit", "--family", "blavatskyy-power", "--r", "0.5"}).code, 0);
}

TEST(Cli, OptimizeAndExpected) {
  const Result o = call(with({"optimize"}, jia_flags));
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = tiecontest::io::Json::parse(o.out);
  EXPECT_EQ(j["q"].get<double>(), 0.0);
  EXPECT_EQ(j["rationale"], "theorem");
  const Result e = call(with(with({"expected"}, jia_flags), {"--rule", "0:0.5,1:0.5"}));
  ASSERT_EQ(e.code, 0) << e.err;
  const auto k = tiecontest::io::Json::parse(e.out);
  EXPECT_NEAR(k["expected_effort"].get<double>(), 0.615, 1e-12);
  EXPECT_TRUE(k["unbiased"].get<bool>());
}

TEST(Cli, VerifyExitCodes) {
  EXPECT_EQ(call(with(with({"verify"}, jia_flags), {"--steps", "201"})).code, 0);
  // Tullock with r = 2 violates the equilibrium precondition; the forced first-order
  // profile is not an equilibrium because the weak player gains by dropping out.
  EXPECT_EQ(call({"verify", "--family", "jia-ratio", "--r", "2", "--k", "1", "--v1", "2", "--v2", "1", "--force",
                  "--steps", "401"})
                .code,
            3);
}

TEST(Cli, InputErrorsNameTheField) {
  const Result unknown = call({"solve", "--family", "logit", "--v1", "1", "--v2", "1"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("family:"), std::string::npos);
  const Result range = call({"solve", "--family", "jia-ratio", "--r", "1", "--k", "0.5", "--v1", "1", "--v2", "1"});
  EXPECT_EQ(range.code, 1);
  EXPECT_NE(range.err.find("k:"), std::string::npos);
  const Result missing = call({"solve", "--family", "jia-diff", "--k", "1", "--v1", "1"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("v2:"), std::string::npos);
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << "{oops";
  const Result malformed = call({"solve", "--spec", bad.string()});
  EXPECT_EQ(malformed.code, 1);
  EXPECT_NE(malformed.err.find("spec:"), std::string::npos);
}

TEST(Cli, ForceOverridesPrecondition) {
  const std::vector<std::string> steep{"solve", "--family", "jia-ratio", "--r", "1.5", "--k", "2", "--v1", "2",
                                       "--v2", "1"};
  EXPECT_EQ(call(steep).code, 1);
  EXPECT_EQ(call(with(steep, {"--force"})).code, 0);
}

TEST(Cli, RunConfigInvariants) {
  const auto file = scratch("spec_only.json");
  std::ofstream(file) << R"({"family": "jia-ratio", "params": {"r": 1, "k": 2}, "v1": 2, "v2": 1})";
  EXPECT_EQ(call({"solve", "--spec", file.string(), "--v1", "3"}).code, 1);
  EXPECT_EQ(call(with(with({"solve"}, jia_flags), {"--format", "csv"})).code, 1);
  EXPECT_EQ(call({"solve"}).code, 1);
  EXPECT_EQ(call({}).code, 1);
  EXPECT_EQ(call({"frobnicate"}).code, 1);
}

TEST(Cli, EmitSpecRoundTripIsByteIdentical) {
  const auto spec_file = scratch("emitted.json");
  for (const std::string cmd : {"solve", "sweep", "verify"}) {
    std::vector<std::string> args{cmd, "--family", "vesperoni-diff", "--k", "2", "--v1", "1.2", "--v2", "0.7",
                                  "--q", "0.3", "--emit-spec", spec_file.string()};
    if (cmd == "verify") args.insert(args.end(), {"--steps", "101"});
    const Result first = call(args);
    ASSERT_EQ(first.code, 0) << first.err;
    std::vector<std::string> again{cmd, "--spec", spec_file.string()};
    if (cmd == "verify") again.insert(again.end(), {"--steps", "101"});
    const Result second = call(again);
    ASSERT_EQ(second.code, 0) << second.err;
    EXPECT_EQ(first.out, second.out) << cmd;
  }
}

TEST(Cli, OutputFile) {
  const auto out = scratch("out.json");
  const Result r = call(with(with({"solve"}, jia_flags), {"--out", out.string()}));
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(call(with({"solve"}, jia_flags)).out, slurp(out));
}

TEST(Cli, HelpListsFamiliesWithConstraints) {
  const Result r = call({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const auto& f : tiecontest::family_table) {
    EXPECT_NE(r.out.find(std::string(f.name)), std::string::npos) << f.name;
    EXPECT_NE(r.out.find(std::string(f.constraints)), std::string::npos) << f.name;
  }
}

TEST(Cli, DeterministicOutput) {
  const auto args = with(with({"sweep"}, jia_flags), {"--points", "7", "--format", "json"});
  EXPECT_EQ(call(args).out, call(args).out);
}
