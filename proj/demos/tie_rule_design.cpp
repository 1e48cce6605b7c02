// Walks through a design question: how should a contest organizer break
// ties to maximize total effort?

#include <cstdio>

#include "tiecontest/audit.hpp"
#include "tiecontest/designer.hpp"
#include "tiecontest/equilibrium.hpp"
#include "tiecontest/oracle.hpp"

using namespace tiecontest;

int main() {
  // Jia ratio contest, strong player values the prize twice as much.
  const ContestSpec jia(RatioCsf::jia(1.0, 2.0), 2.0, 1.0, 0.5);
  const AuditReport audit = audit_ratio(std::get<RatioCsf>(jia.csf()));
  std::printf("audit %s: %s\n", audit.family.c_str(), audit.all_pass() ? "pass" : "fail");

  const Equilibrium eq = solve(jia);
  std::printf("q = 0.5: x1 = %.6f, x2 = %.6f (%s)\n", eq.x1, eq.x2, to_string(eq.method));

  const VerificationReport check = verify(jia, eq, GridSpec::for_contest(jia, 1001));
  std::printf("grid check: loss %.2e / %.2e within band: %s\n", check.payoff_loss[0], check.payoff_loss[1],
              check.pass ? "yes" : "no");

  const EffortCurve curve = sweep(jia, 5);
  for (const auto& s : curve.samples) std::printf("  q = %.2f  R = %.6f\n", s.q, s.R);
  const OptimalRule best = optimal_q(jia);
  std::printf("best deterministic rule: q = %g (%s)\n", best.q.q(), to_string(best.rationale));

  // Concave contest with equal valuations: the fair rule is not optimal.
  const ContestSpec blava(ConcaveCsf(0.5), 4.0, 4.0, 0.5);
  std::printf("blavatskyy V = 4: R(0) = %.6f, R(0.5) = %.6f\n", total_effort(blava, TieRule(0.0)),
              total_effort(blava, TieRule(0.5)));

  // Random rules: an unbiased coin equals q = 0.5 for ratio contests.
  std::printf("jia coin: %.6f vs q = 0.5: %.6f\n", expected_effort(jia, RandomTieRule::coin()),
              total_effort(jia, TieRule(0.5)));
  return 0;
}
