#include "mrsc/check.hpp"

#include <random>

#include "mrsc/syntax.hpp"

namespace mrsc {
namespace {

std::string describe(const std::map<std::string, Expr>& input) {
  std::string out;
  for (const auto& [var, value] : input) {
    if (!out.empty()) out += ", ";
    out += var + " = " + to_string(value);
  }
  return out.empty() ? "(no inputs)" : out;
}

Subst to_subst(const std::map<std::string, Expr>& input) { return Subst(input.begin(), input.end()); }

}  // namespace

CheckReport check_equivalence(const Program& original, const Expr& root, const ResidualProgram& residual,
                              const CheckOptions& options) {
  CheckReport report;
  if (options.trials == 0) return report;
  const InputGenerator gen(original, root);
  std::mt19937_64 rng(options.seed);
  for (std::size_t t = 0; t < options.trials; ++t) {
    ++report.trials;
    const auto input = gen.sample(rng, options.bound);
    const Subst s = to_subst(input);
    const EvalResult want = eval(original, substitute(root, s), options.fuel);
    if (want.status != EvalStatus::Value) {
      ++report.inconclusive;
      continue;
    }
    ++report.compared;
    const EvalResult got = eval(residual.program, substitute(residual.root, s), options.fuel);
    std::string problem;
    if (got.status == EvalStatus::Stuck) {
      ++report.residual_stuck;
      problem = "residual stuck: " + got.message;
    } else if (got.status == EvalStatus::Timeout) {
      ++report.residual_timeout;
      problem = "residual timed out";
    } else if (!equal(got.value, want.value)) {
      ++report.mismatches;
      problem = "original gives " + to_string(want.value) + ", residual gives " + to_string(got.value);
    }
    if (!problem.empty() && !report.counterexample) report.counterexample = describe(input) + ": " + problem;
  }
  return report;
}

std::string to_string(const CheckReport& r) {
  std::string out = r.passed() ? "PASS" : "FAIL";
  out += ": " + std::to_string(r.trials) + " trial(s), " + std::to_string(r.compared) + " compared, " +
         std::to_string(r.inconclusive) + " inconclusive, " + std::to_string(r.mismatches) + " mismatch(es), " +
         std::to_string(r.residual_stuck) + " residual stuck, " + std::to_string(r.residual_timeout) +
         " residual timeout(s)";
  if (r.trials == 0) out += "\nwarning: no trials run, the check is vacuous";
  if (r.counterexample) out += "\ncounterexample: " + *r.counterexample;
  return out;
}

}  // namespace mrsc
