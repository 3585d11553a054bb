#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mrsc/expr.hpp"
#include "mrsc/interpreter.hpp"
#include "mrsc/residualizer.hpp"

namespace mrsc {

struct CheckOptions {
  std::size_t trials = 100;
  std::size_t bound = 8;
  std::uint64_t fuel = kDefaultFuel;
  std::uint64_t seed = 0;
};

struct CheckReport {
  std::size_t trials = 0;
  std::size_t compared = 0;      // original produced a value
  std::size_t inconclusive = 0;  // original timed out or got stuck
  std::size_t mismatches = 0;    // residual produced a different value
  std::size_t residual_stuck = 0;
  std::size_t residual_timeout = 0;
  std::optional<std::string> counterexample;

  bool passed() const { return mismatches == 0 && residual_stuck == 0 && residual_timeout == 0; }
};

/// Evaluates the original root and the residual root on random closed
/// instantiations of the root's free variables and compares the results.
CheckReport check_equivalence(const Program& original, const Expr& root, const ResidualProgram& residual,
                              const CheckOptions& options = {});

std::string to_string(const CheckReport& r);

}  // namespace mrsc
