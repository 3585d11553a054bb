#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mrsc/expr.hpp"

namespace mrsc {

enum class EvalStatus { Value, Timeout, Stuck };

const char* to_string(EvalStatus s);

struct EvalResult {
  EvalStatus status;
  Expr value;              // constructor term when status == Value
  std::uint64_t unfolds;   // function-call reductions performed
  std::string message;     // why evaluation got stuck
};

constexpr std::uint64_t kDefaultFuel = 100000;

/// Call-by-name evaluation of a closed expression to constructor normal
/// form. Every function-call reduction consumes one unit of fuel.
EvalResult eval(const Program& program, const Expr& e, std::uint64_t fuel = kDefaultFuel);

/// Constructor name and arity.
struct CtorSig {
  std::string name;
  std::size_t arity;
};

/// Random constructor term over `ctors` with at most `bound` nodes; every
/// argument position may hold any constructor. Needs a nullary constructor.
Expr random_value(const std::vector<CtorSig>& ctors, std::size_t bound, std::mt19937_64& rng);

/// Monomorphic sorts of a program plus root expression, found by
/// unification. Used to draw well-sorted random inputs for the root's free
/// variables.
class InputGenerator {
 public:
  /// Name of the nullary constructor added to sorts that have none.
  static constexpr const char* kFallbackCtor = "Z";

  InputGenerator(const Program& program, const Expr& root);

  const std::vector<std::string>& inputs() const { return inputs_; }

  /// One closed value per root variable, each with at most `bound` nodes.
  std::map<std::string, Expr> sample(std::mt19937_64& rng, std::size_t bound) const;

  /// Constructors (with arities) of the sort of root variable `var`.
  std::vector<CtorSig> ctors_of_input(const std::string& var) const;

 private:
  struct SortCtor {
    std::string name;
    std::vector<std::size_t> args;  // sort ids
  };

  Expr draw(std::size_t sort, std::size_t budget, std::mt19937_64& rng) const;

  std::vector<std::string> inputs_;
  std::vector<std::size_t> input_sorts_;
  std::vector<std::vector<SortCtor>> ctors_;  // by sort id
  std::vector<std::size_t> min_size_;         // by sort id
};

/// Uniform index in [0, n) from a 64-bit engine; identical on every
/// platform, unlike the standard distributions.
std::size_t pick(std::mt19937_64& rng, std::size_t n);

}  // namespace mrsc
