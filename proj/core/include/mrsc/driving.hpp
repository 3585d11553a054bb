#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mrsc/expr.hpp"

namespace mrsc {

struct Branch {
  Pattern pattern;
  Expr body;

  friend bool operator==(const Branch& a, const Branch& b) {
    return a.pattern == b.pattern && equal(a.body, b.body);
  }
};

struct Binding {
  std::string var;
  Expr expr;
};

/// Step payloads shared by single-step and multi-result driving.
namespace step {

struct Leaf {
  Expr var;
};
struct Con {
  std::string ctor;
  std::vector<Expr> args;
};
struct Unfold {
  Expr body;
};
struct Cases {
  std::string var;
  std::vector<Branch> branches;
};
struct Let {
  std::vector<Binding> bindings;  // source-argument order
  Expr body;
};
struct None {};

}  // namespace step

using DriveStep = std::variant<step::None, step::Con, step::Unfold, step::Cases>;
using MultiStep = std::variant<step::Leaf, step::Con, step::Unfold, step::Cases, step::Let>;

bool equal(const MultiStep& a, const MultiStep& b);
std::string to_string(const MultiStep& s);
const char* kind_name(const MultiStep& s);

inline bool is_let(const MultiStep& s) { return std::holds_alternative<step::Let>(s); }
inline bool is_cases(const MultiStep& s) { return std::holds_alternative<step::Cases>(s); }

/// An expression with one hole, `g(•, e1, ..., en)` possibly nested.
/// Positive information learnt inside the hole is propagated into the
/// surrounding arguments through `refine`.
class Context {
 public:
  Context();
  Expr fill(const Expr& e) const;
  Context wrap(const std::string& fn, const std::vector<Expr>& rest) const;
  Context refine(const std::string& var, const Expr& value) const;

 private:
  explicit Context(Expr shape) : shape_(std::move(shape)) {}
  Expr shape_;
};

/// Driving operations. The program must be validated; every function that
/// allocates variables takes the run's name supply.
class Driver {
 public:
  Driver(const Program& program, NameSupply& names) : program_(program), names_(names) {}

  /// Standard positive driving, one step.
  DriveStep drive(const Expr& e);

  /// Multi-result driving: generalizations first, the plain driving step
  /// last. Never empty.
  std::vector<MultiStep> multi_drive(const Expr& e);

  /// Instantiates `clause` for scrutinee `var`: freshens the pattern,
  /// binds clause params to `extra_args` with `var` replaced by the
  /// freshened constructor term.
  Branch propagate(const std::string& var, const Clause& clause, const std::vector<Expr>& extra_args);

  const Program& program() const { return program_; }

 private:
  const FunDef& lookup(const std::string& fn) const;
  const Clause& select_clause(const FunDef& def, const std::string& ctor) const;
  Expr instantiate(const Clause& clause, const std::vector<Expr>& ctor_args, const std::vector<Expr>& extra_args) const;
  std::vector<Branch> case_split(const FunDef& def, const std::string& var, const std::vector<Expr>& extra_args,
                                 const Context& ctx);

  const Program& program_;
  NameSupply& names_;
};

DriveStep drive_step(const Program& program, const Expr& e, NameSupply& names);
std::vector<MultiStep> multi_drive_steps(const Program& program, const Expr& e, NameSupply& names);

/// Sub-configurations of a step. For Let the body comes first, then the
/// binding expressions in order.
std::vector<Expr> mdsr_sub_exps(const MultiStep& s);

/// Maps a multi-result step onto its single-step counterpart (Leaf -> None,
/// Let has none and maps to None as well).
DriveStep to_drive_step(const MultiStep& s);
bool equal(const DriveStep& a, const DriveStep& b);

}  // namespace mrsc
