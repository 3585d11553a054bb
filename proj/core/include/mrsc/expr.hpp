#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mrsc {

enum class ExprKind { Var, Ctr, Call };

struct ExprNode;

/// Immutable, shareable expression tree. Never null once constructed by
/// the factory functions below.
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  std::string name;
  std::vector<Expr> args;
};

Expr make_var(std::string name);
Expr make_ctr(std::string name, std::vector<Expr> args = {});
Expr make_call(std::string name, std::vector<Expr> args);

inline bool is_var(const Expr& e) { return e->kind == ExprKind::Var; }
inline bool is_ctr(const Expr& e) { return e->kind == ExprKind::Ctr; }
inline bool is_call(const Expr& e) { return e->kind == ExprKind::Call; }

/// Structural equality.
bool equal(const Expr& a, const Expr& b);

/// Number of AST nodes.
std::size_t expr_size(const Expr& e);

/// Distinct variables in left-to-right first-occurrence order.
std::vector<std::string> free_vars(const Expr& e);
void collect_vars(const Expr& e, std::vector<std::string>& out);

std::size_t count_occurrences(const Expr& e, std::string_view var);
bool occurs(const Expr& e, std::string_view var);

/// Variable -> expression mapping applied simultaneously.
using Subst = std::map<std::string, Expr, std::less<>>;

Expr substitute(const Expr& e, const Subst& subst);

/// Variable-to-variable mapping, kept in first-occurrence order of its
/// source variables.
class Renaming {
 public:
  Renaming() = default;
  explicit Renaming(std::vector<std::pair<std::string, std::string>> pairs)
      : pairs_(std::move(pairs)) {}

  const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }

  /// Image of `var`, or `var` itself when it is outside the domain.
  const std::string& apply(const std::string& var) const;
  std::optional<std::string> lookup(std::string_view var) const;
  Subst to_subst() const;

  friend bool operator==(const Renaming&, const Renaming&) = default;

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
};

std::string to_string(const Renaming& r);

/// An injective renaming rho with substitute(upper, rho) == lower.
std::optional<Renaming> match_renaming(const Expr& upper, const Expr& lower);

/// Like match_renaming but distinct variables of `upper` may map to the
/// same variable of `lower`.
std::optional<Renaming> match_var_instance(const Expr& upper, const Expr& lower);

/// Homeomorphic embedding `smaller <| larger` where all variables are
/// treated as one class.
bool embeds(const Expr& smaller, const Expr& larger);

/// Flat constructor pattern C(x1, ..., xn).
struct Pattern {
  std::string ctor;
  std::vector<std::string> vars;

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

Expr pattern_expr(const Pattern& p);

struct Clause {
  Pattern pattern;
  std::vector<std::string> params;
  Expr body;
};

enum class DefKind { Ordinary, Matching };

/// Either `f(x1..xn) = e` (Ordinary) or a list of clauses
/// `g(p_i, y1..ym) = e_i` (Matching).
struct FunDef {
  DefKind kind = DefKind::Ordinary;
  std::string name;
  std::vector<std::string> params;  // Ordinary only
  Expr body;                        // Ordinary only
  std::vector<Clause> clauses;      // Matching only

  std::size_t arity() const;
  const Clause* find_clause(std::string_view ctor) const;
};

FunDef make_ordinary(std::string name, std::vector<std::string> params, Expr body);
FunDef make_matching(std::string name, std::vector<Clause> clauses);

class Program {
 public:
  Program() = default;

  /// Appends a definition; throws ProgramError on a duplicate name.
  void add(FunDef def);
  const FunDef* find(std::string_view name) const;
  const FunDef& at(std::string_view name) const;

  const std::vector<FunDef>& defs() const { return defs_; }
  bool empty() const { return defs_.empty(); }
  std::size_t size() const { return defs_.size(); }

  /// Every identifier (function, constructor, variable) mentioned.
  std::set<std::string> identifiers() const;

 private:
  std::vector<FunDef> defs_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Checks the well-formedness invariants of a program (and optional root
/// expression): non-overlapping clauses, consistent clause arity, calls
/// resolve with matching arity, every body variable is bound.
/// Throws ProgramError.
void validate(const Program& program);
void validate_expression(const Program& program, const Expr& e);

/// Number of AST nodes over all definitions (patterns count one node).
std::size_t program_size(const Program& program);

/// Deterministic fresh-name supply: `hint` followed by a per-hint counter,
/// skipping every reserved identifier.
class NameSupply {
 public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> reserved) : reserved_(std::move(reserved)) {}

  void reserve(const std::string& name) { reserved_.insert(name); }
  void reserve_all(const Expr& e);
  std::string fresh(const std::string& hint);

 private:
  bool issued(const std::string& name) const;

  std::set<std::string> reserved_;
  std::unordered_map<std::string, unsigned> next_;
};

}  // namespace mrsc
