#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mrsc/expr.hpp"
#include "mrsc/graph.hpp"

namespace mrsc {

enum class ExtKind { Var, Ctr, Call, Case, Let };

struct ExtNode;

/// Object-language expressions extended with `case` and `let`.
using Ext = std::shared_ptr<const ExtNode>;

struct ExtNode {
  ExtKind kind;
  std::string name;               // Var, Ctr, Call
  std::vector<Ext> args;          // Ctr/Call args; Case: {scrutinee}; Let: bound expressions
  std::vector<Pattern> patterns;  // Case
  std::vector<Ext> branches;      // Case, one per pattern
  std::vector<std::string> vars;  // Let, one per bound expression
  Ext body;                       // Let
};

Ext ext_var(std::string name);
Ext ext_ctr(std::string name, std::vector<Ext> args);
Ext ext_call(std::string name, std::vector<Ext> args);
Ext ext_case(Ext scrutinee, std::vector<Pattern> patterns, std::vector<Ext> branches);
Ext ext_let(std::vector<std::string> vars, std::vector<Ext> exprs, Ext body);

std::vector<std::string> free_vars(const Ext& e);
std::string to_string(const Ext& e);

struct ExtDef {
  std::string name;
  std::vector<std::string> params;
  Ext body;
};

struct ExtProgram {
  std::vector<ExtDef> defs;  // one per fold target, in creation order
  Ext root;
};

/// Fold targets become functions named `f_` followed by the reversed
/// child-index path of the target, joined by `_`. Parameters are the free
/// variables of the target's configuration. Unfold nodes disappear.
ExtProgram graph_to_ext(const ConfGraph& g);

/// Removes let bindings whose expression is a variable or whose variable
/// is used at most once (occurrences inside a case's branches count once).
Ext inline_trivial_lets(const Ext& e);

struct ResidualProgram {
  Program program;
  Expr root;
};

/// Replaces every case by a call to a new matching function
/// `<fn>_caseK(scrutinee, free vars...)` and every let by a call to a new
/// function `<fn>_letK(bound exprs..., free vars...)`; `<fn>` is the
/// enclosing fold-target function or `main` for the root.
ResidualProgram lift_case_let(const ExtProgram& p);

/// Merges definitions equal up to renaming of bound variables and of
/// functions that are themselves merged. The later definition's name wins.
ResidualProgram merge_duplicate_definitions(const ResidualProgram& p);

struct ResidualOptions {
  bool inline_lets = true;
  bool merge_duplicates = true;
};

ResidualProgram residualize(const ConfGraph& g, const ResidualOptions& options = {});

std::string to_string(const ResidualProgram& p);

/// True iff there is a bijection between the functions reachable from the
/// two roots under which the definitions are equal up to bound-variable
/// renaming. Roots must agree on their free variables by name.
bool programs_alpha_equivalent(const ResidualProgram& a, const ResidualProgram& b);

}  // namespace mrsc
