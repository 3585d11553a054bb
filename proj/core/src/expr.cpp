#include "mrsc/expr.hpp"

#include <algorithm>
#include <cctype>

#include "mrsc/error.hpp"

namespace mrsc {

Expr make_var(std::string name) {
  return std::make_shared<const ExprNode>(ExprNode{ExprKind::Var, std::move(name), {}});
}

Expr make_ctr(std::string name, std::vector<Expr> args) {
  return std::make_shared<const ExprNode>(ExprNode{ExprKind::Ctr, std::move(name), std::move(args)});
}

Expr make_call(std::string name, std::vector<Expr> args) {
  return std::make_shared<const ExprNode>(ExprNode{ExprKind::Call, std::move(name), std::move(args)});
}

bool equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (!equal(a->args[i], b->args[i])) return false;
  }
  return true;
}

std::size_t expr_size(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e->args) n += expr_size(a);
  return n;
}

void collect_vars(const Expr& e, std::vector<std::string>& out) {
  if (is_var(e)) {
    if (std::find(out.begin(), out.end(), e->name) == out.end()) out.push_back(e->name);
    return;
  }
  for (const auto& a : e->args) collect_vars(a, out);
}

std::vector<std::string> free_vars(const Expr& e) {
  std::vector<std::string> out;
  collect_vars(e, out);
  return out;
}

std::size_t count_occurrences(const Expr& e, std::string_view var) {
  if (is_var(e)) return e->name == var ? 1 : 0;
  std::size_t n = 0;
  for (const auto& a : e->args) n += count_occurrences(a, var);
  return n;
}

bool occurs(const Expr& e, std::string_view var) {
  if (is_var(e)) return e->name == var;
  return std::any_of(e->args.begin(), e->args.end(), [&](const Expr& a) { return occurs(a, var); });
}

Expr substitute(const Expr& e, const Subst& subst) {
  if (subst.empty()) return e;
  if (is_var(e)) {
    auto it = subst.find(e->name);
    return it == subst.end() ? e : it->second;
  }
  std::vector<Expr> args;
  args.reserve(e->args.size());
  bool changed = false;
  for (const auto& a : e->args) {
    args.push_back(substitute(a, subst));
    changed = changed || args.back() != a;
  }
  if (!changed) return e;
  return std::make_shared<const ExprNode>(ExprNode{e->kind, e->name, std::move(args)});
}

const std::string& Renaming::apply(const std::string& var) const {
  for (const auto& [from, to] : pairs_) {
    if (from == var) return to;
  }
  return var;
}

std::optional<std::string> Renaming::lookup(std::string_view var) const {
  for (const auto& [from, to] : pairs_) {
    if (from == var) return to;
  }
  return std::nullopt;
}

Subst Renaming::to_subst() const {
  Subst s;
  for (const auto& [from, to] : pairs_) s.emplace(from, make_var(to));
  return s;
}

std::string to_string(const Renaming& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& [from, to] : r.pairs()) {
    if (!first) out += ", ";
    first = false;
    out += from + "->" + to;
  }
  return out + "}";
}

namespace {

bool match_renaming_into(const Expr& upper, const Expr& lower, bool injective,
                         std::vector<std::pair<std::string, std::string>>& pairs) {
  if (upper->kind != lower->kind) return false;
  if (is_var(upper)) {
    for (const auto& [from, to] : pairs) {
      if (from == upper->name) return to == lower->name;
      if (injective && to == lower->name) return false;
    }
    pairs.emplace_back(upper->name, lower->name);
    return true;
  }
  if (upper->name != lower->name || upper->args.size() != lower->args.size()) return false;
  for (std::size_t i = 0; i < upper->args.size(); ++i) {
    if (!match_renaming_into(upper->args[i], lower->args[i], injective, pairs)) return false;
  }
  return true;
}

// Post-order flattening used by the embedding table. Children of node i
// are kids[first[i] .. first[i+1]).
struct Flat {
  std::vector<const ExprNode*> nodes;
  std::vector<std::size_t> first;
  std::vector<std::size_t> kids;

  void reset(const Expr& e) {
    nodes.clear();
    first.clear();
    kids.clear();
    add(e);
    first.push_back(kids.size());
  }

  std::size_t add(const Expr& e) {
    std::size_t local[8];
    std::vector<std::size_t> spill;
    const std::size_t n = e->args.size();
    if (n > 8) spill.resize(n);
    std::size_t* ids = n > 8 ? spill.data() : local;
    for (std::size_t k = 0; k < n; ++k) ids[k] = add(e->args[k]);
    nodes.push_back(e.get());
    first.push_back(kids.size());
    kids.insert(kids.end(), ids, ids + n);
    return nodes.size() - 1;
  }
};

}  // namespace

std::optional<Renaming> match_renaming(const Expr& upper, const Expr& lower) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!match_renaming_into(upper, lower, true, pairs)) return std::nullopt;
  return Renaming(std::move(pairs));
}

std::optional<Renaming> match_var_instance(const Expr& upper, const Expr& lower) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!match_renaming_into(upper, lower, false, pairs)) return std::nullopt;
  return Renaming(std::move(pairs));
}

bool embeds(const Expr& smaller, const Expr& larger) {
  if (is_var(smaller)) {
    // A variable embeds in any term that has a variable somewhere inside.
    if (is_var(larger)) return true;
  } else if (is_var(larger)) {
    return false;
  }
  thread_local Flat a;
  thread_local Flat b;
  thread_local Expr b_source;
  thread_local std::vector<char> table;
  if (b_source != larger) {
    b.reset(larger);
    b_source = larger;
  }
  a.reset(smaller);
  const std::size_t na = a.nodes.size();
  const std::size_t nb = b.nodes.size();
  if (na > nb) return false;
  table.assign(na * nb, 0);
  auto at = [&](std::size_t i, std::size_t j) -> char& { return table[j * na + i]; };

  for (std::size_t j = 0; j < nb; ++j) {
    const ExprNode* bj = b.nodes[j];
    const std::size_t* bk = b.kids.data() + b.first[j];
    const std::size_t bn = b.first[j + 1] - b.first[j];
    for (std::size_t i = 0; i < na; ++i) {
      const ExprNode* ai = a.nodes[i];
      bool result = false;
      if (ai->kind == ExprKind::Var && bj->kind == ExprKind::Var) {
        result = true;
      } else if (bj->kind != ExprKind::Var) {
        for (std::size_t c = 0; c < bn; ++c) {
          if (at(i, bk[c])) {
            result = true;
            break;
          }
        }
        if (!result && ai->kind == bj->kind && ai->args.size() == bn && ai->name == bj->name) {
          result = true;
          const std::size_t* ak = a.kids.data() + a.first[i];
          for (std::size_t k = 0; k < bn; ++k) {
            if (!at(ak[k], bk[k])) {
              result = false;
              break;
            }
          }
        }
      }
      at(i, j) = result ? 1 : 0;
    }
  }
  return at(na - 1, nb - 1) != 0;
}

Expr pattern_expr(const Pattern& p) {
  std::vector<Expr> args;
  args.reserve(p.vars.size());
  for (const auto& v : p.vars) args.push_back(make_var(v));
  return make_ctr(p.ctor, std::move(args));
}

std::size_t FunDef::arity() const {
  if (kind == DefKind::Ordinary) return params.size();
  return clauses.empty() ? 1 : clauses.front().params.size() + 1;
}

const Clause* FunDef::find_clause(std::string_view ctor) const {
  for (const auto& c : clauses) {
    if (c.pattern.ctor == ctor) return &c;
  }
  return nullptr;
}

FunDef make_ordinary(std::string name, std::vector<std::string> params, Expr body) {
  FunDef d;
  d.kind = DefKind::Ordinary;
  d.name = std::move(name);
  d.params = std::move(params);
  d.body = std::move(body);
  return d;
}

FunDef make_matching(std::string name, std::vector<Clause> clauses) {
  FunDef d;
  d.kind = DefKind::Matching;
  d.name = std::move(name);
  d.clauses = std::move(clauses);
  return d;
}

void Program::add(FunDef def) {
  if (index_.count(def.name) != 0) {
    throw ProgramError("duplicate definition of function '" + def.name + "'");
  }
  index_.emplace(def.name, defs_.size());
  defs_.push_back(std::move(def));
}

const FunDef* Program::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &defs_[it->second];
}

const FunDef& Program::at(std::string_view name) const {
  const FunDef* d = find(name);
  if (d == nullptr) throw ProgramError("unknown function '" + std::string(name) + "'");
  return *d;
}

namespace {

void collect_identifiers(const Expr& e, std::set<std::string>& out) {
  out.insert(e->name);
  for (const auto& a : e->args) collect_identifiers(a, out);
}

void check_calls(const Program& program, const Expr& e, const std::string& where) {
  if (is_call(e)) {
    const FunDef* d = program.find(e->name);
    if (d == nullptr) {
      throw ProgramError(where + ": call to undefined function '" + e->name + "'");
    }
    if (d->arity() != e->args.size()) {
      throw ProgramError(where + ": function '" + e->name + "' expects " + std::to_string(d->arity()) +
                         " argument(s), got " + std::to_string(e->args.size()));
    }
  }
  for (const auto& a : e->args) check_calls(program, a, where);
}

void check_bound(const Expr& body, const std::vector<std::string>& bound, const std::string& where) {
  for (const auto& v : free_vars(body)) {
    if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
      throw ProgramError(where + ": variable '" + v + "' is not bound");
    }
  }
}

void check_distinct(const std::vector<std::string>& vars, const std::string& where) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      if (vars[i] == vars[j]) throw ProgramError(where + ": variable '" + vars[i] + "' bound twice");
    }
  }
}

}  // namespace

std::set<std::string> Program::identifiers() const {
  std::set<std::string> out;
  for (const auto& d : defs_) {
    out.insert(d.name);
    if (d.kind == DefKind::Ordinary) {
      out.insert(d.params.begin(), d.params.end());
      collect_identifiers(d.body, out);
    } else {
      for (const auto& c : d.clauses) {
        out.insert(c.pattern.ctor);
        out.insert(c.pattern.vars.begin(), c.pattern.vars.end());
        out.insert(c.params.begin(), c.params.end());
        collect_identifiers(c.body, out);
      }
    }
  }
  return out;
}

void validate(const Program& program) {
  for (const auto& d : program.defs()) {
    const std::string where = "in definition of '" + d.name + "'";
    if (d.kind == DefKind::Ordinary) {
      check_distinct(d.params, where);
      check_bound(d.body, d.params, where);
      check_calls(program, d.body, where);
      continue;
    }
    if (d.clauses.empty()) throw ProgramError(where + ": no clauses");
    const std::size_t extra = d.clauses.front().params.size();
    for (std::size_t i = 0; i < d.clauses.size(); ++i) {
      const Clause& c = d.clauses[i];
      if (c.params.size() != extra) {
        throw ProgramError(where + ": clauses have inconsistent arity");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (d.clauses[j].pattern.ctor == c.pattern.ctor) {
          throw ProgramError(where + ": overlapping clauses for constructor '" + c.pattern.ctor + "'");
        }
      }
      std::vector<std::string> bound = c.pattern.vars;
      bound.insert(bound.end(), c.params.begin(), c.params.end());
      check_distinct(bound, where);
      check_bound(c.body, bound, where);
      check_calls(program, c.body, where);
    }
  }
}

void validate_expression(const Program& program, const Expr& e) {
  check_calls(program, e, "in expression");
}

std::size_t program_size(const Program& program) {
  std::size_t n = 0;
  for (const auto& d : program.defs()) {
    if (d.kind == DefKind::Ordinary) {
      n += 1 + d.params.size() + expr_size(d.body);
    } else {
      for (const auto& c : d.clauses) {
        n += 1 + (1 + c.pattern.vars.size()) + c.params.size() + expr_size(c.body);
      }
    }
  }
  return n;
}

void NameSupply::reserve_all(const Expr& e) {
  reserved_.insert(e->name);
  for (const auto& a : e->args) reserve_all(a);
}

// Issued names are not stored: `name` was issued iff it splits into a
// hint and a canonical number below that hint's counter.
bool NameSupply::issued(const std::string& name) const {
  for (std::size_t k = name.size(); k-- > 1;) {
    const char c = name[k];
    if (c < '0' || c > '9') break;
    if (c == '0' && k + 1 < name.size()) continue;
    if (name.size() - k > 9) break;
    auto it = next_.find(name.substr(0, k));
    if (it != next_.end() && std::stoul(name.substr(k)) < it->second) return true;
  }
  return false;
}

std::string NameSupply::fresh(const std::string& hint) {
  for (;;) {
    std::string candidate = hint + std::to_string(next_[hint]);
    const bool taken = reserved_.count(candidate) != 0 || issued(candidate);
    ++next_[hint];
    if (!taken) return candidate;
  }
}

}  // namespace mrsc
