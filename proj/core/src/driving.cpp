#include "mrsc/driving.hpp"

#include <stdexcept>

#include "mrsc/error.hpp"
#include "mrsc/syntax.hpp"

namespace mrsc {
namespace {

constexpr const char* kHole = "#hole";

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

bool equal_exprs(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!equal(a[i], b[i])) return false;
  }
  return true;
}

std::vector<Expr> tail(const std::vector<Expr>& args) { return {args.begin() + 1, args.end()}; }

}  // namespace

Context::Context() : shape_(make_var(kHole)) {}

Expr Context::fill(const Expr& e) const { return substitute(shape_, Subst{{kHole, e}}); }

Context Context::wrap(const std::string& fn, const std::vector<Expr>& rest) const {
  std::vector<Expr> args;
  args.reserve(rest.size() + 1);
  args.push_back(make_var(kHole));
  args.insert(args.end(), rest.begin(), rest.end());
  return Context(fill(make_call(fn, std::move(args))));
}

Context Context::refine(const std::string& var, const Expr& value) const {
  return Context(substitute(shape_, Subst{{var, value}}));
}

const FunDef& Driver::lookup(const std::string& fn) const {
  const FunDef* d = program_.find(fn);
  if (d == nullptr) throw DrivingError("call to undefined function '" + fn + "'");
  return *d;
}

const Clause& Driver::select_clause(const FunDef& def, const std::string& ctor) const {
  const Clause* c = def.find_clause(ctor);
  if (c == nullptr) {
    throw DrivingError("non-exhaustive program: '" + def.name + "' has no clause for constructor '" + ctor + "'");
  }
  return *c;
}

Expr Driver::instantiate(const Clause& clause, const std::vector<Expr>& ctor_args,
                         const std::vector<Expr>& extra_args) const {
  if (ctor_args.size() != clause.pattern.vars.size()) {
    throw DrivingError("constructor '" + clause.pattern.ctor + "' applied to " + std::to_string(ctor_args.size()) +
                       " argument(s), pattern expects " + std::to_string(clause.pattern.vars.size()));
  }
  Subst s;
  for (std::size_t i = 0; i < ctor_args.size(); ++i) s.emplace(clause.pattern.vars[i], ctor_args[i]);
  for (std::size_t i = 0; i < extra_args.size(); ++i) s.emplace(clause.params[i], extra_args[i]);
  return substitute(clause.body, s);
}

Branch Driver::propagate(const std::string& var, const Clause& clause, const std::vector<Expr>& extra_args) {
  Pattern fresh{clause.pattern.ctor, {}};
  for (const auto& v : clause.pattern.vars) fresh.vars.push_back(names_.fresh(v));
  const Subst learnt{{var, pattern_expr(fresh)}};
  std::vector<Expr> refined;
  refined.reserve(extra_args.size());
  for (const auto& a : extra_args) refined.push_back(substitute(a, learnt));
  std::vector<Expr> fresh_vars;
  for (const auto& v : fresh.vars) fresh_vars.push_back(make_var(v));
  Expr body = instantiate(clause, fresh_vars, refined);
  return Branch{std::move(fresh), std::move(body)};
}

std::vector<Branch> Driver::case_split(const FunDef& def, const std::string& var,
                                       const std::vector<Expr>& extra_args, const Context& ctx) {
  std::vector<Branch> branches;
  branches.reserve(def.clauses.size());
  for (const auto& clause : def.clauses) {
    Branch b = propagate(var, clause, extra_args);
    b.body = ctx.refine(var, pattern_expr(b.pattern)).fill(b.body);
    branches.push_back(std::move(b));
  }
  return branches;
}

DriveStep Driver::drive(const Expr& e) {
  switch (e->kind) {
    case ExprKind::Var:
      return step::None{};
    case ExprKind::Ctr:
      return step::Con{e->name, e->args};
    case ExprKind::Call:
      break;
  }
  const FunDef& def = lookup(e->name);
  if (def.kind == DefKind::Ordinary) {
    Subst s;
    for (std::size_t i = 0; i < def.params.size(); ++i) s.emplace(def.params[i], e->args[i]);
    return step::Unfold{substitute(def.body, s)};
  }
  const Expr& scrutinee = e->args.front();
  const std::vector<Expr> rest = tail(e->args);
  switch (scrutinee->kind) {
    case ExprKind::Ctr:
      return step::Unfold{instantiate(select_clause(def, scrutinee->name), scrutinee->args, rest)};
    case ExprKind::Var:
      return step::Cases{scrutinee->name, case_split(def, scrutinee->name, rest, Context())};
    case ExprKind::Call:
      break;
  }
  const Context ctx = Context().wrap(def.name, rest);
  return std::visit(overloaded{
                        [&](step::Unfold u) -> DriveStep { return step::Unfold{ctx.fill(u.body)}; },
                        [&](step::Cases c) -> DriveStep {
                          for (auto& b : c.branches) {
                            b.body = ctx.refine(c.var, pattern_expr(b.pattern)).fill(b.body);
                          }
                          return c;
                        },
                        [&](const auto&) -> DriveStep {
                          throw std::logic_error("driving a call produced a leaf or constructor");
                        },
                    },
                    drive(scrutinee));
}

std::vector<MultiStep> Driver::multi_drive(const Expr& e) {
  switch (e->kind) {
    case ExprKind::Var:
      return {step::Leaf{e}};
    case ExprKind::Ctr:
      return {step::Con{e->name, e->args}};
    case ExprKind::Call:
      break;
  }
  const FunDef& def = lookup(e->name);
  if (def.kind == DefKind::Ordinary) {
    step::Let let;
    Subst generalized;
    Subst unfolded;
    for (std::size_t i = 0; i < def.params.size(); ++i) {
      const std::string y = names_.fresh(def.params[i]);
      let.bindings.push_back(Binding{y, e->args[i]});
      generalized.emplace(def.params[i], make_var(y));
      unfolded.emplace(def.params[i], e->args[i]);
    }
    let.body = substitute(def.body, generalized);
    return {std::move(let), step::Unfold{substitute(def.body, unfolded)}};
  }

  const Expr& scrutinee = e->args.front();
  const std::vector<Expr> rest = tail(e->args);
  if (is_ctr(scrutinee)) {
    const Clause& clause = select_clause(def, scrutinee->name);
    const Expr unfolded = instantiate(clause, scrutinee->args, rest);
    step::Let let;
    std::vector<Expr> ctor_vars;
    std::vector<Expr> extra_vars;
    for (std::size_t i = 0; i < scrutinee->args.size(); ++i) {
      const std::string u = names_.fresh(clause.pattern.vars[i]);
      let.bindings.push_back(Binding{u, scrutinee->args[i]});
      ctor_vars.push_back(make_var(u));
    }
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const std::string z = names_.fresh(clause.params[i]);
      let.bindings.push_back(Binding{z, rest[i]});
      extra_vars.push_back(make_var(z));
    }
    let.body = instantiate(clause, ctor_vars, extra_vars);
    return {std::move(let), step::Unfold{unfolded}};
  }
  if (is_var(scrutinee)) {
    return {step::Cases{scrutinee->name, case_split(def, scrutinee->name, rest, Context())}};
  }

  // Pattern match on a nested call: generalize the whole outer call first,
  // then every alternative of the inner call spliced into g(•, rest).
  std::vector<MultiStep> out;
  {
    step::Let let;
    std::vector<Expr> vars;
    for (const auto& a : e->args) {
      const std::string x = names_.fresh("x");
      let.bindings.push_back(Binding{x, a});
      vars.push_back(make_var(x));
    }
    let.body = make_call(def.name, std::move(vars));
    out.emplace_back(std::move(let));
  }
  const Context ctx = Context().wrap(def.name, rest);
  for (auto& inner : multi_drive(scrutinee)) {
    std::visit(overloaded{
                   [&](step::Unfold& u) { out.emplace_back(step::Unfold{ctx.fill(u.body)}); },
                   [&](step::Cases& c) {
                     for (auto& b : c.branches) b.body = ctx.refine(c.var, pattern_expr(b.pattern)).fill(b.body);
                     out.emplace_back(std::move(c));
                   },
                   [&](step::Let& l) { out.emplace_back(step::Let{std::move(l.bindings), ctx.fill(l.body)}); },
                   [&](auto&) { throw std::logic_error("driving a call produced a leaf or constructor"); },
               },
               inner);
  }
  return out;
}

DriveStep drive_step(const Program& program, const Expr& e, NameSupply& names) {
  return Driver(program, names).drive(e);
}

std::vector<MultiStep> multi_drive_steps(const Program& program, const Expr& e, NameSupply& names) {
  return Driver(program, names).multi_drive(e);
}

std::vector<Expr> mdsr_sub_exps(const MultiStep& s) {
  return std::visit(overloaded{
                        [](const step::Leaf&) { return std::vector<Expr>{}; },
                        [](const step::Con& c) { return c.args; },
                        [](const step::Unfold& u) { return std::vector<Expr>{u.body}; },
                        [](const step::Cases& c) {
                          std::vector<Expr> out;
                          for (const auto& b : c.branches) out.push_back(b.body);
                          return out;
                        },
                        [](const step::Let& l) {
                          std::vector<Expr> out{l.body};
                          for (const auto& b : l.bindings) out.push_back(b.expr);
                          return out;
                        },
                    },
                    s);
}

DriveStep to_drive_step(const MultiStep& s) {
  return std::visit(overloaded{
                        [](const step::Con& c) -> DriveStep { return c; },
                        [](const step::Unfold& u) -> DriveStep { return u; },
                        [](const step::Cases& c) -> DriveStep { return c; },
                        [](const auto&) -> DriveStep { return step::None{}; },
                    },
                    s);
}

bool equal(const DriveStep& a, const DriveStep& b) {
  if (a.index() != b.index()) return false;
  return std::visit(overloaded{
                        [&](const step::None&) { return true; },
                        [&](const step::Con& c) {
                          const auto& o = std::get<step::Con>(b);
                          return c.ctor == o.ctor && equal_exprs(c.args, o.args);
                        },
                        [&](const step::Unfold& u) { return equal(u.body, std::get<step::Unfold>(b).body); },
                        [&](const step::Cases& c) {
                          const auto& o = std::get<step::Cases>(b);
                          return c.var == o.var && c.branches == o.branches;
                        },
                    },
                    a);
}

bool equal(const MultiStep& a, const MultiStep& b) {
  if (a.index() != b.index()) return false;
  return std::visit(overloaded{
                        [&](const step::Leaf& l) { return equal(l.var, std::get<step::Leaf>(b).var); },
                        [&](const step::Con& c) {
                          const auto& o = std::get<step::Con>(b);
                          return c.ctor == o.ctor && equal_exprs(c.args, o.args);
                        },
                        [&](const step::Unfold& u) { return equal(u.body, std::get<step::Unfold>(b).body); },
                        [&](const step::Cases& c) {
                          const auto& o = std::get<step::Cases>(b);
                          return c.var == o.var && c.branches == o.branches;
                        },
                        [&](const step::Let& l) {
                          const auto& o = std::get<step::Let>(b);
                          if (l.bindings.size() != o.bindings.size() || !equal(l.body, o.body)) return false;
                          for (std::size_t i = 0; i < l.bindings.size(); ++i) {
                            if (l.bindings[i].var != o.bindings[i].var ||
                                !equal(l.bindings[i].expr, o.bindings[i].expr)) {
                              return false;
                            }
                          }
                          return true;
                        },
                    },
                    a);
}

const char* kind_name(const MultiStep& s) {
  static constexpr const char* names[] = {"Leaf", "Con", "Unfold", "Cases", "Let"};
  return names[s.index()];
}

std::string to_string(const MultiStep& s) {
  return std::visit(overloaded{
                        [](const step::Leaf& l) { return "Leaf " + to_string(l.var); },
                        [](const step::Con& c) {
                          std::string out = "Con " + c.ctor + "[";
                          for (std::size_t i = 0; i < c.args.size(); ++i) {
                            out += (i ? "; " : "") + to_string(c.args[i]);
                          }
                          return out + "]";
                        },
                        [](const step::Unfold& u) { return "Unfold " + to_string(u.body); },
                        [](const step::Cases& c) {
                          std::string out = "Cases " + c.var + " [";
                          for (std::size_t i = 0; i < c.branches.size(); ++i) {
                            out += (i ? "; " : "") + to_string(c.branches[i].pattern) + " -> " +
                                   to_string(c.branches[i].body);
                          }
                          return out + "]";
                        },
                        [](const step::Let& l) {
                          std::string out = "Let [";
                          for (std::size_t i = 0; i < l.bindings.size(); ++i) {
                            out += (i ? "; " : "") + l.bindings[i].var + " = " + to_string(l.bindings[i].expr);
                          }
                          return out + "] in " + to_string(l.body);
                        },
                    },
                    s);
}

}  // namespace mrsc
