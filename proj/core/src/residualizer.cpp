#include "mrsc/residualizer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "mrsc/syntax.hpp"

namespace mrsc {
namespace {

Ext make_ext(ExtNode n) { return std::make_shared<const ExtNode>(std::move(n)); }

void collect_free(const Ext& e, std::vector<std::string>& bound, std::vector<std::string>& out) {
  auto add = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  switch (e->kind) {
    case ExtKind::Var:
      add(e->name);
      return;
    case ExtKind::Ctr:
    case ExtKind::Call:
      for (const auto& a : e->args) collect_free(a, bound, out);
      return;
    case ExtKind::Case:
      collect_free(e->args.front(), bound, out);
      for (std::size_t i = 0; i < e->branches.size(); ++i) {
        const auto& pv = e->patterns[i].vars;
        bound.insert(bound.end(), pv.begin(), pv.end());
        collect_free(e->branches[i], bound, out);
        bound.resize(bound.size() - pv.size());
      }
      return;
    case ExtKind::Let:
      for (const auto& a : e->args) collect_free(a, bound, out);
      bound.insert(bound.end(), e->vars.begin(), e->vars.end());
      collect_free(e->body, bound, out);
      bound.resize(bound.size() - e->vars.size());
      return;
  }
}

bool free_in(const Ext& e, const std::string& v) {
  const auto fv = free_vars(e);
  return std::find(fv.begin(), fv.end(), v) != fv.end();
}

bool contains(const std::vector<std::string>& vs, const std::string& v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

// Free variables of the branches, minus each branch's own pattern variables.
std::vector<std::string> case_extras(const Ext& e) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < e->branches.size(); ++i) {
    bound = e->patterns[i].vars;
    collect_free(e->branches[i], bound, out);
  }
  return out;
}

std::vector<std::string> let_extras(const Ext& e) {
  std::vector<std::string> bound = e->vars;
  std::vector<std::string> out;
  collect_free(e->body, bound, out);
  return out;
}

// Occurrences of `v` as they will be after lifting: a case's branches (and a
// let's body) become a separate function that receives `v` once.
std::size_t lifted_count(const Ext& e, const std::string& v) {
  switch (e->kind) {
    case ExtKind::Var:
      return e->name == v ? 1 : 0;
    case ExtKind::Ctr:
    case ExtKind::Call: {
      std::size_t n = 0;
      for (const auto& a : e->args) n += lifted_count(a, v);
      return n;
    }
    case ExtKind::Case: {
      std::size_t n = lifted_count(e->args.front(), v);
      for (std::size_t i = 0; i < e->branches.size(); ++i) {
        if (!contains(e->patterns[i].vars, v) && free_in(e->branches[i], v)) return n + 1;
      }
      return n;
    }
    case ExtKind::Let: {
      std::size_t n = 0;
      for (const auto& a : e->args) n += lifted_count(a, v);
      if (!contains(e->vars, v) && free_in(e->body, v)) ++n;
      return n;
    }
  }
  return 0;
}

Ext subst(const Ext& e, const std::string& v, const Ext& r) {
  switch (e->kind) {
    case ExtKind::Var:
      return e->name == v ? r : e;
    case ExtKind::Ctr:
    case ExtKind::Call: {
      ExtNode n = *e;
      for (auto& a : n.args) a = subst(a, v, r);
      return make_ext(std::move(n));
    }
    case ExtKind::Case: {
      ExtNode n = *e;
      n.args.front() = subst(n.args.front(), v, r);
      for (std::size_t i = 0; i < n.branches.size(); ++i) {
        if (!contains(n.patterns[i].vars, v)) n.branches[i] = subst(n.branches[i], v, r);
      }
      return make_ext(std::move(n));
    }
    case ExtKind::Let: {
      ExtNode n = *e;
      for (auto& a : n.args) a = subst(a, v, r);
      if (!contains(n.vars, v)) n.body = subst(n.body, v, r);
      return make_ext(std::move(n));
    }
  }
  return e;
}

void print_ext(const Ext& e, std::string& out) {
  auto list = [&](const std::vector<Ext>& xs) {
    out += '(';
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i != 0) out += ", ";
      print_ext(xs[i], out);
    }
    out += ')';
  };
  switch (e->kind) {
    case ExtKind::Var:
      out += e->name;
      return;
    case ExtKind::Ctr:
      out += e->name;
      if (!e->args.empty()) list(e->args);
      return;
    case ExtKind::Call:
      out += e->name;
      list(e->args);
      return;
    case ExtKind::Case:
      out += "case ";
      print_ext(e->args.front(), out);
      out += " of {";
      for (std::size_t i = 0; i < e->branches.size(); ++i) {
        out += (i != 0 ? "; " : " ") + to_string(e->patterns[i]) + " -> ";
        print_ext(e->branches[i], out);
      }
      out += " }";
      return;
    case ExtKind::Let:
      out += "let ";
      for (std::size_t i = 0; i < e->vars.size(); ++i) {
        out += (i != 0 ? "; " : "") + e->vars[i] + " = ";
        print_ext(e->args[i], out);
      }
      out += " in ";
      print_ext(e->body, out);
      return;
  }
}

std::vector<Ext> vars_of(const std::vector<std::string>& names) {
  std::vector<Ext> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(ext_var(n));
  return out;
}

class ToExt {
 public:
  ExtProgram run(const ConfGraph& g) {
    mark_targets(g);
    stack_.clear();
    ExtProgram p;
    p.root = translate(g);
    p.defs = std::move(defs_);
    return p;
  }

 private:
  struct Target {
    std::string name;
    std::vector<std::string> params;
  };

  void mark_targets(const ConfGraph& g) {
    if (g->kind == GraphKind::Fold) {
      if (g->back == 0 || g->back > stack_.size()) throw std::invalid_argument("dangling fold in graph");
      targets_.insert(stack_[stack_.size() - g->back]);
      return;
    }
    stack_.push_back(g.get());
    for (const auto& c : g->children) mark_targets(c);
    if (g->body) mark_targets(g->body);
    stack_.pop_back();
  }

  std::string target_name() const {
    std::string name = "f_";
    for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
      if (it != path_.rbegin()) name += '_';
      name += std::to_string(*it);
    }
    return name;
  }

  Ext translate(const ConfGraph& g) {
    if (targets_.count(g.get()) == 0) return translate_body(g);
    Target t{target_name(), free_vars(g->conf)};
    info_[g.get()] = t;
    const std::size_t slot = defs_.size();
    defs_.push_back(ExtDef{t.name, t.params, nullptr});
    Ext body = translate_body(g);
    defs_[slot].body = std::move(body);
    return ext_call(t.name, vars_of(t.params));
  }

  Ext child(const ConfGraph& g, std::size_t index) {
    path_.push_back(index);
    Ext e = translate(g);
    path_.pop_back();
    return e;
  }

  Ext translate_body(const ConfGraph& g) {
    if (g->kind == GraphKind::Fold) {
      const Target& t = info_.at(stack_[stack_.size() - g->back]);
      std::vector<Ext> args;
      for (const auto& p : t.params) args.push_back(ext_var(g->renaming.apply(p)));
      return ext_call(t.name, std::move(args));
    }
    stack_.push_back(g.get());
    Ext out;
    switch (g->kind) {
      case GraphKind::Leaf:
        out = ext_var(g->conf->name);
        break;
      case GraphKind::Con: {
        std::vector<Ext> args;
        for (std::size_t i = 0; i < g->children.size(); ++i) args.push_back(child(g->children[i], i));
        out = ext_ctr(g->name, std::move(args));
        break;
      }
      case GraphKind::Unfold:
        out = child(g->children.front(), 0);
        break;
      case GraphKind::Cases: {
        std::vector<Ext> branches;
        for (std::size_t i = 0; i < g->children.size(); ++i) branches.push_back(child(g->children[i], i));
        out = ext_case(ext_var(g->name), g->patterns, std::move(branches));
        break;
      }
      case GraphKind::Let: {
        std::vector<Ext> exprs;
        for (std::size_t i = 0; i < g->children.size(); ++i) exprs.push_back(child(g->children[i], i));
        Ext body = child(g->body, g->children.size());
        out = ext_let(g->let_vars, std::move(exprs), std::move(body));
        break;
      }
      case GraphKind::Fold:
        break;
    }
    stack_.pop_back();
    return out;
  }

  std::set<const GraphNode*> targets_;
  std::unordered_map<const GraphNode*, Target> info_;
  std::vector<const GraphNode*> stack_;
  std::vector<std::size_t> path_;
  std::vector<ExtDef> defs_;
};

class Lifter {
 public:
  ResidualProgram run(const ExtProgram& p) {
    for (const auto& d : p.defs) {
      const std::size_t slot = reserve();
      Expr body = lift(d.body, d.name);
      slots_[slot] = make_ordinary(d.name, d.params, std::move(body));
    }
    Expr root = lift(p.root, "main");
    ResidualProgram out;
    for (auto& s : slots_) out.program.add(std::move(*s));
    out.root = std::move(root);
    return out;
  }

 private:
  std::size_t reserve() {
    slots_.emplace_back();
    return slots_.size() - 1;
  }

  std::vector<Expr> lift_all(const std::vector<Ext>& es, const std::string& fn) {
    std::vector<Expr> out;
    out.reserve(es.size());
    for (const auto& e : es) out.push_back(lift(e, fn));
    return out;
  }

  Expr lift(const Ext& e, const std::string& fn) {
    switch (e->kind) {
      case ExtKind::Var:
        return make_var(e->name);
      case ExtKind::Ctr:
        return make_ctr(e->name, lift_all(e->args, fn));
      case ExtKind::Call:
        return make_call(e->name, lift_all(e->args, fn));
      case ExtKind::Case: {
        const std::string name = fn + "_case" + std::to_string(counters_[fn].first++);
        const std::size_t slot = reserve();
        const std::vector<std::string> extras = case_extras(e);
        std::vector<Expr> args{lift(e->args.front(), fn)};
        std::vector<Clause> clauses;
        for (std::size_t i = 0; i < e->branches.size(); ++i) {
          clauses.push_back(Clause{e->patterns[i], extras, lift(e->branches[i], fn)});
        }
        slots_[slot] = make_matching(name, std::move(clauses));
        for (const auto& v : extras) args.push_back(make_var(v));
        return make_call(name, std::move(args));
      }
      case ExtKind::Let: {
        const std::string name = fn + "_let" + std::to_string(counters_[fn].second++);
        const std::size_t slot = reserve();
        const std::vector<std::string> extras = let_extras(e);
        std::vector<Expr> args = lift_all(e->args, fn);
        std::vector<std::string> params = e->vars;
        params.insert(params.end(), extras.begin(), extras.end());
        slots_[slot] = make_ordinary(name, std::move(params), lift(e->body, fn));
        for (const auto& v : extras) args.push_back(make_var(v));
        return make_call(name, std::move(args));
      }
    }
    throw std::logic_error("unreachable");
  }

  std::vector<std::optional<FunDef>> slots_;
  std::map<std::string, std::pair<unsigned, unsigned>> counters_;
};

// Canonical text of a definition under a function-class assignment.
class Canon {
 public:
  explicit Canon(const std::unordered_map<std::string, std::size_t>& cls) : cls_(cls) {}

  std::string of(const FunDef& d) {
    std::string out;
    if (d.kind == DefKind::Ordinary) {
      out = "O" + std::to_string(d.params.size()) + ":";
      expr(d.body, d.params, out);
      return out;
    }
    std::vector<const Clause*> cs;
    for (const auto& c : d.clauses) cs.push_back(&c);
    std::sort(cs.begin(), cs.end(), [](const Clause* a, const Clause* b) { return a->pattern.ctor < b->pattern.ctor; });
    out = "M" + std::to_string(d.arity());
    for (const Clause* c : cs) {
      out += "|" + c->pattern.ctor + "/" + std::to_string(c->pattern.vars.size()) + ":";
      std::vector<std::string> binders = c->pattern.vars;
      binders.insert(binders.end(), c->params.begin(), c->params.end());
      expr(c->body, binders, out);
    }
    return out;
  }

 private:
  void expr(const Expr& e, const std::vector<std::string>& binders, std::string& out) {
    switch (e->kind) {
      case ExprKind::Var: {
        auto it = std::find(binders.begin(), binders.end(), e->name);
        if (it == binders.end()) {
          out += "?" + e->name;
        } else {
          out += "v" + std::to_string(it - binders.begin());
        }
        return;
      }
      case ExprKind::Ctr:
        out += "C" + e->name;
        break;
      case ExprKind::Call: {
        auto it = cls_.find(e->name);
        out += it == cls_.end() ? "@" + e->name : "#" + std::to_string(it->second);
        break;
      }
    }
    out += '(';
    for (const auto& a : e->args) {
      expr(a, binders, out);
      out += ',';
    }
    out += ')';
  }

  const std::unordered_map<std::string, std::size_t>& cls_;
};

Expr rename_calls(const Expr& e, const std::unordered_map<std::string, std::string>& to) {
  if (is_var(e)) return e;
  std::vector<Expr> args;
  args.reserve(e->args.size());
  for (const auto& a : e->args) args.push_back(rename_calls(a, to));
  if (is_ctr(e)) return make_ctr(e->name, std::move(args));
  auto it = to.find(e->name);
  return make_call(it == to.end() ? e->name : it->second, std::move(args));
}

class AlphaEq {
 public:
  AlphaEq(const Program& a, const Program& b) : a_(a), b_(b) {}

  bool run(const Expr& ra, const Expr& rb) {
    std::map<std::string, std::string> none;
    if (!expr(ra, rb, none)) return false;
    while (!work_.empty()) {
      auto [fa, fb] = work_.front();
      work_.pop_front();
      const FunDef* da = a_.find(fa);
      const FunDef* db = b_.find(fb);
      if ((da == nullptr) != (db == nullptr)) return false;
      if (da == nullptr) {
        if (fa != fb) return false;
        continue;
      }
      if (!def(*da, *db)) return false;
    }
    return true;
  }

 private:
  bool fn(const std::string& fa, const std::string& fb) {
    auto it = fwd_.find(fa);
    if (it != fwd_.end()) return it->second == fb;
    if (bwd_.count(fb) != 0) return false;
    fwd_.emplace(fa, fb);
    bwd_.emplace(fb, fa);
    work_.emplace_back(fa, fb);
    return true;
  }

  static bool bind(std::map<std::string, std::string>& vm, const std::vector<std::string>& xs,
                   const std::vector<std::string>& ys) {
    if (xs.size() != ys.size()) return false;
    for (std::size_t i = 0; i < xs.size(); ++i) vm[xs[i]] = ys[i];
    return true;
  }

  bool def(const FunDef& da, const FunDef& db) {
    if (da.kind != db.kind || da.arity() != db.arity()) return false;
    if (da.kind == DefKind::Ordinary) {
      std::map<std::string, std::string> vm;
      return bind(vm, da.params, db.params) && expr(da.body, db.body, vm);
    }
    if (da.clauses.size() != db.clauses.size()) return false;
    for (const auto& ca : da.clauses) {
      const Clause* cb = db.find_clause(ca.pattern.ctor);
      if (cb == nullptr) return false;
      std::map<std::string, std::string> vm;
      if (!bind(vm, ca.pattern.vars, cb->pattern.vars) || !bind(vm, ca.params, cb->params)) return false;
      if (!expr(ca.body, cb->body, vm)) return false;
    }
    return true;
  }

  bool expr(const Expr& ea, const Expr& eb, const std::map<std::string, std::string>& vm) {
    if (ea->kind != eb->kind || ea->args.size() != eb->args.size()) return false;
    switch (ea->kind) {
      case ExprKind::Var: {
        auto it = vm.find(ea->name);
        return it == vm.end() ? ea->name == eb->name : it->second == eb->name;
      }
      case ExprKind::Ctr:
        if (ea->name != eb->name) return false;
        break;
      case ExprKind::Call:
        if (!fn(ea->name, eb->name)) return false;
        break;
    }
    for (std::size_t i = 0; i < ea->args.size(); ++i) {
      if (!expr(ea->args[i], eb->args[i], vm)) return false;
    }
    return true;
  }

  const Program& a_;
  const Program& b_;
  std::map<std::string, std::string> fwd_;
  std::map<std::string, std::string> bwd_;
  std::deque<std::pair<std::string, std::string>> work_;
};

}  // namespace

Ext ext_var(std::string name) {
  ExtNode n{ExtKind::Var, std::move(name), {}, {}, {}, {}, nullptr};
  return make_ext(std::move(n));
}

Ext ext_ctr(std::string name, std::vector<Ext> args) {
  ExtNode n{ExtKind::Ctr, std::move(name), std::move(args), {}, {}, {}, nullptr};
  return make_ext(std::move(n));
}

Ext ext_call(std::string name, std::vector<Ext> args) {
  ExtNode n{ExtKind::Call, std::move(name), std::move(args), {}, {}, {}, nullptr};
  return make_ext(std::move(n));
}

Ext ext_case(Ext scrutinee, std::vector<Pattern> patterns, std::vector<Ext> branches) {
  if (patterns.size() != branches.size()) throw std::invalid_argument("ext_case: pattern/branch count mismatch");
  ExtNode n{ExtKind::Case, {}, {std::move(scrutinee)}, std::move(patterns), std::move(branches), {}, nullptr};
  return make_ext(std::move(n));
}

Ext ext_let(std::vector<std::string> vars, std::vector<Ext> exprs, Ext body) {
  if (vars.size() != exprs.size()) throw std::invalid_argument("ext_let: variable/expression count mismatch");
  ExtNode n{ExtKind::Let, {}, std::move(exprs), {}, {}, std::move(vars), std::move(body)};
  return make_ext(std::move(n));
}

std::vector<std::string> free_vars(const Ext& e) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  collect_free(e, bound, out);
  return out;
}

std::string to_string(const Ext& e) {
  std::string out;
  print_ext(e, out);
  return out;
}

ExtProgram graph_to_ext(const ConfGraph& g) { return ToExt().run(g); }

Ext inline_trivial_lets(const Ext& e) {
  switch (e->kind) {
    case ExtKind::Var:
      return e;
    case ExtKind::Ctr:
    case ExtKind::Call:
    case ExtKind::Case: {
      ExtNode n = *e;
      for (auto& a : n.args) a = inline_trivial_lets(a);
      for (auto& b : n.branches) b = inline_trivial_lets(b);
      return make_ext(std::move(n));
    }
    case ExtKind::Let:
      break;
  }
  Ext body = inline_trivial_lets(e->body);
  std::vector<std::string> vars;
  std::vector<Ext> exprs;
  for (std::size_t i = 0; i < e->vars.size(); ++i) {
    Ext bound = inline_trivial_lets(e->args[i]);
    if (bound->kind == ExtKind::Var || lifted_count(body, e->vars[i]) <= 1) {
      body = subst(body, e->vars[i], bound);
    } else {
      vars.push_back(e->vars[i]);
      exprs.push_back(std::move(bound));
    }
  }
  if (vars.empty()) return body;
  return ext_let(std::move(vars), std::move(exprs), std::move(body));
}

ResidualProgram lift_case_let(const ExtProgram& p) { return Lifter().run(p); }

ResidualProgram merge_duplicate_definitions(const ResidualProgram& p) {
  const auto& defs = p.program.defs();
  std::unordered_map<std::string, std::size_t> cls;
  for (const auto& d : defs) cls[d.name] = 0;
  std::size_t classes = defs.empty() ? 0 : 1;
  for (;;) {
    Canon canon(cls);
    std::map<std::string, std::size_t> ids;
    std::vector<std::size_t> next(defs.size());
    for (std::size_t i = 0; i < defs.size(); ++i) {
      // Keep the old class in the key so classes only ever split.
      const std::string key = std::to_string(cls[defs[i].name]) + "$" + canon.of(defs[i]);
      next[i] = ids.emplace(key, ids.size()).first->second;
    }
    for (std::size_t i = 0; i < defs.size(); ++i) cls[defs[i].name] = next[i];
    if (ids.size() == classes) break;
    classes = ids.size();
  }

  std::unordered_map<std::size_t, std::string> rep;
  for (const auto& d : defs) rep[cls[d.name]] = d.name;  // later definitions overwrite
  std::unordered_map<std::string, std::string> to;
  for (const auto& d : defs) to[d.name] = rep[cls[d.name]];

  ResidualProgram out;
  for (const auto& d : defs) {
    if (to[d.name] != d.name) continue;
    FunDef nd = d;
    if (nd.kind == DefKind::Ordinary) {
      nd.body = rename_calls(nd.body, to);
    } else {
      for (auto& c : nd.clauses) c.body = rename_calls(c.body, to);
    }
    out.program.add(std::move(nd));
  }
  out.root = rename_calls(p.root, to);
  return out;
}

ResidualProgram residualize(const ConfGraph& g, const ResidualOptions& options) {
  ExtProgram ext = graph_to_ext(g);
  if (options.inline_lets) {
    for (auto& d : ext.defs) d.body = inline_trivial_lets(d.body);
    ext.root = inline_trivial_lets(ext.root);
  }
  ResidualProgram out = lift_case_let(ext);
  if (options.merge_duplicates) out = merge_duplicate_definitions(out);
  return out;
}

std::string to_string(const ResidualProgram& p) { return to_string(p.program, p.root); }

bool programs_alpha_equivalent(const ResidualProgram& a, const ResidualProgram& b) {
  return AlphaEq(a.program, b.program).run(a.root, b.root);
}

}  // namespace mrsc
