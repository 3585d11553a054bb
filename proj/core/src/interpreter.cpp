#include "mrsc/interpreter.hpp"

#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "mrsc/error.hpp"

namespace mrsc {
namespace {

struct StuckSignal {
  std::string message;
};
struct FuelSignal {};

class Evaluator {
 public:
  Evaluator(const Program& program, std::uint64_t fuel) : program_(program), fuel_(fuel) {}

  Expr normal_form(const Expr& e) {
    Expr w = whnf(e);
    if (w->args.empty()) return w;
    std::vector<Expr> args;
    args.reserve(w->args.size());
    for (const auto& a : w->args) args.push_back(normal_form(a));
    return make_ctr(w->name, std::move(args));
  }

  std::uint64_t unfolds() const { return unfolds_; }

 private:
  void tick() {
    if (unfolds_ >= fuel_) throw FuelSignal{};
    ++unfolds_;
  }

  Expr whnf(Expr e) {
    for (;;) {
      switch (e->kind) {
        case ExprKind::Ctr:
          return e;
        case ExprKind::Var:
          throw StuckSignal{"free variable '" + e->name + "'"};
        case ExprKind::Call:
          break;
      }
      const FunDef* def = program_.find(e->name);
      if (def == nullptr) throw StuckSignal{"undefined function '" + e->name + "'"};
      if (def->arity() != e->args.size()) throw StuckSignal{"arity mismatch in call to '" + e->name + "'"};
      Subst s;
      if (def->kind == DefKind::Ordinary) {
        tick();
        for (std::size_t i = 0; i < def->params.size(); ++i) s.emplace(def->params[i], e->args[i]);
        e = substitute(def->body, s);
        continue;
      }
      Expr scrutinee = whnf(e->args.front());
      const Clause* c = def->find_clause(scrutinee->name);
      if (c == nullptr || c->pattern.vars.size() != scrutinee->args.size()) {
        throw StuckSignal{"'" + def->name + "' has no clause for " + scrutinee->name};
      }
      tick();
      for (std::size_t i = 0; i < c->pattern.vars.size(); ++i) s.emplace(c->pattern.vars[i], scrutinee->args[i]);
      for (std::size_t i = 0; i < c->params.size(); ++i) s.emplace(c->params[i], e->args[i + 1]);
      e = substitute(c->body, s);
    }
  }

  const Program& program_;
  std::uint64_t fuel_;
  std::uint64_t unfolds_ = 0;
};

constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

class UnionFind {
 public:
  std::size_t make() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
};

struct Signature {
  std::size_t result;
  std::vector<std::size_t> args;
};

class SortInference {
 public:
  std::size_t expr(const Expr& e, std::map<std::string, std::size_t>& env) {
    switch (e->kind) {
      case ExprKind::Var: {
        auto it = env.find(e->name);
        if (it == env.end()) it = env.emplace(e->name, uf.make()).first;
        return it->second;
      }
      case ExprKind::Ctr: {
        const Signature& sig = ctor(e->name, e->args.size());
        for (std::size_t i = 0; i < e->args.size() && i < sig.args.size(); ++i) {
          uf.unite(expr(e->args[i], env), sig.args[i]);
        }
        return sig.result;
      }
      case ExprKind::Call: {
        const Signature& sig = fun(e->name, e->args.size());
        for (std::size_t i = 0; i < e->args.size() && i < sig.args.size(); ++i) {
          uf.unite(expr(e->args[i], env), sig.args[i]);
        }
        return sig.result;
      }
    }
    return 0;
  }

  void def(const FunDef& d) {
    const Signature& sig = fun(d.name, d.arity());
    if (d.kind == DefKind::Ordinary) {
      std::map<std::string, std::size_t> env;
      for (std::size_t i = 0; i < d.params.size(); ++i) env[d.params[i]] = sig.args[i];
      uf.unite(expr(d.body, env), sig.result);
      return;
    }
    scrutinized.push_back(sig.args.front());
    for (const auto& c : d.clauses) {
      const Signature& cs = ctor(c.pattern.ctor, c.pattern.vars.size());
      uf.unite(cs.result, sig.args.front());
      std::map<std::string, std::size_t> env;
      for (std::size_t i = 0; i < c.pattern.vars.size(); ++i) env[c.pattern.vars[i]] = cs.args[i];
      for (std::size_t i = 0; i < c.params.size(); ++i) env[c.params[i]] = sig.args[i + 1];
      uf.unite(expr(c.body, env), sig.result);
    }
  }

  const Signature& ctor(const std::string& name, std::size_t arity) { return sig(ctors, name, arity); }
  const Signature& fun(const std::string& name, std::size_t arity) { return sig(funs, name, arity); }

  UnionFind uf;
  std::map<std::string, Signature> ctors;
  std::map<std::string, Signature> funs;
  std::vector<std::size_t> scrutinized;

 private:
  const Signature& sig(std::map<std::string, Signature>& table, const std::string& name, std::size_t arity) {
    auto it = table.find(name);
    if (it != table.end()) return it->second;
    Signature s{uf.make(), {}};
    for (std::size_t i = 0; i < arity; ++i) s.args.push_back(uf.make());
    return table.emplace(name, std::move(s)).first->second;
  }
};

}  // namespace

const char* to_string(EvalStatus s) {
  switch (s) {
    case EvalStatus::Value:
      return "value";
    case EvalStatus::Timeout:
      return "timeout";
    case EvalStatus::Stuck:
      return "stuck";
  }
  return "?";
}

EvalResult eval(const Program& program, const Expr& e, std::uint64_t fuel) {
  Evaluator ev(program, fuel);
  try {
    Expr v = ev.normal_form(e);
    return EvalResult{EvalStatus::Value, std::move(v), ev.unfolds(), {}};
  } catch (const FuelSignal&) {
    return EvalResult{EvalStatus::Timeout, nullptr, ev.unfolds(), "fuel of " + std::to_string(fuel) + " exhausted"};
  } catch (const StuckSignal& s) {
    return EvalResult{EvalStatus::Stuck, nullptr, ev.unfolds(), s.message};
  }
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

Expr random_value(const std::vector<CtorSig>& ctors, std::size_t bound, std::mt19937_64& rng) {
  if (bound == 0) throw std::invalid_argument("random_value: bound must be positive");
  std::vector<const CtorSig*> fit;
  for (const auto& c : ctors) {
    if (c.arity + 1 <= bound) fit.push_back(&c);
  }
  if (fit.empty()) throw std::invalid_argument("random_value: signature has no nullary constructor");
  const CtorSig& c = *fit[pick(rng, fit.size())];
  std::size_t remaining = bound - 1;
  std::vector<Expr> args;
  for (std::size_t i = 0; i < c.arity; ++i) {
    const std::size_t reserve = c.arity - i - 1;
    Expr a = random_value(ctors, remaining - reserve, rng);
    remaining -= expr_size(a);
    args.push_back(std::move(a));
  }
  return make_ctr(c.name, std::move(args));
}

InputGenerator::InputGenerator(const Program& program, const Expr& root) {
  SortInference inf;
  for (const auto& d : program.defs()) inf.def(d);
  std::map<std::string, std::size_t> env;
  inf.expr(root, env);
  inputs_ = free_vars(root);

  std::unordered_map<std::size_t, std::size_t> ids;
  auto sort_id = [&](std::size_t tv) {
    const std::size_t r = inf.uf.find(tv);
    auto [it, fresh] = ids.emplace(r, ids.size());
    if (fresh) ctors_.emplace_back();
    return it->second;
  };
  for (const auto& [name, sig] : inf.ctors) {
    SortCtor c{name, {}};
    for (std::size_t a : sig.args) c.args.push_back(sort_id(a));
    ctors_[sort_id(sig.result)].push_back(std::move(c));
  }
  for (const auto& v : inputs_) input_sorts_.push_back(sort_id(env.at(v)));
  std::set<std::size_t> closed;
  for (std::size_t tv : inf.scrutinized) closed.insert(sort_id(tv));

  auto compute_min = [&] {
    min_size_.assign(ctors_.size(), kInfinite);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t s = 0; s < ctors_.size(); ++s) {
        for (const auto& c : ctors_[s]) {
          std::size_t n = 1;
          for (std::size_t a : c.args) {
            if (min_size_[a] == kInfinite) {
              n = kInfinite;
              break;
            }
            n += min_size_[a];
          }
          if (n < min_size_[s]) {
            min_size_[s] = n;
            changed = true;
          }
        }
      }
    }
  };
  compute_min();
  bool added = false;
  for (std::size_t s = 0; s < ctors_.size(); ++s) {
    if (min_size_[s] == kInfinite && closed.count(s) == 0) {
      ctors_[s].push_back(SortCtor{kFallbackCtor, {}});
      added = true;
    }
  }
  if (added) compute_min();
}

std::vector<CtorSig> InputGenerator::ctors_of_input(const std::string& var) const {
  std::vector<CtorSig> out;
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (inputs_[i] != var) continue;
    for (const auto& c : ctors_[input_sorts_[i]]) out.push_back(CtorSig{c.name, c.args.size()});
  }
  return out;
}

Expr InputGenerator::draw(std::size_t sort, std::size_t budget, std::mt19937_64& rng) const {
  std::vector<const SortCtor*> fit;
  for (const auto& c : ctors_[sort]) {
    std::size_t need = 1;
    for (std::size_t a : c.args) need += min_size_[a];
    if (need <= budget) fit.push_back(&c);
  }
  const SortCtor& c = *fit[pick(rng, fit.size())];
  std::size_t remaining = budget - 1;
  std::vector<Expr> args;
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    std::size_t reserve = 0;
    for (std::size_t j = i + 1; j < c.args.size(); ++j) reserve += min_size_[c.args[j]];
    Expr a = draw(c.args[i], remaining - reserve, rng);
    remaining -= expr_size(a);
    args.push_back(std::move(a));
  }
  return make_ctr(c.name, std::move(args));
}

std::map<std::string, Expr> InputGenerator::sample(std::mt19937_64& rng, std::size_t bound) const {
  std::map<std::string, Expr> out;
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    const std::size_t s = input_sorts_[i];
    if (min_size_[s] == kInfinite) {
      throw ProgramError("input '" + inputs_[i] + "' has a sort without finite values");
    }
    if (min_size_[s] > bound) {
      throw ProgramError("input '" + inputs_[i] + "' needs at least " + std::to_string(min_size_[s]) + " nodes");
    }
    out.emplace(inputs_[i], draw(s, bound, rng));
  }
  return out;
}

}  // namespace mrsc
