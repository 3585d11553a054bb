#include "mrsc/graph.hpp"

#include <stdexcept>

#include "mrsc/syntax.hpp"

namespace mrsc {
namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

ConfGraph make_node(GraphNode n) { return std::make_shared<const GraphNode>(std::move(n)); }

}  // namespace

ConfGraph make_leaf(Expr conf) {
  GraphNode n{GraphKind::Leaf, std::move(conf), {}, {}, {}, {}, nullptr, 0, {}};
  return make_node(std::move(n));
}

ConfGraph make_fold(Expr conf, unsigned back, Renaming renaming) {
  GraphNode n{GraphKind::Fold, std::move(conf), {}, {}, {}, {}, nullptr, back, std::move(renaming)};
  return make_node(std::move(n));
}

ConfGraph build_graph(const MultiStep& step, const Expr& conf, const std::vector<ConfGraph>& children) {
  if (children.size() != mdsr_sub_exps(step).size()) {
    throw std::invalid_argument("build_graph: " + std::to_string(children.size()) + " sub-graph(s) for a " +
                                kind_name(step) + " step expecting " +
                                std::to_string(mdsr_sub_exps(step).size()));
  }
  GraphNode n{GraphKind::Leaf, conf, {}, {}, {}, {}, nullptr, 0, {}};
  std::visit(overloaded{
                 [&](const step::Leaf&) { n.kind = GraphKind::Leaf; },
                 [&](const step::Con& c) {
                   n.kind = GraphKind::Con;
                   n.name = c.ctor;
                   n.children = children;
                 },
                 [&](const step::Unfold&) {
                   n.kind = GraphKind::Unfold;
                   n.children = children;
                 },
                 [&](const step::Cases& c) {
                   n.kind = GraphKind::Cases;
                   n.name = c.var;
                   for (const auto& b : c.branches) n.patterns.push_back(b.pattern);
                   n.children = children;
                 },
                 [&](const step::Let& l) {
                   n.kind = GraphKind::Let;
                   n.body = children.front();
                   for (const auto& b : l.bindings) n.let_vars.push_back(b.var);
                   n.children.assign(children.begin() + 1, children.end());
                 },
             },
             step);
  return make_node(std::move(n));
}

GraphStream::GraphStream(GraphSet gs) : gs_(std::move(gs)) {}

bool GraphStream::start_alternative() {
  const Alternative& alt = gs_->alts[alt_];
  kids_.clear();
  current_.clear();
  for (const auto& child : alt.children) {
    kids_.push_back(std::make_unique<GraphStream>(child));
    auto g = kids_.back()->next();
    if (!g) return false;
    current_.push_back(std::move(*g));
  }
  return true;
}

ConfGraph GraphStream::assemble() const { return build_graph(gs_->alts[alt_].step, gs_->conf, current_); }

std::optional<ConfGraph> GraphStream::next() {
  if (done_) return std::nullopt;
  switch (gs_->kind) {
    case GraphSetKind::None:
      done_ = true;
      return std::nullopt;
    case GraphSetKind::Fold:
      done_ = true;
      return make_fold(gs_->conf, gs_->back, gs_->renaming);
    case GraphSetKind::Build:
      break;
  }
  while (alt_ < gs_->alts.size()) {
    if (!in_alt_) {
      if (start_alternative()) {
        in_alt_ = true;
        return assemble();
      }
      ++alt_;
      continue;
    }
    // Advance the mixed-radix counter, rightmost child fastest.
    std::size_t i = kids_.size();
    while (i > 0) {
      --i;
      if (auto g = kids_[i]->next()) {
        current_[i] = std::move(*g);
        const Alternative& alt = gs_->alts[alt_];
        for (std::size_t j = i + 1; j < kids_.size(); ++j) {
          kids_[j] = std::make_unique<GraphStream>(alt.children[j]);
          current_[j] = *kids_[j]->next();
        }
        return assemble();
      }
    }
    in_alt_ = false;
    ++alt_;
  }
  done_ = true;
  kids_.clear();
  current_.clear();
  return std::nullopt;
}

std::vector<ConfGraph> gset2graphs(const GraphSet& gs, std::size_t limit) {
  std::vector<ConfGraph> out;
  GraphStream stream(gs);
  while (out.size() < limit) {
    auto g = stream.next();
    if (!g) break;
    out.push_back(std::move(*g));
  }
  return out;
}

BigInt count_graphs(const GraphSet& gs) {
  switch (gs->kind) {
    case GraphSetKind::None:
      return 0;
    case GraphSetKind::Fold:
      return 1;
    case GraphSetKind::Build:
      break;
  }
  BigInt total = 0;
  for (const auto& alt : gs->alts) {
    BigInt product = 1;
    for (const auto& c : alt.children) {
      product *= count_graphs(c);
      if (product == 0) break;
    }
    total += product;
  }
  return total;
}

const char* to_string(SizeMode mode) { return mode == SizeMode::Standard ? "standard" : "skip-unfold"; }

std::optional<SizeMode> parse_size_mode(const std::string& s) {
  if (s == "standard") return SizeMode::Standard;
  if (s == "skip-unfold") return SizeMode::SkipUnfold;
  return std::nullopt;
}

std::uint64_t graph_size(const ConfGraph& g, SizeMode mode) {
  std::uint64_t n = (g->kind == GraphKind::Unfold && mode == SizeMode::SkipUnfold) ? 0 : 1;
  for (const auto& c : g->children) n += graph_size(c, mode);
  if (g->body) n += graph_size(g->body, mode);
  return n;
}

bool equal(const ConfGraph& a, const ConfGraph& b) {
  if (a == b) return true;
  if (a->kind != b->kind || !equal(a->conf, b->conf) || a->name != b->name || a->patterns != b->patterns ||
      a->let_vars != b->let_vars || a->back != b->back || !(a->renaming == b->renaming) ||
      a->children.size() != b->children.size() || (a->body == nullptr) != (b->body == nullptr)) {
    return false;
  }
  for (std::size_t i = 0; i < a->children.size(); ++i) {
    if (!equal(a->children[i], b->children[i])) return false;
  }
  return a->body == nullptr || equal(a->body, b->body);
}

namespace {

void dump_rec(const ConfGraph& g, int indent, const std::string& label, std::string& out) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  if (!label.empty()) out += label + ": ";
  switch (g->kind) {
    case GraphKind::Leaf:
      out += "Leaf " + to_string(g->conf) + "\n";
      return;
    case GraphKind::Fold:
      out += "Fold " + std::to_string(g->back) + " " + to_string(g->renaming) + "  [" + to_string(g->conf) + "]\n";
      return;
    case GraphKind::Con:
      out += "Con " + g->name + "  [" + to_string(g->conf) + "]\n";
      for (const auto& c : g->children) dump_rec(c, indent + 1, "", out);
      return;
    case GraphKind::Unfold:
      out += "Unfold  [" + to_string(g->conf) + "]\n";
      dump_rec(g->children.front(), indent + 1, "", out);
      return;
    case GraphKind::Cases:
      out += "Cases " + g->name + "  [" + to_string(g->conf) + "]\n";
      for (std::size_t i = 0; i < g->children.size(); ++i) {
        dump_rec(g->children[i], indent + 1, to_string(g->patterns[i]), out);
      }
      return;
    case GraphKind::Let:
      out += "Let  [" + to_string(g->conf) + "]\n";
      for (std::size_t i = 0; i < g->children.size(); ++i) dump_rec(g->children[i], indent + 1, g->let_vars[i], out);
      dump_rec(g->body, indent + 1, "in", out);
      return;
  }
}

std::optional<std::string> validate_folds_rec(const ConfGraph& g, std::vector<const GraphNode*>& path) {
  if (g->kind == GraphKind::Fold) {
    if (g->back == 0 || g->back > path.size()) {
      return "fold back distance " + std::to_string(g->back) + " exceeds depth " + std::to_string(path.size());
    }
    const GraphNode* target = path[path.size() - g->back];
    auto ren = match_var_instance(target->conf, g->conf);
    if (!ren || !(*ren == g->renaming)) {
      return "fold " + to_string(g->conf) + " is not a renaming of " + to_string(target->conf);
    }
    return std::nullopt;
  }
  path.push_back(g.get());
  std::optional<std::string> err;
  if (g->body) err = validate_folds_rec(g->body, path);
  for (std::size_t i = 0; !err && i < g->children.size(); ++i) err = validate_folds_rec(g->children[i], path);
  path.pop_back();
  return err;
}

}  // namespace

std::string dump(const ConfGraph& g) {
  std::string out;
  dump_rec(g, 0, "", out);
  return out;
}

std::optional<std::string> validate_folds(const ConfGraph& g) {
  std::vector<const GraphNode*> path;
  return validate_folds_rec(g, path);
}

}  // namespace mrsc
