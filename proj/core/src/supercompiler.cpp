#include "mrsc/supercompiler.hpp"

#include <algorithm>

#include "mrsc/error.hpp"
#include "mrsc/syntax.hpp"

namespace mrsc {

GraphSet make_gs_none() {
  static const GraphSet none = std::make_shared<const GraphSetNode>();
  return none;
}

GraphSet make_gs_fold(Expr conf, unsigned back, Renaming renaming) {
  GraphSetNode n;
  n.kind = GraphSetKind::Fold;
  n.conf = std::move(conf);
  n.back = back;
  n.renaming = std::move(renaming);
  return std::make_shared<const GraphSetNode>(std::move(n));
}

GraphSet make_gs_build(Expr conf, std::vector<Alternative> alts) {
  GraphSetNode n;
  n.kind = GraphSetKind::Build;
  n.conf = std::move(conf);
  n.alts = std::move(alts);
  return std::make_shared<const GraphSetNode>(std::move(n));
}

std::optional<FoldMatch> fold_check(const std::vector<HistoryEntry>& history, unsigned level, const Expr& conf,
                                    bool injective) {
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    auto ren = injective ? match_renaming(it->conf, conf) : match_var_instance(it->conf, conf);
    if (ren) {
      return FoldMatch{level - it->level, std::move(*ren)};
    }
  }
  return std::nullopt;
}

bool whistle_check(const std::vector<HistoryEntry>& relevant, const Expr& conf) {
  return std::any_of(relevant.begin(), relevant.end(), [&](const HistoryEntry& h) { return embeds(h.conf, conf); });
}

std::vector<HistoryEntry> relevant_history(const std::vector<HistoryEntry>& history, HistoryKind kind) {
  std::vector<HistoryEntry> out;
  if (kind == HistoryKind::Global) {
    std::copy_if(history.begin(), history.end(), std::back_inserter(out),
                 [](const HistoryEntry& h) { return h.kind == HistoryKind::Global; });
    return out;
  }
  auto it = history.rbegin();
  while (it != history.rend() && it->kind == HistoryKind::Local) ++it;
  out.assign(it.base(), history.end());
  return out;
}

namespace {

class Supercompiler {
 public:
  Supercompiler(const Program& program, NameSupply& names, const MrscOptions& options, MrscStats& stats)
      : driver_(program, names), options_(options), stats_(stats) {}

  GraphSet run(unsigned level, const Expr& conf) {
    ++stats_.steps;
    stats_.max_level = std::max(stats_.max_level, level);
    if (options_.step_budget && stats_.steps > *options_.step_budget) {
      throw ResourceLimitError("step budget of " + std::to_string(*options_.step_budget) + " exceeded");
    }
    if (options_.max_depth && level > *options_.max_depth) {
      throw ResourceLimitError("depth cap of " + std::to_string(*options_.max_depth) + " exceeded at " +
                               to_string(conf));
    }

    if (auto fold = fold_check(history_, level, conf, options_.injective_folds)) {
      return make_gs_fold(conf, fold->back, std::move(fold->renaming));
    }

    std::vector<MultiStep> steps = driver_.multi_drive(conf);
    const bool global = std::any_of(steps.begin(), steps.end(), [](const MultiStep& s) { return is_cases(s); });
    const HistoryKind kind = global ? HistoryKind::Global : HistoryKind::Local;
    if (whistle_blows(kind, conf)) return make_gs_none();

    history_.push_back(HistoryEntry{kind, level, conf});
    std::vector<Alternative> alts;
    alts.reserve(steps.size());
    for (auto& s : steps) {
      std::vector<GraphSet> children;
      for (const auto& sub : mdsr_sub_exps(s)) children.push_back(run(level + 1, sub));
      alts.push_back(Alternative{std::move(s), std::move(children)});
    }
    history_.pop_back();
    return make_gs_build(conf, std::move(alts));
  }

 private:
  bool whistle_blows(HistoryKind kind, const Expr& conf) const {
    if (kind == HistoryKind::Global) {
      return std::any_of(history_.begin(), history_.end(), [&](const HistoryEntry& h) {
        return h.kind == HistoryKind::Global && embeds(h.conf, conf);
      });
    }
    for (auto it = history_.rbegin(); it != history_.rend() && it->kind == HistoryKind::Local; ++it) {
      if (embeds(it->conf, conf)) return true;
    }
    return false;
  }

  Driver driver_;
  const MrscOptions& options_;
  MrscStats& stats_;
  std::vector<HistoryEntry> history_;  // oldest first
};

void count_nodes(const GraphSet& gs, std::size_t& n) {
  ++n;
  for (const auto& alt : gs->alts) {
    for (const auto& c : alt.children) count_nodes(c, n);
  }
}

std::optional<std::string> validate_rec(const GraphSet& gs, std::vector<const GraphSetNode*>& path) {
  switch (gs->kind) {
    case GraphSetKind::None:
      return std::nullopt;
    case GraphSetKind::Fold: {
      if (gs->back == 0 || gs->back > path.size()) {
        return "fold at " + to_string(gs->conf) + " has back distance " + std::to_string(gs->back) +
               " beyond depth " + std::to_string(path.size());
      }
      const GraphSetNode* target = path[path.size() - gs->back];
      auto ren = match_var_instance(target->conf, gs->conf);
      if (!ren || !(*ren == gs->renaming)) {
        return "fold at " + to_string(gs->conf) + " does not rename its target " + to_string(target->conf);
      }
      return std::nullopt;
    }
    case GraphSetKind::Build:
      break;
  }
  if (gs->alts.empty()) return "build node without alternatives at " + to_string(gs->conf);
  if (gs->alts.size() > 1 && !is_let(gs->alts.front().step)) {
    return "first of several alternatives is not a generalization at " + to_string(gs->conf);
  }
  path.push_back(gs.get());
  for (const auto& alt : gs->alts) {
    if (alt.children.size() != mdsr_sub_exps(alt.step).size()) {
      path.pop_back();
      return "child count mismatch at " + to_string(gs->conf);
    }
    for (const auto& c : alt.children) {
      if (auto err = validate_rec(c, path)) {
        path.pop_back();
        return err;
      }
    }
  }
  path.pop_back();
  return std::nullopt;
}

}  // namespace

GraphSet mrscp(const Program& program, const Expr& conf, const MrscOptions& options, MrscStats* stats) {
  NameSupply names(program.identifiers());
  names.reserve_all(conf);
  MrscStats local;
  Supercompiler sc(program, names, options, stats != nullptr ? *stats : local);
  return sc.run(0, conf);
}

std::size_t graph_set_node_count(const GraphSet& gs) {
  std::size_t n = 0;
  count_nodes(gs, n);
  return n;
}

std::optional<std::string> validate_graph_set(const GraphSet& gs) {
  std::vector<const GraphSetNode*> path;
  return validate_rec(gs, path);
}

}  // namespace mrsc
