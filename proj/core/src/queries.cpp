#include "mrsc/queries.hpp"

#include <unordered_map>

namespace mrsc {
namespace {

bool nonempty(const GraphSet& gs, std::unordered_map<const GraphSetNode*, bool>& memo) {
  if (gs->kind == GraphSetKind::None) return false;
  if (gs->kind == GraphSetKind::Fold) return true;
  auto it = memo.find(gs.get());
  if (it != memo.end()) return it->second;
  bool any = false;
  for (const auto& alt : gs->alts) {
    bool all = true;
    for (const auto& c : alt.children) {
      if (!nonempty(c, memo)) {
        all = false;
        break;
      }
    }
    if (all) {
      any = true;
      break;
    }
  }
  memo.emplace(gs.get(), any);
  return any;
}

template <class Pick>
std::optional<ConfGraph> pick_graph(const GraphSet& gs, std::unordered_map<const GraphSetNode*, bool>& memo,
                                    Pick pick) {
  if (gs->kind == GraphSetKind::None) return std::nullopt;
  if (gs->kind == GraphSetKind::Fold) return make_fold(gs->conf, gs->back, gs->renaming);
  auto viable = [&](const Alternative& alt) {
    for (const auto& c : alt.children) {
      if (!nonempty(c, memo)) return false;
    }
    return true;
  };
  const Alternative* chosen = pick(gs->alts, viable);
  if (chosen == nullptr) return std::nullopt;
  std::vector<ConfGraph> kids;
  for (const auto& c : chosen->children) kids.push_back(*pick_graph(c, memo, pick));
  return build_graph(chosen->step, gs->conf, kids);
}

std::uint64_t own_cost(const MultiStep& step, SizeMode mode) {
  return (mode == SizeMode::SkipUnfold && std::holds_alternative<step::Unfold>(step)) ? 0 : 1;
}

class Extremum {
 public:
  Extremum(SizeMode mode, bool want_max) : mode_(mode), want_max_(want_max) {}

  // Best size of `gs`, or nullopt when it describes no graph.
  std::optional<std::uint64_t> best(const GraphSet& gs) {
    if (gs->kind == GraphSetKind::None) return std::nullopt;
    if (gs->kind == GraphSetKind::Fold) return 1;
    auto it = memo_.find(gs.get());
    if (it != memo_.end()) return it->second.size;
    Entry e;
    for (std::size_t a = 0; a < gs->alts.size(); ++a) {
      const Alternative& alt = gs->alts[a];
      std::uint64_t total = own_cost(alt.step, mode_);
      bool ok = true;
      for (const auto& c : alt.children) {
        auto s = best(c);
        if (!s) {
          ok = false;
          break;
        }
        total += *s;
      }
      if (!ok) continue;
      if (!e.size || (want_max_ ? total > *e.size : total < *e.size)) {
        e.size = total;
        e.alt = a;
      }
    }
    memo_.emplace(gs.get(), e);
    return e.size;
  }

  ConfGraph witness(const GraphSet& gs) {
    if (gs->kind == GraphSetKind::Fold) return make_fold(gs->conf, gs->back, gs->renaming);
    best(gs);
    const Alternative& alt = gs->alts[memo_.at(gs.get()).alt];
    std::vector<ConfGraph> kids;
    for (const auto& c : alt.children) kids.push_back(witness(c));
    return build_graph(alt.step, gs->conf, kids);
  }

 private:
  struct Entry {
    std::optional<std::uint64_t> size;
    std::size_t alt = 0;
  };
  SizeMode mode_;
  bool want_max_;
  std::unordered_map<const GraphSetNode*, Entry> memo_;
};

std::optional<QueryResult> extremum(const GraphSet& gs, SizeMode mode, bool want_max) {
  Extremum ex(mode, want_max);
  auto size = ex.best(gs);
  if (!size) return std::nullopt;
  return QueryResult{*size, ex.witness(gs)};
}

}  // namespace

bool has_graphs(const GraphSet& gs) {
  std::unordered_map<const GraphSetNode*, bool> memo;
  return nonempty(gs, memo);
}

std::optional<ConfGraph> first_graph(const GraphSet& gs) {
  std::unordered_map<const GraphSetNode*, bool> memo;
  return pick_graph(gs, memo, [](const std::vector<Alternative>& alts, auto viable) -> const Alternative* {
    for (const auto& a : alts) {
      if (viable(a)) return &a;
    }
    return nullptr;
  });
}

std::optional<ConfGraph> last_graph(const GraphSet& gs) {
  std::unordered_map<const GraphSetNode*, bool> memo;
  return pick_graph(gs, memo, [](const std::vector<Alternative>& alts, auto viable) -> const Alternative* {
    for (auto it = alts.rbegin(); it != alts.rend(); ++it) {
      if (viable(*it)) return &*it;
    }
    return nullptr;
  });
}

std::optional<QueryResult> min_size_graph(const GraphSet& gs, SizeMode mode) { return extremum(gs, mode, false); }

std::optional<QueryResult> max_size_graph(const GraphSet& gs, SizeMode mode) { return extremum(gs, mode, true); }

}  // namespace mrsc
