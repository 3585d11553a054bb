#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mrsc/driving.hpp"
#include "mrsc/expr.hpp"

namespace mrsc {

enum class HistoryKind { Local, Global };

struct HistoryEntry {
  HistoryKind kind;
  unsigned level;
  Expr conf;
};

struct GraphSetNode;

/// Lazy graph: a compact description of every configuration graph MRSC
/// produced for a configuration. Immutable and shareable.
using GraphSet = std::shared_ptr<const GraphSetNode>;

struct Alternative {
  MultiStep step;
  std::vector<GraphSet> children;  // one per mdsr_sub_exps(step)
};

enum class GraphSetKind { None, Fold, Build };

struct GraphSetNode {
  GraphSetKind kind = GraphSetKind::None;
  Expr conf;                      // null for None
  unsigned back = 0;              // Fold: distance to the target ancestor
  Renaming renaming;              // Fold: target conf -> this conf
  std::vector<Alternative> alts;  // Build
};

GraphSet make_gs_none();
GraphSet make_gs_fold(Expr conf, unsigned back, Renaming renaming);
GraphSet make_gs_build(Expr conf, std::vector<Alternative> alts);

struct FoldMatch {
  unsigned back;
  Renaming renaming;
};

/// Most recent history entry (of either kind) that `conf` is a renaming of.
/// Unless `injective` is set, the renaming may merge variables.
std::optional<FoldMatch> fold_check(const std::vector<HistoryEntry>& history, unsigned level, const Expr& conf,
                                    bool injective = false);

/// True iff some entry's configuration is embedded in `conf`.
bool whistle_check(const std::vector<HistoryEntry>& relevant, const Expr& conf);

/// Entries the whistle compares against. `history` is ordered oldest
/// first; the result keeps that order.
std::vector<HistoryEntry> relevant_history(const std::vector<HistoryEntry>& history, HistoryKind kind);

struct MrscOptions {
  /// Abort with ResourceLimitError past this nesting level.
  std::optional<unsigned> max_depth;
  /// Abort with ResourceLimitError after this many configurations.
  std::optional<std::uint64_t> step_budget;
  /// Fold only through injective renamings.
  bool injective_folds = false;
};

struct MrscStats {
  std::uint64_t steps = 0;       // configurations visited
  unsigned max_level = 0;
};

/// Builds the lazy graph of `conf`. Fresh variables are drawn from a name
/// supply reserved past every identifier of the program and of `conf`.
GraphSet mrscp(const Program& program, const Expr& conf, const MrscOptions& options = {},
               MrscStats* stats = nullptr);

/// Number of GraphSet nodes (None, Fold and Build each count one).
std::size_t graph_set_node_count(const GraphSet& gs);

/// Checks the structural invariants of a lazy graph: every fold points to
/// a proper ancestor whose configuration maps to the fold's, child
/// counts match the step's sub-expressions, and multi-alternative nodes
/// start with a generalization. Returns a description of the first
/// violation, or nullopt.
std::optional<std::string> validate_graph_set(const GraphSet& gs);

}  // namespace mrsc
