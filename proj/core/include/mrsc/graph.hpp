#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mrsc/driving.hpp"
#include "mrsc/expr.hpp"
#include "mrsc/supercompiler.hpp"

namespace mrsc {

enum class GraphKind { Leaf, Con, Unfold, Cases, Fold, Let };

struct GraphNode;

/// One configuration graph. Every node remembers the configuration it was
/// built for; the residualizer needs it to name folded functions.
using ConfGraph = std::shared_ptr<const GraphNode>;

struct GraphNode {
  GraphKind kind;
  Expr conf;
  std::string name;                   // Con: constructor, Cases: scrutinee variable
  std::vector<Pattern> patterns;      // Cases: one per child
  std::vector<std::string> let_vars;  // Let: one per child
  std::vector<ConfGraph> children;    // Con args, Unfold child, Cases branches, Let bindings
  ConfGraph body;                     // Let only
  unsigned back = 0;                  // Fold only
  Renaming renaming;                  // Fold only
};

ConfGraph make_leaf(Expr conf);
ConfGraph make_fold(Expr conf, unsigned back, Renaming renaming);

/// Assembles a node from a step and its sub-graphs, which arrive in
/// mdsr_sub_exps order (for Let: body first). Throws std::invalid_argument
/// on a count mismatch.
ConfGraph build_graph(const MultiStep& step, const Expr& conf, const std::vector<ConfGraph>& children);

/// Pull-based enumeration of every graph described by a lazy graph.
/// Alternatives come in order; within one alternative the cartesian
/// product runs with the leftmost child most significant. Single consumer.
class GraphStream {
 public:
  explicit GraphStream(GraphSet gs);
  GraphStream(const GraphStream&) = delete;
  GraphStream& operator=(const GraphStream&) = delete;

  std::optional<ConfGraph> next();

 private:
  bool start_alternative();
  ConfGraph assemble() const;

  GraphSet gs_;
  std::size_t alt_ = 0;
  bool in_alt_ = false;
  bool done_ = false;
  std::vector<std::unique_ptr<GraphStream>> kids_;
  std::vector<ConfGraph> current_;
};

std::vector<ConfGraph> gset2graphs(const GraphSet& gs, std::size_t limit = SIZE_MAX);

using BigInt = boost::multiprecision::cpp_int;

BigInt count_graphs(const GraphSet& gs);

enum class SizeMode { Standard, SkipUnfold };

const char* to_string(SizeMode mode);
std::optional<SizeMode> parse_size_mode(const std::string& s);

/// Node count; in SkipUnfold mode unfold nodes contribute nothing.
std::uint64_t graph_size(const ConfGraph& g, SizeMode mode = SizeMode::Standard);

bool equal(const ConfGraph& a, const ConfGraph& b);

/// Indented dump, one node per line.
std::string dump(const ConfGraph& g);

/// Checks that every fold resolves to an ancestor that renames to the
/// fold's configuration. Returns a description of the first problem.
std::optional<std::string> validate_folds(const ConfGraph& g);

}  // namespace mrsc
