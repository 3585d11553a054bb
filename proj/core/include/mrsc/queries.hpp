#pragma once

#include <cstdint>
#include <optional>

#include "mrsc/graph.hpp"
#include "mrsc/supercompiler.hpp"

namespace mrsc {

struct QueryResult {
  std::uint64_t size;
  ConfGraph graph;
};

/// First and last graphs in enumeration order. Both run in time linear in
/// the lazy graph; no enumeration happens.
std::optional<ConfGraph> first_graph(const GraphSet& gs);
std::optional<ConfGraph> last_graph(const GraphSet& gs);

/// Smallest / largest graph under `mode`. Ties go to the alternative that
/// comes first in enumeration order.
std::optional<QueryResult> min_size_graph(const GraphSet& gs, SizeMode mode = SizeMode::Standard);
std::optional<QueryResult> max_size_graph(const GraphSet& gs, SizeMode mode = SizeMode::Standard);

bool has_graphs(const GraphSet& gs);

}  // namespace mrsc
