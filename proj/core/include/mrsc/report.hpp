#pragma once

#include <cstdint>
#include <string>

#include "mrsc/expr.hpp"
#include "mrsc/graph.hpp"
#include "mrsc/supercompiler.hpp"

namespace mrsc {

struct SizeRow {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
};

struct RunReport {
  std::string example;
  SizeRow standard;
  SizeRow skip_unfold;
  BigInt count = 0;
  std::size_t lazy_nodes = 0;
  double build_ms = 0;
  double query_ms = 0;
};

/// Builds the lazy graph once and runs every query in both size modes.
/// Throws DrivingError when the lazy graph describes no graph at all.
RunReport analyze(const std::string& example, const Program& program, const Expr& root,
                  const MrscOptions& options = {});

std::string format_text(const RunReport& r);
std::string csv_header();
/// One CSV line; timings print as 0 unless `with_timing`.
std::string format_csv(const RunReport& r, bool with_timing = true);

}  // namespace mrsc
