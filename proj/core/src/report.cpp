#include "mrsc/report.hpp"

#include <chrono>
#include <cstdio>

#include "mrsc/error.hpp"
#include "mrsc/queries.hpp"

namespace mrsc {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

RunReport analyze(const std::string& example, const Program& program, const Expr& root, const MrscOptions& options) {
  RunReport r;
  r.example = example;
  auto t0 = Clock::now();
  const GraphSet gs = mrscp(program, root, options);
  r.build_ms = ms_since(t0);
  r.lazy_nodes = graph_set_node_count(gs);

  t0 = Clock::now();
  const auto first = first_graph(gs);
  const auto last = last_graph(gs);
  if (!first || !last) throw DrivingError("the lazy graph of " + example + " contains no configuration graph");
  for (SizeMode mode : {SizeMode::Standard, SizeMode::SkipUnfold}) {
    SizeRow& row = mode == SizeMode::Standard ? r.standard : r.skip_unfold;
    row.first = graph_size(*first, mode);
    row.last = graph_size(*last, mode);
    row.min = min_size_graph(gs, mode)->size;
    row.max = max_size_graph(gs, mode)->size;
  }
  r.count = count_graphs(gs);
  r.query_ms = ms_since(t0);
  return r;
}

std::string format_text(const RunReport& r) {
  std::string out = r.example + ": lazy graph of " + std::to_string(r.lazy_nodes) + " node(s), " +
                    r.count.str() + " configuration graph(s)\n";
  out += "mode         " + pad("first", 7) + pad("last", 7) + pad("min", 7) + pad("max", 7) + "\n";
  auto line = [&](const char* name, const SizeRow& s) {
    std::string l = name;
    l.resize(13, ' ');
    return l + pad(std::to_string(s.first), 7) + pad(std::to_string(s.last), 7) + pad(std::to_string(s.min), 7) +
           pad(std::to_string(s.max), 7) + "\n";
  };
  out += line("standard", r.standard);
  out += line("skip-unfold", r.skip_unfold);
  out += "build " + fixed(r.build_ms, 1) + " ms, queries " + fixed(r.query_ms, 1) + " ms\n";
  return out;
}

std::string csv_header() {
  return "example,first,last,min,max,min_skip_unfold,max_skip_unfold,count,build_ms,query_ms\n";
}

std::string format_csv(const RunReport& r, bool with_timing) {
  const auto& s = r.standard;
  return r.example + "," + std::to_string(s.first) + "," + std::to_string(s.last) + "," + std::to_string(s.min) + "," +
         std::to_string(s.max) + "," + std::to_string(r.skip_unfold.min) + "," + std::to_string(r.skip_unfold.max) +
         "," + r.count.str() + "," + fixed(with_timing ? r.build_ms : 0.0, 3) + "," +
         fixed(with_timing ? r.query_ms : 0.0, 3) + "\n";
}

}  // namespace mrsc
