// mrsc: multi-result supercompiler front end.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrsc/check.hpp"
#include "mrsc/error.hpp"
#include "mrsc/graph.hpp"
#include "mrsc/interpreter.hpp"
#include "mrsc/queries.hpp"
#include "mrsc/report.hpp"
#include "mrsc/residualizer.hpp"
#include "mrsc/supercompiler.hpp"
#include "mrsc/syntax.hpp"

namespace {

using namespace mrsc;

enum Exit { kOk = 0, kInputError = 1, kCheckFailed = 2, kResourceLimit = 3 };

struct InputError : Error {
  using Error::Error;
};

struct Common {
  std::string expr;
  std::string mode = "standard";
  std::optional<unsigned> max_depth;
  bool injective_folds = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  std::string name;
  Program program;
  Expr root;
};

Loaded load(const std::string& path, const std::string& expr_override) {
  SourceFile src;
  try {
    src = parse_source(slurp(path));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
  Loaded out{std::filesystem::path(path).stem().string(), std::move(src.program), nullptr};
  if (!expr_override.empty()) {
    out.root = parse_expression(expr_override);
    validate_expression(out.program, out.root);
  } else if (src.root) {
    out.root = *src.root;
  } else {
    throw InputError(path + ": no `expression:` directive and no --expr given");
  }
  return out;
}

SizeMode mode_of(const Common& c) { return *parse_size_mode(c.mode); }

MrscOptions options_of(const Common& c) {
  MrscOptions o;
  o.max_depth = c.max_depth;
  o.injective_folds = c.injective_folds;
  return o;
}

ConfGraph select_graph(const GraphSet& gs, const std::string& selector, SizeMode mode) {
  std::optional<ConfGraph> g;
  if (selector == "first") {
    g = first_graph(gs);
  } else if (selector == "last") {
    g = last_graph(gs);
  } else if (auto r = selector == "min" ? min_size_graph(gs, mode) : max_size_graph(gs, mode)) {
    g = r->graph;
  }
  if (!g) throw DrivingError("the lazy graph contains no configuration graph");
  return *g;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--expr", c.expr, "Root expression (overrides the file's `expression:` line)");
  app->add_option("--mode", c.mode, "Size measure for min/max")
      ->check(CLI::IsMember({"standard", "skip-unfold"}))
      ->capture_default_str();
  app->add_option("--max-depth", c.max_depth, "Abort when supercompilation nests deeper than N");
  app->add_flag("--injective-folds", c.injective_folds, "Fold only through injective renamings");
}

int cmd_stats(const std::vector<std::string>& files, const Common& c, const std::string& format, bool timing) {
  if (format == "csv") std::cout << csv_header();
  for (const auto& f : files) {
    Loaded in = load(f, c.expr);
    RunReport r = analyze(in.name, in.program, in.root, options_of(c));
    std::cout << (format == "csv" ? format_csv(r, timing) : format_text(r));
  }
  return kOk;
}

int cmd_residualize(const std::string& file, const Common& c, const std::string& selector, bool show_graph) {
  Loaded in = load(file, c.expr);
  const GraphSet gs = mrscp(in.program, in.root, options_of(c));
  const ConfGraph g = select_graph(gs, selector, mode_of(c));
  if (show_graph) std::cout << dump(g) << "\n";
  std::cout << to_string(residualize(g));
  return kOk;
}

int cmd_check(const std::string& file, const Common& c, const std::string& selector, const CheckOptions& opts,
              const std::string& residual_file) {
  Loaded in = load(file, c.expr);
  ResidualProgram residual;
  if (!residual_file.empty()) {
    SourceFile r;
    try {
      r = parse_source(slurp(residual_file));
    } catch (const ParseError& e) {
      throw InputError(residual_file + ":" + e.what());
    }
    if (!r.root) throw InputError(residual_file + ": residual has no `expression:` line");
    residual = ResidualProgram{std::move(r.program), *r.root};
  } else {
    const GraphSet gs = mrscp(in.program, in.root, options_of(c));
    residual = residualize(select_graph(gs, selector, mode_of(c)));
  }
  const CheckReport report = check_equivalence(in.program, in.root, residual, opts);
  std::cout << to_string(report) << "\n";
  return report.passed() ? kOk : kCheckFailed;
}

int cmd_enumerate(const std::string& file, const Common& c, std::size_t limit, bool force) {
  Loaded in = load(file, c.expr);
  const GraphSet gs = mrscp(in.program, in.root, options_of(c));
  const BigInt count = count_graphs(gs);
  std::cout << in.name << ": " << count.str() << " configuration graph(s)\n";
  if (count > limit && !force) {
    std::cout << "refusing to list more than " << limit << " graph(s); pass --force to print the first " << limit
              << "\n";
    return kOk;
  }
  GraphStream stream(gs);
  const SizeMode mode = mode_of(c);
  for (std::size_t i = 0; i < limit; ++i) {
    auto g = stream.next();
    if (!g) break;
    std::cout << "#" << i << " size " << graph_size(*g, mode) << "\n" << dump(*g);
  }
  return kOk;
}

int cmd_eval(const std::string& file, const Common& c, const std::vector<std::string>& sets, std::uint64_t fuel) {
  Loaded in = load(file, c.expr);
  Subst s;
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("--set expects VAR=VALUE, got '" + kv + "'");
    s[kv.substr(0, eq)] = parse_expression(kv.substr(eq + 1));
  }
  const EvalResult r = eval(in.program, substitute(in.root, s), fuel);
  if (r.status == EvalStatus::Value) {
    std::cout << to_string(r.value) << "\n";
  } else {
    std::cout << to_string(r.status) << ": " << r.message << "\n";
  }
  std::cout << "unfolds: " << r.unfolds << "\n";
  if (r.status == EvalStatus::Timeout) return kResourceLimit;
  return r.status == EvalStatus::Value ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-result supercompiler for a first-order functional language"};
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> files;
  std::string file;
  std::string format = "text";
  bool no_timing = false;
  std::string selector = "min";
  bool show_graph = false;
  CheckOptions check;
  std::string residual_file;
  std::size_t limit = 10;
  bool force = false;
  std::vector<std::string> sets;
  std::uint64_t fuel = kDefaultFuel;

  auto* stats = app.add_subcommand("stats", "First/last/min/max graph sizes and graph count");
  stats->add_option("files", files, "Program files")->required()->check(CLI::ExistingFile);
  add_common(stats, common);
  stats->add_option("--format", format)->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  stats->add_flag("--no-timing", no_timing, "Print zero timings so CSV output is byte-stable");

  const auto selectors = CLI::IsMember({"first", "last", "min", "max"});
  auto* resid = app.add_subcommand("residualize", "Residualize one selected graph");
  resid->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_common(resid, common);
  resid->add_option("--select", selector)->check(selectors)->capture_default_str();
  resid->add_flag("--graph", show_graph, "Also dump the selected configuration graph");

  auto* chk = app.add_subcommand("check", "Compare original and residual on random inputs");
  chk->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_common(chk, common);
  chk->add_option("--select", selector)->check(selectors)->capture_default_str();
  chk->add_option("--trials", check.trials)->capture_default_str();
  chk->add_option("--seed", check.seed)->capture_default_str();
  chk->add_option("--fuel", check.fuel)->capture_default_str();
  chk->add_option("--bound", check.bound, "Maximum input size in constructor nodes")->capture_default_str();
  chk->add_option("--residual", residual_file, "Check this residual program instead of computing one")
      ->check(CLI::ExistingFile);

  auto* en = app.add_subcommand("enumerate", "List graphs lazily in enumeration order");
  en->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_common(en, common);
  en->add_option("--limit", limit)->capture_default_str();
  en->add_flag("--force", force, "List the first graphs even when there are more than --limit");

  auto* ev = app.add_subcommand("eval", "Evaluate the root expression");
  ev->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_common(ev, common);
  ev->add_option("--set", sets, "Bind a free variable, VAR=VALUE");
  ev->add_option("--fuel", fuel)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*stats) return cmd_stats(files, common, format, !no_timing);
    if (*resid) return cmd_residualize(file, common, selector, show_graph);
    if (*chk) return cmd_check(file, common, selector, check, residual_file);
    if (*en) return cmd_enumerate(file, common, limit, force);
    if (*ev) return cmd_eval(file, common, sets, fuel);
  } catch (const ResourceLimitError& e) {
    std::cerr << "mrsc: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const Error& e) {
    std::cerr << "mrsc: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
