// Acceptance report: one PASS/FAIL line per criterion, details indented
// below it.

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mrsc/check.hpp"
#include "mrsc/error.hpp"
#include "mrsc/graph.hpp"
#include "mrsc/interpreter.hpp"
#include "mrsc/queries.hpp"
#include "mrsc/report.hpp"
#include "mrsc/residualizer.hpp"
#include "mrsc/supercompiler.hpp"
#include "mrsc/syntax.hpp"
#include "random_program.hpp"
#include "support.hpp"

namespace {

using namespace mrsc;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kDocumentedCellTolerance = 0.15;  // criterion 1, documented cells only
constexpr double kSmallExampleSeconds = 1.0;
constexpr double kKmpTotalSeconds = 60.0;
constexpr std::size_t kEnumerationOracleLimit = 100000;
constexpr std::size_t kTrials = 100;
constexpr std::size_t kInputBound = 8;
constexpr std::uint64_t kFuel = 100000;
constexpr std::uint64_t kSeed = 0;
constexpr std::size_t kMinCompared = 50;
constexpr unsigned kExpMaxN = 8;
constexpr double kExpSlope = 5.0;
constexpr std::uint64_t kExpSizeAt3 = 15;
constexpr std::size_t kKmpLength = 50;
constexpr std::size_t kKmpSamples = 20;
constexpr double kKmpRatioLow = 1.6;
constexpr double kKmpRatioHigh = 2.4;
constexpr double kQuerySeconds = 10.0;
constexpr double kEnumerateSeconds = 10.0;
constexpr std::size_t kRandomPrograms = 1000;
constexpr std::uint64_t kStepBudget = 10000000;
constexpr rlim_t kProbeMemoryBytes = rlim_t{3} << 30;

bool g_all_programs = false;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Criterion {
  bool ok = true;
  std::vector<std::string> details;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    details.push_back(std::string(cond ? "ok    " : "FAILED") + "  " + what);
  }
  void info(const std::string& what) { details.push_back("info    " + what); }
};

std::set<int> failed;

void report(int id, const std::string& title, const std::function<void(Criterion&)>& body) {
  Criterion c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  std::printf("[%s] %d. %s\n", c.ok ? "PASS" : "FAIL", id, title.c_str());
  for (const auto& d : c.details) std::printf("        %s\n", d.c_str());
  std::fflush(stdout);
  if (!c.ok) failed.insert(id);
}

struct Loaded {
  testing::Example ex;
  GraphSet gs;
};

std::map<std::string, Loaded>& cache() {
  static std::map<std::string, Loaded> c;
  return c;
}

const Loaded& load(const std::string& name) {
  auto it = cache().find(name);
  if (it == cache().end()) {
    testing::Example e = testing::corpus(name);
    GraphSet gs = mrscp(e.program, e.root);
    it = cache().emplace(name, Loaded{std::move(e), std::move(gs)}).first;
  }
  return it->second;
}

ConfGraph select(const GraphSet& gs, const std::string& sel, SizeMode mode = SizeMode::Standard) {
  if (sel == "first") return *first_graph(gs);
  if (sel == "last") return *last_graph(gs);
  if (sel == "min") return min_size_graph(gs, mode)->graph;
  return max_size_graph(gs, mode)->graph;
}

const std::vector<std::string> kExamples = {"double_append", "exp_growth", "eqbool_sym", "kmp"};

void reference_sizes(Criterion& c) {
  struct Expected {
    const char* name;
    std::uint64_t v[4];
    bool documented[4];  // cells allowed the documented tolerance
  };
  const Expected rows[] = {
      {"double_append", {12, 10, 10, 19}, {false, false, false, false}},
      {"exp_growth", {15, 37, 15, 57}, {false, false, false, false}},
      {"eqbool_sym", {16, 17, 16, 30}, {false, false, false, false}},
      // max: fold renamings may merge variables; see the README.
      {"kmp", {203, 39, 38, 1055}, {false, false, false, true}},
  };
  static const char* cols[] = {"first", "last", "min", "max"};
  for (const auto& row : rows) {
    const testing::Example e = testing::corpus(row.name);
    const auto t0 = Clock::now();
    const RunReport r = analyze(row.name, e.program, e.root);
    const double secs = seconds_since(t0);
    const std::uint64_t got[4] = {r.standard.first, r.standard.last, r.standard.min, r.standard.max};
    for (int i = 0; i < 4; ++i) {
      const double dev = (static_cast<double>(got[i]) - static_cast<double>(row.v[i])) / row.v[i];
      if (got[i] == row.v[i]) {
        c.require(true, fmt("%s %s = %llu", row.name, cols[i], static_cast<unsigned long long>(got[i])));
      } else if (row.documented[i]) {
        c.require(std::fabs(dev) <= kDocumentedCellTolerance,
                  fmt("%s %s = %llu, reference %llu, deviation %+.2f%% (documented, tolerance %.0f%%)", row.name, cols[i],
                      static_cast<unsigned long long>(got[i]), static_cast<unsigned long long>(row.v[i]), dev * 100,
                      kDocumentedCellTolerance * 100));
      } else {
        c.require(false, fmt("%s %s = %llu, reference %llu (exact required)", row.name, cols[i],
                             static_cast<unsigned long long>(got[i]), static_cast<unsigned long long>(row.v[i])));
      }
    }
    const double limit = std::string(row.name) == "kmp" ? kKmpTotalSeconds : kSmallExampleSeconds;
    c.require(secs < limit, fmt("%s stats in %.3f s (limit %.0f s)", row.name, secs, limit));
  }
}

void goldens(Criterion& c) {
  struct G {
    const char* example;
    const char* sel;
    SizeMode mode;
    const char* golden;
    const char* label;
  };
  const G gs[] = {
      {"double_append", "min", SizeMode::Standard, "double_append_min", "optimized double append"},
      {"kmp", "min", SizeMode::Standard, "kmp_min", "KMP specialized matcher"},
      {"eqbool_sym", "last", SizeMode::Standard, "eqbool_last", "eqBool symmetry"},
      {"exp_growth", "min", SizeMode::Standard, "exp_growth_min", "exp growth minimum"},
      {"exp_growth", "min", SizeMode::SkipUnfold, "exp_growth_min_skip_unfold", "exp growth skip-unfold minimum"},
  };
  for (const auto& g : gs) {
    const ResidualProgram r = residualize(select(load(g.example).gs, g.sel, g.mode));
    c.require(programs_alpha_equivalent(r, testing::golden(g.golden)),
              fmt("%s %s (%s) ~ %s", g.example, g.sel, to_string(g.mode), g.label));
  }
  const bool last_kmp = programs_alpha_equivalent(residualize(select(load("kmp").gs, "last")), testing::golden("kmp_min"));
  c.info(fmt("kmp last residual %s alpha-equivalent to the specialized matcher; the golden is checked against the "
             "min graph (see README)",
             last_kmp ? "is also" : "is not"));
}

void enumeration_oracle(Criterion& c) {
  for (const auto& name : kExamples) {
    const GraphSet& gs = load(name).gs;
    const BigInt count = count_graphs(gs);
    if (count > kEnumerationOracleLimit) {
      c.info(fmt("%s skipped, %s graphs", name.c_str(), count.str().c_str()));
      continue;
    }
    for (SizeMode mode : {SizeMode::Standard, SizeMode::SkipUnfold}) {
      std::uint64_t lo = UINT64_MAX;
      std::uint64_t hi = 0;
      std::size_t n = 0;
      ConfGraph front;
      ConfGraph back;
      GraphStream stream(gs);
      while (auto g = stream.next()) {
        const auto s = graph_size(*g, mode);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        if (n++ == 0) front = *g;
        back = *g;
      }
      const auto mn = min_size_graph(gs, mode)->size;
      const auto mx = max_size_graph(gs, mode)->size;
      const bool ends = equal(front, *first_graph(gs)) && equal(back, *last_graph(gs));
      c.require(BigInt(n) == count && mn == lo && mx == hi && ends,
                fmt("%s %s: %zu graphs, min %llu/%llu, max %llu/%llu, endpoints %s", name.c_str(), to_string(mode), n,
                    static_cast<unsigned long long>(mn), static_cast<unsigned long long>(lo),
                    static_cast<unsigned long long>(mx), static_cast<unsigned long long>(hi),
                    ends ? "match" : "differ"));
    }
  }
}

void semantics(Criterion& c) {
  struct Sel {
    const char* sel;
    SizeMode mode;
  };
  const Sel sels[] = {{"first", SizeMode::Standard}, {"last", SizeMode::Standard}, {"min", SizeMode::Standard},
                      {"max", SizeMode::Standard},   {"min", SizeMode::SkipUnfold}, {"max", SizeMode::SkipUnfold}};
  for (const auto& name : kExamples) {
    const Loaded& l = load(name);
    for (const auto& s : sels) {
      const ResidualProgram r = residualize(select(l.gs, s.sel, s.mode));
      const CheckReport rep = check_equivalence(l.ex.program, l.ex.root, r, {kTrials, kInputBound, kFuel, kSeed});
      c.require(rep.passed() && rep.compared >= kMinCompared,
                fmt("%s %s (%s): %zu compared, %zu mismatches, %zu stuck, %zu timeouts", name.c_str(), s.sel,
                    to_string(s.mode), rep.compared, rep.mismatches, rep.residual_stuck, rep.residual_timeout));
    }
  }
}

std::size_t count_leaves(const Expr& v, const std::string& leaf) {
  if (v->args.empty()) return v->name == leaf ? 1 : 0;
  std::size_t n = 0;
  for (const auto& a : v->args) n += count_leaves(a, leaf);
  return n;
}

void exp_growth(Criterion& c) {
  const Program p = parse_program(testing::kExpGrowth);
  std::vector<double> xs;
  std::vector<double> ys;
  std::uint64_t size1 = 0;
  for (unsigned n = 1; n <= kExpMaxN; ++n) {
    Expr list = make_ctr("Nil");
    for (unsigned i = 0; i < n; ++i) list = make_ctr("Cons", {make_ctr("A"), list});
    const Expr root = make_call("g", {list, make_var("z")});
    const GraphSet gs = mrscp(p, root);
    const ResidualProgram last = residualize(*last_graph(gs));
    const EvalResult v = eval(last.program, substitute(last.root, {{"z", make_ctr("Zed")}}), kFuel);
    const std::size_t leaves = v.status == EvalStatus::Value ? count_leaves(v.value, "Zed") : 0;
    c.require(leaves == (std::size_t{1} << n), fmt("n=%u last residual value has %zu z leaves (want %zu)", n, leaves,
                                                     std::size_t{1} << n));
    const std::uint64_t size = min_size_graph(gs)->size;
    if (n == 1) size1 = size;
    xs.push_back(n);
    ys.push_back(static_cast<double>(size));
    c.require(static_cast<double>(size) <= static_cast<double>(size1) + kExpSlope * n,
              fmt("n=%u min size %llu <= %llu + %.0f*n", n, static_cast<unsigned long long>(size),
                  static_cast<unsigned long long>(size1), kExpSlope));
    if (n == 3) c.require(size == kExpSizeAt3, fmt("n=3 min size %llu == 15", static_cast<unsigned long long>(size)));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  c.require(slope <= kExpSlope, fmt("least-squares slope of min size %.3f <= %.0f", slope, kExpSlope));
}

void called_functions(const Expr& e, std::set<std::string>& out) {
  if (is_call(e)) out.insert(e->name);
  for (const auto& a : e->args) called_functions(a, out);
}

// Subject lists that never contain the pattern True, True, False, so the
// matcher scans the whole list.
Expr subject(std::mt19937_64& rng, std::size_t length) {
  std::vector<bool> bits;
  for (std::size_t i = 0; i < length; ++i) {
    const bool forced = i >= 2 && bits[i - 1] && bits[i - 2];
    bits.push_back(forced || pick(rng, 2) == 0);
  }
  Expr list = make_ctr("Nil");
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) list = make_ctr("Cons", {make_ctr(*it ? "True" : "False"), list});
  return list;
}

void kmp_optimality(Criterion& c) {
  const Loaded& l = load("kmp");
  const std::set<std::string> forbidden = {"eqBool", "match", "matchCons", "matchHdEq", "next"};
  for (const char* sel : {"min", "last"}) {
    const ResidualProgram r = residualize(select(l.gs, sel));
    std::set<std::string> calls;
    called_functions(r.root, calls);
    for (const auto& d : r.program.defs()) {
      if (d.kind == DefKind::Ordinary) called_functions(d.body, calls);
      for (const auto& cl : d.clauses) called_functions(cl.body, calls);
    }
    std::string bad;
    for (const auto& f : calls) {
      if (forbidden.count(f)) bad += " " + f;
    }
    c.require(bad.empty(), fmt("kmp %s residual calls no source matcher function%s", sel,
                               bad.empty() ? "" : (" (calls" + bad + ")").c_str()));
    const std::string var = free_vars(r.root).front();
    std::mt19937_64 rng(kSeed);
    double unfolds[2] = {0, 0};
    bool values = true;
    for (int k = 0; k < 2; ++k) {
      for (std::size_t i = 0; i < kKmpSamples; ++i) {
        const EvalResult v = eval(r.program, substitute(r.root, {{var, subject(rng, kKmpLength << k)}}), kFuel);
        values = values && v.status == EvalStatus::Value;
        unfolds[k] += static_cast<double>(v.unfolds);
      }
      unfolds[k] /= kKmpSamples;
    }
    const double ratio = unfolds[1] / unfolds[0];
    c.require(values && ratio >= kKmpRatioLow && ratio <= kKmpRatioHigh,
              fmt("kmp %s residual: mean unfolds %.1f (L=%zu), %.1f (L=%zu), ratio %.3f in [%.1f, %.1f]", sel,
                  unfolds[0], kKmpLength, unfolds[1], kKmpLength * 2, ratio, kKmpRatioLow, kKmpRatioHigh));
  }
}

void eqbool(Criterion& c) {
  const ResidualProgram r = residualize(select(load("eqbool_sym").gs, "last"));
  for (const char* x : {"True", "False"}) {
    for (const char* y : {"True", "False"}) {
      const EvalResult v = eval(r.program, substitute(r.root, {{"x", make_ctr(x)}, {"y", make_ctr(y)}}), kFuel);
      const std::string got = v.status == EvalStatus::Value ? to_string(v.value) : to_string(v.status);
      c.require(got == "True", fmt("x=%s y=%s -> %s", x, y, got.c_str()));
    }
  }
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MRSC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void kmp_performance(Criterion& c) {
  const Loaded& l = load("kmp");
  c.info("kmp lazy graph describes " + count_graphs(l.gs).str() + " graphs");
  const std::pair<const char*, std::function<bool()>> queries[] = {
      {"first", [&] { return first_graph(l.gs).has_value(); }},
      {"last", [&] { return last_graph(l.gs).has_value(); }},
      {"min standard", [&] { return min_size_graph(l.gs, SizeMode::Standard).has_value(); }},
      {"max standard", [&] { return max_size_graph(l.gs, SizeMode::Standard).has_value(); }},
      {"min skip-unfold", [&] { return min_size_graph(l.gs, SizeMode::SkipUnfold).has_value(); }},
      {"max skip-unfold", [&] { return max_size_graph(l.gs, SizeMode::SkipUnfold).has_value(); }},
  };
  for (const auto& [name, q] : queries) {
    const auto t0 = Clock::now();
    const bool found = q();
    const double secs = seconds_since(t0);
    c.require(found && secs <= kQuerySeconds, fmt("%s query %.3f s (limit %.0f s)", name, secs, kQuerySeconds));
  }
  const auto t0 = Clock::now();
  const int code = run_cli("enumerate --limit 10 --force " + std::string(MRSC_CORPUS_DIR) + "/kmp.sll");
  const double secs = seconds_since(t0);
  c.require(code == 0 && secs <= kEnumerateSeconds,
            fmt("mrsc enumerate --limit 10 on kmp: exit %d, %.3f s (limit %.0f s)", code, secs, kEnumerateSeconds));
}

// Runs mrscp and validation in a child process so that a runaway lazy
// graph cannot take the whole report down. Reply is "ok <steps>", or a
// reason for failure.
std::string robustness_probe(const testing::RandomProgram& rp) {
  int fds[2];
  if (pipe(fds) != 0) return "pipe failed";
  const pid_t pid = fork();
  if (pid < 0) return "fork failed";
  if (pid == 0) {
    close(fds[0]);
    const rlimit mem{kProbeMemoryBytes, kProbeMemoryBytes};
    setrlimit(RLIMIT_AS, &mem);
    std::string reply;
    MrscStats stats;
    try {
      MrscOptions opts;
      opts.step_budget = kStepBudget;
      const GraphSet gs = mrscp(rp.program, rp.root, opts, &stats);
      auto problem = validate_graph_set(gs);
      reply = problem ? "invalid lazy graph: " + *problem : fmt("ok %llu", static_cast<unsigned long long>(stats.steps));
    } catch (const std::bad_alloc&) {
      reply = fmt("out of memory after %llu steps", static_cast<unsigned long long>(stats.steps));
    } catch (const std::exception& e) {
      reply = e.what();
    }
    if (write(fds[1], reply.data(), reply.size()) < 0) _exit(1);
    _exit(0);
  }
  close(fds[1]);
  std::string reply;
  char buf[512];
  for (ssize_t n; (n = read(fds[0], buf, sizeof buf)) > 0;) reply.append(buf, static_cast<std::size_t>(n));
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  if (reply.empty()) return fmt("probe died (status %d)", status);
  return reply;
}

void robustness(Criterion& c) {
  testing::ProgramGenerator gen(kSeed);
  std::size_t ok = 0;
  std::size_t tried = 0;
  std::uint64_t max_steps = 0;
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < kRandomPrograms; ++i) {
    const testing::RandomProgram rp = gen.next();
    ++tried;
    const std::string reply = robustness_probe(rp);
    if (reply.rfind("ok ", 0) == 0) {
      ++ok;
      max_steps = std::max<std::uint64_t>(max_steps, std::stoull(reply.substr(3)));
      continue;
    }
    problems.push_back(fmt("program %zu: ", i) + reply);
    if (!g_all_programs) break;
  }
  c.require(ok == kRandomPrograms, fmt("%zu/%zu random programs terminate within %llu steps with valid lazy graphs",
                                       ok, kRandomPrograms, static_cast<unsigned long long>(kStepBudget)));
  if (tried < kRandomPrograms) c.info(fmt("stopped at the first failure after %zu programs; --all runs every one", tried));
  c.info(fmt("largest successful run: %llu steps", static_cast<unsigned long long>(max_steps)));
  for (std::size_t k = 0; k < problems.size() && k < 5; ++k) c.info(problems[k]);
  if (problems.size() > 5) c.info(fmt("... %zu more", problems.size() - 5));
}

}  // namespace

// Usage: mrsc_acceptance [--all] [--expect-fail N]...
// The exit status counts criteria whose outcome differs from the
// expectation: failures not listed, and listed criteria that pass.
int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--all") {
      g_all_programs = true;
    } else if (arg == "--expect-fail" && i + 1 < argc) {
      expected.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--all] [--expect-fail N]...\n", argv[0]);
      return 64;
    }
  }
  report(1, "reference graph sizes", reference_sizes);
  report(2, "golden residual programs", goldens);
  report(3, "queries agree with brute-force enumeration", enumeration_oracle);
  report(4, "residuals agree with the original on random inputs", semantics);
  report(5, "exp growth: exponential value, linear minimum graph", exp_growth);
  report(6, "KMP residual is fully specialized and linear", kmp_optimality);
  report(7, "eqBool symmetry residual is always True", eqbool);
  report(8, "KMP query and enumeration time", kmp_performance);
  report(9, "random programs terminate with valid lazy graphs", robustness);
  std::printf("%zu of 9 criteria failed\n", failed.size());
  int unexpected = 0;
  for (int id = 1; id <= 9; ++id) {
    const bool f = failed.count(id) != 0;
    const bool e = expected.count(id) != 0;
    if (f && e) std::printf("criterion %d: known failure\n", id);
    if (f != e) {
      std::printf("criterion %d: %s\n", id, f ? "unexpected failure" : "unexpected pass");
      ++unexpected;
    }
  }
  return unexpected;
}
