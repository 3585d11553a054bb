#include <gtest/gtest.h>

#include "mrsc/check.hpp"
#include "mrsc/graph.hpp"
#include "mrsc/queries.hpp"
#include "mrsc/residualizer.hpp"
#include "mrsc/supercompiler.hpp"
#include "mrsc/syntax.hpp"
#include "support.hpp"

namespace mrsc {
namespace {

using testing::ex;

Ext v(const std::string& n) { return ext_var(n); }

TEST(GraphToExt, LeafIsItsVariable) {
  const ExtProgram p = graph_to_ext(make_leaf(ex("x")));
  EXPECT_TRUE(p.defs.empty());
  EXPECT_EQ(to_string(p.root), "x");
}

TEST(GraphToExt, NoFoldsMeansNoDefinitions) {
  const testing::Example e = testing::corpus("eqbool_sym");
  const ConfGraph g = *last_graph(mrscp(e.program, e.root));
  EXPECT_TRUE(graph_to_ext(g).defs.empty());
}

TEST(GraphToExt, ExpGrowthLoopBecomesRecursiveDefinition) {
  const Program p = parse_program(testing::kExpGrowth);
  const GraphSet gs = mrscp(p, ex("g(Cons(A, Nil), z)"));
  const ConfGraph g = *first_graph(gs);
  const ExtProgram ext = graph_to_ext(g);
  ASSERT_EQ(ext.defs.size(), 1u);
  const ExtDef& d = ext.defs[0];
  EXPECT_EQ(d.params, (std::vector<std::string>{"xs0", "y0"}));
  const std::string body = to_string(d.body);
  EXPECT_NE(body.find("case"), std::string::npos) << body;
  EXPECT_NE(body.find("let"), std::string::npos) << body;
  EXPECT_NE(body.find(d.name + "("), std::string::npos) << body;
}

TEST(InlineTrivialLets, VariableBinding) {
  const Ext e = ext_let({"x"}, {v("y")}, ext_ctr("F", {v("x"), v("x")}));
  EXPECT_EQ(to_string(inline_trivial_lets(e)), "F(y, y)");
}

TEST(InlineTrivialLets, UsedOnce) {
  const Ext e = ext_let({"x"}, {ext_call("g", {v("y")})}, ext_ctr("F", {v("x")}));
  EXPECT_EQ(to_string(inline_trivial_lets(e)), "F(g(y))");
}

TEST(InlineTrivialLets, KeepsDuplicatedBinding) {
  const Ext e = ext_let({"x"}, {ext_call("g", {v("y")})}, ext_ctr("F", {v("x"), v("x")}));
  EXPECT_EQ(to_string(inline_trivial_lets(e)), to_string(e));
}

TEST(InlineTrivialLets, DropsOnlyTrivialBindings) {
  const Ext e = ext_let({"a", "b"}, {ext_call("g", {v("y")}), v("z")}, ext_ctr("F", {v("a"), v("a"), v("b")}));
  const Ext out = inline_trivial_lets(e);
  ASSERT_EQ(out->kind, ExtKind::Let);
  EXPECT_EQ(out->vars, (std::vector<std::string>{"a"}));
  EXPECT_EQ(to_string(out->body), "F(a, a, z)");
}

TEST(LiftCaseLet, PlainExpressionUnchanged) {
  const ResidualProgram r = lift_case_let(ExtProgram{{}, ext_ctr("Cons", {v("x"), ext_ctr("Nil", {})})});
  EXPECT_TRUE(r.program.empty());
  EXPECT_EQ(to_string(r.root), "Cons(x, Nil)");
}

TEST(LiftCaseLet, CaseBecomesMatchingFunction) {
  const Ext c = ext_case(v("x"), {Pattern{"True", {}}, Pattern{"False", {}}},
                         {ext_ctr("True", {}), ext_call("not", {v("y")})});
  const ResidualProgram r = lift_case_let(ExtProgram{{}, c});
  EXPECT_EQ(to_string(r.root), "main_case0(x, y)");
  const FunDef& d = r.program.at("main_case0");
  EXPECT_EQ(d.kind, DefKind::Matching);
  EXPECT_EQ(d.clauses.size(), 2u);
  EXPECT_EQ(d.clauses[1].params, (std::vector<std::string>{"y"}));
}

TEST(LiftCaseLet, LetBecomesFunction) {
  const Ext inner = ext_let({"w0"}, {ext_ctr("B", {v("z"), v("z")})}, ext_ctr("B", {v("w0"), v("w0")}));
  const Ext outer = ext_let({"w1"}, {inner}, ext_ctr("B", {v("w1"), v("w1")}));
  const ResidualProgram r = lift_case_let(ExtProgram{{}, outer});
  EXPECT_EQ(r.program.size(), 2u);
  const ResidualProgram merged = merge_duplicate_definitions(r);
  EXPECT_EQ(merged.program.size(), 1u);
  const ResidualProgram fig12 = testing::golden("exp_growth_min_skip_unfold");
  EXPECT_TRUE(programs_alpha_equivalent(merged, fig12)) << to_string(merged);
}

TEST(MergeDuplicates, RetargetsCallsAndReachesFixpoint) {
  const SourceFile src = parse_source(
      "a(Nil) = Nil; a(Cons(x, xs)) = Cons(x, a(xs));"
      "b(Nil) = Nil; b(Cons(y, ys)) = Cons(y, b(ys));"
      "expression: P(a(u), b(v))");
  const ResidualProgram in{src.program, *src.root};
  const ResidualProgram out = merge_duplicate_definitions(in);
  EXPECT_EQ(out.program.size(), 1u);
  EXPECT_EQ(to_string(out.root), "P(b(u), b(v))");
  EXPECT_EQ(to_string(merge_duplicate_definitions(out)), to_string(out));
}

TEST(AlphaEquivalence, DistinguishesPrograms) {
  const auto parse = [](const std::string& text) {
    SourceFile s = parse_source(text);
    return ResidualProgram{s.program, *s.root};
  };
  const ResidualProgram a = parse("f(Nil, y) = y; f(Cons(h, t), y) = Cons(h, f(t, y)); expression: f(xs, ys)");
  const ResidualProgram b = parse("g(Cons(p, q), r) = Cons(p, g(q, r)); g(Nil, s) = s; expression: g(xs, ys)");
  const ResidualProgram c = parse("g(Nil, s) = s; g(Cons(p, q), r) = Cons(p, g(r, q)); expression: g(xs, ys)");
  const ResidualProgram d = parse("f(Nil, y) = y; f(Cons(h, t), y) = Cons(h, f(t, y)); expression: f(ys, xs)");
  EXPECT_TRUE(programs_alpha_equivalent(a, b));
  EXPECT_FALSE(programs_alpha_equivalent(a, c));
  EXPECT_FALSE(programs_alpha_equivalent(a, d));
}

struct Golden {
  const char* example;
  const char* selector;
  SizeMode mode;
  const char* golden;
};

ConfGraph select(const GraphSet& gs, const std::string& sel, SizeMode mode) {
  if (sel == "first") return *first_graph(gs);
  if (sel == "last") return *last_graph(gs);
  if (sel == "min") return min_size_graph(gs, mode)->graph;
  return max_size_graph(gs, mode)->graph;
}

class GoldenResidual : public ::testing::TestWithParam<Golden> {};

TEST_P(GoldenResidual, AlphaEquivalent) {
  const Golden g = GetParam();
  const testing::Example e = testing::corpus(g.example);
  const ResidualProgram r = residualize(select(mrscp(e.program, e.root), g.selector, g.mode));
  EXPECT_TRUE(programs_alpha_equivalent(r, testing::golden(g.golden))) << to_string(r);
}

INSTANTIATE_TEST_SUITE_P(
    Corpus, GoldenResidual,
    ::testing::Values(Golden{"double_append", "min", SizeMode::Standard, "double_append_min"},
                      Golden{"double_append", "last", SizeMode::Standard, "double_append_min"},
                      Golden{"kmp", "min", SizeMode::Standard, "kmp_min"},
                      Golden{"eqbool_sym", "last", SizeMode::Standard, "eqbool_last"},
                      Golden{"exp_growth", "min", SizeMode::Standard, "exp_growth_min"},
                      Golden{"exp_growth", "min", SizeMode::SkipUnfold, "exp_growth_min_skip_unfold"}));

TEST(Residualize, OutputReparsesAndCleanupShrinks) {
  for (const char* name : {"double_append", "kmp", "eqbool_sym", "exp_growth"}) {
    const testing::Example e = testing::corpus(name);
    const GraphSet gs = mrscp(e.program, e.root);
    for (const char* sel : {"first", "last", "min", "max"}) {
      const ConfGraph g = select(gs, sel, SizeMode::Standard);
      const ResidualProgram full = residualize(g);
      const SourceFile again = parse_source(to_string(full));
      EXPECT_EQ(to_string(again.program, *again.root), to_string(full)) << name << " " << sel;
      const ResidualProgram raw = residualize(g, {false, false});
      EXPECT_LE(program_size(full.program) + expr_size(full.root), program_size(raw.program) + expr_size(raw.root))
          << name << " " << sel;
      const ResidualProgram twice = merge_duplicate_definitions(full);
      EXPECT_EQ(to_string(twice), to_string(full)) << name << " " << sel;
      EXPECT_TRUE(check_equivalence(e.program, e.root, raw, CheckOptions{30, 8, kDefaultFuel, 1}).passed());
    }
  }
}

}  // namespace
}  // namespace mrsc
