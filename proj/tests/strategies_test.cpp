#include <gtest/gtest.h>

#include "support.hpp"

using namespace atrs;
using namespace atrs::testing;

namespace {

std::set<Term> as_set(const std::vector<Term>& ts) { return {ts.begin(), ts.end()}; }

std::vector<std::string> rendered_successors(const Trs& r, const Term& t, Strategy s) {
  std::vector<std::string> out;
  for (const Term& u : successors(r, t, s)) out.push_back(to_string(u));
  return out;
}

}  // namespace

TEST(Redexes, Example4InnermostSkipsRoot) {
  const Trs u = transform(r_ex4()).combined;
  const Term t = term_over("g @ a", u);
  const auto steps = redexes(u, t, Strategy::Innermost);
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_EQ(steps[0].position, Position{2});
  EXPECT_EQ(to_string(steps[0].result), "g @ b");
  // The root step to g#1(a) exists only under full rewriting.
  EXPECT_EQ(rendered_successors(u, t, Strategy::Full), (std::vector<std::string>{"g#1(a)", "g @ b"}));
}

TEST(Redexes, Example3InnermostNeverUsesRootRule) {
  const Trs r = r_ex3();
  const auto steps = redexes(r, term_over("f @ x", r, {"x"}), Strategy::Innermost);
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_EQ(steps[0].rule_index, 1u);
  EXPECT_EQ(steps[0].position, Position{1});
}

TEST(Redexes, NormalFormsHaveNone) {
  const Trs r = r_add();
  for (Strategy s : {Strategy::Full, Strategy::Innermost, Strategy::RightmostInnermost}) {
    EXPECT_TRUE(redexes(r, term_over("s @ (s @ 0)", r), s).empty());
  }
}

TEST(Redexes, StepsAreConsistent) {
  const Trs r = r_add();
  const Rewriter rw(r);
  for (const Term& t : enumerate_terms(r.signature(), 7, 2)) {
    for (const RewriteStep& s : rw.steps(t, Strategy::Full)) {
      EXPECT_EQ(subterm_at(t, s.position), substitute(r[s.rule_index].lhs(), s.matcher));
      EXPECT_EQ(s.result, replace(t, s.position, substitute(r[s.rule_index].rhs(), s.matcher)));
    }
  }
}

TEST(RightmostInnermost, Positions) {
  const Trs ex4 = r_ex4();
  EXPECT_EQ(rightmost_innermost_position(ex4, term_over("f @ a", ex4)), Position{2});
  const Trs add = r_add();
  EXPECT_EQ(rightmost_innermost_position(add, term_over("add @ 0 @ (s @ 0)", add)), Position{});
  EXPECT_EQ(rightmost_innermost_position(add, term_over("s @ 0", add)), std::nullopt);
}

TEST(Successors, Example4) {
  const Trs r = r_ex4();
  const Term t = term_over("f @ a", r);
  EXPECT_EQ(rendered_successors(r, t, Strategy::Full), (std::vector<std::string>{"g @ a", "f @ b"}));
  EXPECT_EQ(rendered_successors(r, t, Strategy::RightmostInnermost), (std::vector<std::string>{"f @ b"}));
}

TEST(Successors, AgreeWithReferenceAndNest) {
  for (const Trs& r : {r_add(), r_ex4(), r_exp(), r_ex5(), transform(r_add()).combined, transform(r_exp()).combined}) {
    for (const Term& t : enumerate_terms(r.signature(), 6, 2)) {
      const auto full = as_set(successors(r, t, Strategy::Full));
      const auto inner = as_set(successors(r, t, Strategy::Innermost));
      const auto ri = as_set(successors(r, t, Strategy::RightmostInnermost));
      EXPECT_EQ(full, naive_reducts(r, t, false)) << to_string(t);
      EXPECT_EQ(inner, naive_reducts(r, t, true)) << to_string(t);
      EXPECT_TRUE(std::includes(full.begin(), full.end(), inner.begin(), inner.end()));
      EXPECT_TRUE(std::includes(inner.begin(), inner.end(), ri.begin(), ri.end()));
      EXPECT_EQ(ri.empty(), inner.empty());
    }
  }
}

TEST(RightmostInnermost, InnermostRedexesAreParallelAndRightmostIsUnique) {
  for (const Trs& r : {r_add(), r_ex4(), transform(r_add()).combined}) {
    const Rewriter rw(r);
    for (const Term& t : enumerate_terms(r.signature(), 7, 1)) {
      std::set<Position> ps;
      for (const RewriteStep& s : rw.steps(t, Strategy::Innermost)) ps.insert(s.position);
      for (const Position& p : ps) {
        for (const Position& q : ps) {
          if (p != q) {
            EXPECT_TRUE(p.is_parallel_to(q));
          }
        }
      }
      std::set<Position> ri;
      for (const RewriteStep& s : rw.steps(t, Strategy::RightmostInnermost)) ri.insert(s.position);
      EXPECT_LE(ri.size(), 1u);
      if (ri.empty()) continue;
      const Position& chosen = *ri.begin();
      for (const Position& q : ps) {
        if (q != chosen) {
          EXPECT_TRUE(right_of(chosen, q));
        }
      }
    }
  }
}

TEST(Relative, Successors) {
  const TransformResult tr = transform(r_add());
  const Term t = term_over("add @ 0 @ (s @ 0)", tr.combined);
  std::vector<std::string> out;
  for (const Term& u : relative_successors(tr.uncurried_eta, tr.u_rules, t, 1000)) out.push_back(to_string(u));
  EXPECT_NE(std::find(out.begin(), out.end(), "s#1(add#2(0, 0))"), out.end());

  const Trs r = r_add();
  const Term a = term_over("add @ (add @ 0 @ 0) @ (s @ 0)", r);
  EXPECT_EQ(as_set(relative_successors(r, Trs{}, a, 100)), as_set(successors(r, a, Strategy::Full)));
  EXPECT_TRUE(relative_successors(Trs{}, tr.u_rules, t, 100).empty());
}

TEST(Normalize, Outcomes) {
  const Trs add = r_add();
  auto nf = normalize(add, term_over("add @ 0 @ (s @ 0)", add), Strategy::Innermost, 50);
  ASSERT_TRUE(nf.finished());
  EXPECT_EQ(to_string(nf.value()), "s @ 0");

  const Trs u3 = transform(r_ex3()).combined;
  auto loop = normalize(u3, parse_term("f#1(x)", {"x"}, u3.signature()), Strategy::Innermost, 50);
  ASSERT_TRUE(loop.loop());
  EXPECT_EQ(to_string(loop.witness().start), "f#1(x)");
  ASSERT_EQ(loop.witness().trace.size(), 1u);
  EXPECT_EQ(to_string(loop.witness().trace[0].result), "f#1(x)");

  const Term n = term_over("s @ 0", add);
  auto done = normalize(add, n, Strategy::Full, 1);
  ASSERT_TRUE(done.finished());
  EXPECT_EQ(done.value(), n);

  const Trs grow = trs("(VAR x) (RULES a -> s(a))");
  EXPECT_TRUE(normalize(grow, term("a"), Strategy::Full, 20).exhausted());
}

TEST(DerivationHeight, Examples) {
  const Trs add = r_add();
  EXPECT_EQ(value(derivation_height(add, term_over("add @ 0 @ (s @ 0)", add), Strategy::Full, 100)), 2u);
  EXPECT_EQ(value(derivation_height(add, term_over("s @ 0", add), Strategy::Innermost, 100)), 0u);
  const Trs u = transform(r_exp()).combined;
  EXPECT_GE(value(derivation_height(u, parse_term("f#1(s#1(x))", {"x"}, u.signature()), Strategy::Innermost, 1000)),
            2u);
  const Trs u3 = transform(r_ex3()).combined;
  EXPECT_TRUE(derivation_height(u3, parse_term("f#1(x)", {"x"}, u3.signature()), Strategy::Full, 100).loop());
  const Trs grow = trs("(VAR x) (RULES a -> s(a))");
  EXPECT_TRUE(derivation_height(grow, term("a"), Strategy::Full, 30).exhausted());
}

TEST(DerivationHeight, AgreesWithReference) {
  for (const Trs& r : {r_add(), r_ex4(), r_exp(), transform(r_add()).combined, transform(r_ex4()).combined}) {
    HeightSolver full = HeightSolver::for_strategy(r, Strategy::Full);
    HeightSolver inner = HeightSolver::for_strategy(r, Strategy::Innermost);
    for (const Term& t : enumerate_terms(r.signature(), 6, 2)) {
      EXPECT_EQ(value(full.height(t, 100000)), naive_dh(r, t, false)) << to_string(t);
      EXPECT_EQ(value(inner.height(t, 100000)), naive_dh(r, t, true)) << to_string(t);
    }
  }
}

TEST(DerivationHeight, InnermostEqualsRightmostInnermost) {
  for (const Trs& r : {r_ex4(), r_add(), r_exp()}) {
    HeightSolver inner = HeightSolver::for_strategy(r, Strategy::Innermost);
    HeightSolver ri = HeightSolver::for_strategy(r, Strategy::RightmostInnermost);
    for (const Term& t : enumerate_terms(r.signature(), 6, 2)) {
      EXPECT_EQ(value(inner.height(t, 100000)), value(ri.height(t, 100000))) << to_string(t);
    }
  }
}

TEST(LoopDetection, Example3) {
  const auto source = detect_innermost_nontermination(r_ex3(), 5, 1000);
  EXPECT_FALSE(source.witness);
  EXPECT_EQ(source.exhausted, 0u);
  EXPECT_GT(source.terms_checked, 0u);

  const auto uncurried = detect_innermost_nontermination(transform(r_ex3()).combined, 5, 1000);
  ASSERT_TRUE(uncurried.witness);
  EXPECT_EQ(to_string(uncurried.witness->start), "f#1(x)");

  EXPECT_FALSE(detect_innermost_nontermination(Trs{}, 5, 1000).witness);
}
