#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace atrs;
using namespace atrs::testing;

namespace {

const char* kPaperTmi = R"(
add#2/2 : [ [1 1; 0 1], [1 1; 0 1] ] + [0; 0]
@/2     : [ [1 1; 0 1], [1 1; 0 1] ] + [0; 0]
add#1/1 : [ [1 0; 0 1] ] + [0; 1]
s#1/1   : [ [1 0; 0 1] ] + [0; 1]
add/0   : [] + [0; 1]
s/0     : [] + [0; 1]
0/0     : [] + [0; 1]
)";

Trs uncurried_add() { return transform(r_add()).combined; }

MatrixInterp paper_tmi() { return parse_tmi(kPaperTmi, uncurried_add().signature()); }

Matrix mat(std::vector<Natural> entries) {
  const auto dim = static_cast<std::size_t>(std::lround(std::sqrt(entries.size())));
  return Matrix(dim, std::move(entries));
}

}  // namespace

TEST(Matrix, CheckedArithmetic) {
  EXPECT_EQ(checked_add(2, 3), 5u);
  EXPECT_THROW(checked_add(std::numeric_limits<Natural>::max(), 1), Error);
  EXPECT_THROW(checked_mul(Natural{1} << 40, Natural{1} << 40), Error);
  const Matrix a = mat({1, 1, 0, 1});
  EXPECT_EQ(a * a, mat({1, 2, 0, 1}));
  EXPECT_EQ((a * Vector{0, 1}), (Vector{1, 1}));
  EXPECT_TRUE(a.is_upper_triangular());
  EXPECT_FALSE(mat({1, 0, 1, 1}).is_upper_triangular());
}

TEST(Matrix, OverflowIsAnError) {
  MatrixInterp m(1);
  m.set(Symbol{"d", 1}, SymbolInterp{{Matrix(1, {Natural{1} << 62})}, {0}});
  m.set(Symbol{"c", 0}, SymbolInterp{{}, {1}});
  const Term t = term("d(d(c))");
  try {
    linearize(m, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
}

TEST(Linearize, PaperInterpretation) {
  const MatrixInterp m = paper_tmi();
  const Trs u = uncurried_add();
  const LinearForm zero = linearize(m, term_over("0", u));
  EXPECT_TRUE(zero.coefficients.empty());
  EXPECT_EQ(zero.constant, (Vector{0, 1}));
  const LinearForm x = linearize(m, term("x"));
  EXPECT_EQ(x.coefficients.at("x"), Matrix::identity(2));
  EXPECT_EQ(x.constant, (Vector{0, 0}));
  const LinearForm s = linearize(m, parse_term("s#1(x)", {"x"}, u.signature()));
  EXPECT_EQ(s.coefficients.at("x"), Matrix::identity(2));
  EXPECT_EQ(s.constant, (Vector{0, 1}));
}

TEST(Linearize, AgreesWithEvaluation) {
  const MatrixInterp m = paper_tmi();
  std::mt19937 rng(7);
  std::uniform_int_distribution<Natural> digit(0, 5);
  for (const Term& t : enumerate_terms(uncurried_add().signature(), 5, 2)) {
    for (int k = 0; k < 5; ++k) {
      std::map<std::string, Vector> alpha;
      for (const auto& v : variables(t)) alpha[v] = {digit(rng), digit(rng)};
      EXPECT_EQ(linearize(m, t).evaluate(alpha), evaluate(m, t, alpha)) << to_string(t);
    }
  }
}

TEST(Orientation, PaperInterpretationIsStrict) {
  const MatrixInterp m = paper_tmi();
  const Trs u = uncurried_add();
  ASSERT_EQ(u.size(), 5u);
  for (const Rule& r : u.rules()) EXPECT_TRUE(strictly_oriented(m, r).strict) << to_string(r);
  EXPECT_TRUE(is_monotone(m));
  EXPECT_TRUE(is_triangular(m));
}

TEST(Orientation, DuplicationIsNotDominated) {
  MatrixInterp m = paper_tmi();
  m.set(Symbol{"d", 1}, SymbolInterp{{Matrix::identity(2)}, {1, 0}});
  const Trs u = uncurried_add();
  std::vector<Symbol> sig = u.signature();
  sig.push_back(Symbol{"d", 1});
  const Rule r(parse_term("d(x)", {"x"}, sig), parse_term("add#2(x, x)", {"x"}, sig));
  const OrientationReport report = strictly_oriented(m, r);
  EXPECT_FALSE(report.strict);
  ASSERT_EQ(linearize(m, r.rhs()).coefficients.at("x"), mat({2, 2, 0, 2}));
}

TEST(Orientation, SoundOnRandomAssignments) {
  // Whenever the criterion holds, [α](l) exceeds [α](r) in the first
  // component and dominates elsewhere, for random α.
  std::mt19937 rng(42);
  std::uniform_int_distribution<Natural> digit(0, 5);
  std::uniform_int_distribution<Natural> coeff(0, 2);
  const std::vector<Symbol> sig{Symbol{"f", 2}, Symbol{"g", 1}, Symbol{"a", 0}};
  const auto terms = enumerate_terms(sig, 4, 2);
  std::size_t strict_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    MatrixInterp m(2);
    for (const Symbol& f : sig) {
      SymbolInterp s;
      for (std::size_t i = 0; i < f.arity; ++i) s.coefficients.push_back(mat({1, coeff(rng), 0, coeff(rng) % 2}));
      s.constant = {digit(rng), digit(rng)};
      m.set(f, s);
    }
    for (const Term& l : terms) {
      if (l.is_variable()) continue;
      for (const Term& r : terms) {
        const auto lv = variables(l);
        bool ok = true;
        for (const auto& v : variables(r)) ok = ok && std::find(lv.begin(), lv.end(), v) != lv.end();
        if (!ok) continue;
        const Rule rule(l, r);
        if (!strictly_oriented(m, rule).strict) continue;
        ++strict_seen;
        for (int k = 0; k < 200; ++k) {
          std::map<std::string, Vector> alpha;
          for (const auto& v : lv) alpha[v] = {digit(rng), digit(rng)};
          const Vector a = evaluate(m, l, alpha), b = evaluate(m, r, alpha);
          ASSERT_GT(a[0], b[0]) << to_string(rule);
          ASSERT_GE(a[1], b[1]) << to_string(rule);
        }
        if (strict_seen > 400) return;
      }
    }
  }
  EXPECT_GT(strict_seen, 0u);
}

TEST(Monotone, Checks) {
  MatrixInterp m = paper_tmi();
  EXPECT_TRUE(is_monotone(m));
  MatrixInterp zero = m;
  zero.set(Symbol{"s#1", 1}, SymbolInterp{{Matrix(2)}, {0, 1}});
  EXPECT_FALSE(is_monotone(zero));
  MatrixInterp nullary(2);
  nullary.set(Symbol{"a", 0}, SymbolInterp{{}, {1, 0}});
  EXPECT_TRUE(is_monotone(nullary));
}

TEST(Triangular, Checks) {
  MatrixInterp lower = paper_tmi();
  lower.set(Symbol{"s#1", 1}, SymbolInterp{{mat({1, 0, 1, 1})}, {0, 1}});
  EXPECT_FALSE(is_triangular(lower));
  MatrixInterp big = paper_tmi();
  big.set(Symbol{"s#1", 1}, SymbolInterp{{mat({1, 0, 0, 2})}, {0, 1}});
  EXPECT_FALSE(is_triangular(big));
}

TEST(CheckTmi, PaperCertificate) {
  const Certificate cert = check_tmi(paper_tmi(), uncurried_add());
  EXPECT_EQ(cert.kind, CertificateKind::UpperBound);
  EXPECT_EQ(cert.degree, 2u);
  EXPECT_TRUE(cert.monotone);
  EXPECT_TRUE(cert.triangular);
}

TEST(CheckTmi, ZeroWithoutStrictDecreaseFails) {
  MatrixInterp m = paper_tmi();
  m.set(Symbol{"0", 0}, SymbolInterp{{}, {0, 0}});
  const Certificate cert = check_tmi(m, uncurried_add());
  EXPECT_EQ(cert.kind, CertificateKind::Failed);
  ASSERT_TRUE(cert.failed_rule);
  EXPECT_EQ(to_string(uncurried_add()[*cert.failed_rule]), "add#2(x, 0) -> x");
  EXPECT_NE(cert.failure.find("add#2(x, 0) -> x"), std::string::npos);
}

TEST(CheckTmi, EmptySystemAndMissingSymbols) {
  EXPECT_EQ(check_tmi(paper_tmi(), Trs{}).kind, CertificateKind::UpperBound);
  MatrixInterp partial = paper_tmi();
  partial.erase(Symbol{"0", 0});
  EXPECT_THROW(check_tmi(partial, uncurried_add()), Error);
}

TEST(SearchTmi, SmallSystems) {
  const Trs ab = trs("(RULES a -> b)");
  const TmiSearchResult found = search_tmi(ab, 1, 1, 1000);
  ASSERT_EQ(found.status, SearchStatus::Found);
  EXPECT_EQ(check_tmi(*found.interp, ab).kind, CertificateKind::UpperBound);

  const Trs cc = trs("(RULES c -> c)");
  EXPECT_EQ(search_tmi(cc, 1, 1, 1000).status, SearchStatus::SpaceExhausted);
  EXPECT_EQ(search_tmi(cc, 2, 2, 100000).status, SearchStatus::SpaceExhausted);
  EXPECT_EQ(search_tmi(uncurried_add(), 2, 1, 3).status, SearchStatus::BudgetExhausted);
}

TEST(SearchTmi, UncurriedAdditionIsSound) {
  const TmiSearchResult r = search_tmi(uncurried_add(), 2, 1, 10'000'000);
  ASSERT_NE(r.status, SearchStatus::SpaceExhausted);
  if (r.status == SearchStatus::Found) {
    const Certificate cert = check_tmi(*r.interp, uncurried_add());
    EXPECT_EQ(cert.kind, CertificateKind::UpperBound);
    EXPECT_EQ(cert.degree, 2u);
  }
}

TEST(DcTable, Addition) {
  const ComplexityTable t = dc_table(r_add(), 8, Strategy::Full, 10000);
  ASSERT_TRUE(t.complete());
  ASSERT_EQ(t.rows.size(), 8u);
  EXPECT_EQ(t.rows[0].value, 0u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_LE(t.rows[i - 1].value, t.rows[i].value);
  // Each witness attains its row value, checked by the reference.
  for (const ComplexityRow& row : t.rows) {
    EXPECT_LE(row.witness.size(), row.n);
    EXPECT_EQ(naive_dh(r_add(), row.witness, false), row.value);
  }
}

TEST(DcTable, AgreesWithReferenceMaximum) {
  for (const Trs& r : {r_add(), r_exp(), transform(r_ex4()).combined}) {
    const ComplexityTable t = dc_table(r, 6, Strategy::Innermost, 100000);
    ASSERT_TRUE(t.complete());
    std::size_t best = 0;
    for (std::size_t n = 1; n <= 6; ++n) {
      for (const Term& u : brute_terms(r.signature(), n, 2)) {
        if (u.size() == n) best = std::max(best, naive_dh(r, u, true));
      }
      EXPECT_EQ(t.value_at(n), best) << n;
    }
  }
}

TEST(DcTable, StopsAtLoop) {
  const ComplexityTable t = dc_table(transform(r_ex3()).combined, 4, Strategy::Full, 1000);
  EXPECT_FALSE(t.complete());
  EXPECT_TRUE(t.loop);
}

TEST(DcTable, ExponentialLowerBoundForUncurriedExp) {
  const ComplexityTable t = dc_table(transform(r_exp()).combined, 8, Strategy::Innermost, 1'000'000);
  ASSERT_TRUE(t.complete());
  const Certificate cert = exponential_lower_bound(t, 3, 1, 5);
  EXPECT_EQ(cert.kind, CertificateKind::LowerBoundExp);
  EXPECT_EQ(exponential_lower_bound(t, 0, 1, 8).kind, CertificateKind::Failed);
  EXPECT_EQ(table_certificate(t).values.size(), 8u);
}

TEST(DcRelative, Bounds) {
  const TransformResult tr = transform(r_add());
  const ComplexityTable rel = dc_relative_table(tr.uncurried_eta, tr.u_rules, 5, 10000);
  const ComplexityTable plain = dc_table(tr.combined, 5, Strategy::Full, 10000);
  ASSERT_TRUE(rel.complete());
  ASSERT_TRUE(plain.complete());
  for (std::size_t n = 1; n <= 5; ++n) EXPECT_LE(*rel.value_at(n), *plain.value_at(n));
  const ComplexityTable empty = dc_relative_table(Trs{}, tr.u_rules, 4, 1000);
  for (const ComplexityRow& row : empty.rows) EXPECT_EQ(row.value, 0u);
}
