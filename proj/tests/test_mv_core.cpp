#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "emvkit/mv_core.hpp"
#include "emvkit/mv_term.hpp"

using namespace emvkit;

namespace {

std::vector<FiniteMvAlgebra> small_algebras() {
  std::vector<FiniteMvAlgebra> out;
  for (int n = 2; n <= 6; ++n) out.push_back(mk_chain(n));
  for (int a = 0; a <= 3; ++a) out.push_back(mk_boolean(a));
  out.push_back(mk_product({mk_chain(2), mk_chain(3)}));
  out.push_back(mk_product({mk_chain(3), mk_chain(4)}));
  return out;
}

// Every map A -> B, filtered by the homomorphism test; counts only.
std::size_t brute_force_hom_count(const FiniteMvAlgebra& a, const FiniteMvAlgebra& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<int> h(n, 0);
  std::size_t count = 0;
  while (true) {
    bool ok = h[static_cast<std::size_t>(a.zero())] == b.zero();
    for (int x = 0; ok && x < static_cast<int>(n); ++x) {
      ok = h[static_cast<std::size_t>(a.neg(x))] == b.neg(h[static_cast<std::size_t>(x)]);
      for (int y = 0; ok && y < static_cast<int>(n); ++y)
        ok = h[static_cast<std::size_t>(a.oplus(x, y))] ==
             b.oplus(h[static_cast<std::size_t>(x)], h[static_cast<std::size_t>(y)]);
    }
    count += ok;
    std::size_t i = 0;
    while (i < n && ++h[i] == static_cast<int>(m)) h[i++] = 0;
    if (i == n) break;
  }
  return count;
}

}  // namespace

TEST(MvCore, FixturesSatisfyAxioms) {
  for (auto& m : small_algebras()) {
    auto r = check_mv_axioms(m);
    EXPECT_TRUE(r.pass) << m.name() << " " << r.axiom;
  }
}

TEST(MvCore, ChainOperationsMatchRationalFormulas) {
  // x ⊕ y = min(1, x + y), ¬x = 1 - x, with x = i/(n-1).
  for (int n = 2; n <= 9; ++n) {
    auto m = mk_chain(n);
    const int top = n - 1;
    for (int x = 0; x < n; ++x) {
      EXPECT_EQ(m.neg(x), top - x);
      for (int y = 0; y < n; ++y) {
        EXPECT_EQ(m.oplus(x, y), std::min(top, x + y));
        EXPECT_EQ(m.odot(x, y), std::max(0, x + y - top));
        EXPECT_EQ(m.join(x, y), std::max(x, y));
        EXPECT_EQ(m.meet(x, y), std::min(x, y));
        EXPECT_EQ(m.leq(x, y), x <= y);
      }
    }
  }
}

TEST(MvCore, ChainLabelsAreReducedFractions) {
  auto m = mk_chain(5);
  EXPECT_EQ(m.label(0), "0");
  EXPECT_EQ(m.label(2), "1/2");
  EXPECT_EQ(m.label(3), "3/4");
  EXPECT_EQ(m.label(4), "1");
}

TEST(MvCore, BooleanIsPowerset) {
  auto m = mk_boolean(3);
  ASSERT_EQ(m.size(), 8u);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      EXPECT_EQ(m.oplus(x, y), x | y);
      EXPECT_EQ(m.meet(x, y), x & y);
      EXPECT_TRUE(m.is_idempotent(x));
    }
}

TEST(MvCore, ProductIsComponentwise) {
  auto a = mk_chain(3), b = mk_chain(4);
  auto p = mk_product({a, b});
  ASSERT_EQ(p.size(), 12u);
  auto idx = [&](int x, int y) { return x * 4 + y; };
  for (int x1 = 0; x1 < 3; ++x1)
    for (int y1 = 0; y1 < 4; ++y1)
      for (int x2 = 0; x2 < 3; ++x2)
        for (int y2 = 0; y2 < 4; ++y2)
          EXPECT_EQ(p.oplus(idx(x1, y1), idx(x2, y2)), idx(a.oplus(x1, x2), b.oplus(y1, y2)));
}

TEST(MvCore, SizeErrors) {
  EXPECT_THROW(mk_chain(1), Error);
  try {
    mk_chain(0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_size);
  }
  EXPECT_THROW(mk_product({}), Error);
  EXPECT_THROW(FiniteMvAlgebra::from_tables(2, {0, 1, 1}, {1, 0}, 0, 1), Error);
}

TEST(MvCore, EverySingleOplusMutationOfSmallChainsIsCaught) {
  for (int n = 2; n <= 4; ++n) {
    auto m = mk_chain(n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int v = 0; v < n; ++v) {
          if (v == m.oplus(x, y)) continue;
          auto r = check_mv_axioms(m.with_oplus(x, y, v));
          EXPECT_FALSE(r.pass) << "L" << n << " " << x << "+" << y << "=" << v;
          EXPECT_FALSE(r.witnesses.empty());
        }
  }
}

TEST(MvCore, EveryNegationMutationIsCaught) {
  for (auto& m : small_algebras()) {
    const int n = static_cast<int>(m.size());
    for (int x = 0; x < n; ++x)
      for (int v = 0; v < n; ++v) {
        if (v == m.neg(x)) continue;
        EXPECT_FALSE(check_mv_axioms(m.with_neg(x, v)).pass) << m.name() << " neg(" << x << ")=" << v;
      }
  }
}

TEST(MvCore, MutationWitnessNamesTheAxiom) {
  auto m = mk_chain(3).with_oplus(1, 1, 1);
  auto r = check_mv_axioms(m);
  ASSERT_FALSE(r.pass);
  EXPECT_FALSE(r.axiom.empty());
}

TEST(MvCore, HomomorphismCountsMatchBruteForce) {
  std::vector<FiniteMvAlgebra> fx{mk_chain(2), mk_chain(3), mk_chain(4), mk_chain(5), mk_boolean(1), mk_boolean(2),
                                  mk_product({mk_chain(2), mk_chain(3)})};
  for (auto& a : fx)
    for (auto& b : fx) {
      if (std::pow(double(b.size()), double(a.size())) > 2e5) continue;
      EXPECT_EQ(enumerate_mv_homs(a, b).size(), brute_force_hom_count(a, b)) << a.name() << " -> " << b.name();
    }
}

TEST(MvCore, ChainHomsExistIffDivisibility) {
  // Ł_n embeds in Ł_m iff (n-1) divides (m-1); chains are simple so homs are embeddings.
  for (int n = 2; n <= 6; ++n)
    for (int m = 2; m <= 9; ++m)
      EXPECT_EQ(!enumerate_mv_homs(mk_chain(n), mk_chain(m)).empty(), (m - 1) % (n - 1) == 0) << n << "->" << m;
}

TEST(MvCore, EnumeratedHomsPassTheChecker) {
  auto a = mk_boolean(2), b = mk_product({mk_chain(2), mk_chain(2)});
  auto hs = enumerate_mv_homs(a, b);
  EXPECT_EQ(hs.size(), 4u);
  for (auto& h : hs) EXPECT_TRUE(is_mv_hom(h.map, a, b));
}

TEST(MvCore, IsomorphismSearch) {
  EXPECT_TRUE(find_isomorphism(mk_boolean(1), mk_chain(2)).has_value());
  EXPECT_TRUE(find_isomorphism(mk_boolean(2), mk_product({mk_chain(2), mk_chain(2)})).has_value());
  EXPECT_FALSE(find_isomorphism(mk_chain(4), mk_boolean(2)).has_value());
}

TEST(MvCore, TermEvaluationOnProductIsComponentwise) {
  std::mt19937 rng(11);
  auto a = mk_chain(3), b = mk_chain(5);
  auto p = mk_product({a, b});
  std::vector<std::string> vars{"x", "y"};
  for (int trial = 0; trial < 200; ++trial) {
    auto t = random_term(rng, vars, 5);
    int xa = static_cast<int>(rng() % 3), xb = static_cast<int>(rng() % 5);
    int ya = static_cast<int>(rng() % 3), yb = static_cast<int>(rng() % 5);
    int va = eval_term(t, {{"x", xa}, {"y", ya}}, a);
    int vb = eval_term(t, {{"x", xb}, {"y", yb}}, b);
    int vp = eval_term(t, {{"x", xa * 5 + xb}, {"y", ya * 5 + yb}}, p);
    EXPECT_EQ(vp, va * 5 + vb) << t.to_string();
  }
}

TEST(MvCore, TermPrintingAndVariables) {
  auto t = MvTerm::oplus(MvTerm::var("x"), MvTerm::neg(MvTerm::var("y")));
  EXPECT_EQ(t.variables(), (std::set<std::string>{"x", "y"}));
  EXPECT_FALSE(t.to_string().empty());
  EXPECT_EQ(eval_term(t, {{"x", 0}, {"y", 2}}, mk_chain(3)), 0);
}

TEST(MvCore, UnboundVariableIsAnError) {
  EXPECT_THROW(eval_term(MvTerm::var("z"), {{"x", 0}}, mk_chain(3)), Error);
}
