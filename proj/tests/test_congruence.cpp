#include <gtest/gtest.h>

#include "emvkit/builtins.hpp"
#include "emvkit/congruence.hpp"
#include "emvkit/suite.hpp"

using namespace emvkit;

namespace {

// All set partitions of {0..n-1} as restricted growth strings.
std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int mx) {
    if (i == n) {
      out.push_back(a);
      return;
    }
    for (int c = 0; c <= mx + 1; ++c) {
      a[static_cast<std::size_t>(i)] = c;
      rec(i + 1, std::max(mx, c));
    }
  };
  a[0] = 0;
  rec(1, 0);
  return out;
}

// MV congruences: partitions compatible with ⊕ and ¬ on the raw tables.
std::size_t mv_congruence_count(const FiniteMvAlgebra& m) {
  const int n = static_cast<int>(m.size());
  std::size_t count = 0;
  for (auto& p : partitions(n)) {
    auto c = [&](int x) { return p[static_cast<std::size_t>(x)]; };
    bool ok = true;
    for (int x = 0; ok && x < n; ++x)
      for (int y = 0; ok && y < n; ++y) {
        if (c(x) != c(y)) continue;
        if (c(m.neg(x)) != c(m.neg(y))) ok = false;
        for (int z = 0; ok && z < n; ++z) ok = c(m.oplus(x, z)) == c(m.oplus(y, z));
      }
    count += ok;
  }
  return count;
}

std::size_t emv_congruence_count(AlgebraPtr M) {
  auto E = M->elements(0);
  std::size_t count = 0;
  for (auto& p : partitions(static_cast<int>(E.size()))) {
    std::map<Element, int> cls;
    for (std::size_t i = 0; i < E.size(); ++i) cls[E[i]] = p[i];
    count += is_congruence(*M, from_classes(M, "p", cls), 0).ok();
  }
  return count;
}

}  // namespace

TEST(Congruence, EmvCongruencesMatchMvOracle) {
  for (auto& m : {mk_chain(2), mk_chain(3), mk_chain(5), mk_boolean(2), mk_product({mk_chain(2), mk_chain(3)}),
                  mk_product({mk_chain(3), mk_chain(3)})})
    EXPECT_EQ(emv_congruence_count(fixtures::table(m)), mv_congruence_count(m)) << m.name();
}

TEST(Congruence, KnownCounts) {
  for (int n = 2; n <= 6; ++n) EXPECT_EQ(mv_congruence_count(mk_chain(n)), 2u) << n;
  EXPECT_EQ(mv_congruence_count(mk_boolean(2)), 4u);
  EXPECT_EQ(mv_congruence_count(mk_product({mk_chain(2), mk_chain(3)})), 4u);
}

TEST(Congruence, GeneratedIsLeast) {
  for (auto& m : {mk_chain(4), mk_boolean(2), mk_product({mk_chain(2), mk_chain(3)})}) {
    auto M = fixtures::table(m);
    auto E = M->elements(0);
    auto P = partitions(static_cast<int>(E.size()));
    for (std::size_t i = 0; i < E.size(); ++i)
      for (std::size_t j = i + 1; j < E.size(); ++j) {
        auto g = generate_congruence(M, {{E[i], E[j]}});
        ASSERT_TRUE(is_congruence(*M, g, 0).ok());
        ASSERT_TRUE(g.related(E[i], E[j]));
        for (auto& p : P) {
          if (p[i] != p[j]) continue;
          std::map<Element, int> cls;
          for (std::size_t k = 0; k < E.size(); ++k) cls[E[k]] = p[k];
          auto th = from_classes(M, "p", cls);
          if (!is_congruence(*M, th, 0).ok()) continue;
          for (auto& x : E)
            for (auto& y : E)
              if (g.related(x, y)) EXPECT_TRUE(th.related(x, y)) << m.name();
        }
      }
  }
}

TEST(Congruence, ChainQuotientCollapses) {
  auto M = fixtures::table(mk_chain(4));
  auto th = generate_congruence(M, {{index_element(0), index_element(1)}});
  auto q = quotient(M, th);
  EXPECT_EQ(q.algebra->elements(0).size(), 1u);
}

TEST(Congruence, BooleanQuotientIsTwoElements) {
  auto M = fixtures::table(mk_boolean(2));
  auto th = from_classes(M, "half", {{index_element(0), 0}, {index_element(1), 0}, {index_element(2), 1}, {index_element(3), 1}});
  ASSERT_TRUE(is_congruence(*M, th, 0).ok());
  auto q = quotient(M, th);
  EXPECT_EQ(q.algebra->elements(0).size(), 2u);
  EXPECT_TRUE(check_emv_axioms(*q.algebra, 0).ok());
  EXPECT_EQ(q.representative.at(index_element(1)), index_element(2));
}

TEST(Congruence, KernelOfProjectionIsTheCongruence) {
  for (auto& m : {mk_boolean(2), mk_product({mk_chain(2), mk_chain(3)}), mk_chain(3)}) {
    auto M = fixtures::table(m);
    auto E = M->elements(0);
    for (std::size_t i = 0; i < E.size(); ++i)
      for (std::size_t j = i + 1; j < E.size(); ++j) {
        auto th = generate_congruence(M, {{E[i], E[j]}});
        auto pi = natural_projection(M, th);
        EXPECT_TRUE(validate_morphism(pi, 0).ok());
        EXPECT_TRUE(same_relation(*M, kernel(pi, 0), th, 0).ok());
      }
  }
}

TEST(Congruence, KernelsAreCongruences) {
  for (auto& p : {fixtures::finset_pool(3), fixtures::b2_pool(3)})
    for (auto& f : p.morphisms) EXPECT_TRUE(is_congruence(*p.algebra, kernel(f, 3), 3).ok()) << f.name;
}

TEST(Congruence, SetminusKernelIsDiagonal) {
  auto fs = fixtures::finset();
  EXPECT_TRUE(same_relation(*fs, kernel(setminus_family(fs), 4), diagonal(fs), 4).ok());
}

TEST(Congruence, NonCongruenceIsReported) {
  auto M = fixtures::table(mk_chain(3));
  auto th = from_classes(M, "bad", {{index_element(0), 0}, {index_element(1), 0}, {index_element(2), 1}});
  auto v = is_congruence(*M, th, 0);
  EXPECT_EQ(v.status, Status::fail);
  try {
    quotient(M, th);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition_violation);
  }
}

TEST(Congruence, InfiniteCarrierIsUnsupported) {
  auto fs = fixtures::finset();
  try {
    quotient(fs, diagonal(fs));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported);
  }
  EXPECT_THROW(generate_congruence(fs, {}), Error);
}

TEST(Congruence, DiagonalAndAllPairs) {
  auto M = fixtures::table(mk_product({mk_chain(3), mk_chain(2)}));
  EXPECT_TRUE(is_congruence(*M, diagonal(M), 0).ok());
  EXPECT_TRUE(is_congruence(*M, all_pairs(M), 0).ok());
  EXPECT_EQ(quotient(M, diagonal(M)).algebra->elements(0).size(), 6u);
}

TEST(Congruence, QuotientByKernelEmbedsIntoTarget) {
  std::vector<fixtures::Pool> pools{fixtures::b2_pool(0)};
  for (auto& p : pools)
    for (auto& f : p.morphisms) {
      if (!f.source->is_finite() || !is_standard(f, 0).ok()) continue;
      auto F = extract_strong_hom(f, 0);
      auto q = quotient(f.source, kernel(f, 0));
      const auto& Q = *q.algebra;
      auto induced = [&](const Element& c) { return F(q.representative.at(c)); };
      auto E = Q.elements(0);
      const auto& T = *f.target;
      for (auto& x : E)
        for (auto& y : E) {
          if (x != y) EXPECT_NE(induced(x), induced(y)) << f.name;
          EXPECT_EQ(induced(Q.oplus(x, y)), T.oplus(induced(x), induced(y))) << f.name;
          EXPECT_EQ(induced(Q.meet(x, y)), T.meet(induced(x), induced(y))) << f.name;
        }
      for (auto& a : Q.idempotents(0))
        for (auto& x : E)
          if (Q.leq(x, a)) EXPECT_EQ(induced(Q.lambda(a, x)), T.lambda(induced(a), induced(x))) << f.name;
    }
}
