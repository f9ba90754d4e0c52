#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "emvkit/emv_algebra.hpp"
#include "emvkit/emv_checks.hpp"
#include "emvkit/suite.hpp"

using namespace emvkit;

namespace {

std::set<int> as_set(const Element& x) {
  auto m = FinSetBooleanEmv::members(x);
  return {m.begin(), m.end()};
}

std::vector<std::pair<AlgebraPtr, int>> backends() {
  return {{TableEmv::from_mv(mk_chain(4)), 0},
          {TableEmv::from_mv(mk_boolean(2)), 0},
          {TableEmv::from_mv(mk_product({mk_chain(2), mk_chain(3)})), 0},
          {std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2), mk_chain(3)}, true), 3},
          {std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(3), mk_chain(2)}, false), 0},
          {std::make_shared<FinSetBooleanEmv>(), 3},
          {unitize(std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(3)}, true)), 2}};
}

}  // namespace

TEST(EmvCore, AxiomsHoldOnEveryBackend) {
  for (auto& [m, level] : backends()) {
    auto v = check_emv_axioms(*m, level);
    EXPECT_TRUE(v.ok()) << m->name() << " " << v.clause;
    EXPECT_EQ(v.status, m->is_finite() ? Status::pass : Status::pass_up_to_bound) << m->name();
    if (!m->is_finite()) EXPECT_EQ(v.bound, level);
  }
}

TEST(EmvCore, FinSetLambdaIsRelativeComplement) {
  auto fs = std::make_shared<FinSetBooleanEmv>();
  for (auto& b : fs->elements(4))
    for (auto& x : fs->elements(4)) {
      if (!fs->leq(x, b)) continue;
      std::set<int> want;
      auto B = as_set(b), X = as_set(x);
      std::set_difference(B.begin(), B.end(), X.begin(), X.end(), std::inserter(want, want.begin()));
      EXPECT_EQ(as_set(fs->lambda(b, x)), want);
    }
}

TEST(EmvCore, FinSetOdotIsIntersection) {
  auto fs = std::make_shared<FinSetBooleanEmv>();
  std::mt19937 rng(3);
  auto E = fs->elements(5);
  for (int i = 0; i < 300; ++i) {
    const auto& x = E[rng() % E.size()];
    const auto& y = E[rng() % E.size()];
    std::set<int> want;
    auto X = as_set(x), Y = as_set(y);
    std::set_intersection(X.begin(), X.end(), Y.begin(), Y.end(), std::inserter(want, want.begin()));
    EXPECT_EQ(as_set(odot(*fs, x, y)), want);
  }
}

TEST(EmvCore, ChainLambdaAtTopIsNegation) {
  auto m = TableEmv::from_mv(mk_chain(6));
  for (int x = 0; x < 6; ++x) EXPECT_EQ(m->lambda(*m->top(), index_element(x)), index_element(5 - x));
}

TEST(EmvCore, DirectSumLambdaIsCoordinatewise) {
  auto ds = std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2), mk_chain(3)}, true);
  auto b = ds->indicator({0, 1, 3});
  for (auto& x : interval_elements(*ds, b, 4)) {
    auto lx = ds->decode(ds->lambda(b, x));
    auto xv = ds->decode(x);
    for (int i : {0, 1, 3}) {
      const int top = static_cast<int>(ds->factor(i).size()) - 1;
      int want = top - (xv.count(i) ? xv.at(i) : 0);
      EXPECT_EQ(lx.count(i) ? lx.at(i) : 0, want);
    }
    EXPECT_EQ(lx.count(2), 0u);
  }
}

TEST(EmvCore, LambdaIdentitiesOnRandomTriples) {
  std::mt19937 rng(17);
  for (auto& [m, level] : backends()) {
    auto I = m->idempotents(level);
    for (int t = 0; t < 200; ++t) {
      auto a = I[rng() % I.size()];
      auto b = m->join(a, I[rng() % I.size()]);
      auto xs = interval_elements(*m, a, level);
      auto x = xs[rng() % xs.size()];
      EXPECT_EQ(m->lambda(a, x), m->meet(m->lambda(b, x), a)) << m->name();
      EXPECT_EQ(m->lambda(b, x), m->oplus(m->lambda(a, x), m->lambda(b, a))) << m->name();
    }
  }
}

TEST(EmvCore, OdotDoesNotDependOnTheDominatingIdempotent) {
  std::mt19937 rng(23);
  for (auto& [m, level] : backends()) {
    auto E = m->elements(level);
    auto I = m->idempotents(level);
    for (int t = 0; t < 200; ++t) {
      const auto& x = E[rng() % E.size()];
      const auto& y = E[rng() % E.size()];
      auto a = m->dominating(m->join(x, y));
      auto b = m->join(a, I[rng() % I.size()]);
      EXPECT_EQ(odot_at(*m, a, x, y), odot_at(*m, b, x, y)) << m->name();
    }
  }
}

TEST(EmvCore, LambdaOutsideIntervalIsDomainError) {
  auto m = TableEmv::from_mv(mk_boolean(2));
  try {
    m->lambda(index_element(1), index_element(2));
    FAIL() << "expected domain-error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain_error);
  }
}

TEST(EmvCore, IdempotentCounts) {
  auto ds = std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2), mk_chain(3)}, true);
  for (int l = 0; l <= 5; ++l) EXPECT_EQ(ds->idempotents(l).size(), std::size_t{1} << l);
  auto fs = std::make_shared<FinSetBooleanEmv>();
  for (int l = 0; l <= 5; ++l) EXPECT_EQ(fs->idempotents(l).size(), std::size_t{1} << l);
  EXPECT_EQ(TableEmv::from_mv(mk_product({mk_chain(3), mk_chain(4)}))->idempotents(0).size(), 4u);
}

TEST(EmvCore, TopOnlyWhenBounded) {
  EXPECT_FALSE(std::make_shared<FinSetBooleanEmv>()->top().has_value());
  auto ds = std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2)}, true);
  EXPECT_FALSE(ds->top().has_value());
  EXPECT_TRUE(unitize(ds)->top().has_value());
  EXPECT_TRUE(std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2)}, false)->top().has_value());
}

TEST(EmvCore, IntervalIsAnMvAlgebra) {
  auto fs = std::make_shared<FinSetBooleanEmv>();
  const auto& iv = interval_mv(*fs, FinSetBooleanEmv::initial(3));
  EXPECT_EQ(iv.mv.size(), 8u);
  EXPECT_TRUE(check_mv_axioms(iv.mv).pass);
  auto ds = std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(3)}, true);
  const auto& iv2 = interval_mv(*ds, ds->indicator({0, 2}));
  EXPECT_EQ(iv2.mv.size(), 9u);
  EXPECT_TRUE(check_mv_axioms(iv2.mv).pass);
}

TEST(EmvCore, DetectsBrokenLambda) {
  fixtures::MutantEmv bad(TableEmv::from_mv(mk_chain(3)));
  auto v = check_emv_axioms(bad, 0);
  EXPECT_EQ(v.status, Status::fail);
  EXPECT_FALSE(v.witness.empty());
}

TEST(EmvCore, FullnessAndIdeals) {
  auto fs = std::make_shared<FinSetBooleanEmv>();
  EXPECT_TRUE(is_full(*fs, fixtures::even_initial().enumerate, 4).ok());
  // Only A_0 and A_1: nothing covers A_2.
  auto v = is_full(*fs, std::vector<Element>{FinSetBooleanEmv::initial(0), FinSetBooleanEmv::initial(1)}, 3);
  EXPECT_TRUE(v.failed());

  auto N = unitize(std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2)}, true));
  Subset low{"Low", [N](const Element& x) { return N->is_low(x); }};
  EXPECT_TRUE(is_ideal(*N, low, 3).ok());
  EXPECT_TRUE(is_maximal_ideal(*N, low, 3).ok());
  Subset zero{"0", [N](const Element& x) { return x == N->zero(); }};
  EXPECT_TRUE(is_ideal(*N, zero, 3).ok());
  EXPECT_FALSE(is_maximal_ideal(*N, zero, 3).ok());
  Subset not_down{"High", [N](const Element& x) { return !N->is_low(x); }};
  EXPECT_FALSE(is_ideal(*N, not_down, 2).ok());
}

TEST(EmvCore, FullSubalgebra) {
  auto m = TableEmv::from_mv(mk_chain(5));
  auto sub = subset_of("{0,1/2,1}", {index_element(0), index_element(2), index_element(4)});
  EXPECT_TRUE(is_full_subalgebra(*m, sub, 0).ok());
  auto not_closed = subset_of("{0,1/4,1}", {index_element(0), index_element(1), index_element(4)});
  EXPECT_FALSE(is_full_subalgebra(*m, not_closed, 0).ok());
}

TEST(EmvCore, UnitizationOperations) {
  auto ds = std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(3)}, true);
  auto N = unitize(ds);
  auto v = ds->unit(0, 1);
  EXPECT_EQ(N->neg(N->low(v)), N->high(v));
  EXPECT_EQ(N->oplus(N->low(v), N->high(v)), *N->top());
  EXPECT_TRUE(N->leq(N->low(v), N->high(ds->zero())));
  EXPECT_EQ(N->embed(v), N->low(v));
}

TEST(EmvCore, AlternativeAxiomsAgreeWithEmvAxioms) {
  int passing = 0;
  for (auto& p : alt_axiom_fixtures()) {
    auto r = check_alt_axioms(p, 3);
    EXPECT_TRUE(r.agree()) << p.name;
    passing += r.conditions.ok();
  }
  EXPECT_EQ(passing, 7);
}

TEST(EmvCore, AlternativeAxiomsReportClause) {
  auto fx = alt_axiom_fixtures();
  auto discrete = std::find_if(fx.begin(), fx.end(), [](auto& p) { return p.name == "L3 discrete order"; });
  ASSERT_NE(discrete, fx.end());
  auto r = check_alt_axioms(*discrete, 3);
  EXPECT_EQ(r.conditions.status, Status::fail);
  EXPECT_EQ(r.conditions.clause, "i");
}

TEST(EmvCore, FormatAndLevels) {
  auto fs = std::make_shared<FinSetBooleanEmv>();
  EXPECT_EQ(fs->format(FinSetBooleanEmv::set({3, 1})), "{1,3}");
  EXPECT_EQ(fs->level_of(FinSetBooleanEmv::set({2, 7})), 7);
  EXPECT_THROW(FinSetBooleanEmv::set({0}), Error);
  auto ds = std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2)}, true);
  EXPECT_EQ(ds->level_of(ds->unit(4, 1)), 5);
}
