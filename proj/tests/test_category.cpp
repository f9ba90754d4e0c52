#include <gtest/gtest.h>

#include "emvkit/category.hpp"
#include "emvkit/suite.hpp"

using namespace emvkit;

TEST(Category, ProductOfFiniteFactors) {
  auto P = product_emv({fixtures::table(mk_chain(2)), fixtures::table(mk_chain(3))});
  EXPECT_EQ(P->elements(0).size(), 6u);
  EXPECT_EQ(P->idempotents(0).size(), 4u);
  EXPECT_TRUE(check_emv_axioms(*P, 0).ok());
  auto x = P->tuple({index_element(1), index_element(1)});
  EXPECT_EQ(P->component(x, 1), index_element(1));
  EXPECT_EQ(P->component(P->lambda(*P->top(), x), 0), index_element(0));
}

TEST(Category, ProductWithInfiniteFactor) {
  auto P = product_emv({fixtures::table(mk_chain(2)), fixtures::finset()});
  EXPECT_FALSE(P->is_finite());
  EXPECT_FALSE(P->top().has_value());
  EXPECT_TRUE(check_emv_axioms(*P, 2).ok());
}

TEST(Category, EmptyProductIsRejected) { EXPECT_THROW(product_emv({}), Error); }

TEST(Category, MediatingMorphismCommutes) {
  for (auto& inst : product_instances(2)) {
    auto g = mediating_morphism(inst.source, inst.factors, 2);
    EXPECT_TRUE(validate_morphism(g, 2).ok()) << inst.name;
    auto P = std::dynamic_pointer_cast<const ProductEmv>(g.target);
    ASSERT_TRUE(P);
    for (std::size_t k = 0; k < inst.factors.size(); ++k)
      EXPECT_TRUE(approx_equal(compose(projection_family(P, k, 2), g, 2), inst.factors[k], 2).ok())
          << inst.name << " " << k;
    EXPECT_TRUE(check_product_universal(inst.source, inst.factors, g, 2).ok()) << inst.name;
  }
}

TEST(Category, WrongCompetitorIsNotACompetitor) {
  auto fs = fixtures::finset();
  std::vector<EmvMorphism> fsx{identity_family(fs), setminus_family(fs)};
  auto swapped = mediating_morphism(fs, {morphism_from_strong_hom(swap12_hom(fs), 3), identity_family(fs)}, 3);
  auto v = check_product_universal(fs, fsx, swapped, 3);
  EXPECT_EQ(v.status, Status::not_a_competitor);
  EXPECT_FALSE(v.notes.empty());
}

TEST(Category, SimilarCompetitorIsAccepted) {
  auto fs = fixtures::finset();
  std::vector<EmvMorphism> fsx{identity_family(fs), identity_family(fs)};
  auto alt = mediating_morphism(fs, {setminus_family(fs), setminus_family(fs)}, 3);
  EXPECT_TRUE(check_product_universal(fs, fsx, alt, 3).ok());
}

TEST(Category, MediatingNeedsMatchingSource) {
  auto fs = fixtures::finset();
  auto l2 = fixtures::table(mk_chain(2));
  try {
    mediating_morphism(fs, {identity_family(l2)}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
}

TEST(Category, LawsHoldOnPools) {
  for (auto& p : {fixtures::b2_pool(3), fixtures::finset_pool(3)}) {
    LawPool pool{p.morphisms, p.strong_homs};
    for (auto& v : law_suite(pool, 3)) EXPECT_TRUE(v.ok()) << p.name << " " << v.check << " " << v.clause;
  }
  for (auto& v : law_suite(fixtures::chain_law_pool(3), 3)) EXPECT_TRUE(v.ok()) << v.check;
}

TEST(Category, LawSuiteHasFixedOrder) {
  auto p = fixtures::b2_pool(2);
  auto out = law_suite(LawPool{p.morphisms, p.strong_homs}, 2);
  std::vector<std::string> names;
  for (auto& v : out) names.push_back(v.check);
  EXPECT_EQ(names, (std::vector<std::string>{"identity", "class-composition", "associativity", "standard-closure",
                                             "standard-invariance", "functor-F", "F-on-classes", "round-trip-HF",
                                             "round-trip-FH"}));
}

TEST(Category, EmptyPoolIsVacuous) {
  auto out = law_suite(LawPool{}, 2);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].status, Status::vacuous);
}

TEST(Category, ProjectionIsStandard) {
  auto P = product_emv({fixtures::table(mk_chain(3)), fixtures::table(mk_boolean(1))});
  for (std::size_t k = 0; k < 2; ++k) {
    auto pk = projection_family(P, k, 0);
    EXPECT_TRUE(validate_morphism(pk, 0).ok());
    EXPECT_TRUE(is_standard(pk, 0).ok());
  }
}
