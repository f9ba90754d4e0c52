#include <gtest/gtest.h>

#include <random>

#include "emvkit/builtins.hpp"
#include "emvkit/morphism.hpp"
#include "emvkit/suite.hpp"

using namespace emvkit;

namespace {

std::shared_ptr<const FinSetBooleanEmv> fs() { return fixtures::finset(); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::invalid_input;
}

}  // namespace

TEST(Morphism, SetminusIsValid) {
  auto v = validate_morphism(setminus_family(fs()), 4);
  EXPECT_EQ(v.status, Status::pass_up_to_bound);
  EXPECT_EQ(v.bound, 4);
}

TEST(Morphism, SetminusEntriesRemoveTheIndex) {
  auto f = setminus_family(fs());
  for (auto& e : f.entries(4)) {
    const int i = static_cast<int>(FinSetBooleanEmv::members(e.domain_top).size());
    for (auto& x : interval_elements(*fs(), e.domain_top, 4)) {
      auto want = FinSetBooleanEmv::members(x);
      want.erase(std::remove(want.begin(), want.end(), i), want.end());
      EXPECT_EQ(FinSetBooleanEmv::members(e(x)), want) << e.key;
    }
  }
}

TEST(Morphism, CoordinatewiseIsValid) {
  auto src = fixtures::ds_l2_l3();
  auto tgt = std::make_shared<const DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2), mk_chain(5)}, true);
  auto f = coordinatewise_family(src, tgt, {MvHom{mk_chain(2), mk_chain(2), {0, 1}}, MvHom{mk_chain(3), mk_chain(5), {0, 2, 4}}});
  EXPECT_TRUE(validate_morphism(f, 4).ok());
}

TEST(Morphism, NegativeFixturesFailWithTheirClause) {
  auto a = validate_morphism(non_full_fixture(), 4);
  EXPECT_EQ(a.status, Status::fail);
  EXPECT_EQ(a.clause, "i");
  auto b = validate_morphism(clause_iii_fixture(), 4);
  EXPECT_EQ(b.status, Status::fail);
  EXPECT_EQ(b.clause, "iii");
  EXPECT_EQ(b.witness.count("x"), 1u);
  auto c = validate_morphism(missing_directedness_fixture(), 4);
  EXPECT_EQ(c.status, Status::fail);
  EXPECT_EQ(c.clause, "iv");
}

TEST(Morphism, NonHomEntryIsRejectedWithItsName) {
  auto l3 = TableEmv::from_mv(mk_chain(3));
  auto bad = finite_family(l3, l3, "bad",
                           {MorphismEntry{"broken", index_element(2), index_element(2),
                                          [](const Element& x) { return x == index_element(1) ? index_element(2) : x; }}});
  try {
    validate_morphism(bad, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
    EXPECT_NE(std::string(e.what()).find("broken"), std::string::npos);
  }
}

TEST(Morphism, SetminusIsSimilarToIdentity) {
  auto f = setminus_family(fs());
  auto id = identity_family(fs());
  EXPECT_TRUE(similar(f, id, 4).ok());
  EXPECT_TRUE(similar(id, f, 4).ok());
  EXPECT_TRUE(is_approx_identity(f, 4).ok());
  EXPECT_TRUE(is_approx_isomorphism(f, f, 4).ok());
}

TEST(Morphism, SwapIsNotSimilarToIdentity) {
  auto f = morphism_from_strong_hom(swap12_hom(fs()), 4);
  auto v = similar(f, identity_family(fs()), 4);
  EXPECT_EQ(v.status, Status::fail);
  EXPECT_EQ(v.decided_by, "counterexample");
  EXPECT_FALSE(is_approx_identity(f, 4).ok());
}

TEST(Morphism, SwapTwiceIsApproxIdentity) {
  auto f = morphism_from_strong_hom(swap12_hom(fs()), 3);
  EXPECT_TRUE(is_approx_isomorphism(f, f, 3).ok());
}

TEST(Morphism, SimilarityIsAnEquivalenceOnThePools) {
  for (auto p : {fixtures::b2_pool(3), fixtures::ds_pool(2)}) {
    const auto& P = p.morphisms;
    for (auto& f : P) {
      EXPECT_TRUE(similar(f, f, 2).ok()) << f.name;
      for (auto& g : P) {
        if (!similar(f, g, 2).ok()) continue;
        EXPECT_TRUE(similar(g, f, 2).ok()) << f.name << " " << g.name;
        for (auto& h : P)
          if (similar(g, h, 2).ok()) EXPECT_TRUE(similar(f, h, 2).ok());
      }
    }
  }
}

TEST(Morphism, CompositionWithoutPairsIsBoundExhausted) {
  auto l3 = TableEmv::from_mv(mk_chain(3));
  auto f = restrict_morphism(identity_family(l3), idempotent_list("top", {*l3->top()}), 0);
  EXPECT_EQ(kind_of([&] { compose(non_full_fixture(), f, 0); }), ErrorKind::bound_exhausted);
}

TEST(Morphism, CompositionIsAssociativeOnFinSet) {
  auto sm = setminus_family(fs());
  auto sw = morphism_from_strong_hom(swap12_hom(fs()), 3);
  auto lhs = compose(sw, compose(sm, sw, 3), 3);
  auto rhs = compose(compose(sw, sm, 3), sw, 3);
  EXPECT_TRUE(approx_equal(lhs, rhs, 3).ok());
  EXPECT_TRUE(validate_morphism(compose(sm, sm, 3), 3).ok());
}

TEST(Morphism, CompositionNeedsMatchingAlgebras) {
  auto l3 = TableEmv::from_mv(mk_chain(3));
  EXPECT_EQ(kind_of([&] { compose(identity_family(l3), setminus_family(fs()), 2); }), ErrorKind::invalid_input);
}

TEST(Morphism, StandardnessAndExtraction) {
  auto sm = setminus_family(fs());
  EXPECT_TRUE(is_standard(sm, 4).ok());
  auto F = extract_strong_hom(sm, 4);
  for (auto& x : fs()->elements(4)) EXPECT_EQ(F(x), x);
  EXPECT_TRUE(check_strong_hom(F, 4).ok());

  auto ns = nonstandard_family(fixtures::ds_l2());
  EXPECT_TRUE(validate_morphism(ns, 3).ok());
  auto v = is_standard(ns, 3);
  EXPECT_EQ(v.status, Status::fail_up_to_bound);
  EXPECT_EQ(kind_of([&] { extract_strong_hom(ns, 3); }), ErrorKind::precondition_violation);
}

TEST(Morphism, StrongHomRoundTrip) {
  auto ds = fixtures::ds_l2();
  std::mt19937 rng(5);
  for (int t = 0; t < 6; ++t) {
    int i = static_cast<int>(rng() % 4), j = static_cast<int>(rng() % 4);
    auto h = coordinate_swap_hom(ds, i, j);
    auto H = morphism_from_strong_hom(h, 3);
    auto back = strong_hom_from_coherent(H, 3);
    auto F = extract_strong_hom(H, 3);
    for (auto& x : ds->elements(3)) {
      EXPECT_EQ(back(x), h.map(x));
      EXPECT_EQ(F(x), h.map(x));
    }
  }
}

TEST(Morphism, IncoherentFamilyHasNoStrongHom) {
  try {
    strong_hom_from_coherent(setminus_family(fs()), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
    EXPECT_NE(std::string(e.what()).find("disagree"), std::string::npos);
  }
}

TEST(Morphism, RestrictionToFullSubsetIsSimilar) {
  auto sm = setminus_family(fs());
  auto r = restrict_morphism(sm, fixtures::even_initial(), 4);
  EXPECT_TRUE(validate_morphism(r, 4).ok());
  EXPECT_TRUE(approx_equal(r, sm, 4).ok());
}

TEST(Morphism, RestrictionErrors) {
  auto sm = setminus_family(fs());
  auto not_full = idempotent_list("A1", {FinSetBooleanEmv::initial(1)});
  EXPECT_EQ(kind_of([&] { restrict_morphism(sm, not_full, 3); }), ErrorKind::invalid_input);

  // The top entry collapses everything, so the entry at {1} is unreachable.
  auto b2 = TableEmv::from_mv(mk_boolean(2));
  auto f = finite_family(b2, b2, "collapse",
                         {MorphismEntry{"a", index_element(1), index_element(1), [](const Element& x) { return x; }},
                          MorphismEntry{"top", index_element(3), index_element(0), [](const Element&) { return index_element(0); }}});
  EXPECT_EQ(kind_of([&] { restrict_morphism(f, idempotent_list("top", {index_element(3)}), 0); }),
            ErrorKind::precondition_violation);
}

TEST(Morphism, PointwiseEquality) {
  auto sm = setminus_family(fs());
  auto x = FinSetBooleanEmv::set({1});
  auto v = morphism_eq_at(sm, sm, x, FinSetBooleanEmv::set({1, 2}), 3);
  EXPECT_EQ(v.status, Status::fail);
  EXPECT_TRUE(morphism_eq_at(sm, sm, x, x, 3).ok());

  auto l3 = TableEmv::from_mv(mk_chain(3));
  auto only_zero = finite_family(l3, l3, "z", {MorphismEntry{"0", index_element(0), index_element(0),
                                                             [](const Element& e) { return e; }}});
  auto vac = morphism_eq_at(only_zero, only_zero, index_element(1), index_element(1), 0);
  EXPECT_EQ(vac.status, Status::vacuous);
  EXPECT_FALSE(vac.notes.empty());
}

TEST(Morphism, MeetWithFamily) {
  auto b2 = TableEmv::from_mv(mk_boolean(2));
  auto f = meet_with_family(b2, index_element(1));
  // Images are not full, so the family fails clause (ii).
  auto v = validate_morphism(f, 0);
  EXPECT_EQ(v.status, Status::fail);
  EXPECT_EQ(v.clause, "ii");
}

TEST(Morphism, SubfamilyKeepsSelectedEntries) {
  auto sm = setminus_family(fs());
  auto even = subfamily(sm, [](const MorphismEntry& e) { return FinSetBooleanEmv::members(e.domain_top).size() % 2 == 0; },
                        "even");
  for (auto& e : even.entries(4)) EXPECT_EQ(FinSetBooleanEmv::members(e.domain_top).size() % 2, 0u);
  EXPECT_TRUE(approx_equal(even, sm, 3).ok());
}
