#include <gtest/gtest.h>

#include <optional>
#include <random>

#include "emvkit/free.hpp"
#include "emvkit/suite.hpp"

using namespace emvkit;

namespace {

MvTerm x() { return MvTerm::var("x"); }
MvTerm y() { return MvTerm::var("y"); }

}  // namespace

TEST(Free, TermEquality) {
  auto F = mk_free_mv({"x", "y"});
  // Commutativity, involution, the MV identity.
  EXPECT_EQ(F->term(MvTerm::oplus(x(), y())), F->term(MvTerm::oplus(y(), x())));
  EXPECT_EQ(F->term(MvTerm::neg(MvTerm::neg(x()))), F->tau("x"));
  EXPECT_EQ(F->term(MvTerm::oplus(MvTerm::neg(MvTerm::oplus(MvTerm::neg(x()), y())), y())),
            F->term(MvTerm::oplus(MvTerm::neg(MvTerm::oplus(MvTerm::neg(y()), x())), x())));
  EXPECT_EQ(F->term(MvTerm::oplus(x(), MvTerm::neg(x()))), F->one());
}

TEST(Free, TermInequality) {
  auto F = mk_free_mv({"x", "y"});
  EXPECT_NE(F->tau("x"), F->tau("y"));
  EXPECT_NE(F->term(MvTerm::oplus(x(), x())), F->tau("x"));
  EXPECT_NE(F->term(MvTerm::wedge(x(), MvTerm::neg(x()))), F->zero());
  EXPECT_EQ(F->term(MvTerm::odot(x(), MvTerm::neg(x()))), F->zero());
  EXPECT_FALSE(F->is_idempotent(F->tau("x")));
}

TEST(Free, ChainOracleAgreesWithGrid) {
  std::mt19937 rng(29);
  std::vector<std::string> vars{"x", "y"};
  int agreed_equal = 0;
  for (int i = 0; i < 200; ++i) {
    auto s = random_term(rng, vars, 4);
    auto t = i % 2 ? s : random_term(rng, vars, 4);
    if (i % 4 == 1) t = MvTerm::neg(MvTerm::neg(s));
    auto a = chain_oracle(s, t, vars);
    auto b = grid_oracle(s, t, vars);
    EXPECT_EQ(a.equal, b.equal) << s.to_string() << " vs " << t.to_string() << " " << a.witness << b.witness;
    agreed_equal += a.equal;
  }
  EXPECT_GE(agreed_equal, 100);
}

TEST(Free, GridDistinguishesWhatChainsOfBoundTwoMiss) {
  // x ∧ ¬x vanishes on Ł2 but not at 1/2.
  auto s = MvTerm::wedge(x(), MvTerm::neg(x()));
  EXPECT_TRUE(chain_oracle(s, MvTerm::zero(), {"x"}, 2).equal);
  EXPECT_FALSE(grid_oracle(s, MvTerm::zero(), {"x"}).equal);
  EXPECT_FALSE(chain_oracle(s, MvTerm::zero(), {"x"}).equal);
}

TEST(Free, LiftIntoChain) {
  auto F = mk_free_mv({"x"});
  auto L3 = fixtures::table(mk_chain(3));
  LiftTarget T{L3, {{"x", index_element(1)}}};
  auto phi = free_lift(F, T, 2);
  EXPECT_TRUE(validate_morphism(phi, 2).ok());
  EXPECT_TRUE(strict_commutes(phi, *F, T, 2).ok());
  auto entries = phi.entries(2);
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].key, "phi_1");
  EXPECT_EQ(entries[0](F->term(MvTerm::odot(x(), x()))), index_element(0));
  EXPECT_EQ(entries[0](F->term(MvTerm::oplus(x(), x()))), index_element(2));
  EXPECT_TRUE(check_free_uniqueness(F, T, phi, LiftMode::strict, 2).ok());
}

TEST(Free, LiftIntoProductHasSeveralEntries) {
  auto F = mk_free_mv({"x"});
  auto P = fixtures::table(mk_product({mk_chain(2), mk_chain(3)}));
  // (0, 1/2): dominated by (0,1) and (1,1).
  LiftTarget T{P, {{"x", index_element(1)}}};
  auto phi = free_lift(F, T, 2);
  EXPECT_EQ(phi.entries(2).size(), 2u);
  EXPECT_TRUE(validate_morphism(phi, 2).ok());
  EXPECT_TRUE(strict_commutes(phi, *F, T, 2).ok());
}

TEST(Free, WrongCompetitorIsRejected) {
  auto F = mk_free_mv({"x"});
  auto L3 = fixtures::table(mk_chain(3));
  LiftTarget T{L3, {{"x", index_element(1)}}};
  LiftTarget other{L3, {{"x", index_element(2)}}};
  auto v = check_free_uniqueness(F, T, free_lift(F, other, 2), LiftMode::strict, 2);
  EXPECT_EQ(v.status, Status::not_a_competitor);
}

TEST(Free, WeakLiftIntoDirectSum) {
  auto F = mk_free_mv({"x"});
  auto ds = fixtures::ds_l2();
  LiftTarget T{ds, {{"x", ds->unit(0, 1)}}};
  auto beta = weakly_free_lift(F, T, 3);
  EXPECT_TRUE(validate_morphism(beta, 3).ok());
  EXPECT_TRUE(sim_commutes(beta, *F, T, 3).ok());
  EXPECT_FALSE(strict_commutes(beta, *F, T, 3).ok());
  EXPECT_TRUE(check_free_uniqueness(F, T, beta, LiftMode::weak, 3).ok());
}

TEST(Free, WeakLiftOnMvTargetIsTheStrictLift) {
  auto F = mk_free_mv({"x"});
  LiftTarget T{fixtures::table(mk_chain(4)), {{"x", index_element(2)}}};
  EXPECT_TRUE(approx_equal(weakly_free_lift(F, T, 2), free_lift(F, T, 2), 2).ok());
}

TEST(Free, GeneratorLemma) {
  auto L3 = fixtures::table(mk_chain(3));
  EXPECT_TRUE(check_generator_lemma(L3, {index_element(1)}).ok());
  auto L5 = fixtures::table(mk_chain(5));
  auto v = check_generator_lemma(L5, {index_element(2)});
  EXPECT_EQ(v.status, Status::fail);
  EXPECT_EQ(v.clause, "proper-subalgebra");
  EXPECT_TRUE(check_generator_lemma(L5, {index_element(1)}).ok());
  auto B = fixtures::table(mk_product({mk_chain(2), mk_chain(2)}));
  EXPECT_TRUE(check_generator_lemma(B, {index_element(2)}).ok());
}

TEST(Free, Errors) {
  auto F = mk_free_mv({"x"});
  auto L3 = fixtures::table(mk_chain(3));
  auto kind = [](auto&& f) -> std::optional<ErrorKind> {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return std::nullopt;
  };
  EXPECT_EQ(kind([&] { free_lift(F, LiftTarget{L3, {}}, 2); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind([&] { free_lift(F, LiftTarget{L3, {{"x", index_element(1)}, {"z", index_element(0)}}}, 2); }),
            ErrorKind::invalid_input);
  EXPECT_EQ(kind([&] { free_lift(F, LiftTarget{L3, {{"x", index_element(7)}}}, 2); }), ErrorKind::invalid_input);
  auto fs = fixtures::finset();
  EXPECT_EQ(kind([&] { weakly_free_lift(F, LiftTarget{fs, {{"x", FinSetBooleanEmv::set({1})}}}, 2); }),
            ErrorKind::unsupported);
  EXPECT_EQ(kind([&] { check_generator_lemma(fs, {}); }), ErrorKind::unsupported);
}
