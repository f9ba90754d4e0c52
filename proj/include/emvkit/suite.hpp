#pragma once

// Acceptance battery: one result per criterion, shared fixtures and pools.

#include <chrono>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "emvkit/builtins.hpp"
#include "emvkit/category.hpp"
#include "emvkit/congruence.hpp"
#include "emvkit/core.hpp"
#include "emvkit/emv_algebra.hpp"
#include "emvkit/emv_checks.hpp"
#include "emvkit/free.hpp"
#include "emvkit/morphism.hpp"
#include "emvkit/mv_core.hpp"

namespace emvkit {

struct SuiteOptions {
  bool full = true;
  int bound = kDefaultBound;
  bool inject_mutant = false;
  std::uint32_t seed = 20240611;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// ---------------------------------------------------------------------------
// Fixtures

namespace fixtures {

inline std::shared_ptr<const TableEmv> table(const FiniteMvAlgebra& m) { return TableEmv::from_mv(m); }

inline std::shared_ptr<const FinSetBooleanEmv> finset() {
  static auto fs = std::make_shared<const FinSetBooleanEmv>();
  return fs;
}

inline std::shared_ptr<const DirectSumEmv> ds_l2() {
  static auto ds = std::make_shared<const DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2)}, true);
  return ds;
}

inline std::shared_ptr<const DirectSumEmv> ds_l2_l3() {
  static auto ds = std::make_shared<const DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2), mk_chain(3)}, true);
  return ds;
}

/// Finite MV fixtures of criterion 1.
inline std::vector<FiniteMvAlgebra> finite_mv() {
  std::vector<FiniteMvAlgebra> out;
  for (int n = 2; n <= 6; ++n) out.push_back(mk_chain(n));
  for (int a = 1; a <= 3; ++a) out.push_back(mk_boolean(a));
  out.push_back(mk_product({mk_chain(2), mk_chain(3)}));
  out.push_back(mk_product({mk_chain(3), mk_chain(3)}));
  out.push_back(mk_product({mk_boolean(1), mk_chain(4)}));
  out.push_back(mk_product({mk_chain(2), mk_chain(2)}));
  return out;
}

/// {A_0, A_2, A_4, ...}: full in FinSet.
inline IdempotentSet even_initial() {
  return IdempotentSet{"A_even", [](int l) {
                         std::vector<Element> v;
                         for (int k = 0; 2 * k <= l + 1; ++k) v.push_back(FinSetBooleanEmv::initial(2 * k));
                         return v;
                       }};
}

/// {indicator of {0..n-1}}: full in a repeated direct sum.
inline IdempotentSet initial_segments(std::shared_ptr<const DirectSumEmv> ds) {
  return IdempotentSet{"segments", [ds](int l) {
                         std::vector<Element> v;
                         std::vector<int> supp;
                         v.push_back(ds->zero());
                         for (int n = 0; n < ds->coords(l); ++n) {
                           supp.push_back(n);
                           v.push_back(ds->indicator(supp));
                         }
                         return v;
                       }};
}

/// A full idempotent subset that is smaller than I(M) when possible.
inline IdempotentSet small_full_subset(AlgebraPtr m) {
  if (auto t = m->top()) return idempotent_list("top", {*t});
  if (m->name() == "FinSet") return even_initial();
  if (auto ds = std::dynamic_pointer_cast<const DirectSumEmv>(m)) return initial_segments(ds);
  return all_idempotents(m);
}

/// A family ≈ Id_M that is not literally the identity family.
inline EmvMorphism approx_identity(AlgebraPtr m, int level) {
  if (m->name() == "FinSet") return setminus_family(finset());
  auto r = restrict_morphism(identity_family(m), small_full_subset(m), level);
  r.name = "Id|" + small_full_subset(m).name;
  return r;
}

inline StrongEmvHom strong_from_mv_hom(AlgebraPtr a, AlgebraPtr b, const MvHom& h, std::string name) {
  return StrongEmvHom{a, b,
                      [h](const Element& x) { return index_element(h(static_cast<int>(x.key().at(0)))); },
                      std::move(name)};
}

inline std::string hom_name(const MvHom& h) {
  std::string s = "h[";
  for (std::size_t i = 0; i < h.map.size(); ++i) s += (i ? "," : "") + std::to_string(h.map[i]);
  return s + "]";
}

/// Endomorphism pools, one per algebra, each with at least six members.
struct Pool {
  std::string name;
  AlgebraPtr algebra;
  std::vector<EmvMorphism> morphisms;
  std::vector<StrongEmvHom> strong_homs;
};

inline Pool finset_pool(int level) {
  auto fs = finset();
  auto sw = swap12_hom(fs);
  Pool p{"FinSet", fs, {}, {identity_hom(fs), sw}};
  auto sm = setminus_family(fs);
  p.morphisms = {identity_family(fs),
                 sm,
                 morphism_from_strong_hom(sw, level),
                 strong_restrict(sw, even_initial(), level),
                 restrict_morphism(sm, even_initial(), level),
                 compose(sm, sm, level),
                 restrict_morphism(identity_family(fs), even_initial(), level)};
  return p;
}

inline Pool b2_pool(int level) {
  AlgebraPtr b2 = table(mk_boolean(2));
  Pool p{"B2", b2, {}, {}};
  for (auto& h : enumerate_mv_homs(mk_boolean(2), mk_boolean(2))) {
    auto s = strong_from_mv_hom(b2, b2, h, hom_name(h));
    p.strong_homs.push_back(s);
    p.morphisms.push_back(morphism_from_strong_hom(s, level));
    auto r = restrict_morphism(p.morphisms.back(), idempotent_list("top", {*b2->top()}), level);
    r.name = s.name + "|top";
    p.morphisms.push_back(r);
  }
  return p;
}

inline Pool ds_pool(int level) {
  auto ds = ds_l2();
  auto s01 = coordinate_swap_hom(ds, 0, 1);
  auto s12 = coordinate_swap_hom(ds, 1, 2);
  Pool p{"DS[L2]*", ds, {}, {identity_hom(ds), s01, s12}};
  auto R01 = strong_restrict(s01, initial_segments(ds), level);
  p.morphisms = {identity_family(ds),
                 coordinatewise_family(ds, ds, {MvHom{mk_chain(2), mk_chain(2), {0, 1}}}),
                 morphism_from_strong_hom(s01, level),
                 morphism_from_strong_hom(s12, level),
                 R01,
                 restrict_morphism(identity_family(ds), initial_segments(ds), level),
                 compose(R01, R01, level)};
  return p;
}

/// Chains Ł2, Ł3, Ł4 with their identities and the embeddings of Ł2.
inline LawPool chain_law_pool(int level) {
  LawPool p;
  std::vector<std::pair<int, AlgebraPtr>> chains;
  for (int n : {2, 3, 4}) chains.emplace_back(n, table(mk_chain(n)));
  for (auto& [n, a] : chains) {
    p.strong_homs.push_back(identity_hom(a));
    p.morphisms.push_back(identity_family(a));
    auto r = restrict_morphism(identity_family(a), idempotent_list("top", {*a->top()}), level);
    r.name = "Id|top_" + a->name();
    p.morphisms.push_back(r);
  }
  for (std::size_t t = 1; t < chains.size(); ++t) {
    auto homs = enumerate_mv_homs(mk_chain(2), mk_chain(chains[t].first));
    auto s = strong_from_mv_hom(chains[0].second, chains[t].second, homs.at(0), "emb2_" + std::to_string(chains[t].first));
    p.strong_homs.push_back(s);
    p.morphisms.push_back(morphism_from_strong_hom(s, level));
  }
  return p;
}

/// Ł3 with λ_1(0) replaced by 0: breaks the λ identities.
class MutantEmv : public EmvAlgebra {
 public:
  explicit MutantEmv(AlgebraPtr base) : base_(std::move(base)) {}
  std::string name() const override { return base_->name() + "*mut"; }
  bool is_finite() const override { return base_->is_finite(); }
  std::optional<Element> top() const override { return base_->top(); }
  Element zero() const override { return base_->zero(); }
  Element join(const Element& x, const Element& y) const override { return base_->join(x, y); }
  Element meet(const Element& x, const Element& y) const override { return base_->meet(x, y); }
  Element oplus(const Element& x, const Element& y) const override { return base_->oplus(x, y); }
  Element dominating(const Element& x) const override { return base_->dominating(x); }
  std::vector<Element> elements(int level) const override { return base_->elements(level); }
  std::vector<Element> idempotents(int level) const override { return base_->idempotents(level); }
  bool contains(const Element& x) const override { return base_->contains(x); }
  std::string format(const Element& x) const override { return base_->format(x); }
  int level_of(const Element& x) const override { return base_->level_of(x); }

 protected:
  Element do_lambda(const Element& b, const Element& x) const override {
    if (top() && b == *top() && x == zero()) return zero();
    return base_->lambda(b, x);
  }

 private:
  AlgebraPtr base_;
};

}  // namespace fixtures

// ---------------------------------------------------------------------------
// Criteria

namespace detail {

struct Tally {
  int checks = 0;
  int failures = 0;
  std::string first;

  void add(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      if (!failures) first = what;
      ++failures;
    }
  }
  void add(const Verdict& v, const std::string& what) {
    std::string w = what + " -> " + to_string(v.status);
    if (!v.clause.empty()) w += " (" + v.clause + ")";
    add(v.ok(), w);
  }
  std::string summary() const {
    std::string s = std::to_string(checks) + " checks, " + std::to_string(failures) + " failures";
    if (failures) s += "; first: " + first;
    return s;
  }
};

inline CriterionResult finish(int id, std::string name, const Tally& t) {
  return CriterionResult{id, std::move(name), t.failures == 0 && t.checks > 0, t.summary(), 0};
}

}  // namespace detail

/// MV/EMV axioms on small fixtures, and 20 single-entry mutations caught.
inline CriterionResult criterion_axioms(const SuiteOptions& opt) {
  detail::Tally t;
  auto fx = fixtures::finite_mv();
  for (auto& m : fx) {
    auto rep = check_mv_axioms(m);
    t.add(rep.pass, m.name() + " mv-axioms");
    t.add(check_emv_axioms(*fixtures::table(m), 0), m.name() + " emv-axioms");
  }
  std::mt19937 rng(opt.seed);
  int made = 0;
  while (made < 20) {
    const auto& m = fx[rng() % fx.size()];
    const int n = static_cast<int>(m.size());
    FiniteMvAlgebra mut = m;
    std::string what;
    if (rng() % 4 == 0) {
      int x = static_cast<int>(rng() % static_cast<unsigned>(n));
      int v = static_cast<int>(rng() % static_cast<unsigned>(n));
      if (v == m.neg(x)) continue;
      mut = m.with_neg(x, v);
      what = m.name() + " neg(" + m.label(x) + ")=" + m.label(v);
    } else {
      int x = static_cast<int>(rng() % static_cast<unsigned>(n));
      int y = static_cast<int>(rng() % static_cast<unsigned>(n));
      int v = static_cast<int>(rng() % static_cast<unsigned>(n));
      if (v == m.oplus(x, y)) continue;
      mut = m.with_oplus(x, y, v);
      what = m.name() + " " + m.label(x) + "+" + m.label(y) + "=" + m.label(v);
    }
    ++made;
    auto rep = check_mv_axioms(mut);
    t.add(!rep.pass && !rep.axiom.empty() && !rep.witnesses.empty(), "mutation not caught: " + what);
  }
  return detail::finish(1, "mv-emv-axioms", t);
}

/// λ_a(x) = λ_b(x) ∧ a and λ_b(x) = λ_a(x) ⊕ λ_b(a) for a ≤ b idempotent, x ≤ a.
inline CriterionResult criterion_lambda(const SuiteOptions& opt) {
  detail::Tally t;
  std::vector<std::pair<AlgebraPtr, int>> backends;
  for (auto& m : fixtures::finite_mv()) backends.emplace_back(fixtures::table(m), 0);
  backends.emplace_back(fixtures::ds_l2(), opt.bound);
  backends.emplace_back(fixtures::ds_l2_l3(), opt.bound);
  backends.emplace_back(std::make_shared<DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(3), mk_chain(4)}, false), 0);
  backends.emplace_back(fixtures::finset(), opt.bound);
  if (opt.inject_mutant)
    backends.emplace_back(std::make_shared<fixtures::MutantEmv>(fixtures::table(mk_product({mk_chain(2), mk_chain(3)}))), 0);
  for (auto& [m, level] : backends) {
    int bad = 0;
    std::string first;
    auto I = m->idempotents(level);
    for (auto& a : I)
      for (auto& b : I) {
        if (!m->leq(a, b)) continue;
        for (auto& x : interval_elements(*m, a, level)) {
          bool ok = m->lambda(a, x) == m->meet(m->lambda(b, x), a) &&
                    m->lambda(b, x) == m->oplus(m->lambda(a, x), m->lambda(b, a));
          if (!ok && !bad++) first = "a=" + m->format(a) + " b=" + m->format(b) + " x=" + m->format(x);
        }
      }
    t.add(bad == 0, m->name() + " counterexample " + first);
  }
  return detail::finish(2, "lambda-identities", t);
}

/// ⊙ agrees for two distinct dominating idempotents on sampled triples.
inline CriterionResult criterion_odot(const SuiteOptions& opt) {
  detail::Tally t;
  const int want = opt.full ? 1000 : 200;
  std::vector<std::pair<AlgebraPtr, int>> backends{
      {fixtures::table(mk_boolean(3)), 0},
      {fixtures::table(mk_product({mk_chain(3), mk_chain(3)})), 0},
      {fixtures::ds_l2_l3(), opt.bound},
      {fixtures::finset(), opt.bound},
      {unitize(fixtures::ds_l2_l3()), 2},
  };
  std::mt19937 rng(opt.seed + 3);
  for (auto& [m, level] : backends) {
    auto E = m->elements(level);
    auto I = m->idempotents(level);
    int sampled = 0, bad = 0, tries = 0;
    std::string first;
    while (sampled < want && tries < 100 * want) {
      ++tries;
      const auto& x = E[rng() % E.size()];
      const auto& y = E[rng() % E.size()];
      std::vector<Element> dom;
      auto u = m->join(x, y);
      for (auto& a : I)
        if (m->leq(u, a)) dom.push_back(a);
      if (dom.size() < 2) continue;
      auto i = rng() % dom.size();
      auto j = rng() % dom.size();
      if (i == j) continue;
      ++sampled;
      if (odot_at(*m, dom[i], x, y) != odot_at(*m, dom[j], x, y) && !bad++)
        first = m->format(x) + "," + m->format(y) + " at " + m->format(dom[i]) + " vs " + m->format(dom[j]);
    }
    t.add(sampled == want, m->name() + " sampled only " + std::to_string(sampled));
    t.add(bad == 0, m->name() + " disagreement " + first);
  }
  return detail::finish(3, "odot-independence", t);
}

/// The two worked examples validate; three constructed violations fail with
/// the right clause.
inline CriterionResult criterion_validation(const SuiteOptions& opt) {
  detail::Tally t;
  t.add(validate_morphism(setminus_family(fixtures::finset()), opt.bound), "setminus");
  auto ds = fixtures::ds_l2_l3();
  auto ds2 = std::make_shared<const DirectSumEmv>(std::vector<FiniteMvAlgebra>{mk_chain(2), mk_chain(5)}, true);
  t.add(validate_morphism(coordinatewise_family(ds, ds2,
                                                {MvHom{mk_chain(2), mk_chain(2), {0, 1}},
                                                 MvHom{mk_chain(3), mk_chain(5), {0, 2, 4}}}),
                          opt.bound),
        "coordinatewise");
  auto expect = [&](const EmvMorphism& f, const std::string& clause) {
    auto v = validate_morphism(f, opt.bound);
    t.add(v.status == Status::fail && v.clause == clause && !v.witness.empty(),
          f.name + " expected fail " + clause + " got " + to_string(v.status) + " " + v.clause);
  };
  expect(non_full_fixture(), "i");
  expect(clause_iii_fixture(), "iii");
  expect(missing_directedness_fixture(), "iv");
  return detail::finish(4, "morphism-validation", t);
}

/// ≈ is an equivalence on each pool; ∘ respects ≈, is ≈-associative, and
/// has ≈-identities, on sampled composable triples.
inline CriterionResult criterion_similarity(const SuiteOptions& opt) {
  detail::Tally t;
  const int level = std::min(opt.bound, opt.full ? 3 : 2);
  std::vector<fixtures::Pool> pools{fixtures::finset_pool(level), fixtures::b2_pool(level), fixtures::ds_pool(level)};
  std::mt19937 rng(opt.seed + 5);
  const int per_pool = opt.full ? 40 : 10;
  int triples = 0;
  for (auto& p : pools) {
    const auto& P = p.morphisms;
    t.add(P.size() >= 6, p.name + " pool too small");
    const std::size_t n = P.size();
    std::vector<std::vector<bool>> sim(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sim[i][j] = similar(P[i], P[j], level).ok();
    for (std::size_t i = 0; i < n; ++i) {
      t.add(sim[i][i], p.name + " reflexive " + P[i].name);
      for (std::size_t j = 0; j < n; ++j) {
        if (sim[i][j]) t.add(sim[j][i], p.name + " symmetric " + P[i].name + "," + P[j].name);
        for (std::size_t k = 0; k < n; ++k)
          if (sim[i][j] && sim[j][k]) t.add(sim[i][k], p.name + " transitive " + P[i].name + "," + P[j].name + "," + P[k].name);
      }
    }
    for (auto& f : P) {
      t.add(approx_equal(compose(f, identity_family(p.algebra), level), f, level), p.name + " " + f.name + "∘Id");
      t.add(approx_equal(compose(identity_family(p.algebra), f, level), f, level), p.name + " Id∘" + f.name);
    }
    for (int s = 0; s < per_pool; ++s) {
      std::size_t a = rng() % n, b = rng() % n, c = rng() % n;
      ++triples;
      const auto &f = P[a], &g = P[b], &h = P[c];
      std::string tag = p.name + " " + h.name + "," + g.name + "," + f.name;
      t.add(approx_equal(compose(h, compose(g, f, level), level), compose(compose(h, g, level), f, level), level),
            tag + " assoc");
      if (sim[a][b]) {
        t.add(approx_equal(compose(h, f, level), compose(h, g, level), level), tag + " compat-left");
        t.add(approx_equal(compose(f, h, level), compose(g, h, level), level), tag + " compat-right");
      }
    }
  }
  t.add(triples >= 100 || !opt.full, "only " + std::to_string(triples) + " triples");
  return detail::finish(5, "similarity-and-composition", t);
}

/// Standard calculus and the functor round trips over all pools.
inline CriterionResult criterion_standard(const SuiteOptions& opt) {
  detail::Tally t;
  const int level = std::min(opt.bound, opt.full ? 3 : 2);
  std::vector<std::pair<std::string, LawPool>> pools;
  pools.emplace_back("chains", fixtures::chain_law_pool(level));
  for (auto p : {fixtures::finset_pool(level), fixtures::b2_pool(level), fixtures::ds_pool(level)})
    pools.emplace_back(p.name, LawPool{p.morphisms, p.strong_homs});
  for (auto& [name, pool] : pools)
    for (auto& v : law_suite(pool, level)) t.add(v, name + " " + v.check);
  // Extraction examples.
  auto fs = fixtures::finset();
  auto F = extract_strong_hom(setminus_family(fs), level);
  for (auto& x : fs->elements(level)) t.add(F(x) == x, "F(setminus) is not the identity at " + fs->format(x));
  auto ns = is_standard(nonstandard_family(fixtures::ds_l2()), level);
  t.add(ns.status == Status::fail_up_to_bound && ns.clause == "no-max-found", "nonstandard family reported standard");
  return detail::finish(6, "standard-calculus", t);
}

/// Kernels are congruences; kernel(natural_projection(M, θ)) = θ.
inline CriterionResult criterion_kernels(const SuiteOptions& opt) {
  detail::Tally t;
  const int level = std::min(opt.bound, opt.full ? 3 : 2);
  for (auto& p : {fixtures::finset_pool(level), fixtures::b2_pool(level), fixtures::ds_pool(level)})
    for (auto& f : p.morphisms) t.add(is_congruence(*p.algebra, kernel(f, level), level), p.name + " ker " + f.name);
  for (auto& f : fixtures::chain_law_pool(level).morphisms)
    t.add(is_congruence(*f.source, kernel(f, level), level), "chains ker " + f.name);
  for (auto& m : fixtures::finite_mv()) {
    if (m.size() > 8) continue;
    AlgebraPtr M = fixtures::table(m);
    std::vector<Congruence> thetas{diagonal(M), all_pairs(M)};
    auto E = M->elements(0);
    for (std::size_t i = 0; i < E.size(); ++i)
      for (std::size_t j = i + 1; j < E.size(); ++j) thetas.push_back(generate_congruence(M, {{E[i], E[j]}}));
    for (auto& th : thetas) {
      auto pi = natural_projection(M, th);
      t.add(validate_morphism(pi, 0), m.name() + " projection " + th.name);
      t.add(same_relation(*M, kernel(pi, 0), th, 0), m.name() + " kernel of projection " + th.name);
    }
  }
  return detail::finish(7, "kernels-and-quotients", t);
}

struct ProductInstance {
  std::string name;
  AlgebraPtr source;
  std::vector<EmvMorphism> factors;
};

inline std::vector<ProductInstance> product_instances(int level) {
  using fixtures::strong_from_mv_hom;
  using fixtures::table;
  std::vector<ProductInstance> out;
  AlgebraPtr l2 = table(mk_chain(2)), l3 = table(mk_chain(3)), l4 = table(mk_chain(4));
  auto emb = [&](AlgebraPtr a, int n, AlgebraPtr b) {
    auto h = enumerate_mv_homs(mk_chain(2), mk_chain(n)).at(0);
    (void)a;
    return morphism_from_strong_hom(strong_from_mv_hom(l2, b, h, "emb2_" + std::to_string(n)), level);
  };
  out.push_back({"L2->(L3,L4)", l2, {emb(l2, 3, l3), emb(l2, 4, l4)}});
  out.push_back({"L2->(L2,L3)", l2, {identity_family(l2), emb(l2, 3, l3)}});
  out.push_back({"L2->(L2,L2,L2)", l2, {identity_family(l2), identity_family(l2), identity_family(l2)}});
  out.push_back({"L3->(L3,L3)", l3, {identity_family(l3), identity_family(l3)}});
  out.push_back({"L4->(L4,L4|top)", l4,
                 {identity_family(l4), restrict_morphism(identity_family(l4), idempotent_list("top", {*l4->top()}), level)}});
  auto pool = fixtures::b2_pool(level);
  out.push_back({"B2->(B2)", pool.algebra, {pool.morphisms[0]}});
  out.push_back({"B2->(B2,B2)", pool.algebra, {pool.morphisms[0], pool.morphisms[2]}});
  out.push_back({"B2->(B2,B2,B2)", pool.algebra, {pool.morphisms[1], pool.morphisms[4], pool.morphisms[6]}});
  AlgebraPtr l23 = table(mk_product({mk_chain(2), mk_chain(3)}));
  auto h = enumerate_mv_homs(mk_product({mk_chain(2), mk_chain(3)}), mk_chain(2)).at(0);
  out.push_back({"L2xL3->(L2,L2xL3)", l23,
                 {morphism_from_strong_hom(strong_from_mv_hom(l23, l2, h, "p"), level), identity_family(l23)}});
  auto fs = fixtures::finset();
  out.push_back({"FinSet->(Id,setminus)", fs, {identity_family(fs), setminus_family(fs)}});
  out.push_back({"FinSet->(setminus,swap12)", fs, {setminus_family(fs), morphism_from_strong_hom(swap12_hom(fs), level)}});
  auto ds = fixtures::ds_l2();
  out.push_back({"DS->(Id,swap01)", ds, {identity_family(ds), morphism_from_strong_hom(coordinate_swap_hom(ds, 0, 1), level)}});
  return out;
}

/// Mediating morphisms validate, factor through projections, and are ≈ every
/// constructed competitor.
inline CriterionResult criterion_products(const SuiteOptions& opt) {
  detail::Tally t;
  const int level = opt.full ? std::min(opt.bound, 3) : 2;
  auto instances = product_instances(level);
  t.add(instances.size() >= 10, "fewer than 10 product instances");
  for (auto& inst : instances) {
    auto g = mediating_morphism(inst.source, inst.factors, level);
    t.add(validate_morphism(g, level), inst.name + " mediating valid");
    auto P = std::dynamic_pointer_cast<const ProductEmv>(g.target);
    for (std::size_t k = 0; k < inst.factors.size(); ++k)
      t.add(approx_equal(compose(projection_family(P, k, level), g, level), inst.factors[k], level),
            inst.name + " projection " + std::to_string(k));
    t.add(check_product_universal(inst.source, inst.factors, g, level), inst.name + " self");
    auto K = fixtures::small_full_subset(inst.source);
    t.add(check_product_universal(inst.source, inst.factors, restrict_morphism(g, K, level), level),
          inst.name + " restricted competitor");
    t.add(check_product_universal(inst.source, inst.factors, compose(g, fixtures::approx_identity(inst.source, level), level),
                                  level),
          inst.name + " perturbed competitor");
  }
  return detail::finish(8, "products", t);
}

namespace detail {

/// {z ↦ φ_b(z) ∧ c : c ∈ J} with b the top: the alternative family replayed
/// from the uniqueness argument.
inline EmvMorphism proof_family(std::shared_ptr<const FreeMv> F, const LiftTarget& T, int level) {
  auto phi = free_lift(F, T, level);
  auto M = T.algebra;
  auto b = *M->top();
  auto phib = phi.entries(0);
  ElementMap at_b;
  for (auto& e : phi.entries(search_level(level)))
    if (e.image_top == b) at_b = e.map;
  EmvMorphism h = phi;
  h.name = "phi_b^c";
  auto one = F->one();
  h.enumerate = [T, M, at_b, one](int l) {
    std::vector<MorphismEntry> out;
    for (auto& c : lift_indices(T, l))
      out.push_back(MorphismEntry{"alt_" + M->format(c), one, c, [M, at_b, c](const Element& z) { return M->meet(at_b(z), c); }});
    return out;
  };
  h.source_cover = nullptr;
  h.target_cover = nullptr;
  h.directed = nullptr;
  return h;
}

}  // namespace detail

/// Strict commutation of free lifts into finite MV-algebras, and competitors.
inline CriterionResult criterion_free(const SuiteOptions& opt) {
  detail::Tally t;
  const int level = opt.full ? std::min(opt.bound, 3) : 2;
  using fixtures::table;
  std::vector<AlgebraPtr> targets{table(mk_chain(2)), table(mk_chain(3)), table(mk_chain(4)),
                                  table(mk_product({mk_chain(2), mk_chain(3)})),
                                  product_emv({table(mk_chain(2)), table(mk_chain(2))})};
  auto F1 = mk_free_mv({"x"});
  auto F2 = mk_free_mv({"x", "y"});
  t.add(F2->tau("x") != F2->tau("y"), "tau not injective");
  for (auto& M : targets) {
    auto E = M->elements(0);
    std::vector<std::pair<std::shared_ptr<const FreeMv>, std::map<std::string, Element>>> cases;
    for (auto& v : E) cases.push_back({F1, {{"x", v}}});
    const std::size_t stride = opt.full ? 3 : 7;
    for (std::size_t i = 0; i < E.size() * E.size(); i += stride)
      cases.push_back({F2, {{"x", E[i / E.size()]}, {"y", E[i % E.size()]}}});
    for (auto& [F, assign] : cases) {
      LiftTarget T{M, assign};
      std::string tag = M->name() + " " + F->name();
      for (auto& [k, v] : assign) tag += " " + k + "=" + M->format(v);
      auto phi = free_lift(F, T, level);
      t.add(validate_morphism(phi, level), tag + " valid");
      t.add(strict_commutes(phi, *F, T, level), tag + " strict");
      t.add(sim_commutes(phi, *F, T, level), tag + " sim");
      t.add(check_free_uniqueness(F, T, phi, LiftMode::strict, level), tag + " self");
      auto top = *M->top();
      auto sub = subfamily(phi, [top](const MorphismEntry& e) { return e.image_top == top; }, "phi|top");
      t.add(check_free_uniqueness(F, T, sub, LiftMode::strict, level), tag + " restricted");
      t.add(check_free_uniqueness(F, T, detail::proof_family(F, T, level), LiftMode::strict, level), tag + " proof family");
    }
  }
  return detail::finish(9, "free-lift", t);
}

/// Weakly free lifts into a proper direct sum: valid, ∼ holds, = fails somewhere.
inline CriterionResult criterion_weakly_free(const SuiteOptions& opt) {
  detail::Tally t;
  const int level = std::min(opt.bound, 3);
  auto ds = fixtures::ds_l2();
  auto F1 = mk_free_mv({"x"});
  auto F2 = mk_free_mv({"x", "y"});
  std::vector<std::pair<std::shared_ptr<const FreeMv>, LiftTarget>> cases{
      {F1, LiftTarget{ds, {{"x", ds->unit(0, 1)}}}},
      {F2, LiftTarget{ds, {{"x", ds->unit(0, 1)}, {"y", ds->unit(1, 1)}}}},
      {F1, LiftTarget{fixtures::ds_l2_l3(), {{"x", fixtures::ds_l2_l3()->unit(1, 1)}}}},
  };
  for (auto& [F, T] : cases) {
    std::string tag = F->name() + "->" + T.algebra->name();
    auto beta = weakly_free_lift(F, T, level);
    t.add(validate_morphism(beta, level), tag + " beta valid");
    t.add(sim_commutes(beta, *F, T, level), tag + " sim");
    auto strict = strict_commutes(beta, *F, T, level);
    t.add(strict.status == Status::fail && strict.witness.count("x") && strict.witness.count("i"),
          tag + " strict commutation did not fail");
    t.add(check_free_uniqueness(F, T, beta, LiftMode::weak, level), tag + " weak uniqueness");
  }
  t.add(F2->tau("x") != F2->tau("y"), "tau not injective");
  // Relabeling the generators gives a ≈-automorphism of F(x,y).
  LiftTarget swap{F2, {{"x", F2->tau("y")}, {"y", F2->tau("x")}}};
  auto phi = free_lift(F2, swap, 1);
  t.add(is_approx_isomorphism(phi, phi, 1), "relabeling is not a ≈-isomorphism");
  return detail::finish(10, "weakly-free", t);
}

/// N = U(M) is an MV-algebra on support-bounded slices; Low(M) is a maximal ideal.
inline CriterionResult criterion_unitization(const SuiteOptions& opt) {
  detail::Tally t;
  const int level = std::min(opt.bound, 3);
  for (auto ds : {fixtures::ds_l2(), fixtures::ds_l2_l3()}) {
    auto N = unitize(ds);
    for (int l = 1; l <= level; ++l) {
      auto E = N->elements(l);
      std::map<Element, int> idx;
      for (std::size_t i = 0; i < E.size(); ++i) idx[E[i]] = static_cast<int>(i);
      std::vector<int> plus(E.size() * E.size()), neg(E.size());
      bool closed = true;
      for (std::size_t i = 0; i < E.size() && closed; ++i) {
        auto it = idx.find(N->neg(E[i]));
        if (it == idx.end()) closed = false;
        else neg[i] = it->second;
        for (std::size_t j = 0; j < E.size() && closed; ++j) {
          auto p = idx.find(N->oplus(E[i], E[j]));
          if (p == idx.end()) closed = false;
          else plus[i * E.size() + j] = p->second;
        }
      }
      t.add(closed, N->name() + " slice " + std::to_string(l) + " not closed");
      if (!closed) continue;
      auto mv = FiniteMvAlgebra::from_tables(E.size(), plus, neg, idx.at(N->zero()), idx.at(*N->top()));
      auto rep = check_mv_axioms(mv);
      t.add(rep.pass, N->name() + " slice " + std::to_string(l) + " " + rep.axiom);
    }
    t.add(check_emv_axioms(*N, level), N->name() + " emv");
    Subset low{"Low", [N](const Element& x) { return N->is_low(x); }};
    t.add(is_ideal(*N, low, level), N->name() + " Low ideal");
    t.add(is_maximal_ideal(*N, low, level), N->name() + " Low maximal");
  }
  return detail::finish(11, "unitization", t);
}

/// Pomonoid fixtures for the alternative axiomatization.
inline std::vector<PomonoidPresentation> alt_axiom_fixtures() {
  std::vector<PomonoidPresentation> out;
  out.push_back(pomonoid_from_mv(mk_chain(3)));
  out.push_back(pomonoid_from_mv(mk_chain(4)));
  out.push_back(pomonoid_from_mv(mk_boolean(2)));
  out.push_back(pomonoid_from_mv(mk_product({mk_chain(2), mk_chain(3)})));
  out.push_back(pomonoid_from_mv(mk_boolean(3)));
  out.push_back(pomonoid_from_emv(fixtures::finset()));
  out.push_back(pomonoid_from_emv(fixtures::ds_l2_l3()));
  auto edit = [](PomonoidPresentation base, std::string name, std::function<void(FinitePomonoid&)> change) {
    auto slice = base.slice;
    base.name = std::move(name);
    base.slice = [slice, change](int level) {
      auto p = slice(level);
      change(p);
      return p;
    };
    return base;
  };
  out.push_back(edit(pomonoid_from_mv(mk_chain(3)), "L3 discrete order", [](FinitePomonoid& p) {
    for (std::size_t x = 0; x < p.n; ++x)
      for (std::size_t y = 0; y < p.n; ++y) p.le[x * p.n + y] = x == y;
  }));
  out.push_back(edit(pomonoid_from_mv(mk_chain(3)), "L3 reversed order", [](FinitePomonoid& p) {
    for (std::size_t x = 0; x < p.n; ++x)
      for (std::size_t y = 0; y < p.n; ++y) p.le[x * p.n + y] = y <= x;
  }));
  out.push_back(edit(pomonoid_from_mv(mk_chain(4)), "L4 with 1/3 and 2/3 swapped in the order", [](FinitePomonoid& p) {
    std::vector<int> rank{0, 2, 1, 3};
    for (std::size_t x = 0; x < p.n; ++x)
      for (std::size_t y = 0; y < p.n; ++y) p.le[x * p.n + y] = rank[x] <= rank[y];
  }));
  return out;
}

/// (i)–(iv) hold iff the EMV axioms hold, on each fixture.
inline CriterionResult criterion_alt_axioms(const SuiteOptions& opt) {
  detail::Tally t;
  auto fx = alt_axiom_fixtures();
  t.add(fx.size() == 10, "expected 10 fixtures");
  int passing = 0;
  for (auto& p : fx) {
    auto rep = check_alt_axioms(p, std::min(opt.bound, 3));
    passing += rep.conditions.ok();
    t.add(rep.agree(), p.name + " divergence: conditions " + to_string(rep.conditions.status) + ", emv " +
                           to_string(rep.emv.status));
  }
  t.add(passing == 7, "expected 7 passing fixtures, got " + std::to_string(passing));
  return detail::finish(12, "alternative-axioms", t);
}

namespace detail {

/// A pair of terms equal in every MV-algebra, built from one of a few laws.
template <class Rng>
std::pair<MvTerm, MvTerm> law_pair(Rng& rng, const std::vector<std::string>& vars) {
  auto s = random_term(rng, vars, 2);
  auto u = random_term(rng, vars, 2);
  auto w = random_term(rng, vars, 1);
  switch (rng() % 6) {
    case 0: return {MvTerm::oplus(s, u), MvTerm::oplus(u, s)};
    case 1: return {MvTerm::neg(MvTerm::neg(s)), s};
    case 2: return {MvTerm::oplus(MvTerm::oplus(s, u), w), MvTerm::oplus(s, MvTerm::oplus(u, w))};
    case 3: return {MvTerm::vee(s, u), MvTerm::vee(u, s)};
    case 4: return {MvTerm::oplus(s, MvTerm::neg(s)), MvTerm::one()};
    default: return {MvTerm::wedge(s, MvTerm::vee(s, u)), s};
  }
}

}  // namespace detail

/// The chain oracle and the rational-grid oracle agree on term pairs.
inline CriterionResult criterion_oracles(const SuiteOptions& opt) {
  detail::Tally t;
  const int pairs = opt.full ? 500 : 100;
  std::mt19937 rng(opt.seed + 13);
  std::vector<std::string> vars{"x", "y"};
  int equal = 0;
  for (int i = 0; i < pairs; ++i) {
    auto [s, u] = i % 2 ? detail::law_pair(rng, vars)
                        : std::make_pair(random_term(rng, vars, 6), random_term(rng, vars, 6));
    auto a = chain_oracle(s, u, vars);
    auto b = grid_oracle(s, u, vars);
    equal += a.equal;
    t.add(a.equal == b.equal, s.to_string() + " vs " + u.to_string() + ": chain " + (a.equal ? "equal" : a.witness) +
                                  ", grid " + (b.equal ? "equal" : b.witness));
    if (i % 2) t.add(a.equal, "law pair reported unequal: " + s.to_string() + " vs " + u.to_string());
  }
  auto r = detail::finish(13, "oracle-agreement", t);
  r.detail += "; " + std::to_string(equal) + " equal pairs";
  return r;
}

inline std::vector<std::function<CriterionResult(const SuiteOptions&)>> criteria() {
  return {criterion_axioms,   criterion_lambda,       criterion_odot,        criterion_validation, criterion_similarity,
          criterion_standard, criterion_kernels,      criterion_products,    criterion_free,       criterion_weakly_free,
          criterion_unitization, criterion_alt_axioms, criterion_oracles};
}

/// Runs every criterion; an exception inside a criterion counts as a failure.
inline std::vector<CriterionResult> run_acceptance(const SuiteOptions& opt,
                                                   const std::function<void(const CriterionResult&)>& on_result = {}) {
  std::vector<CriterionResult> out;
  int id = 0;
  for (auto& c : criteria()) {
    ++id;
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = c(opt);
    } catch (const std::exception& e) {
      r = CriterionResult{id, "criterion-" + std::to_string(id), false, std::string("exception: ") + e.what(), 0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(r);
  }
  return out;
}

}  // namespace emvkit
