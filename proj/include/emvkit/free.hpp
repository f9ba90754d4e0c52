#pragma once

// Free MV-algebras on small generator sets, evaluation lifts into EMV-algebras,
// the ∼ relation, and weakly free lifts through the unitization.
//
// An element of F(X) is a term together with its values on every assignment
// of X into the chains Ł_2..Ł_K. Two terms are identified when those values
// agree, which is exact for inequality and holds up to K for equality. A
// second oracle evaluates over rationals with denominators ≤ D.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "emvkit/core.hpp"
#include "emvkit/emv_algebra.hpp"
#include "emvkit/morphism.hpp"
#include "emvkit/mv_term.hpp"

namespace emvkit {

inline constexpr int kChainBound = 8;
inline constexpr int kGridDenominator = 12;
inline constexpr std::size_t kMaxGenerators = 2;

namespace detail {

/// All assignments of `n` variables into {0..k-1}, in lexicographic order.
inline std::vector<std::vector<int>> assignments(std::size_t n, int k) {
  std::vector<std::vector<int>> out{{}};
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::vector<int>> next;
    for (auto& a : out)
      for (int x = 0; x < k; ++x) {
        auto b = a;
        b.push_back(x);
        next.push_back(std::move(b));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

class FreeMv : public EmvAlgebra {
 public:
  explicit FreeMv(std::vector<std::string> gens, int chain_bound = kChainBound) : gens_(std::move(gens)), k_(chain_bound) {
    if (gens_.size() > kMaxGenerators)
      throw Error(ErrorKind::unsupported, "free algebras are limited to " + std::to_string(kMaxGenerators) + " generators");
    std::set<std::string> seen(gens_.begin(), gens_.end());
    if (seen.size() != gens_.size()) throw Error(ErrorKind::invalid_input, "duplicate generator name");
    if (k_ < 2) throw Error(ErrorKind::invalid_size, "chain bound must be at least 2");
    for (int k = 2; k <= k_; ++k)
      for (auto& a : detail::assignments(gens_.size(), k)) points_.push_back({k, a});
  }

  const std::vector<std::string>& generators() const { return gens_; }
  int chain_bound() const { return k_; }

  /// Element for a term over the generators.
  Element term(const MvTerm& t) const {
    for (auto& v : t.variables())
      if (std::find(gens_.begin(), gens_.end(), v) == gens_.end())
        throw Error(ErrorKind::invalid_input, "unknown generator '" + v + "'");
    std::vector<std::int64_t> key;
    key.reserve(points_.size());
    for (auto& [k, a] : points_) {
      ChainOps ops{k};
      auto lookup = [&](const std::string& name) {
        return static_cast<std::int64_t>(a[static_cast<std::size_t>(std::find(gens_.begin(), gens_.end(), name) - gens_.begin())]);
      };
      key.push_back(evaluate<std::int64_t>(t, ops, lookup));
    }
    return Element(std::move(key), t);
  }

  /// τ: X → F(X).
  Element tau(const std::string& x) const {
    if (std::find(gens_.begin(), gens_.end(), x) == gens_.end())
      throw Error(ErrorKind::invalid_input, "unknown generator '" + x + "'");
    return term(MvTerm::var(x));
  }

  Element one() const { return term(MvTerm::one()); }
  Element neg(const Element& x) const {
    std::vector<std::int64_t> key(x.key().size());
    for (std::size_t p = 0; p < key.size(); ++p) key[p] = points_[p].first - 1 - x.key()[p];
    return Element(std::move(key), MvTerm::neg(rep(x)));
  }

  std::string name() const override {
    std::string s = "F(";
    for (std::size_t i = 0; i < gens_.size(); ++i) s += (i ? "," : "") + gens_[i];
    return s + ")";
  }
  bool is_finite() const override { return gens_.empty(); }
  std::optional<Element> top() const override { return one(); }
  Element zero() const override { return term(MvTerm::zero()); }
  Element join(const Element& x, const Element& y) const override {
    return pointwise(x, y, MvTerm::vee(rep(x), rep(y)), [](std::int64_t a, std::int64_t b, int) { return std::max(a, b); });
  }
  Element meet(const Element& x, const Element& y) const override {
    return pointwise(x, y, MvTerm::wedge(rep(x), rep(y)), [](std::int64_t a, std::int64_t b, int) { return std::min(a, b); });
  }
  Element oplus(const Element& x, const Element& y) const override {
    return pointwise(x, y, MvTerm::oplus(rep(x), rep(y)),
                     [](std::int64_t a, std::int64_t b, int k) { return std::min<std::int64_t>(a + b, k - 1); });
  }
  Element dominating(const Element& x) const override { return x == zero() ? zero() : one(); }
  bool leq(const Element& x, const Element& y) const override {
    for (std::size_t p = 0; p < x.key().size(); ++p)
      if (x.key()[p] > y.key()[p]) return false;
    return true;
  }
  /// Idempotents of a free MV-algebra are 0 and 1 only; a key check on the
  /// chains would accept n·x for n ≥ K-1.
  bool is_idempotent(const Element& x) const override { return x == zero() || x == one(); }
  std::vector<Element> idempotents(int) const override { return {zero(), one()}; }

  /// Deterministic closure of {0, 1, X} under ¬ and ⊕ (and ∧ for mixing),
  /// truncated to 8 + 8·level elements.
  std::vector<Element> elements(int level) const override {
    if (gens_.empty()) return {zero(), one()};
    const std::size_t cap = 8 + 8 * static_cast<std::size_t>(std::max(level, 0));
    std::vector<Element> out{zero(), one()};
    std::set<Element> seen(out.begin(), out.end());
    auto add = [&](const Element& e) {
      if (out.size() >= cap || seen.count(e)) return;
      seen.insert(e);
      out.push_back(e);
    };
    for (auto& g : gens_) add(tau(g));
    std::size_t done = 0;
    while (out.size() < cap && done < out.size()) {
      const std::size_t end = out.size();
      for (std::size_t i = done; i < end; ++i) add(neg(out[i]));
      for (std::size_t i = 0; i < end; ++i)
        for (std::size_t j = std::max(i, done); j < end; ++j) {
          add(oplus(out[i], out[j]));
          add(meet(out[i], out[j]));
        }
      done = end;
    }
    return out;
  }
  bool contains(const Element& x) const override {
    if (x.key().size() != points_.size()) return false;
    for (std::size_t p = 0; p < points_.size(); ++p)
      if (x.key()[p] < 0 || x.key()[p] >= points_[p].first) return false;
    return true;
  }
  std::string format(const Element& x) const override {
    if (x.has_rep()) return x.rep().to_string();
    return "<term>";
  }
  bool interval_finite(const Element& a) const override { return is_finite() || a == zero(); }

 protected:
  Element do_lambda(const Element& b, const Element& x) const override {
    if (b == zero()) return zero();
    return neg(x);
  }

 private:
  struct ChainOps {
    int k;
    std::int64_t zero() const { return 0; }
    std::int64_t one() const { return k - 1; }
    std::int64_t oplus(std::int64_t a, std::int64_t b) const { return std::min<std::int64_t>(a + b, k - 1); }
    std::int64_t neg(std::int64_t a) const { return k - 1 - a; }
  };

  static MvTerm rep(const Element& x) {
    if (!x.has_rep()) throw Error(ErrorKind::invalid_input, "free-algebra element without a term");
    return x.rep();
  }
  template <class Op>
  Element pointwise(const Element& x, const Element& y, MvTerm t, Op op) const {
    std::vector<std::int64_t> key(x.key().size());
    for (std::size_t p = 0; p < key.size(); ++p) key[p] = op(x.key()[p], y.key()[p], points_[p].first);
    return Element(std::move(key), std::move(t));
  }

  std::vector<std::string> gens_;
  int k_;
  std::vector<std::pair<int, std::vector<int>>> points_;  // (chain size, assignment)
};

inline std::shared_ptr<FreeMv> mk_free_mv(std::vector<std::string> gens, int chain_bound = kChainBound) {
  return std::make_shared<FreeMv>(std::move(gens), chain_bound);
}

// ---------------------------------------------------------------------------
// Equality oracles

struct TermComparison {
  bool equal = false;         // equal up to the bound
  std::string witness;        // distinguishing point when unequal
};

/// Compares on every assignment into Ł_2..Ł_K.
inline TermComparison chain_oracle(const MvTerm& s, const MvTerm& t, const std::vector<std::string>& vars,
                                   int chain_bound = kChainBound) {
  for (int k = 2; k <= chain_bound; ++k) {
    auto chain = mk_chain(static_cast<std::size_t>(k));
    for (auto& a : detail::assignments(vars.size(), k)) {
      std::map<std::string, int> assign;
      for (std::size_t i = 0; i < vars.size(); ++i) assign[vars[i]] = a[i];
      if (eval_term(s, assign, chain) != eval_term(t, assign, chain)) {
        std::string w = "L" + std::to_string(k) + ":";
        for (std::size_t i = 0; i < vars.size(); ++i) w += " " + vars[i] + "=" + chain.label(a[i]);
        return {false, w};
      }
    }
  }
  return {true, ""};
}

/// Exact rational in [0,1].
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t n, std::int64_t d) {
    auto g = std::gcd(n, d);
    return {n / g, d / g};
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

struct RationalOps {
  Rational zero() const { return {0, 1}; }
  Rational one() const { return {1, 1}; }
  Rational oplus(Rational a, Rational b) const {
    auto s = Rational::of(a.num * b.den + b.num * a.den, a.den * b.den);
    return s.num >= s.den ? one() : s;
  }
  Rational neg(Rational a) const { return Rational::of(a.den - a.num, a.den); }
};

/// All p/q in [0,1] with q ≤ D, sorted.
inline std::vector<Rational> rational_grid(int max_den = kGridDenominator) {
  std::set<Rational> s;
  for (int q = 1; q <= max_den; ++q)
    for (int p = 0; p <= q; ++p) s.insert(Rational::of(p, q));
  return {s.begin(), s.end()};
}

/// Compares the terms as functions on the rational grid.
inline TermComparison grid_oracle(const MvTerm& s, const MvTerm& t, const std::vector<std::string>& vars,
                                  int max_den = kGridDenominator) {
  auto grid = rational_grid(max_den);
  RationalOps ops;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    auto lookup = [&](const std::string& name) {
      for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return grid[idx[i]];
      throw Error(ErrorKind::invalid_input, "unbound variable '" + name + "'");
    };
    if (!(evaluate<Rational>(s, ops, lookup) == evaluate<Rational>(t, ops, lookup))) {
      std::string w = "grid:";
      for (std::size_t i = 0; i < vars.size(); ++i) w += " " + vars[i] + "=" + grid[idx[i]].str();
      return {false, w};
    }
    std::size_t p = 0;
    while (p < idx.size() && ++idx[p] == grid.size()) idx[p++] = 0;
    if (p == idx.size()) break;
  }
  return {true, ""};
}

// ---------------------------------------------------------------------------
// Lifts

struct LiftTarget {
  AlgebraPtr algebra;
  std::map<std::string, Element> assign;  // f: X → M
};

/// J = {a ∈ I(M) : f(x) ≤ a for all x}, on the slice at `level`.
inline std::vector<Element> lift_indices(const LiftTarget& T, int level) {
  std::vector<Element> out;
  for (auto& a : T.algebra->idempotents(level)) {
    bool ok = true;
    for (auto& [x, v] : T.assign)
      if (!T.algebra->leq(v, a)) ok = false;
    if (ok) out.push_back(a);
  }
  return out;
}

namespace detail {

struct IntervalOps {
  const EmvAlgebra& m;
  Element a;
  Element zero() const { return m.zero(); }
  Element one() const { return a; }
  Element oplus(const Element& x, const Element& y) const { return m.oplus(x, y); }
  Element neg(const Element& x) const { return m.lambda(a, x); }
};

inline void check_assignment(const FreeMv& F, const LiftTarget& T) {
  for (auto& g : F.generators())
    if (!T.assign.count(g)) throw Error(ErrorKind::invalid_input, "generator '" + g + "' is not assigned");
  for (auto& [x, v] : T.assign) {
    if (std::find(F.generators().begin(), F.generators().end(), x) == F.generators().end())
      throw Error(ErrorKind::invalid_input, "'" + x + "' is not a generator");
    if (!T.algebra->contains(v)) throw Error(ErrorKind::invalid_input, "value of '" + x + "' is not in the target");
  }
}

/// Term evaluation inside the MV-algebra [0,a] of M.
inline ElementMap eval_in_interval(AlgebraPtr m, Element a, std::map<std::string, Element> assign) {
  return [m, a, assign](const Element& z) {
    if (!z.has_rep()) throw Error(ErrorKind::invalid_input, "free-algebra element without a term");
    IntervalOps ops{*m, a};
    auto lookup = [&](const std::string& name) { return m->meet(assign.at(name), a); };
    return evaluate<Element>(z.rep(), ops, lookup);
  };
}

}  // namespace detail

/// φ = {φ_a : a ∈ J}, φ_a the evaluation of terms in [0,a] with x ↦ f(x).
inline EmvMorphism free_lift(std::shared_ptr<const FreeMv> F, const LiftTarget& T, int level = kDefaultBound) {
  detail::check_assignment(*F, T);
  if (lift_indices(T, search_level(level)).empty())
    throw Error(ErrorKind::bound_exhausted, "no idempotent dominates the assignment up to bound");
  auto M = T.algebra;
  auto one = F->one();
  auto assign = T.assign;
  auto make = [M, one, assign](const Element& a) {
    return MorphismEntry{"phi_" + M->format(a), one, a, detail::eval_in_interval(M, a, assign)};
  };
  EmvMorphism f;
  f.source = F;
  f.target = M;
  f.name = "phi";
  f.finite_index = M->is_finite();
  f.enumerate = [T, make](int l) {
    std::vector<MorphismEntry> out;
    for (auto& a : lift_indices(T, l)) out.push_back(make(a));
    return out;
  };
  f.source_cover = [T, make, level](const Element&) -> std::optional<MorphismEntry> {
    auto J = lift_indices(T, search_level(level));
    if (J.empty()) return std::nullopt;
    return make(J.front());
  };
  f.target_cover = [M, assign, make](const Element& c) -> std::optional<MorphismEntry> {
    Element u = c;
    for (auto& [x, v] : assign) u = M->join(u, v);
    return make(M->dominating(u));
  };
  f.directed = [M, make](const MorphismEntry& i, const MorphismEntry& j) -> std::optional<MorphismEntry> {
    return make(M->join(i.image_top, j.image_top));
  };
  return f;
}

/// φ_i(τ(x)) = f(x) for every enumerated entry and generator.
inline Verdict strict_commutes(const EmvMorphism& phi, const FreeMv& F, const LiftTarget& T, int level = kDefaultBound) {
  const std::string check = "strict-commutes";
  const bool exh = detail::exhaustive(phi);
  for (auto& e : phi.entries(level))
    for (auto& g : F.generators()) {
      auto v = e(F.tau(g));
      if (v != T.assign.at(g)) {
        auto out = Verdict::failing(check, "value", {{"x", g}, {"i", e.key}, {"got", T.algebra->format(v)}},
                                    exh ? 0 : level);
        out.decided_by = "counterexample";
        return out;
      }
    }
  return Verdict::passing(check, exh, level, "scan");
}

/// f(x) ∧ φ_i(a_i) = φ_i(τ(x)) whenever τ(x) ≤ a_i.
inline Verdict sim_commutes(const EmvMorphism& phi, const FreeMv& F, const LiftTarget& T, int level = kDefaultBound) {
  const std::string check = "sim-commutes";
  const bool exh = detail::exhaustive(phi);
  const auto& M = *T.algebra;
  for (auto& e : phi.entries(level))
    for (auto& g : F.generators()) {
      auto t = F.tau(g);
      if (!F.leq(t, e.domain_top)) continue;
      if (M.meet(T.assign.at(g), e.image_top) != e(t)) {
        auto out = Verdict::failing(check, "value", {{"x", g}, {"i", e.key}}, exh ? 0 : level);
        out.decided_by = "counterexample";
        return out;
      }
    }
  return Verdict::passing(check, exh, level, "scan");
}

/// β = {z ↦ φ(z) ∧ a : a ∈ I(M)} with φ: F(X) → N the evaluation into the
/// unitization N of M. MV-algebra targets use free_lift.
inline EmvMorphism weakly_free_lift(std::shared_ptr<const FreeMv> F, const LiftTarget& T, int level = kDefaultBound) {
  detail::check_assignment(*F, T);
  if (T.algebra->top()) return free_lift(F, T, level);
  auto ds = std::dynamic_pointer_cast<const DirectSumEmv>(T.algebra);
  if (!ds) throw Error(ErrorKind::unsupported, "weakly free lifts need an MV-algebra or a direct-sum target");
  std::shared_ptr<const UnitizedMv> N = unitize(ds);
  std::map<std::string, Element> embedded;
  for (auto& [x, v] : T.assign) embedded[x] = N->embed(v);
  auto phi = detail::eval_in_interval(N, *N->top(), embedded);
  auto one = F->one();
  auto make = [ds, N, phi, one](const Element& a) {
    auto la = N->embed(a);
    return MorphismEntry{"beta_" + ds->format(a), one, a,
                         [N, phi, la](const Element& z) { return N->payload(N->meet(phi(z), la)); }};
  };
  EmvMorphism f;
  f.source = F;
  f.target = T.algebra;
  f.name = "beta";
  f.enumerate = [ds, make](int l) {
    std::vector<MorphismEntry> out;
    for (auto& a : ds->idempotents(l)) out.push_back(make(a));
    return out;
  };
  f.source_cover = [ds, make](const Element&) -> std::optional<MorphismEntry> { return make(ds->zero()); };
  f.target_cover = [make](const Element& c) -> std::optional<MorphismEntry> { return make(c); };
  f.directed = [ds, make](const MorphismEntry& i, const MorphismEntry& j) -> std::optional<MorphismEntry> {
    return make(ds->join(i.image_top, j.image_top));
  };
  return f;
}

enum class LiftMode { strict, weak };

/// A competitor h (commuting strictly, or up to ∼) must be ≈ the lift; in
/// strict mode its restriction to entries with a_i = 1 must also be ≈ h.
inline Verdict check_free_uniqueness(std::shared_ptr<const FreeMv> F, const LiftTarget& T, const EmvMorphism& h,
                                     LiftMode mode, int level = kDefaultBound) {
  const std::string check = "free-uniqueness";
  auto pre = mode == LiftMode::strict ? strict_commutes(h, *F, T, level) : sim_commutes(h, *F, T, level);
  if (!pre.ok()) {
    Verdict v = pre;
    v.check = check;
    v.status = Status::not_a_competitor;
    v.notes.push_back("uniqueness is tested against supplied competitors only");
    return v;
  }
  auto lift = mode == LiftMode::strict ? free_lift(F, T, level) : weakly_free_lift(F, T, level);
  Verdict acc = Verdict::passing(check, true, level, "");
  absorb(acc, approx_equal(h, lift, level));
  if (mode == LiftMode::strict) {
    auto one = F->one();
    auto top_part = subfamily(h, [one](const MorphismEntry& e) { return e.domain_top == one; }, h.name + "|K'");
    absorb(acc, approx_equal(top_part, h, level));
  }
  acc.check = check;
  acc.notes.push_back("uniqueness is tested against supplied competitors only");
  return acc;
}

/// Least full subalgebra of a finite M containing G (closed under ⊕, ∨, ∧,
/// 0, λ_b for idempotents b in it, and containing the top) is M itself.
inline Verdict check_generator_lemma(AlgebraPtr m, const std::vector<Element>& G) {
  const std::string check = "generator-lemma";
  if (!m->is_finite()) throw Error(ErrorKind::unsupported, "generator lemma check needs a finite algebra");
  std::set<Element> S(G.begin(), G.end());
  S.insert(m->zero());
  S.insert(*m->top());
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Element> cur(S.begin(), S.end());
    for (auto& x : cur)
      for (auto& y : cur)
        for (auto& z : {m->oplus(x, y), m->join(x, y), m->meet(x, y)}) changed |= S.insert(z).second;
    for (auto& b : cur) {
      if (!m->is_idempotent(b)) continue;
      for (auto& x : cur)
        if (m->leq(x, b)) changed |= S.insert(m->lambda(b, x)).second;
    }
  }
  for (auto& x : m->elements(0))
    if (!S.count(x)) {
      std::string members;
      for (auto& s : S) members += (members.empty() ? "" : " ") + m->format(s);
      return Verdict::failing(check, "proper-subalgebra", {{"missing", m->format(x)}, {"closure", members}});
    }
  return Verdict::passing(check, true, 0, "closure");
}

}  // namespace emvkit
