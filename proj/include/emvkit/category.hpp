#pragma once

// Finite products with mediating morphisms, and the category law suite over
// pools of morphisms and strong homomorphisms.

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "emvkit/core.hpp"
#include "emvkit/emv_algebra.hpp"
#include "emvkit/morphism.hpp"

namespace emvkit {

/// Componentwise product of finitely many EMV-algebras. Keys concatenate the
/// factor keys, each prefixed by its length.
class ProductEmv : public EmvAlgebra {
 public:
  explicit ProductEmv(std::vector<AlgebraPtr> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw Error(ErrorKind::invalid_input, "product needs at least one factor");
  }

  std::size_t arity() const { return factors_.size(); }
  const std::vector<AlgebraPtr>& factors() const { return factors_; }
  const AlgebraPtr& factor(std::size_t i) const { return factors_.at(i); }

  Element tuple(const std::vector<Element>& xs) const {
    if (xs.size() != factors_.size()) throw Error(ErrorKind::invalid_input, "tuple arity mismatch");
    std::vector<std::int64_t> key;
    for (auto& x : xs) {
      key.push_back(static_cast<std::int64_t>(x.key().size()));
      key.insert(key.end(), x.key().begin(), x.key().end());
    }
    return Element(std::move(key));
  }

  std::vector<Element> components(const Element& x) const {
    std::vector<Element> out;
    const auto& k = x.key();
    std::size_t p = 0;
    while (p < k.size()) {
      auto len = static_cast<std::size_t>(k[p]);
      if (p + 1 + len > k.size()) throw Error(ErrorKind::invalid_input, "malformed product key");
      out.emplace_back(std::vector<std::int64_t>(k.begin() + static_cast<std::ptrdiff_t>(p + 1),
                                                 k.begin() + static_cast<std::ptrdiff_t>(p + 1 + len)));
      p += 1 + len;
    }
    if (out.size() != factors_.size()) throw Error(ErrorKind::invalid_input, "product key has the wrong arity");
    return out;
  }

  Element component(const Element& x, std::size_t i) const { return components(x).at(i); }

  std::string name() const override {
    std::string s = "Prod[";
    for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? "," : "") + factors_[i]->name();
    return s + "]";
  }
  bool is_finite() const override {
    return std::all_of(factors_.begin(), factors_.end(), [](auto& f) { return f->is_finite(); });
  }
  std::optional<Element> top() const override {
    std::vector<Element> t;
    for (auto& f : factors_) {
      auto ft = f->top();
      if (!ft) return std::nullopt;
      t.push_back(*ft);
    }
    return tuple(t);
  }
  Element zero() const override {
    std::vector<Element> z;
    for (auto& f : factors_) z.push_back(f->zero());
    return tuple(z);
  }
  Element join(const Element& x, const Element& y) const override {
    return zip(x, y, [](const EmvAlgebra& f, const Element& a, const Element& b) { return f.join(a, b); });
  }
  Element meet(const Element& x, const Element& y) const override {
    return zip(x, y, [](const EmvAlgebra& f, const Element& a, const Element& b) { return f.meet(a, b); });
  }
  Element oplus(const Element& x, const Element& y) const override {
    return zip(x, y, [](const EmvAlgebra& f, const Element& a, const Element& b) { return f.oplus(a, b); });
  }
  Element dominating(const Element& x) const override {
    auto xs = components(x);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = factors_[i]->dominating(xs[i]);
    return tuple(xs);
  }
  bool leq(const Element& x, const Element& y) const override {
    auto xs = components(x), ys = components(y);
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!factors_[i]->leq(xs[i], ys[i])) return false;
    return true;
  }
  bool is_idempotent(const Element& x) const override {
    auto xs = components(x);
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!factors_[i]->is_idempotent(xs[i])) return false;
    return true;
  }
  std::vector<Element> elements(int level) const override {
    return cartesian([level](const EmvAlgebra& f) { return f.elements(level); });
  }
  std::vector<Element> idempotents(int level) const override {
    return cartesian([level](const EmvAlgebra& f) { return f.idempotents(level); });
  }
  bool contains(const Element& x) const override {
    try {
      auto xs = components(x);
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (!factors_[i]->contains(xs[i])) return false;
      return true;
    } catch (const Error&) {
      return false;
    }
  }
  std::string format(const Element& x) const override {
    auto xs = components(x);
    std::string s = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + factors_[i]->format(xs[i]);
    return s + ")";
  }
  int level_of(const Element& x) const override {
    auto xs = components(x);
    int l = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) l = std::max(l, factors_[i]->level_of(xs[i]));
    return l;
  }
  bool interval_finite(const Element& a) const override {
    auto as = components(a);
    for (std::size_t i = 0; i < as.size(); ++i)
      if (!factors_[i]->interval_finite(as[i])) return false;
    return true;
  }

 protected:
  Element do_lambda(const Element& b, const Element& x) const override {
    auto bs = components(b), xs = components(x);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = factors_[i]->lambda(bs[i], xs[i]);
    return tuple(xs);
  }

 private:
  template <class Op>
  Element zip(const Element& x, const Element& y, Op op) const {
    auto xs = components(x), ys = components(y);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = op(*factors_[i], xs[i], ys[i]);
    return tuple(xs);
  }

  std::vector<Element> cartesian(const std::function<std::vector<Element>(const EmvAlgebra&)>& pick) const {
    std::vector<std::vector<Element>> parts;
    for (auto& f : factors_) parts.push_back(pick(*f));
    std::vector<Element> out;
    std::vector<Element> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == parts.size()) {
        out.push_back(tuple(cur));
        return;
      }
      for (auto& x : parts[i]) {
        cur.push_back(x);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
    return out;
  }

  std::vector<AlgebraPtr> factors_;
};

inline std::shared_ptr<ProductEmv> product_emv(std::vector<AlgebraPtr> factors) {
  return std::make_shared<ProductEmv>(std::move(factors));
}

inline StrongEmvHom projection_hom(std::shared_ptr<const ProductEmv> p, std::size_t i) {
  return StrongEmvHom{p, p->factor(i), [p, i](const Element& x) { return p->component(x, i); },
                      "pi" + std::to_string(i)};
}

inline EmvMorphism projection_family(std::shared_ptr<const ProductEmv> p, std::size_t i, int level = kDefaultBound) {
  auto f = morphism_from_strong_hom(projection_hom(p, i), level);
  f.name = "pi" + std::to_string(i);
  return f;
}

/// g_a(x) = (f_{k,a}(x))_k after normalizing each f_k to e(f_k) = I(M).
inline EmvMorphism mediating_morphism(AlgebraPtr m, const std::vector<EmvMorphism>& fs, int level = kDefaultBound) {
  if (fs.empty()) throw Error(ErrorKind::invalid_input, "mediating morphism needs at least one factor");
  std::vector<AlgebraPtr> targets;
  for (auto& f : fs) {
    if (!same_algebra(f.source, m)) throw Error(ErrorKind::invalid_input, f.name + " does not start at " + m->name());
    targets.push_back(f.target);
    // Fails when the normalization to e(f) = I(M) is not possible.
    restrict_morphism(f, all_idempotents(m), level);
  }
  auto P = product_emv(targets);
  auto make = [m, P, fs, level](const Element& a) {
    std::vector<MorphismEntry> parts;
    std::vector<Element> tops;
    for (auto& f : fs) {
      auto e = detail::restriction_pick(f, a, level);
      if (!e) throw Error(ErrorKind::bound_exhausted, f.name + " has no entry above " + m->format(a));
      parts.push_back(*e);
      tops.push_back(e->image_top);
    }
    return MorphismEntry{m->format(a), a, P->tuple(tops), [P, parts](const Element& x) {
                           std::vector<Element> v;
                           for (auto& e : parts) v.push_back(e(x));
                           return P->tuple(v);
                         }};
  };
  EmvMorphism g;
  g.source = m;
  g.target = P;
  g.name = "mediating";
  g.finite_index = m->is_finite();
  g.enumerate = [m, make](int l) {
    std::vector<MorphismEntry> out;
    for (auto& a : m->idempotents(l)) out.push_back(make(a));
    return out;
  };
  g.source_cover = [make](const Element& b) -> std::optional<MorphismEntry> { return make(b); };
  g.directed = [m, make](const MorphismEntry& i, const MorphismEntry& j) -> std::optional<MorphismEntry> {
    return make(m->join(i.domain_top, j.domain_top));
  };
  return g;
}

/// A competitor h must satisfy π_k∘h ≈ f_k for all k; it is then compared
/// with the mediating morphism. Only supplied competitors are tested.
inline Verdict check_product_universal(AlgebraPtr m, const std::vector<EmvMorphism>& fs, const EmvMorphism& candidate,
                                       int level = kDefaultBound) {
  const std::string check = "product-universal";
  auto P = std::dynamic_pointer_cast<const ProductEmv>(candidate.target);
  if (!P || P->arity() != fs.size())
    throw Error(ErrorKind::invalid_input, "candidate does not map into a product of the right arity");
  for (std::size_t k = 0; k < fs.size(); ++k) {
    auto pre = approx_equal(compose(projection_family(P, k, level), candidate, level), fs[k], level);
    if (!pre.ok()) {
      Verdict v;
      v.check = check;
      v.status = Status::not_a_competitor;
      v.clause = "projection";
      v.witness = pre.witness;
      v.witness["factor"] = std::to_string(k);
      v.bound = pre.bound;
      v.notes.push_back("uniqueness is tested against supplied competitors only");
      return v;
    }
  }
  auto g = mediating_morphism(m, fs, level);
  auto v = approx_equal(candidate, g, level);
  v.check = check;
  v.notes.push_back("uniqueness is tested against supplied competitors only");
  return v;
}

// ---------------------------------------------------------------------------
// Law suite

struct LawPool {
  std::vector<EmvMorphism> morphisms;
  std::vector<StrongEmvHom> strong_homs;
};

namespace detail {

inline bool composable(const EmvMorphism& g, const EmvMorphism& f) { return same_algebra(f.target, g.source); }

inline Verdict pointwise_equal(const StrongEmvHom& a, const StrongEmvHom& b, int level) {
  const auto& S = *a.source;
  for (auto& x : S.elements(level))
    if (a(x) != b(x)) return Verdict::failing("pointwise", "value", {{"x", S.format(x)}}, S.is_finite() ? 0 : level);
  return Verdict::passing("pointwise", S.is_finite(), level, "scan");
}

inline Verdict tagged(Verdict v, const std::string& what) {
  if (!v.ok()) v.witness["case"] = what;
  return v;
}

}  // namespace detail

/// One verdict per law, in a fixed order.
inline std::vector<Verdict> law_suite(const LawPool& pool, int level = kDefaultBound) {
  std::vector<Verdict> out;
  if (pool.morphisms.empty() && pool.strong_homs.empty()) {
    Verdict v;
    v.check = "law-suite";
    v.status = Status::vacuous;
    v.notes.push_back("warning: empty pool");
    out.push_back(v);
    return out;
  }
  const auto& P = pool.morphisms;
  auto start = [&](const std::string& id) { return Verdict::passing(id, true, level, ""); };

  std::vector<bool> standard(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) standard[i] = is_standard(P[i], level).ok();

  // Identity laws.
  Verdict ident = start("identity");
  for (auto& f : P) {
    absorb(ident, detail::tagged(approx_equal(compose(f, identity_family(f.source), level), f, level), f.name + "∘Id"));
    absorb(ident, detail::tagged(approx_equal(compose(identity_family(f.target), f, level), f, level), "Id∘" + f.name));
  }
  out.push_back(ident);

  // Class composition: replacing an operand by a ≈-equal pool member keeps the class.
  Verdict wd = start("class-composition");
  for (auto& f : P)
    for (auto& f2 : P) {
      if (&f == &f2 || !same_algebra(f.source, f2.source) || !same_algebra(f.target, f2.target)) continue;
      if (!approx_equal(f, f2, level).ok()) continue;
      for (auto& g : P) {
        if (!detail::composable(g, f)) continue;
        absorb(wd, detail::tagged(approx_equal(compose(g, f, level), compose(g, f2, level), level),
                                  g.name + "∘[" + f.name + "]"));
      }
      for (auto& h : P) {
        if (!detail::composable(f, h)) continue;
        absorb(wd, detail::tagged(approx_equal(compose(f, h, level), compose(f2, h, level), level),
                                  "[" + f.name + "]∘" + h.name));
      }
    }
  out.push_back(wd);

  // Associativity.
  Verdict assoc = start("associativity");
  for (auto& f : P)
    for (auto& g : P) {
      if (!detail::composable(g, f)) continue;
      auto gf = compose(g, f, level);
      for (auto& h : P) {
        if (!detail::composable(h, g)) continue;
        absorb(assoc, detail::tagged(approx_equal(compose(h, gf, level), compose(compose(h, g, level), f, level), level),
                                     h.name + "∘" + g.name + "∘" + f.name));
      }
    }
  out.push_back(assoc);

  // Standard morphisms are closed under composition and ≈-invariant.
  Verdict closure = start("standard-closure");
  Verdict invariance = start("standard-invariance");
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (!standard[i]) continue;
    for (std::size_t j = 0; j < P.size(); ++j) {
      if (standard[j] && detail::composable(P[j], P[i]))
        absorb(closure, detail::tagged(is_standard(compose(P[j], P[i], level), level), P[j].name + "∘" + P[i].name));
      if (j != i && same_algebra(P[i].source, P[j].source) && same_algebra(P[i].target, P[j].target) &&
          approx_equal(P[i], P[j], level).ok())
        absorb(invariance, detail::tagged(is_standard(P[j], level), P[j].name));
    }
  }
  out.push_back(closure);
  out.push_back(invariance);

  // F: [f] ↦ F_f is strong, constant on classes, and H(F_f) ≈ f.
  Verdict fstrong = start("functor-F");
  Verdict fclass = start("F-on-classes");
  Verdict hf = start("round-trip-HF");
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (!standard[i]) continue;
    auto F = extract_strong_hom(P[i], level);
    absorb(fstrong, detail::tagged(check_strong_hom(F, level), P[i].name));
    absorb(hf, detail::tagged(approx_equal(morphism_from_strong_hom(F, level), P[i], level), P[i].name));
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      if (!standard[j] || !same_algebra(P[i].source, P[j].source) || !same_algebra(P[i].target, P[j].target)) continue;
      if (!approx_equal(P[i], P[j], level).ok()) continue;
      absorb(fclass, detail::tagged(detail::pointwise_equal(F, extract_strong_hom(P[j], level), level),
                                    P[i].name + "," + P[j].name));
    }
  }
  out.push_back(fstrong);
  out.push_back(fclass);
  out.push_back(hf);

  // F(H(h)) = h pointwise.
  Verdict fh = start("round-trip-FH");
  for (auto& h : pool.strong_homs) {
    auto Hh = morphism_from_strong_hom(h, level);
    absorb(fh, detail::tagged(detail::pointwise_equal(extract_strong_hom(Hh, level), h, level), h.name));
    absorb(fh, detail::tagged(detail::pointwise_equal(strong_hom_from_coherent(Hh, level), h, level), h.name));
  }
  out.push_back(fh);
  for (auto& v : out)
    if (v.decided_by.empty()) v.decided_by = "suite";
  return out;
}

}  // namespace emvkit
