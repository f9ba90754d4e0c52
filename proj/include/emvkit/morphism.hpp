#pragma once

// EMV-morphism families, strong homomorphisms, and the ≈-calculus on them.
//
// Entries are stored as ambient maps: f_i takes elements x ≤ a_i of the
// source and returns elements of the target below f_i(a_i). Interval tables
// are only materialized for the MV-homomorphism check.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "emvkit/core.hpp"
#include "emvkit/emv_algebra.hpp"
#include "emvkit/emv_checks.hpp"
#include "emvkit/mv_core.hpp"

namespace emvkit {

using ElementMap = std::function<Element(const Element&)>;

struct MorphismEntry {
  std::string key;
  Element domain_top;  // a_i
  Element image_top;   // f_i(a_i)
  ElementMap map;

  Element operator()(const Element& x) const { return map(x); }
};

struct EmvMorphism {
  AlgebraPtr source;
  AlgebraPtr target;
  std::string name;
  /// Entries visible at a level; must be monotone in the level.
  std::function<std::vector<MorphismEntry>(int level)> enumerate;
  bool finite_index = false;

  // Optional witnesses for the existential clauses.
  std::function<std::optional<MorphismEntry>(const Element& b)> source_cover;  // b ≤ a_i
  std::function<std::optional<MorphismEntry>(const Element& c)> target_cover;  // c ≤ f_i(a_i)
  std::function<std::optional<MorphismEntry>(const MorphismEntry&, const MorphismEntry&)> directed;

  std::vector<MorphismEntry> entries(int level) const { return enumerate(level); }
};

/// Family with a fixed, explicit list of entries.
inline EmvMorphism finite_family(AlgebraPtr source, AlgebraPtr target, std::string name,
                                 std::vector<MorphismEntry> entries) {
  EmvMorphism f;
  f.source = std::move(source);
  f.target = std::move(target);
  f.name = std::move(name);
  f.finite_index = true;
  f.enumerate = [entries = std::move(entries)](int) { return entries; };
  return f;
}

struct StrongEmvHom {
  AlgebraPtr source;
  AlgebraPtr target;
  ElementMap map;
  std::string name;

  Element operator()(const Element& x) const { return map(x); }
};

inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a.get() == b.get() || a->name() == b->name();
}

/// Elements of [0,a], exhaustively when the interval is finite.
inline std::vector<Element> interval_elements(const EmvAlgebra& m, const Element& a, int level) {
  if (m.interval_finite(a)) return interval_mv(m, a).elems;
  return m.below(a, level);
}

namespace detail {

/// Caches an enumeration per level. Entry maps are shared, so this is only
/// for enumerations whose result depends on the level alone.
inline std::function<std::vector<MorphismEntry>(int)> memoize(std::function<std::vector<MorphismEntry>(int)> e) {
  struct Cache {
    std::mutex mu;
    std::map<int, std::vector<MorphismEntry>> at;
  };
  auto cache = std::make_shared<Cache>();
  return [e = std::move(e), cache](int l) {
    {
      std::lock_guard<std::mutex> lock(cache->mu);
      auto it = cache->at.find(l);
      if (it != cache->at.end()) return it->second;
    }
    auto v = e(l);
    std::lock_guard<std::mutex> lock(cache->mu);
    return cache->at.emplace(l, std::move(v)).first->second;
  };
}

inline bool exhaustive(const EmvMorphism& f) {
  return f.finite_index && f.source->is_finite() && f.target->is_finite();
}

inline std::string decided(bool witness, bool search) {
  if (witness && search) return "witness+search";
  if (witness) return "witness";
  return "search";
}

}  // namespace detail

/// Checks that one entry is an MV-homomorphism [0,a_i] → [0,f_i(a_i)].
/// Finite intervals are checked on tables; infinite ones on the slice.
inline void check_entry_is_mv_hom(const EmvMorphism& f, const MorphismEntry& e, int level) {
  const auto& S = *f.source;
  const auto& T = *f.target;
  auto bad = [&](const std::string& why) {
    throw Error(ErrorKind::invalid_input, "entry " + e.key + " of " + f.name + " is not an MV-homomorphism: " + why);
  };
  if (!S.is_idempotent(e.domain_top)) bad("domain top is not idempotent");
  if (!T.is_idempotent(e.image_top)) bad("image top is not idempotent");
  if (e.map(e.domain_top) != e.image_top) bad("top is not preserved");
  if (e.map(S.zero()) != T.zero()) bad("zero is not preserved");
  if (S.interval_finite(e.domain_top) && T.interval_finite(e.image_top)) {
    const auto& A = interval_mv(S, e.domain_top);
    const auto& B = interval_mv(T, e.image_top);
    std::vector<int> table;
    table.reserve(A.elems.size());
    for (auto& x : A.elems) {
      auto y = e.map(x);
      if (!B.contains(y)) bad("image of " + S.format(x) + " leaves the target interval");
      table.push_back(B.to_index(y));
    }
    if (!is_mv_hom(table, A.mv, B.mv)) bad("table check");
    return;
  }
  auto xs = S.below(e.domain_top, level);
  for (auto& x : xs) {
    auto fx = e.map(x);
    if (!T.leq(fx, e.image_top)) bad("image of " + S.format(x) + " leaves the target interval");
    if (e.map(S.lambda(e.domain_top, x)) != T.lambda(e.image_top, fx)) bad("negation at " + S.format(x));
    for (auto& y : xs)
      if (e.map(S.oplus(x, y)) != T.oplus(fx, e.map(y))) bad("oplus at " + S.format(x) + ", " + S.format(y));
  }
}

/// Clauses (i)-(iv); existentials use the witnesses when present and a
/// search at search_level(level) otherwise.
inline Verdict validate_morphism(const EmvMorphism& f, int level = kDefaultBound) {
  const std::string check = "validate-morphism";
  const auto& S = *f.source;
  const auto& T = *f.target;
  const bool exh = detail::exhaustive(f);
  const int bound = exh ? 0 : level;
  auto E = f.entries(level);
  auto E2 = f.entries(search_level(level));
  bool used_witness = false, used_search = false;

  for (auto& e : E) check_entry_is_mv_hom(f, e, level);

  auto existential_fail = [&](const std::string& clause, std::map<std::string, std::string> w) {
    auto v = Verdict::failing(check, clause, std::move(w), bound);
    // Search over a finite family on finite algebras is exhaustive.
    v.status = exh ? Status::fail : Status::fail_up_to_bound;
    v.decided_by = detail::decided(used_witness, used_search);
    return v;
  };

  // (i) e(f) full in the source.
  for (auto& b : S.idempotents(level)) {
    bool ok = false;
    if (f.source_cover) {
      auto w = f.source_cover(b);
      if (w && S.leq(b, w->domain_top)) ok = used_witness = true;
    }
    if (!ok) {
      used_search = true;
      for (auto& e : E2)
        if (S.leq(b, e.domain_top)) {
          ok = true;
          break;
        }
    }
    if (!ok) return existential_fail("i", {{"idempotent", S.format(b)}});
  }

  // (ii) images full in the target.
  for (auto& c : T.idempotents(level)) {
    bool ok = false;
    if (f.target_cover) {
      auto w = f.target_cover(c);
      if (w && T.leq(c, w->image_top)) ok = used_witness = true;
    }
    if (!ok) {
      used_search = true;
      for (auto& e : E2)
        if (T.leq(c, e.image_top)) {
          ok = true;
          break;
        }
    }
    if (!ok) return existential_fail("ii", {{"idempotent", T.format(c)}});
  }

  // (iii) f_i(a_i) ≤ f_j(a_j) ⇒ f_i(x) = f_j(x) ∧ f_i(a_i) on [0, a_i∧a_j].
  for (auto& ei : E)
    for (auto& ej : E) {
      if (&ei == &ej || !T.leq(ei.image_top, ej.image_top)) continue;
      for (auto& x : interval_elements(S, S.meet(ei.domain_top, ej.domain_top), level)) {
        if (ei(x) != T.meet(ej(x), ei.image_top)) {
          auto v = Verdict::failing(check, "iii", {{"i", ei.key}, {"j", ej.key}, {"x", S.format(x)}}, bound);
          v.decided_by = "counterexample";
          return v;
        }
      }
    }

  // (iv) directedness.
  for (auto& ei : E)
    for (auto& ej : E) {
      if (ej.key < ei.key) continue;
      auto dominates = [&](const MorphismEntry& t) {
        return S.leq(ei.domain_top, t.domain_top) && S.leq(ej.domain_top, t.domain_top) &&
               T.leq(ei.image_top, t.image_top) && T.leq(ej.image_top, t.image_top);
      };
      bool ok = false;
      if (f.directed) {
        auto w = f.directed(ei, ej);
        if (w && dominates(*w)) ok = used_witness = true;
      }
      if (!ok) {
        used_search = true;
        for (auto& t : E2)
          if (dominates(t)) {
            ok = true;
            break;
          }
      }
      if (!ok) return existential_fail("iv", {{"i", ei.key}, {"j", ej.key}});
    }

  return Verdict::passing(check, exh, level, detail::decided(used_witness, used_search));
}

// ---------------------------------------------------------------------------
// Strong homomorphisms

/// Preserves ∨, ∧, ⊕, 0 and interval negations; idempotent image is full.
inline Verdict check_strong_hom(const StrongEmvHom& h, int level = kDefaultBound) {
  const std::string check = "strong-hom";
  const auto& S = *h.source;
  const auto& T = *h.target;
  const bool exh = S.is_finite() && T.is_finite();
  const int bound = exh ? 0 : level;
  auto fail = [&](const std::string& clause, std::map<std::string, std::string> w) {
    return Verdict::failing(check, clause, std::move(w), bound);
  };
  auto E = S.elements(level);
  if (h(S.zero()) != T.zero()) return fail("zero", {});
  for (auto& x : E) {
    auto hx = h(x);
    for (auto& y : E) {
      auto hy = h(y);
      if (h(S.join(x, y)) != T.join(hx, hy)) return fail("join", {{"x", S.format(x)}, {"y", S.format(y)}});
      if (h(S.meet(x, y)) != T.meet(hx, hy)) return fail("meet", {{"x", S.format(x)}, {"y", S.format(y)}});
      if (h(S.oplus(x, y)) != T.oplus(hx, hy)) return fail("oplus", {{"x", S.format(x)}, {"y", S.format(y)}});
    }
  }
  for (auto& b : S.idempotents(level)) {
    auto hb = h(b);
    for (auto& x : interval_elements(S, b, level))
      if (h(S.lambda(b, x)) != T.lambda(hb, h(x))) return fail("lambda", {{"b", S.format(b)}, {"x", S.format(x)}});
  }
  auto I2 = S.idempotents(search_level(level));
  for (auto& c : T.idempotents(level)) {
    bool ok = false;
    for (auto& b : I2)
      if (T.leq(c, h(b))) {
        ok = true;
        break;
      }
    if (!ok) {
      auto v = fail("full", {{"idempotent", T.format(c)}});
      if (!S.is_finite()) v.status = Status::fail_up_to_bound;
      return v;
    }
  }
  return Verdict::passing(check, exh, level, "scan");
}

inline StrongEmvHom identity_hom(AlgebraPtr m) {
  return StrongEmvHom{m, m, [](const Element& x) { return x; }, "Id_" + m->name()};
}

namespace detail {

/// Entries indexed by every idempotent, with the standard witnesses.
inline EmvMorphism family_over_idempotents(AlgebraPtr source, AlgebraPtr target, std::string name, ElementMap h) {
  EmvMorphism f;
  f.source = source;
  f.target = target;
  f.name = std::move(name);
  f.finite_index = source->is_finite();
  auto make = [source, h](const Element& a) {
    return MorphismEntry{source->format(a), a, h(a), h};
  };
  f.enumerate = memoize([source, make](int level) {
    std::vector<MorphismEntry> out;
    for (auto& a : source->idempotents(level)) out.push_back(make(a));
    return out;
  });
  f.source_cover = [make](const Element& b) -> std::optional<MorphismEntry> { return make(b); };
  f.directed = [source, make](const MorphismEntry& i, const MorphismEntry& j) -> std::optional<MorphismEntry> {
    return make(source->join(i.domain_top, j.domain_top));
  };
  return f;
}

}  // namespace detail

/// The family {h|[0,a]} over all idempotents a.
inline EmvMorphism morphism_from_strong_hom(const StrongEmvHom& h, int level = kDefaultBound) {
  auto v = check_strong_hom(h, level);
  if (!v.ok())
    throw Error(ErrorKind::invalid_input, h.name + " is not a strong homomorphism (clause " + v.clause + ")");
  return detail::family_over_idempotents(h.source, h.target, "H(" + h.name + ")", h.map);
}

inline EmvMorphism identity_family(AlgebraPtr m) {
  auto f = detail::family_over_idempotents(m, m, "Id_" + m->name(), [](const Element& x) { return x; });
  f.target_cover = [m](const Element& c) -> std::optional<MorphismEntry> {
    return MorphismEntry{m->format(c), c, c, [](const Element& x) { return x; }};
  };
  return f;
}

/// First entry with x ≤ a_i, searching up to the level of x.
inline std::optional<MorphismEntry> covering_entry(const EmvMorphism& f, const Element& x, int level) {
  const int l = search_level(std::max(level, f.source->level_of(x)));
  for (auto& e : f.entries(l))
    if (f.source->leq(x, e.domain_top)) return e;
  return std::nullopt;
}

/// f₀(x) = f_a(x) for any a ≥ x, given that entries agree on overlaps.
inline StrongEmvHom strong_hom_from_coherent(const EmvMorphism& f, int level = kDefaultBound) {
  const auto& S = *f.source;
  auto E = f.entries(level);
  for (auto& ei : E)
    for (auto& ej : E) {
      if (!(ei.key < ej.key)) continue;
      for (auto& x : interval_elements(S, S.meet(ei.domain_top, ej.domain_top), level))
        if (ei(x) != ej(x))
          throw Error(ErrorKind::invalid_input, "entries " + ei.key + " and " + ej.key + " disagree at " + S.format(x));
    }
  for (auto& x : S.elements(level))
    if (!covering_entry(f, x, level))
      throw Error(ErrorKind::invalid_input, "no entry of " + f.name + " covers " + S.format(x));
  auto fc = f;
  return StrongEmvHom{f.source, f.target,
                      [fc, level](const Element& x) {
                        auto e = covering_entry(fc, x, level);
                        if (!e) throw Error(ErrorKind::bound_exhausted, "no entry covers " + fc.source->format(x));
                        return (*e)(x);
                      },
                      "f0(" + f.name + ")"};
}

// ---------------------------------------------------------------------------
// Similarity and composition

namespace detail {

inline bool entry_explains(const EmvAlgebra& S, const EmvAlgebra& T, const MorphismEntry& fi, const MorphismEntry& gj,
                           int level) {
  if (!S.leq(fi.domain_top, gj.domain_top)) return false;
  for (auto& x : interval_elements(S, fi.domain_top, level))
    if (fi(x) != T.meet(gj(x), fi.image_top)) return false;
  return true;
}

}  // namespace detail

/// One direction of ≈: every f_i is the meet-restriction of some g_j.
inline Verdict similar(const EmvMorphism& f, const EmvMorphism& g, int level = kDefaultBound) {
  const std::string check = "similar";
  if (!same_algebra(f.source, g.source) || !same_algebra(f.target, g.target))
    throw Error(ErrorKind::invalid_input, "similar: " + f.name + " and " + g.name + " have different source or target");
  const auto& S = *f.source;
  const auto& T = *f.target;
  const bool exh = detail::exhaustive(f) && detail::exhaustive(g);
  auto G = g.entries(search_level(level));
  bool used_witness = false, used_search = false;
  for (auto& fi : f.entries(level)) {
    bool ok = false;
    if (g.source_cover) {
      auto w = g.source_cover(fi.domain_top);
      if (w && detail::entry_explains(S, T, fi, *w, level)) ok = used_witness = true;
    }
    if (ok) continue;
    used_search = true;
    for (auto& gj : G)
      if (detail::entry_explains(S, T, fi, gj, level)) {
        ok = true;
        break;
      }
    if (ok) continue;
    // If g is a morphism and f ≈ g, every g_j with a_i ≤ b_j and
    // f_i(a_i) ≤ g_j(b_j) explains f_i. A failing such j is decisive.
    for (auto& gj : G) {
      if (!S.leq(fi.domain_top, gj.domain_top) || !T.leq(fi.image_top, gj.image_top)) continue;
      for (auto& x : interval_elements(S, fi.domain_top, level))
        if (fi(x) != T.meet(gj(x), fi.image_top)) {
          auto v = Verdict::failing(check, "meet-restriction", {{"i", fi.key}, {"j", gj.key}, {"x", S.format(x)}},
                                    exh ? 0 : level);
          v.decided_by = "counterexample";
          return v;
        }
    }
    auto v = Verdict::failing(check, "no-candidate", {{"i", fi.key}}, exh ? 0 : level);
    v.status = exh ? Status::fail : Status::fail_up_to_bound;
    v.decided_by = "search";
    return v;
  }
  return Verdict::passing(check, exh, level, detail::decided(used_witness, used_search));
}

/// Both directions of similar().
inline Verdict approx_equal(const EmvMorphism& f, const EmvMorphism& g, int level = kDefaultBound) {
  Verdict acc = Verdict::passing("approx-equal", true, level, "");
  absorb(acc, similar(f, g, level));
  absorb(acc, similar(g, f, level));
  return acc;
}

/// h∘f over U = {(i,j) : f_i(a_i) ≤ b_j}, entries h_j∘f_i.
inline EmvMorphism compose(const EmvMorphism& h, const EmvMorphism& f, int level = kDefaultBound) {
  if (!same_algebra(f.target, h.source))
    throw Error(ErrorKind::invalid_input, "compose: target of " + f.name + " is not the source of " + h.name);
  auto M2 = f.target;
  auto M3 = h.target;
  auto pair = [M2, M3](const MorphismEntry& fi, const MorphismEntry& hj) -> std::optional<MorphismEntry> {
    if (!M2->leq(fi.image_top, hj.domain_top)) return std::nullopt;
    ElementMap fm = fi.map, hm = hj.map;
    return MorphismEntry{"(" + fi.key + "," + hj.key + ")", fi.domain_top, hj(fi.image_top),
                         [fm, hm](const Element& x) { return hm(fm(x)); }};
  };
  EmvMorphism out;
  out.source = f.source;
  out.target = h.target;
  out.name = h.name + "∘" + f.name;
  out.finite_index = f.finite_index && h.finite_index;
  auto fe = f.enumerate;
  auto he = h.enumerate;
  out.enumerate = detail::memoize([fe, he, pair](int l) {
    std::vector<MorphismEntry> u;
    auto H = he(l);
    for (auto& fi : fe(l))
      for (auto& hj : H)
        if (auto e = pair(fi, hj)) u.push_back(std::move(*e));
    return u;
  });
  if (out.entries(search_level(level)).empty())
    throw Error(ErrorKind::bound_exhausted, "compose: no pair (i,j) with f_i(a_i) <= b_j up to bound");
  if (f.source_cover && h.source_cover) {
    auto fc = f.source_cover;
    auto hc = h.source_cover;
    out.source_cover = [fc, hc, pair](const Element& b) -> std::optional<MorphismEntry> {
      auto fi = fc(b);
      if (!fi) return std::nullopt;
      auto hj = hc(fi->image_top);
      if (!hj) return std::nullopt;
      return pair(*fi, *hj);
    };
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standard morphisms

namespace detail {

/// Maximum of {f_i(x) : x ≤ a_i} over the given entries, with its key.
inline std::optional<std::pair<Element, std::string>> max_value(const EmvMorphism& f,
                                                               const std::vector<MorphismEntry>& es,
                                                               const Element& x) {
  const auto& S = *f.source;
  const auto& T = *f.target;
  std::vector<std::pair<Element, std::string>> vals;
  for (auto& e : es)
    if (S.leq(x, e.domain_top)) vals.emplace_back(e(x), e.key);
  for (auto& [v, k] : vals) {
    bool top = true;
    for (auto& [w, _] : vals)
      if (!T.leq(w, v)) {
        top = false;
        break;
      }
    if (top) return std::make_pair(v, k);
  }
  return std::nullopt;
}

}  // namespace detail

/// {f_i(x) : x ≤ a_i} has a maximum for every probed x. On infinite index
/// sets the maximum must be stable between two search depths. The witness
/// maps each probed element to a maximizing entry key.
inline Verdict is_standard(const EmvMorphism& f, int level = kDefaultBound) {
  const std::string check = "standard";
  const auto& S = *f.source;
  const bool exh = detail::exhaustive(f);
  auto E1 = f.entries(search_level(level));
  auto E2 = f.entries(search_level(search_level(level)));
  std::map<std::string, std::string> argmax;
  for (auto& x : S.elements(level)) {
    auto m1 = detail::max_value(f, E1, x);
    if (exh) {
      if (!m1) return Verdict::failing(check, "no-max", {{"x", S.format(x)}});
      argmax[S.format(x)] = m1->second;
      continue;
    }
    auto m2 = detail::max_value(f, E2, x);
    if (!m1 || !m2 || m1->first != m2->first) {
      auto v = Verdict::failing(check, "no-max-found", {{"x", S.format(x)}}, level);
      v.status = Status::fail_up_to_bound;
      v.decided_by = "search";
      return v;
    }
    argmax[S.format(x)] = m1->second;
  }
  auto v = Verdict::passing(check, exh, level, "search");
  v.witness = std::move(argmax);
  return v;
}

/// F_f(x) = max{f_i(x) : x ≤ a_i}.
inline StrongEmvHom extract_strong_hom(const EmvMorphism& f, int level = kDefaultBound) {
  auto v = is_standard(f, level);
  if (!v.ok())
    throw Error(ErrorKind::precondition_violation, f.name + " is not standard (" + v.clause + ")");
  auto fc = f;
  return StrongEmvHom{f.source, f.target,
                      [fc, level](const Element& x) {
                        const int l = search_level(std::max(level, fc.source->level_of(x)));
                        auto m = detail::max_value(fc, fc.entries(l), x);
                        if (!m) throw Error(ErrorKind::bound_exhausted, "no maximum at " + fc.source->format(x));
                        return m->first;
                      },
                      "F(" + f.name + ")"};
}

// ---------------------------------------------------------------------------
// Restriction

struct IdempotentSet {
  std::string name;
  std::function<std::vector<Element>(int level)> enumerate;
};

inline IdempotentSet all_idempotents(AlgebraPtr m) {
  return IdempotentSet{"I(" + m->name() + ")", [m](int l) { return m->idempotents(l); }};
}

inline IdempotentSet idempotent_list(std::string name, std::vector<Element> xs) {
  return IdempotentSet{std::move(name), [xs](int) { return xs; }};
}

/// {f_i|[0,b] : b ∈ K}; for each b the entry maximizing f_i(b) among those
/// with b ≤ a_i is used. Every a_t must then be reachable: some b ∈ K with
/// a_t ≤ b and f_t(a_t) ≤ g_b(b).
namespace detail {

/// The entry used for b when restricting: among entries with b ≤ a_i, one
/// maximizing f_i(b). Returned with domain b.
inline std::optional<MorphismEntry> restriction_pick(const EmvMorphism& f, const Element& b, int level) {
  const int l = search_level(std::max(level, f.source->level_of(b)));
  const auto& T = *f.target;
  std::optional<MorphismEntry> best;
  std::optional<Element> best_val;
  for (auto& e : f.entries(l)) {
    if (!f.source->leq(b, e.domain_top)) continue;
    auto v = e(b);
    if (!best || (T.leq(*best_val, v) && *best_val != v)) {
      best = e;
      best_val = v;
    }
  }
  if (!best) return std::nullopt;
  return MorphismEntry{f.source->format(b) + "|" + best->key, b, *best_val, best->map};
}

}  // namespace detail

inline EmvMorphism restrict_morphism(const EmvMorphism& f, const IdempotentSet& K, int level = kDefaultBound) {
  auto full = is_full(*f.source, K.enumerate, level);
  if (!full.ok()) throw Error(ErrorKind::invalid_input, K.name + " is not full (" + full.witness["idempotent"] + ")");
  auto fc = f;
  auto pick = [fc, level](const Element& b) { return detail::restriction_pick(fc, b, level); };

  EmvMorphism out;
  out.source = f.source;
  out.target = f.target;
  out.name = f.name + "|" + K.name;
  out.finite_index = f.finite_index;
  auto Ke = K.enumerate;
  out.enumerate = detail::memoize([Ke, pick](int l) {
    std::vector<MorphismEntry> es;
    for (auto& b : Ke(l))
      if (auto e = pick(b)) es.push_back(std::move(*e));
    return es;
  });

  const auto& S = *f.source;
  const auto& T = *f.target;
  auto G = out.entries(search_level(level));
  for (auto& t : f.entries(level)) {
    bool ok = false;
    for (auto& gb : G)
      if (S.leq(t.domain_top, gb.domain_top) && T.leq(t.image_top, gb.image_top)) {
        ok = true;
        break;
      }
    if (!ok) throw Error(ErrorKind::precondition_violation, "restriction to " + K.name + " cannot reach entry " + t.key);
  }
  return out;
}

/// Entries satisfying a predicate.
inline EmvMorphism subfamily(const EmvMorphism& f, std::function<bool(const MorphismEntry&)> keep, std::string name) {
  auto out = f;
  out.name = std::move(name);
  auto fe = f.enumerate;
  out.enumerate = detail::memoize([fe, keep](int l) {
    std::vector<MorphismEntry> es;
    for (auto& e : fe(l))
      if (keep(e)) es.push_back(e);
    return es;
  });
  out.source_cover = nullptr;
  out.target_cover = nullptr;
  out.directed = nullptr;
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise relations

/// f(x) = g(y): for every (i,j) with x ≤ a_i, y ≤ b_j and f_i(a_i) ≤ g_j(b_j),
/// f_i(x) = g_j(y) ∧ f_i(a_i). No such pair gives a vacuous verdict.
inline Verdict morphism_eq_at(const EmvMorphism& f, const EmvMorphism& g, const Element& x, const Element& y,
                              int level = kDefaultBound) {
  const std::string check = "morphism-eq-at";
  if (!same_algebra(f.source, g.source) || !same_algebra(f.target, g.target))
    throw Error(ErrorKind::invalid_input, "morphism_eq_at: mismatched source or target");
  const auto& S = *f.source;
  const auto& T = *f.target;
  const bool exh = detail::exhaustive(f) && detail::exhaustive(g);
  const int l = std::max({level, S.level_of(x), S.level_of(y)});
  auto G = g.entries(l);
  bool any = false;
  for (auto& fi : f.entries(l)) {
    if (!S.leq(x, fi.domain_top)) continue;
    for (auto& gj : G) {
      if (!S.leq(y, gj.domain_top) || !T.leq(fi.image_top, gj.image_top)) continue;
      any = true;
      if (fi(x) != T.meet(gj(y), fi.image_top)) {
        auto v = Verdict::failing(check, "eq", {{"i", fi.key}, {"j", gj.key}}, exh ? 0 : l);
        v.decided_by = "counterexample";
        return v;
      }
    }
  }
  if (!any) {
    Verdict v;
    v.check = check;
    v.status = Status::vacuous;
    v.bound = exh ? 0 : l;
    v.decided_by = "search";
    v.notes.push_back("no pair (i,j) meets the guard");
    return v;
  }
  return Verdict::passing(check, exh, l, "search");
}

/// f ≈ Id via the two clauses f_i(x) ≤ x and f_i(x) = x for x ≤ f_i(a_i),
/// cross-checked against similar(f, Id).
inline Verdict is_approx_identity(const EmvMorphism& f, int level = kDefaultBound) {
  const std::string check = "approx-identity";
  if (!same_algebra(f.source, f.target)) throw Error(ErrorKind::invalid_input, f.name + " is not an endomorphism");
  const auto& M = *f.source;
  const bool exh = detail::exhaustive(f);
  const int bound = exh ? 0 : level;
  Verdict clauses = Verdict::passing(check, exh, level, "scan");
  for (auto& e : f.entries(level)) {
    bool done = false;
    for (auto& x : interval_elements(M, e.domain_top, level)) {
      auto fx = e(x);
      if (!M.leq(fx, x)) {
        clauses = Verdict::failing(check, "i", {{"i", e.key}, {"x", M.format(x)}}, bound);
        done = true;
        break;
      }
      if (M.leq(x, e.image_top) && fx != x) {
        clauses = Verdict::failing(check, "ii", {{"i", e.key}, {"x", M.format(x)}}, bound);
        done = true;
        break;
      }
    }
    if (done) break;
  }
  auto direct = similar(f, identity_family(f.source), level);
  if (clauses.ok() != direct.ok()) {
    auto v = Verdict::failing(check, "cross-check", {{"clauses", to_string(clauses.status)}, {"similar", to_string(direct.status)}},
                              bound);
    v.notes.push_back("clause check and similar(f, Id) disagree");
    return v;
  }
  clauses.decided_by = "clauses+similar";
  return clauses;
}

/// g∘f ≈ Id and f∘g ≈ Id.
inline Verdict is_approx_isomorphism(const EmvMorphism& f, const EmvMorphism& g, int level = kDefaultBound) {
  Verdict acc = Verdict::passing("approx-isomorphism", true, level, "");
  auto gf = is_approx_identity(compose(g, f, level), level);
  gf.witness["composite"] = "g∘f";
  absorb(acc, gf);
  auto fg = is_approx_identity(compose(f, g, level), level);
  fg.witness["composite"] = "f∘g";
  absorb(acc, fg);
  acc.check = "approx-isomorphism";
  return acc;
}

}  // namespace emvkit
