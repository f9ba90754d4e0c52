#pragma once

// Congruences, kernels of morphisms, quotients and natural projections.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "emvkit/core.hpp"
#include "emvkit/emv_algebra.hpp"
#include "emvkit/morphism.hpp"

namespace emvkit {

struct Congruence {
  AlgebraPtr carrier;
  std::string name;
  std::function<bool(const Element&, const Element&)> related;
};

inline Congruence diagonal(AlgebraPtr m) {
  return Congruence{m, "diagonal", [](const Element& x, const Element& y) { return x == y; }};
}

inline Congruence all_pairs(AlgebraPtr m) {
  return Congruence{m, "all", [](const Element&, const Element&) { return true; }};
}

/// Partition of a finite carrier given by class ids.
inline Congruence from_classes(AlgebraPtr m, std::string name, std::map<Element, int> cls) {
  return Congruence{m, std::move(name), [cls = std::move(cls)](const Element& x, const Element& y) {
                      return cls.at(x) == cls.at(y);
                    }};
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
};

}  // namespace detail

/// Least congruence of a finite algebra containing the seed pairs.
inline Congruence generate_congruence(AlgebraPtr m, const std::vector<std::pair<Element, Element>>& seeds) {
  if (!m->is_finite()) throw Error(ErrorKind::unsupported, "congruence generation needs a finite carrier");
  auto E = m->elements(0);
  std::map<Element, int> idx;
  for (std::size_t i = 0; i < E.size(); ++i) idx[E[i]] = static_cast<int>(i);
  auto at = [&](const Element& x) {
    auto it = idx.find(x);
    if (it == idx.end()) throw Error(ErrorKind::invalid_input, "seed " + m->format(x) + " is not in the carrier");
    return it->second;
  };
  detail::UnionFind uf(E.size());
  for (auto& [x, y] : seeds) uf.unite(at(x), at(y));
  auto I = m->idempotents(0);
  const int n = static_cast<int>(E.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (uf.find(i) != uf.find(j)) continue;
        const auto& x = E[static_cast<std::size_t>(i)];
        const auto& y = E[static_cast<std::size_t>(j)];
        for (auto& z : E) {
          changed |= uf.unite(at(m->join(x, z)), at(m->join(y, z)));
          changed |= uf.unite(at(m->meet(x, z)), at(m->meet(y, z)));
          changed |= uf.unite(at(m->oplus(x, z)), at(m->oplus(y, z)));
        }
        for (auto& b : I)
          if (m->leq(x, b) && m->leq(y, b)) changed |= uf.unite(at(m->lambda(b, x)), at(m->lambda(b, y)));
      }
  }
  std::map<Element, int> cls;
  for (int i = 0; i < n; ++i) cls[E[static_cast<std::size_t>(i)]] = uf.find(i);
  return from_classes(m, "generated", std::move(cls));
}

/// Equivalence, compatibility with ∨, ∧, ⊕, and with every λ_b (b ≥ x, y).
inline Verdict is_congruence(const EmvAlgebra& m, const Congruence& theta, int level = kDefaultBound) {
  const std::string check = "congruence";
  const bool exh = m.is_finite();
  const int bound = exh ? 0 : level;
  auto E = m.elements(level);
  auto I = m.idempotents(level);
  auto fail = [&](const std::string& clause, std::vector<std::pair<std::string, Element>> w) {
    std::map<std::string, std::string> out;
    for (auto& [k, v] : w) out[k] = m.format(v);
    return Verdict::failing(check, clause, std::move(out), bound);
  };
  const auto& R = theta.related;
  for (auto& x : E) {
    if (!R(x, x)) return fail("reflexive", {{"x", x}});
    for (auto& y : E) {
      if (R(x, y) != R(y, x)) return fail("symmetric", {{"x", x}, {"y", y}});
      if (!R(x, y)) continue;
      for (auto& z : E) {
        if (R(y, z) && !R(x, z)) return fail("transitive", {{"x", x}, {"y", y}, {"z", z}});
        if (!R(m.join(x, z), m.join(y, z))) return fail("join", {{"x", x}, {"y", y}, {"z", z}});
        if (!R(m.meet(x, z), m.meet(y, z))) return fail("meet", {{"x", x}, {"y", y}, {"z", z}});
        if (!R(m.oplus(x, z), m.oplus(y, z))) return fail("oplus", {{"x", x}, {"y", y}, {"z", z}});
      }
      for (auto& b : I)
        if (m.leq(x, b) && m.leq(y, b) && !R(m.lambda(b, x), m.lambda(b, y)))
          return fail("lambda", {{"x", x}, {"y", y}, {"b", b}});
    }
  }
  return Verdict::passing(check, exh, level, "scan");
}

/// Agreement of two relations on the slice at `level`.
inline Verdict same_relation(const EmvAlgebra& m, const Congruence& a, const Congruence& b, int level = kDefaultBound) {
  auto E = m.elements(level);
  for (auto& x : E)
    for (auto& y : E)
      if (a.related(x, y) != b.related(x, y))
        return Verdict::failing("same-relation", "pair", {{"x", m.format(x)}, {"y", m.format(y)}},
                                m.is_finite() ? 0 : level);
  return Verdict::passing("same-relation", m.is_finite(), level, "scan");
}

/// (x,y) related iff f_i(x) = f_i(y) for every enumerated i with x,y ≤ a_i.
inline Congruence kernel(const EmvMorphism& f, int level = kDefaultBound) {
  auto fc = f;
  return Congruence{f.source, "ker(" + f.name + ")", [fc, level](const Element& x, const Element& y) {
                      const auto& S = *fc.source;
                      const int l = search_level(std::max({level, S.level_of(x), S.level_of(y)}));
                      bool covered = false;
                      for (auto& e : fc.entries(l)) {
                        if (!S.leq(x, e.domain_top) || !S.leq(y, e.domain_top)) continue;
                        covered = true;
                        if (e(x) != e(y)) return false;
                      }
                      if (!covered)
                        throw Error(ErrorKind::bound_exhausted,
                                    "no entry of " + fc.name + " covers " + S.format(x) + " and " + S.format(y));
                      return true;
                    }};
}

struct Quotient {
  std::shared_ptr<const TableEmv> algebra;
  StrongEmvHom class_map;
  std::map<Element, Element> representative;  // class element -> least member
};

/// M/θ on a finite carrier; classes are labelled by their least member.
inline Quotient quotient(AlgebraPtr m, const Congruence& theta) {
  if (!m->is_finite()) throw Error(ErrorKind::unsupported, "quotient needs a finite carrier");
  auto v = is_congruence(*m, theta, 0);
  if (!v.ok())
    throw Error(ErrorKind::precondition_violation, theta.name + " is not a congruence (" + v.clause + ")");
  auto E = m->elements(0);
  std::vector<int> rep_of(E.size(), -1);
  std::vector<int> reps;
  for (std::size_t i = 0; i < E.size(); ++i) {
    for (std::size_t r = 0; r < reps.size(); ++r)
      if (theta.related(E[i], E[static_cast<std::size_t>(reps[r])])) {
        rep_of[i] = static_cast<int>(r);
        break;
      }
    if (rep_of[i] < 0) {
      rep_of[i] = static_cast<int>(reps.size());
      reps.push_back(static_cast<int>(i));
    }
  }
  std::map<Element, int> cls;
  for (std::size_t i = 0; i < E.size(); ++i) cls[E[i]] = rep_of[i];
  const std::size_t k = reps.size();
  std::vector<int> join(k * k), meet(k * k), plus(k * k);
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < k; ++a) {
    const auto& x = E[static_cast<std::size_t>(reps[a])];
    labels.push_back("[" + m->format(x) + "]");
    for (std::size_t b = 0; b < k; ++b) {
      const auto& y = E[static_cast<std::size_t>(reps[b])];
      join[a * k + b] = cls.at(m->join(x, y));
      meet[a * k + b] = cls.at(m->meet(x, y));
      plus[a * k + b] = cls.at(m->oplus(x, y));
    }
  }
  std::shared_ptr<const TableEmv> q = TableEmv::from_tables(k, join, meet, plus, cls.at(m->zero()), labels,
                                                            m->name() + "/" + theta.name);
  std::map<Element, Element> representative;
  for (std::size_t a = 0; a < k; ++a) representative[index_element(static_cast<int>(a))] = E[static_cast<std::size_t>(reps[a])];
  StrongEmvHom pi{m, q, [cls](const Element& x) { return index_element(cls.at(x)); }, "pi"};
  return Quotient{q, pi, representative};
}

/// {π_a} over all idempotents a, π_a(x) = x/θ.
inline EmvMorphism natural_projection(AlgebraPtr m, const Congruence& theta) {
  auto q = quotient(m, theta);
  auto f = morphism_from_strong_hom(q.class_map, 0);
  f.name = "pi_" + theta.name;
  return f;
}

}  // namespace emvkit
