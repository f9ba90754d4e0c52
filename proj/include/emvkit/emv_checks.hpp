#pragma once

// Axiom checkers for EMV-algebras, full subsets, full subalgebras, ideals,
// and the pomonoid-style alternative axiomatization.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "emvkit/core.hpp"
#include "emvkit/emv_algebra.hpp"
#include "emvkit/mv_core.hpp"

namespace emvkit {

namespace detail {

inline Verdict fail_with(const std::string& check, const std::string& clause, const EmvAlgebra& m,
                         std::vector<std::pair<std::string, Element>> wit, int bound) {
  std::map<std::string, std::string> w;
  for (auto& [k, v] : wit) w[k] = m.format(v);
  auto out = Verdict::failing(check, clause, std::move(w), bound);
  if (bound > 0) out.status = Status::fail;
  return out;
}

/// Minimum of { z ≤ b : x ⊕ z = b } by a scan, independent of the backend's λ.
inline std::optional<Element> scan_lambda(const EmvAlgebra& m, const std::vector<Element>& interval, const Element& b,
                                          const Element& x) {
  std::vector<Element> cand;
  for (auto& z : interval)
    if (m.oplus(x, z) == b) cand.push_back(z);
  for (auto& z : cand) {
    bool least = true;
    for (auto& w : cand)
      if (!m.leq(z, w)) least = false;
    if (least) return z;
  }
  return std::nullopt;
}

}  // namespace detail

/// EMV1–EMV4, natural order, and (finite case) existence of a top. Infinite
/// backends are checked on the slice at `level`.
inline Verdict check_emv_axioms(const EmvAlgebra& m, int level = kDefaultBound) {
  const std::string check = "emv-axioms";
  const bool exhaustive = m.is_finite();
  const int bound = exhaustive ? 0 : level;
  auto E = m.elements(level);
  auto fail = [&](const std::string& clause, std::vector<std::pair<std::string, Element>> w) {
    return detail::fail_with(check, clause, m, std::move(w), bound);
  };
  const Element zero = m.zero();

  try {
    // EMV1: distributive lattice with least element 0.
    for (auto& x : E) {
      if (m.meet(zero, x) != zero || m.join(zero, x) != x) return fail("EMV1", {{"x", x}});
      if (m.join(x, x) != x || m.meet(x, x) != x) return fail("EMV1", {{"x", x}});
    }
    for (auto& x : E)
      for (auto& y : E) {
        if (m.join(x, y) != m.join(y, x) || m.meet(x, y) != m.meet(y, x)) return fail("EMV1", {{"x", x}, {"y", y}});
        if (m.join(x, m.meet(x, y)) != x || m.meet(x, m.join(x, y)) != x) return fail("EMV1", {{"x", x}, {"y", y}});
      }
    for (auto& x : E)
      for (auto& y : E)
        for (auto& z : E) {
          if (m.join(m.join(x, y), z) != m.join(x, m.join(y, z)) || m.meet(m.meet(x, y), z) != m.meet(x, m.meet(y, z)))
            return fail("EMV1", {{"x", x}, {"y", y}, {"z", z}});
          if (m.meet(x, m.join(y, z)) != m.join(m.meet(x, y), m.meet(x, z)))
            return fail("EMV1", {{"x", x}, {"y", y}, {"z", z}});
        }

    // EMV2: commutative ordered monoid with neutral 0.
    for (auto& x : E)
      if (m.oplus(x, zero) != x) return fail("EMV2", {{"x", x}});
    for (auto& x : E)
      for (auto& y : E)
        if (m.oplus(x, y) != m.oplus(y, x)) return fail("EMV2", {{"x", x}, {"y", y}});
    for (auto& x : E)
      for (auto& y : E) {
        const bool le = m.leq(x, y);
        for (auto& z : E) {
          if (m.oplus(m.oplus(x, y), z) != m.oplus(x, m.oplus(y, z))) return fail("EMV2", {{"x", x}, {"y", y}, {"z", z}});
          if (le && !m.leq(m.oplus(x, z), m.oplus(y, z))) return fail("EMV2", {{"x", x}, {"y", y}, {"z", z}});
        }
      }

    // EMV4: every element below an idempotent.
    for (auto& x : E) {
      auto d = m.dominating(x);
      if (!m.is_idempotent(d) || !m.leq(x, d)) return fail("EMV4", {{"x", x}, {"dominating", d}});
    }

    // Natural order: x ≤ y iff x ⊕ z = y for some z. The candidate
    // z = λ_a(x) ⊙ y is tried before a search of the wider slice.
    auto wide = exhaustive ? E : m.elements(search_level(level));
    for (auto& x : E)
      for (auto& y : E) {
        bool exists = false;
        const bool le = m.leq(x, y);
        if (le) {
          auto a = m.dominating(m.join(x, y));
          exists = m.oplus(x, odot_at(m, a, m.lambda(a, x), y)) == y;
        }
        for (std::size_t i = 0; !exists && i < wide.size(); ++i)
          if (m.oplus(x, wide[i]) == y) exists = true;
        if (exists != le) {
          auto v = fail("natural-order", {{"x", x}, {"y", y}});
          if (le && !exhaustive) v.status = Status::fail_up_to_bound;
          return v;
        }
      }

    // EMV3: λ_b exists, matches an independent scan, and [0,b] is an MV-algebra.
    for (auto& b : m.idempotents(level)) {
      if (!m.interval_finite(b)) continue;
      auto interval = m.below(b, level);
      for (auto& x : interval) {
        auto expected = detail::scan_lambda(m, interval, b, x);
        if (!expected) return fail("EMV3", {{"b", b}, {"x", x}});
        Element got;
        try {
          got = m.lambda(b, x);
        } catch (const Error&) {
          return fail("EMV3", {{"b", b}, {"x", x}});
        }
        if (got != *expected) return fail("EMV3", {{"b", b}, {"x", x}, {"lambda", got}});
      }
      auto rep = check_mv_axioms(interval_mv(m, b).mv);
      if (!rep.pass) {
        auto v = fail("EMV3", {{"b", b}});
        v.witness["mv-axiom"] = rep.axiom;
        return v;
      }
    }

    // A finite EMV-algebra has a top: the join of all idempotents.
    if (exhaustive) {
      auto I = m.idempotents(level);
      Element j = zero;
      for (auto& a : I) j = m.join(j, a);
      if (!m.is_idempotent(j)) return fail("top", {{"join", j}});
      for (auto& x : E)
        if (!m.leq(x, j)) return fail("top", {{"join", j}, {"x", x}});
    }
  } catch (const Error& e) {
    auto v = Verdict::failing(check, "evaluation", {{"error", e.what()}}, bound);
    return v;
  }
  return Verdict::passing(check, exhaustive, level, "scan");
}

/// Every idempotent (up to `level`) lies below a member of S. Membership of
/// S is given by an enumerator so that infinite full subsets can be probed.
inline Verdict is_full(const EmvAlgebra& m, const std::function<std::vector<Element>(int)>& S, int level = kDefaultBound) {
  const std::string check = "full-subset";
  const bool exhaustive = m.is_finite();
  auto members = S(exhaustive ? level : search_level(level));
  for (auto& s : members)
    if (!m.is_idempotent(s)) throw Error(ErrorKind::domain_error, m.format(s) + " is not idempotent");
  for (auto& b : m.idempotents(level)) {
    bool covered = false;
    for (auto& s : members)
      if (m.leq(b, s)) {
        covered = true;
        break;
      }
    if (!covered) {
      auto v = detail::fail_with(check, "uncovered", m, {{"idempotent", b}}, exhaustive ? 0 : level);
      if (!exhaustive) v.status = Status::fail_up_to_bound;
      return v;
    }
  }
  return Verdict::passing(check, exhaustive, level, "search");
}

inline Verdict is_full(const EmvAlgebra& m, const std::vector<Element>& S, int level = kDefaultBound) {
  return is_full(m, [S](int) { return S; }, level);
}

/// Subset given by a membership predicate (bounded by the slice at `level`).
struct Subset {
  std::string name;
  std::function<bool(const Element&)> contains;
};

inline Subset subset_of(std::string name, const std::vector<Element>& xs) {
  std::set<Element> s(xs.begin(), xs.end());
  return Subset{std::move(name), [s](const Element& x) { return s.count(x) != 0; }};
}

/// Closure under ⊕, ∨, ∧, 0; A ∩ I(M) full; each [0,a] ∩ A an MV-subalgebra.
inline Verdict is_full_subalgebra(const EmvAlgebra& m, const Subset& A, int level = kDefaultBound) {
  const std::string check = "full-subalgebra";
  const bool exhaustive = m.is_finite();
  const int bound = exhaustive ? 0 : level;
  std::vector<Element> members;
  for (auto& x : m.elements(level))
    if (A.contains(x)) members.push_back(x);
  if (!A.contains(m.zero())) return detail::fail_with(check, "zero", m, {}, bound);
  for (auto& x : members)
    for (auto& y : members)
      for (auto [op, z] : {std::pair<const char*, Element>{"oplus", m.oplus(x, y)}, {"join", m.join(x, y)}, {"meet", m.meet(x, y)}})
        if (!A.contains(z)) {
          auto v = detail::fail_with(check, "closure", m, {{"x", x}, {"y", y}}, bound);
          v.witness["op"] = op;
          return v;
        }
  std::vector<Element> idem;
  for (auto& x : members)
    if (m.is_idempotent(x)) idem.push_back(x);
  auto search = m.is_finite() ? m.elements(level) : m.elements(search_level(level));
  for (auto& b : m.idempotents(level)) {
    bool covered = false;
    for (auto& s : search)
      if (A.contains(s) && m.is_idempotent(s) && m.leq(b, s)) {
        covered = true;
        break;
      }
    if (!covered) {
      auto v = detail::fail_with(check, "fullness", m, {{"idempotent", b}}, bound);
      if (!exhaustive) v.status = Status::fail_up_to_bound;
      return v;
    }
  }
  for (auto& a : idem)
    for (auto& x : members)
      if (m.leq(x, a) && !A.contains(m.lambda(a, x)))
        return detail::fail_with(check, "interval-subalgebra", m, {{"a", a}, {"x", x}}, bound);
  return Verdict::passing(check, exhaustive, level, "scan");
}

/// Ideal: contains 0, downward closed, closed under ⊕.
inline Verdict is_ideal(const EmvAlgebra& m, const Subset& I, int level = kDefaultBound) {
  const std::string check = "ideal";
  const bool exhaustive = m.is_finite();
  const int bound = exhaustive ? 0 : level;
  auto E = m.elements(level);
  if (!I.contains(m.zero())) return detail::fail_with(check, "zero", m, {}, bound);
  for (auto& x : E) {
    if (!I.contains(x)) continue;
    for (auto& y : E) {
      if (m.leq(y, x) && !I.contains(y)) return detail::fail_with(check, "downward", m, {{"x", x}, {"y", y}}, bound);
      if (I.contains(y) && !I.contains(m.oplus(x, y)))
        return detail::fail_with(check, "oplus", m, {{"x", x}, {"y", y}}, bound);
    }
  }
  return Verdict::passing(check, exhaustive, level, "scan");
}

/// Proper ideal such that adding any y outside it generates everything:
/// with a top, some z ∈ I and n ≤ 8 give z ⊕ n·y = 1; without a top, every
/// element of the slice is covered by such a z ⊕ n·y.
inline Verdict is_maximal_ideal(const EmvAlgebra& m, const Subset& I, int level = kDefaultBound) {
  const std::string check = "maximal-ideal";
  auto base = is_ideal(m, I, level);
  if (!base.ok()) {
    base.check = check;
    return base;
  }
  const bool exhaustive = m.is_finite();
  const int bound = exhaustive ? 0 : level;
  auto E = m.elements(level);
  std::vector<Element> inside;
  bool proper = false;
  for (auto& x : E) {
    if (I.contains(x))
      inside.push_back(x);
    else
      proper = true;
  }
  if (!proper) return detail::fail_with(check, "not-proper", m, {}, bound);
  auto top = m.top();
  for (auto& y : E) {
    if (I.contains(y)) continue;
    std::vector<Element> reach;
    Element ny = y;
    for (int n = 1; n <= 8; ++n) {
      for (auto& z : inside) reach.push_back(m.oplus(z, ny));
      ny = m.oplus(ny, y);
    }
    bool generates = true;
    if (top) {
      generates = std::find(reach.begin(), reach.end(), *top) != reach.end();
    } else {
      for (auto& u : E) {
        bool cov = false;
        for (auto& r : reach)
          if (m.leq(u, r)) {
            cov = true;
            break;
          }
        if (!cov) {
          generates = false;
          break;
        }
      }
    }
    if (!generates) return detail::fail_with(check, "not-maximal", m, {{"y", y}}, bound);
  }
  return Verdict::passing(check, exhaustive, level, "generation");
}

// ---------------------------------------------------------------------------

/// Finite commutative pomonoid (M; +, 0, ≤) on indices 0..n-1.
struct FinitePomonoid {
  std::size_t n = 0;
  std::vector<int> plus;   // n*n
  std::vector<bool> le;    // n*n, le[x*n+y] iff x ≤ y
  int zero = 0;
  std::vector<std::string> labels;

  int add(int x, int y) const { return plus[static_cast<std::size_t>(x) * n + static_cast<std::size_t>(y)]; }
  bool leq(int x, int y) const { return le[static_cast<std::size_t>(x) * n + static_cast<std::size_t>(y)]; }
  std::string label(int x) const { return labels.empty() ? std::to_string(x) : labels[static_cast<std::size_t>(x)]; }
};

/// A presentation handed to the alternative-axiom checker: either finite, or
/// infinite and probed through slices.
struct PomonoidPresentation {
  std::string name;
  bool finite = true;
  std::function<FinitePomonoid(int level)> slice;
};

inline PomonoidPresentation pomonoid_from_mv(const FiniteMvAlgebra& mv) {
  FinitePomonoid p;
  p.n = mv.size();
  p.plus = mv.oplus_table();
  p.le.resize(p.n * p.n);
  for (std::size_t x = 0; x < p.n; ++x)
    for (std::size_t y = 0; y < p.n; ++y) p.le[x * p.n + y] = mv.leq(static_cast<int>(x), static_cast<int>(y));
  p.zero = mv.zero();
  p.labels = mv.labels();
  return PomonoidPresentation{mv.name(), true, [p](int) { return p; }};
}

/// Presentation read off an EMV backend slice, using its lattice order.
inline PomonoidPresentation pomonoid_from_emv(AlgebraPtr m) {
  return PomonoidPresentation{m->name(), m->is_finite(), [m](int level) {
                                auto E = m->elements(level);
                                std::map<Element, int> idx;
                                for (std::size_t i = 0; i < E.size(); ++i) idx[E[i]] = static_cast<int>(i);
                                FinitePomonoid p;
                                p.n = E.size();
                                p.plus.resize(p.n * p.n);
                                p.le.resize(p.n * p.n);
                                for (std::size_t x = 0; x < p.n; ++x) {
                                  p.labels.push_back(m->format(E[x]));
                                  for (std::size_t y = 0; y < p.n; ++y) {
                                    p.plus[x * p.n + y] = idx.at(m->oplus(E[x], E[y]));
                                    p.le[x * p.n + y] = m->leq(E[x], E[y]);
                                  }
                                }
                                p.zero = idx.at(m->zero());
                                return p;
                              }};
}

struct AltAxiomReport {
  Verdict conditions;  // (i)-(iv)
  Verdict emv;         // full EMV axioms on the lattice induced by ≤
  bool agree() const { return conditions.ok() == emv.ok(); }
};

namespace detail {

inline std::optional<int> pomonoid_lambda(const FinitePomonoid& p, int b, int x) {
  std::vector<int> cand;
  for (int z = 0; z < static_cast<int>(p.n); ++z)
    if (p.leq(z, b) && p.add(x, z) == b) cand.push_back(z);
  for (int z : cand) {
    bool least = true;
    for (int w : cand)
      if (!p.leq(z, w)) least = false;
    if (least) return z;
  }
  return std::nullopt;
}

}  // namespace detail

/// Conditions (i)–(iv) of the pomonoid characterization; when they hold, the
/// EMV axioms are checked on the TableEmv built from the order's lubs/glbs.
inline AltAxiomReport check_alt_axioms(const PomonoidPresentation& pres, int level = kDefaultBound) {
  const FinitePomonoid p = pres.slice(level);
  const int n = static_cast<int>(p.n);
  const int bound = pres.finite ? 0 : level;
  AltAxiomReport rep;
  auto fail = [&](const std::string& clause, std::map<std::string, std::string> w) {
    auto v = Verdict::failing("alt-axioms", clause, std::move(w), bound);
    return v;
  };
  auto L = [&](int x) { return p.label(x); };

  rep.conditions = [&]() -> Verdict {
    // Premise: commutative monoid with neutral 0.
    for (int x = 0; x < n; ++x) {
      if (p.add(x, p.zero) != x) return fail("monoid", {{"x", L(x)}});
      for (int y = 0; y < n; ++y) {
        if (p.add(x, y) != p.add(y, x)) return fail("monoid", {{"x", L(x)}, {"y", L(y)}});
        for (int z = 0; z < n; ++z)
          if (p.add(p.add(x, y), z) != p.add(x, p.add(y, z))) return fail("monoid", {{"x", L(x)}, {"y", L(y)}, {"z", L(z)}});
      }
    }
    // (i) poset with least element 0.
    for (int x = 0; x < n; ++x) {
      if (!p.leq(x, x) || !p.leq(p.zero, x)) return fail("i", {{"x", L(x)}});
      for (int y = 0; y < n; ++y) {
        if (x != y && p.leq(x, y) && p.leq(y, x)) return fail("i", {{"x", L(x)}, {"y", L(y)}});
        for (int z = 0; z < n; ++z)
          if (p.leq(x, y) && p.leq(y, z) && !p.leq(x, z)) return fail("i", {{"x", L(x)}, {"y", L(y)}, {"z", L(z)}});
      }
    }
    std::vector<int> idem;
    for (int a = 0; a < n; ++a)
      if (p.add(a, a) == a) idem.push_back(a);
    // (ii) any two elements lie below a common idempotent.
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        bool found = false;
        for (int a : idem)
          if (p.leq(x, a) && p.leq(y, a)) {
            found = true;
            break;
          }
        if (!found) return fail("ii", {{"x", L(x)}, {"y", L(y)}});
      }
    // (iii) λ_b exists and ([0,b]; +, λ_b, 0, b) is an MV-algebra.
    std::map<std::pair<int, int>, int> lam;
    for (int b : idem) {
      std::vector<int> iv;
      for (int x = 0; x < n; ++x)
        if (p.leq(x, b)) iv.push_back(x);
      std::map<int, int> pos;
      for (std::size_t i = 0; i < iv.size(); ++i) pos[iv[i]] = static_cast<int>(i);
      std::vector<int> plus_t(iv.size() * iv.size()), neg_t(iv.size());
      for (std::size_t i = 0; i < iv.size(); ++i) {
        auto l = detail::pomonoid_lambda(p, b, iv[i]);
        if (!l) return fail("iii", {{"b", L(b)}, {"x", L(iv[i])}});
        lam[{b, iv[i]}] = *l;
        neg_t[i] = pos.at(*l);
        for (std::size_t j = 0; j < iv.size(); ++j) {
          auto it = pos.find(p.add(iv[i], iv[j]));
          if (it == pos.end()) return fail("iii", {{"b", L(b)}, {"x", L(iv[i])}, {"y", L(iv[j])}});
          plus_t[i * iv.size() + j] = it->second;
        }
      }
      auto mv = FiniteMvAlgebra::from_tables(iv.size(), plus_t, neg_t, pos.at(p.zero), pos.at(b));
      auto r = check_mv_axioms(mv);
      if (!r.pass) {
        auto v = fail("iii", {{"b", L(b)}});
        v.witness["mv-axiom"] = r.axiom;
        return v;
      }
    }
    // (iv) x ≤ y iff λ_b(x) + y = b on every [0,b].
    for (int b : idem)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (!p.leq(x, b) || !p.leq(y, b)) continue;
          if (p.leq(x, y) != (p.add(lam.at({b, x}), y) == b)) return fail("iv", {{"b", L(b)}, {"x", L(x)}, {"y", L(y)}});
        }
    return Verdict::passing("alt-axioms", pres.finite, level, "scan");
  }();

  // EMV side: lattice from the order (lubs/glbs), then the EMV checker.
  rep.emv = [&]() -> Verdict {
    std::vector<int> lub(static_cast<std::size_t>(n * n), -1), glb(lub.size(), -1);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        for (int u = 0; u < n; ++u) {
          if (p.leq(x, u) && p.leq(y, u)) {
            bool least = true;
            for (int v = 0; v < n && least; ++v)
              if (p.leq(x, v) && p.leq(y, v) && !p.leq(u, v)) least = false;
            if (least) lub[static_cast<std::size_t>(x * n + y)] = u;
          }
          if (p.leq(u, x) && p.leq(u, y)) {
            bool greatest = true;
            for (int v = 0; v < n && greatest; ++v)
              if (p.leq(v, x) && p.leq(v, y) && !p.leq(v, u)) greatest = false;
            if (greatest) glb[static_cast<std::size_t>(x * n + y)] = u;
          }
        }
        if (lub[static_cast<std::size_t>(x * n + y)] < 0 || glb[static_cast<std::size_t>(x * n + y)] < 0)
          return Verdict::failing("emv-axioms", "EMV1", {{"x", L(x)}, {"y", L(y)}, {"reason", "no lub/glb"}}, bound);
      }
    auto t = TableEmv::from_tables(p.n, lub, glb, p.plus, p.zero, p.labels, pres.name);
    // A slice of an infinite presentation is finite; report it as bounded.
    auto v = check_emv_axioms(*t, level);
    if (!pres.finite && v.status == Status::pass) {
      v.status = Status::pass_up_to_bound;
      v.bound = level;
    }
    if (!pres.finite && v.status == Status::fail) v.bound = level;
    return v;
  }();
  return rep;
}

}  // namespace emvkit
