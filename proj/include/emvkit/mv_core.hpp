#pragma once

// Finite MV-algebras given by explicit tables, their axiom checker, the
// natural order, and homomorphism checking/enumeration.

#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "emvkit/core.hpp"
#include "emvkit/mv_term.hpp"

namespace emvkit {

/// Explicit finite MV-algebra on the index set 0..n-1. Fraction labels are
/// presentation only.
class FiniteMvAlgebra {
 public:
  FiniteMvAlgebra() = default;

  /// Builds from raw tables. Indices must be in range; the MV laws themselves
  /// are not enforced here (see check_mv_axioms).
  static FiniteMvAlgebra from_tables(std::size_t n, std::vector<int> oplus, std::vector<int> neg,
                                     int zero, int one, std::vector<std::string> labels = {},
                                     std::string name = {}) {
    if (n == 0) throw Error(ErrorKind::invalid_input, "empty carrier");
    if (oplus.size() != n * n) throw Error(ErrorKind::invalid_input, "oplus table must be n*n");
    if (neg.size() != n) throw Error(ErrorKind::invalid_input, "negation table must have n entries");
    auto in_range = [n](int v) { return v >= 0 && static_cast<std::size_t>(v) < n; };
    for (int v : oplus)
      if (!in_range(v)) throw Error(ErrorKind::invalid_input, "oplus entry out of range");
    for (int v : neg)
      if (!in_range(v)) throw Error(ErrorKind::invalid_input, "negation entry out of range");
    if (!in_range(zero) || !in_range(one)) throw Error(ErrorKind::invalid_input, "constant out of range");
    if (!labels.empty() && labels.size() != n)
      throw Error(ErrorKind::invalid_input, "label count must match carrier size");
    FiniteMvAlgebra m;
    m.n_ = n;
    m.oplus_ = std::move(oplus);
    m.neg_ = std::move(neg);
    m.zero_ = zero;
    m.one_ = one;
    m.labels_ = std::move(labels);
    m.name_ = name.empty() ? "MV" + std::to_string(n) : std::move(name);
    return m;
  }

  std::size_t size() const { return n_; }
  int zero() const { return zero_; }
  int one() const { return one_; }
  const std::string& name() const { return name_; }

  int oplus(int x, int y) const { return oplus_[index(x, y)]; }
  int neg(int x) const { return neg_[static_cast<std::size_t>(x)]; }
  int odot(int x, int y) const { return neg(oplus(neg(x), neg(y))); }
  int join(int x, int y) const { return oplus(odot(x, neg(y)), y); }
  int meet(int x, int y) const { return neg(join(neg(x), neg(y))); }

  /// x ≼ y iff x' ⊕ y = 1.
  bool leq(int x, int y) const { return oplus(neg(x), y) == one_; }
  bool is_idempotent(int x) const { return oplus(x, x) == x; }

  std::string label(int x) const {
    if (!labels_.empty()) return labels_[static_cast<std::size_t>(x)];
    return std::to_string(x);
  }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& oplus_table() const { return oplus_; }
  const std::vector<int>& neg_table() const { return neg_; }

  /// Index of the element carrying `text` as label, if any.
  std::optional<int> find_label(const std::string& text) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == text) return static_cast<int>(i);
    return std::nullopt;
  }

  FiniteMvAlgebra with_oplus(int x, int y, int value) const {
    FiniteMvAlgebra copy = *this;
    copy.oplus_[index(x, y)] = value;
    copy.name_ += "*";
    return copy;
  }
  FiniteMvAlgebra with_neg(int x, int value) const {
    FiniteMvAlgebra copy = *this;
    copy.neg_[static_cast<std::size_t>(x)] = value;
    copy.name_ += "*";
    return copy;
  }

  std::vector<int> elements() const {
    std::vector<int> out(n_);
    std::iota(out.begin(), out.end(), 0);
    return out;
  }

  friend bool operator==(const FiniteMvAlgebra& a, const FiniteMvAlgebra& b) {
    return a.n_ == b.n_ && a.oplus_ == b.oplus_ && a.neg_ == b.neg_ && a.zero_ == b.zero_ &&
           a.one_ == b.one_;
  }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(x) * n_ + static_cast<std::size_t>(y);
  }

  std::size_t n_ = 0;
  std::vector<int> oplus_;
  std::vector<int> neg_;
  int zero_ = 0;
  int one_ = 0;
  std::vector<std::string> labels_;
  std::string name_;
};

namespace detail {

inline int gcd_int(int a, int b) { return std::gcd(a, b); }

inline std::string fraction_label(int p, int q) {
  if (p == 0) return "0";
  if (p == q) return "1";
  int g = gcd_int(p, q);
  return std::to_string(p / g) + "/" + std::to_string(q / g);
}

}  // namespace detail

/// Łukasiewicz chain {0, 1/(n-1), ..., 1}.
inline FiniteMvAlgebra mk_chain(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_size, "chain needs at least 2 elements, got " + std::to_string(n));
  const auto size = static_cast<std::size_t>(n);
  std::vector<int> oplus(size * size), neg(size);
  std::vector<std::string> labels(size);
  for (int x = 0; x < n; ++x) {
    neg[static_cast<std::size_t>(x)] = n - 1 - x;
    labels[static_cast<std::size_t>(x)] = detail::fraction_label(x, n - 1);
    for (int y = 0; y < n; ++y) oplus[static_cast<std::size_t>(x * n + y)] = std::min(x + y, n - 1);
  }
  return FiniteMvAlgebra::from_tables(size, std::move(oplus), std::move(neg), 0, n - 1, std::move(labels),
                                      "L" + std::to_string(n));
}

/// Powerset of `atoms` points; element i is the subset with bitmask i.
inline FiniteMvAlgebra mk_boolean(int atoms) {
  if (atoms < 0) throw Error(ErrorKind::invalid_size, "negative atom count");
  if (atoms > 16) throw Error(ErrorKind::unsupported, "too many atoms");
  const int n = 1 << atoms;
  const auto size = static_cast<std::size_t>(n);
  std::vector<int> oplus(size * size), neg(size);
  std::vector<std::string> labels(size);
  for (int x = 0; x < n; ++x) {
    neg[static_cast<std::size_t>(x)] = (n - 1) & ~x;
    std::string l = "{";
    for (int b = 0; b < atoms; ++b)
      if (x & (1 << b)) l += (l.size() > 1 ? "," : "") + std::to_string(b + 1);
    labels[static_cast<std::size_t>(x)] = l + "}";
    for (int y = 0; y < n; ++y) oplus[static_cast<std::size_t>(x * n + y)] = x | y;
  }
  return FiniteMvAlgebra::from_tables(size, std::move(oplus), std::move(neg), 0, n - 1, std::move(labels),
                                      "B" + std::to_string(atoms));
}

/// Componentwise product; element index is mixed-radix with the first factor
/// most significant.
inline FiniteMvAlgebra mk_product(const std::vector<FiniteMvAlgebra>& factors) {
  if (factors.empty()) throw Error(ErrorKind::invalid_input, "product of an empty list");
  std::size_t n = 1;
  for (const auto& f : factors) n *= f.size();
  if (n > 4096) throw Error(ErrorKind::unsupported, "product carrier too large");

  auto decode = [&](std::size_t idx) {
    std::vector<int> c(factors.size());
    for (std::size_t k = factors.size(); k-- > 0;) {
      c[k] = static_cast<int>(idx % factors[k].size());
      idx /= factors[k].size();
    }
    return c;
  };
  auto encode = [&](const std::vector<int>& c) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < factors.size(); ++k) idx = idx * factors[k].size() + static_cast<std::size_t>(c[k]);
    return static_cast<int>(idx);
  };

  std::vector<int> oplus(n * n), neg(n);
  std::vector<std::string> labels(n);
  std::vector<int> zero(factors.size()), one(factors.size());
  std::string name;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    zero[k] = factors[k].zero();
    one[k] = factors[k].one();
    name += (k ? "x" : "") + factors[k].name();
  }
  for (std::size_t x = 0; x < n; ++x) {
    auto cx = decode(x);
    std::vector<int> cn(factors.size());
    std::string l = "(";
    for (std::size_t k = 0; k < factors.size(); ++k) {
      cn[k] = factors[k].neg(cx[k]);
      l += (k ? "," : "") + factors[k].label(cx[k]);
    }
    labels[x] = l + ")";
    neg[x] = encode(cn);
    for (std::size_t y = 0; y < n; ++y) {
      auto cy = decode(y);
      std::vector<int> cs(factors.size());
      for (std::size_t k = 0; k < factors.size(); ++k) cs[k] = factors[k].oplus(cx[k], cy[k]);
      oplus[x * n + y] = encode(cs);
    }
  }
  return FiniteMvAlgebra::from_tables(n, std::move(oplus), std::move(neg), encode(zero), encode(one),
                                      std::move(labels), factors.size() == 1 ? name : "(" + name + ")");
}

/// Pass, or the first violated axiom with witnesses.
struct MvReport {
  bool pass = true;
  std::string axiom;
  std::vector<int> witnesses;
};

/// Exhaustive check of the MV axioms plus the lattice property of the
/// induced order. Axioms are scanned in a fixed order: neutral, commutative,
/// associative, involution, absorbing-one, axiom-iii, lattice.
inline MvReport check_mv_axioms(const FiniteMvAlgebra& m) {
  const int n = static_cast<int>(m.size());
  auto fail = [](std::string axiom, std::vector<int> w) { return MvReport{false, std::move(axiom), std::move(w)}; };

  for (int x = 0; x < n; ++x)
    if (m.oplus(x, m.zero()) != x || m.oplus(m.zero(), x) != x) return fail("neutral", {x});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (m.oplus(x, y) != m.oplus(y, x)) return fail("commutative", {x, y});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (m.oplus(m.oplus(x, y), z) != m.oplus(x, m.oplus(y, z))) return fail("associative", {x, y, z});
  for (int x = 0; x < n; ++x)
    if (m.neg(m.neg(x)) != x) return fail("involution", {x});
  for (int x = 0; x < n; ++x)
    if (m.oplus(x, m.one()) != m.one()) return fail("absorbing-one", {x});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (m.oplus(x, m.neg(m.oplus(x, m.neg(y)))) != m.oplus(y, m.neg(m.oplus(y, m.neg(x)))))
        return fail("axiom-iii", {x, y});

  // Induced order: partial order with bottom zero and top one, every pair
  // has a join and a meet, and the lattice is distributive.
  for (int x = 0; x < n; ++x) {
    if (!m.leq(x, x)) return fail("lattice", {x});
    if (!m.leq(m.zero(), x) || !m.leq(x, m.one())) return fail("lattice", {x});
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x != y && m.leq(x, y) && m.leq(y, x)) return fail("lattice", {x, y});
      for (int z = 0; z < n; ++z)
        if (m.leq(x, y) && m.leq(y, z) && !m.leq(x, z)) return fail("lattice", {x, y, z});
    }
  std::vector<int> lub(static_cast<std::size_t>(n * n)), glb(static_cast<std::size_t>(n * n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::optional<int> best_up, best_down;
      for (int u = 0; u < n; ++u) {
        if (m.leq(x, u) && m.leq(y, u)) {
          bool least = true;
          for (int v = 0; v < n && least; ++v)
            if (m.leq(x, v) && m.leq(y, v) && !m.leq(u, v)) least = false;
          if (least) best_up = u;
        }
        if (m.leq(u, x) && m.leq(u, y)) {
          bool greatest = true;
          for (int v = 0; v < n && greatest; ++v)
            if (m.leq(v, x) && m.leq(v, y) && !m.leq(v, u)) greatest = false;
          if (greatest) best_down = u;
        }
      }
      if (!best_up || !best_down) return fail("lattice", {x, y});
      lub[static_cast<std::size_t>(x * n + y)] = *best_up;
      glb[static_cast<std::size_t>(x * n + y)] = *best_down;
    }
  auto J = [&](int a, int b) { return lub[static_cast<std::size_t>(a * n + b)]; };
  auto M = [&](int a, int b) { return glb[static_cast<std::size_t>(a * n + b)]; };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (M(x, J(y, z)) != J(M(x, y), M(x, z))) return fail("lattice", {x, y, z});
  return {};
}

/// x ≼ y in the natural order of M.
inline bool natural_order(const FiniteMvAlgebra& m, int x, int y) {
  const int n = static_cast<int>(m.size());
  if (x < 0 || y < 0 || x >= n || y >= n) throw Error(ErrorKind::invalid_input, "element out of range");
  return m.leq(x, y);
}

/// True iff `h` preserves 0, 1, ⊕ and negation.
inline bool is_mv_hom(const std::vector<int>& h, const FiniteMvAlgebra& a, const FiniteMvAlgebra& b) {
  if (h.size() != a.size()) throw Error(ErrorKind::invalid_input, "homomorphism table is not total on the source");
  for (int v : h)
    if (v < 0 || static_cast<std::size_t>(v) >= b.size())
      throw Error(ErrorKind::invalid_input, "homomorphism table value out of range");
  auto at = [&](int x) { return h[static_cast<std::size_t>(x)]; };
  if (at(a.zero()) != b.zero() || at(a.one()) != b.one()) return false;
  const int n = static_cast<int>(a.size());
  for (int x = 0; x < n; ++x) {
    if (at(a.neg(x)) != b.neg(at(x))) return false;
    for (int y = 0; y < n; ++y)
      if (at(a.oplus(x, y)) != b.oplus(at(x), at(y))) return false;
  }
  return true;
}

struct MvHom {
  FiniteMvAlgebra source;
  FiniteMvAlgebra target;
  std::vector<int> map;

  int operator()(int x) const { return map[static_cast<std::size_t>(x)]; }
};

/// All homomorphisms A → B in lexicographic order of their tables.
/// Plain backtracking with early pruning on already-assigned pairs.
inline std::vector<MvHom> enumerate_mv_homs(const FiniteMvAlgebra& a, const FiniteMvAlgebra& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  std::vector<int> h(static_cast<std::size_t>(n), -1);
  std::vector<MvHom> out;

  auto consistent = [&](int x) {
    auto hv = [&](int e) { return h[static_cast<std::size_t>(e)]; };
    if (x == a.zero() && hv(x) != b.zero()) return false;
    if (x == a.one() && hv(x) != b.one()) return false;
    int nx = a.neg(x);
    if (hv(nx) >= 0 && hv(nx) != b.neg(hv(x))) return false;
    for (int y = 0; y <= x; ++y) {
      if (hv(y) < 0) continue;
      int s = a.oplus(x, y);
      if (hv(s) >= 0 && hv(s) != b.oplus(hv(x), hv(y))) return false;
    }
    // x may itself be a sum or negation of earlier elements.
    for (int y = 0; y < x; ++y) {
      if (hv(y) < 0) continue;
      if (a.neg(y) == x && hv(x) != b.neg(hv(y))) return false;
      for (int z = 0; z < x; ++z)
        if (hv(z) >= 0 && a.oplus(y, z) == x && hv(x) != b.oplus(hv(y), hv(z))) return false;
    }
    return true;
  };

  std::function<void(int)> rec = [&](int x) {
    if (x == n) {
      if (is_mv_hom(h, a, b)) out.push_back(MvHom{a, b, h});
      return;
    }
    for (int v = 0; v < m; ++v) {
      h[static_cast<std::size_t>(x)] = v;
      if (consistent(x)) rec(x + 1);
    }
    h[static_cast<std::size_t>(x)] = -1;
  };
  rec(0);
  return out;
}

/// Ops adaptor so that generic term evaluation runs on table indices.
struct FiniteMvOps {
  const FiniteMvAlgebra& m;
  int zero() const { return m.zero(); }
  int one() const { return m.one(); }
  int oplus(int x, int y) const { return m.oplus(x, y); }
  int neg(int x) const { return m.neg(x); }
};

inline int eval_term(const MvTerm& t, const std::map<std::string, int>& assign, const FiniteMvAlgebra& m) {
  auto lookup = [&](const std::string& name) {
    auto it = assign.find(name);
    if (it == assign.end()) throw Error(ErrorKind::invalid_input, "unbound variable '" + name + "'");
    if (it->second < 0 || static_cast<std::size_t>(it->second) >= m.size())
      throw Error(ErrorKind::invalid_input, "assignment out of range for '" + name + "'");
    return it->second;
  };
  return evaluate<int>(t, FiniteMvOps{m}, lookup);
}

/// Isomorphism search through enumerate_mv_homs (bijective homs only).
inline std::optional<MvHom> find_isomorphism(const FiniteMvAlgebra& a, const FiniteMvAlgebra& b) {
  if (a.size() != b.size()) return std::nullopt;
  for (auto& h : enumerate_mv_homs(a, b)) {
    std::vector<bool> hit(b.size(), false);
    bool bijective = true;
    for (int v : h.map) {
      if (hit[static_cast<std::size_t>(v)]) bijective = false;
      hit[static_cast<std::size_t>(v)] = true;
    }
    if (bijective) return h;
  }
  return std::nullopt;
}

}  // namespace emvkit
