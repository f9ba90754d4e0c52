#pragma once

// EMV-algebra interface and the concrete backends: explicit tables,
// finitely supported direct sums, finite subsets of N, and the unitization
// of a direct sum.

#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "emvkit/core.hpp"
#include "emvkit/mv_core.hpp"
#include "emvkit/mv_term.hpp"

namespace emvkit {

/// Backend-neutral element. Equality and ordering use the key only; `rep` is
/// an optional term representative carried by term-backed algebras.
class Element {
 public:
  Element() = default;
  explicit Element(std::vector<std::int64_t> key, MvTerm rep = {}) : key_(std::move(key)), rep_(std::move(rep)) {}

  const std::vector<std::int64_t>& key() const { return key_; }
  const MvTerm& rep() const { return rep_; }
  bool has_rep() const { return !rep_.empty(); }

  friend bool operator==(const Element& a, const Element& b) { return a.key_ == b.key_; }
  friend bool operator!=(const Element& a, const Element& b) { return a.key_ != b.key_; }
  friend bool operator<(const Element& a, const Element& b) { return a.key_ < b.key_; }

 private:
  std::vector<std::int64_t> key_;
  MvTerm rep_;
};

inline Element index_element(int i) { return Element({i}); }

class EmvAlgebra;

/// [0,a] as an explicit finite MV-algebra with translations both ways.
struct IntervalMv {
  Element top;
  FiniteMvAlgebra mv;
  std::vector<Element> elems;
  std::map<Element, int> index;

  int to_index(const Element& x) const {
    auto it = index.find(x);
    if (it == index.end()) throw Error(ErrorKind::invalid_input, "element outside the interval");
    return it->second;
  }
  const Element& to_element(int i) const { return elems.at(static_cast<std::size_t>(i)); }
  bool contains(const Element& x) const { return index.count(x) != 0; }
};

class EmvAlgebra {
 public:
  virtual ~EmvAlgebra() = default;

  /// Canonical name; two handles with equal names denote the same algebra.
  virtual std::string name() const = 0;
  virtual bool is_finite() const = 0;
  virtual std::optional<Element> top() const = 0;
  virtual Element zero() const = 0;
  virtual Element join(const Element& x, const Element& y) const = 0;
  virtual Element meet(const Element& x, const Element& y) const = 0;
  virtual Element oplus(const Element& x, const Element& y) const = 0;
  /// Some idempotent above x.
  virtual Element dominating(const Element& x) const = 0;
  /// Finite backends: every element. Infinite backends: the slice at `level`,
  /// which is closed under the operations.
  virtual std::vector<Element> elements(int level) const = 0;
  virtual bool contains(const Element& x) const = 0;
  virtual std::string format(const Element& x) const = 0;

  /// Smallest level whose slice contains x.
  virtual int level_of(const Element&) const { return 0; }
  virtual bool leq(const Element& x, const Element& y) const { return meet(x, y) == x; }
  virtual bool is_idempotent(const Element& x) const { return oplus(x, x) == x; }
  virtual std::vector<Element> idempotents(int level) const {
    std::vector<Element> out;
    for (auto& x : elements(level))
      if (is_idempotent(x)) out.push_back(x);
    return out;
  }
  /// Whether [0,a] is finite (so interval_mv applies).
  virtual bool interval_finite(const Element&) const { return true; }

  /// [0,a] read off the slice that contains a.
  std::vector<Element> below(const Element& a, int level) const {
    std::vector<Element> out;
    for (auto& x : elements(std::max(level, level_of(a))))
      if (leq(x, a)) out.push_back(x);
    return out;
  }

  Element lambda(const Element& b, const Element& x) const {
    if (!is_idempotent(b)) throw Error(ErrorKind::domain_error, "lambda index " + format(b) + " is not idempotent");
    if (!leq(x, b)) throw Error(ErrorKind::domain_error, format(x) + " is not below " + format(b));
    return do_lambda(b, x);
  }

  /// Memoized interval algebra; the cache is internal and synchronized.
  std::shared_ptr<const IntervalMv> interval(const Element& a) const {
    {
      std::lock_guard<std::mutex> lock(cache_mutex_);
      auto it = interval_cache_.find(a);
      if (it != interval_cache_.end()) return it->second;
    }
    auto built = std::make_shared<const IntervalMv>(build_interval(a));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return interval_cache_.emplace(a, std::move(built)).first->second;
  }

 protected:
  virtual Element do_lambda(const Element& b, const Element& x) const = 0;

 private:
  IntervalMv build_interval(const Element& a) const {
    if (!is_idempotent(a)) throw Error(ErrorKind::domain_error, format(a) + " is not idempotent");
    if (!interval_finite(a)) throw Error(ErrorKind::unsupported, "interval below " + format(a) + " is infinite");
    IntervalMv out;
    out.top = a;
    out.elems = below(a, level_of(a));
    for (std::size_t i = 0; i < out.elems.size(); ++i) out.index.emplace(out.elems[i], static_cast<int>(i));
    const std::size_t n = out.elems.size();
    std::vector<int> oplus_t(n * n), neg_t(n);
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = format(out.elems[i]);
      neg_t[i] = out.to_index(do_lambda(a, out.elems[i]));
      for (std::size_t j = 0; j < n; ++j) oplus_t[i * n + j] = out.to_index(oplus(out.elems[i], out.elems[j]));
    }
    out.mv = FiniteMvAlgebra::from_tables(n, std::move(oplus_t), std::move(neg_t), out.to_index(zero()),
                                          out.to_index(a), std::move(labels), "[0," + format(a) + "]");
    return out;
  }

  mutable std::mutex cache_mutex_;
  mutable std::map<Element, std::shared_ptr<const IntervalMv>> interval_cache_;
};

using AlgebraPtr = std::shared_ptr<const EmvAlgebra>;

inline Element lambda(const EmvAlgebra& m, const Element& b, const Element& x) { return m.lambda(b, x); }

inline const IntervalMv& interval_mv(const EmvAlgebra& m, const Element& a) { return *m.interval(a); }

/// λ_a(λ_a(x) ⊕ λ_a(y)) for an explicit idempotent a ≥ x, y.
inline Element odot_at(const EmvAlgebra& m, const Element& a, const Element& x, const Element& y) {
  return m.lambda(a, m.oplus(m.lambda(a, x), m.lambda(a, y)));
}

inline Element odot(const EmvAlgebra& m, const Element& x, const Element& y) {
  return odot_at(m, m.dominating(m.join(x, y)), x, y);
}

inline Element power(const EmvAlgebra& m, const Element& x, int n) {
  if (n < 0) throw Error(ErrorKind::invalid_input, "negative exponent");
  if (n == 0) {
    auto t = m.top();
    if (!t) throw Error(ErrorKind::domain_error, "x^0 needs a top element");
    return *t;
  }
  Element acc = x;
  for (int k = 2; k <= n; ++k) acc = odot(m, acc, x);
  return acc;
}

inline std::vector<Element> idempotents(const EmvAlgebra& m, int level) { return m.idempotents(level); }

// ---------------------------------------------------------------------------

/// Finite EMV-algebra from explicit join/meet/oplus tables.
class TableEmv : public EmvAlgebra {
 public:
  static std::shared_ptr<TableEmv> from_mv(const FiniteMvAlgebra& m) {
    const int n = static_cast<int>(m.size());
    std::vector<int> j(static_cast<std::size_t>(n * n)), mt(j.size()), o(j.size());
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        auto k = static_cast<std::size_t>(x * n + y);
        j[k] = m.join(x, y);
        mt[k] = m.meet(x, y);
        o[k] = m.oplus(x, y);
      }
    std::vector<std::string> labels(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) labels[static_cast<std::size_t>(x)] = m.label(x);
    return from_tables(static_cast<std::size_t>(n), std::move(j), std::move(mt), std::move(o), m.zero(),
                       std::move(labels), m.name());
  }

  static std::shared_ptr<TableEmv> from_tables(std::size_t n, std::vector<int> join, std::vector<int> meet,
                                               std::vector<int> oplus, int zero, std::vector<std::string> labels = {},
                                               std::string name = {}) {
    if (n == 0) throw Error(ErrorKind::invalid_input, "empty carrier");
    for (auto* t : {&join, &meet, &oplus}) {
      if (t->size() != n * n) throw Error(ErrorKind::invalid_input, "operation table must be n*n");
      for (int v : *t)
        if (v < 0 || static_cast<std::size_t>(v) >= n) throw Error(ErrorKind::invalid_input, "table entry out of range");
    }
    if (zero < 0 || static_cast<std::size_t>(zero) >= n) throw Error(ErrorKind::invalid_input, "zero out of range");
    if (!labels.empty() && labels.size() != n) throw Error(ErrorKind::invalid_input, "label count mismatch");
    auto out = std::shared_ptr<TableEmv>(new TableEmv());
    out->n_ = static_cast<int>(n);
    out->join_ = std::move(join);
    out->meet_ = std::move(meet);
    out->oplus_ = std::move(oplus);
    out->zero_ = zero;
    out->labels_ = std::move(labels);
    out->name_ = name.empty() ? "T" + std::to_string(n) : std::move(name);
    out->precompute();
    return out;
  }

  int size() const { return n_; }
  int idx(const Element& x) const {
    if (!contains(x)) throw Error(ErrorKind::invalid_input, "element not in " + name_);
    return static_cast<int>(x.key()[0]);
  }
  int join_at(int x, int y) const { return join_[at(x, y)]; }
  int meet_at(int x, int y) const { return meet_[at(x, y)]; }
  int oplus_at(int x, int y) const { return oplus_[at(x, y)]; }
  int zero_index() const { return zero_; }
  const std::vector<int>& join_table() const { return join_; }
  const std::vector<int>& meet_table() const { return meet_; }
  const std::vector<int>& oplus_table() const { return oplus_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<int> find_label(const std::string& s) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == s) return static_cast<int>(i);
    return std::nullopt;
  }

  /// Copies with one table entry overwritten.
  std::shared_ptr<TableEmv> with_entry(const std::string& table, int x, int y, int value) const {
    auto j = join_, m = meet_, o = oplus_;
    auto& t = table == "join" ? j : table == "meet" ? m : o;
    t[at(x, y)] = value;
    return from_tables(static_cast<std::size_t>(n_), std::move(j), std::move(m), std::move(o), zero_, labels_,
                       name_ + "*");
  }

  /// λ_b(x) from the precomputed minimum scan; nullopt when no unique minimum.
  std::optional<int> lambda_at(int b, int x) const { return lam_[at(b, x)]; }

  std::string name() const override { return name_; }
  bool is_finite() const override { return true; }
  std::optional<Element> top() const override {
    if (top_ < 0) return std::nullopt;
    return index_element(top_);
  }
  Element zero() const override { return index_element(zero_); }
  Element join(const Element& x, const Element& y) const override { return index_element(join_at(idx(x), idx(y))); }
  Element meet(const Element& x, const Element& y) const override { return index_element(meet_at(idx(x), idx(y))); }
  Element oplus(const Element& x, const Element& y) const override { return index_element(oplus_at(idx(x), idx(y))); }
  Element dominating(const Element& x) const override {
    int d = dom_[static_cast<std::size_t>(idx(x))];
    if (d < 0) throw Error(ErrorKind::domain_error, "no idempotent above " + format(x));
    return index_element(d);
  }
  std::vector<Element> elements(int) const override {
    std::vector<Element> out;
    for (int i = 0; i < n_; ++i) out.push_back(index_element(i));
    return out;
  }
  bool contains(const Element& x) const override {
    return x.key().size() == 1 && x.key()[0] >= 0 && x.key()[0] < n_;
  }
  std::string format(const Element& x) const override {
    int i = idx(x);
    return labels_.empty() ? std::to_string(i) : labels_[static_cast<std::size_t>(i)];
  }

 protected:
  Element do_lambda(const Element& b, const Element& x) const override {
    auto v = lambda_at(idx(b), idx(x));
    if (!v) throw Error(ErrorKind::domain_error, "no minimum z with " + format(x) + " + z = " + format(b));
    return index_element(*v);
  }

 private:
  TableEmv() = default;

  std::size_t at(int x, int y) const { return static_cast<std::size_t>(x) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(y); }
  bool le(int x, int y) const { return meet_at(x, y) == x; }

  void precompute() {
    lam_.assign(static_cast<std::size_t>(n_ * n_), std::nullopt);
    std::vector<int> idem;
    for (int b = 0; b < n_; ++b)
      if (oplus_at(b, b) == b) idem.push_back(b);
    for (int b : idem)
      for (int x = 0; x < n_; ++x) {
        if (!le(x, b)) continue;
        std::vector<int> cand;
        for (int z = 0; z < n_; ++z)
          if (le(z, b) && oplus_at(x, z) == b) cand.push_back(z);
        std::optional<int> best;
        for (int z : cand) {
          bool least = true;
          for (int w : cand)
            if (!le(z, w)) least = false;
          if (least) {
            if (best) {  // two distinct least elements: the order is broken
              best.reset();
              break;
            }
            best = z;
          }
        }
        lam_[at(b, x)] = best;
      }
    dom_.assign(static_cast<std::size_t>(n_), -1);
    for (int x = 0; x < n_; ++x) {
      std::vector<int> above;
      for (int b : idem)
        if (le(x, b)) above.push_back(b);
      for (int b : above) {
        bool least = true;
        for (int c : above)
          if (!le(b, c)) least = false;
        if (least) {
          dom_[static_cast<std::size_t>(x)] = b;
          break;
        }
      }
      if (dom_[static_cast<std::size_t>(x)] < 0 && !above.empty()) dom_[static_cast<std::size_t>(x)] = above.front();
    }
    top_ = -1;
    for (int t = 0; t < n_ && top_ < 0; ++t) {
      bool greatest = true;
      for (int x = 0; x < n_ && greatest; ++x)
        if (!le(x, t)) greatest = false;
      if (greatest) top_ = t;
    }
  }

  int n_ = 0;
  std::vector<int> join_, meet_, oplus_;
  int zero_ = 0;
  int top_ = -1;
  std::vector<std::string> labels_;
  std::string name_;
  std::vector<std::optional<int>> lam_;
  std::vector<int> dom_;
};

// ---------------------------------------------------------------------------

/// Direct sum of finite MV-algebras with finitely supported elements. The
/// factor at coordinate i is pattern[i mod p] when `repeat` is set; otherwise
/// there are exactly p coordinates and the algebra is a finite MV-algebra.
class DirectSumEmv : public EmvAlgebra {
 public:
  DirectSumEmv(std::vector<FiniteMvAlgebra> pattern, bool repeat) : pattern_(std::move(pattern)), repeat_(repeat) {
    if (pattern_.empty()) throw Error(ErrorKind::invalid_input, "direct sum needs at least one factor");
  }

  const std::vector<FiniteMvAlgebra>& pattern() const { return pattern_; }
  bool repeat() const { return repeat_; }

  const FiniteMvAlgebra& factor(int i) const {
    if (i < 0) throw Error(ErrorKind::invalid_input, "negative coordinate");
    if (repeat_) return pattern_[static_cast<std::size_t>(i) % pattern_.size()];
    if (static_cast<std::size_t>(i) >= pattern_.size()) throw Error(ErrorKind::invalid_input, "coordinate out of range");
    return pattern_[static_cast<std::size_t>(i)];
  }

  /// Number of coordinates visible at `level`.
  int coords(int level) const {
    return repeat_ ? std::max(level, 0) : static_cast<int>(pattern_.size());
  }

  std::map<int, int> decode(const Element& x) const {
    std::map<int, int> out;
    const auto& k = x.key();
    if (k.size() % 2) throw Error(ErrorKind::invalid_input, "malformed direct-sum key");
    for (std::size_t i = 0; i < k.size(); i += 2) out[static_cast<int>(k[i])] = static_cast<int>(k[i + 1]);
    return out;
  }

  Element encode(const std::map<int, int>& v) const {
    std::vector<std::int64_t> key;
    for (auto [i, val] : v) {
      if (val == factor(i).zero()) continue;
      key.push_back(i);
      key.push_back(val);
    }
    return Element(std::move(key));
  }

  /// Vector with a single nonzero coordinate.
  Element unit(int i, int value) const { return encode({{i, value}}); }
  /// Top of the factors on the coordinates in `support`.
  Element indicator(const std::vector<int>& support) const {
    std::map<int, int> v;
    for (int i : support) v[i] = factor(i).one();
    return encode(v);
  }

  std::string name() const override {
    std::string s = "DS[";
    for (std::size_t i = 0; i < pattern_.size(); ++i) s += (i ? "," : "") + pattern_[i].name();
    return s + (repeat_ ? "]*" : "]");
  }
  bool is_finite() const override { return !repeat_; }
  std::optional<Element> top() const override {
    if (repeat_) return std::nullopt;
    std::vector<int> all(pattern_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return indicator(all);
  }
  Element zero() const override { return Element(); }
  Element join(const Element& x, const Element& y) const override {
    return combine(x, y, [](const FiniteMvAlgebra& f, int a, int b) { return f.join(a, b); });
  }
  Element meet(const Element& x, const Element& y) const override {
    return combine(x, y, [](const FiniteMvAlgebra& f, int a, int b) { return f.meet(a, b); });
  }
  Element oplus(const Element& x, const Element& y) const override {
    return combine(x, y, [](const FiniteMvAlgebra& f, int a, int b) { return f.oplus(a, b); });
  }
  Element dominating(const Element& x) const override {
    std::map<int, int> v;
    for (auto [i, val] : decode(x)) v[i] = factor(i).one();
    return encode(v);
  }
  std::vector<Element> elements(int level) const override {
    const int n = coords(level);
    std::vector<Element> out;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        std::map<int, int> v;
        for (int k = 0; k < n; ++k) v[k] = cur[static_cast<std::size_t>(k)];
        out.push_back(encode(v));
        return;
      }
      for (int val = 0; val < static_cast<int>(factor(i).size()); ++val) {
        cur[static_cast<std::size_t>(i)] = val;
        rec(i + 1);
      }
    };
    rec(0);
    return out;
  }
  bool contains(const Element& x) const override {
    const auto& k = x.key();
    if (k.size() % 2) return false;
    for (std::size_t i = 0; i < k.size(); i += 2) {
      if (k[i] < 0 || (i >= 2 && k[i] <= k[i - 2])) return false;
      if (!repeat_ && static_cast<std::size_t>(k[i]) >= pattern_.size()) return false;
      const auto& f = factor(static_cast<int>(k[i]));
      if (k[i + 1] < 0 || static_cast<std::size_t>(k[i + 1]) >= f.size() || k[i + 1] == f.zero()) return false;
    }
    return true;
  }
  std::string format(const Element& x) const override {
    std::string s = "{";
    bool first = true;
    for (auto [i, val] : decode(x)) {
      s += (first ? "" : ", ") + std::to_string(i) + ":" + factor(i).label(val);
      first = false;
    }
    return s + "}";
  }
  int level_of(const Element& x) const override {
    if (!repeat_) return 0;
    const auto& k = x.key();
    return k.empty() ? 0 : static_cast<int>(k[k.size() - 2]) + 1;
  }

 protected:
  Element do_lambda(const Element& b, const Element& x) const override {
    // b is componentwise Boolean, so λ_b(x) = b ∧ ¬x in each coordinate.
    std::map<int, int> v;
    auto xv = decode(x);
    for (auto [i, bi] : decode(b)) {
      const auto& f = factor(i);
      auto it = xv.find(i);
      v[i] = f.meet(bi, f.neg(it == xv.end() ? f.zero() : it->second));
    }
    return encode(v);
  }

 private:
  // Two-pointer merge over the sorted (coordinate, value) keys.
  template <class Op>
  Element combine(const Element& x, const Element& y, Op op) const {
    const auto& a = x.key();
    const auto& b = y.key();
    std::vector<std::int64_t> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      std::int64_t c;
      int va, vb;
      if (j >= b.size() || (i < a.size() && a[i] < b[j])) {
        c = a[i];
        const auto& f = factor(static_cast<int>(c));
        va = static_cast<int>(a[i + 1]);
        vb = f.zero();
        i += 2;
      } else if (i >= a.size() || b[j] < a[i]) {
        c = b[j];
        const auto& f = factor(static_cast<int>(c));
        va = f.zero();
        vb = static_cast<int>(b[j + 1]);
        j += 2;
      } else {
        c = a[i];
        va = static_cast<int>(a[i + 1]);
        vb = static_cast<int>(b[j + 1]);
        i += 2;
        j += 2;
      }
      const auto& f = factor(static_cast<int>(c));
      int v = op(f, va, vb);
      if (v != f.zero()) {
        out.push_back(c);
        out.push_back(v);
      }
    }
    return Element(std::move(out));
  }

  std::vector<FiniteMvAlgebra> pattern_;
  bool repeat_;
};

// ---------------------------------------------------------------------------

/// Finite subsets of {1, 2, ...}: a generalized Boolean algebra without top.
class FinSetBooleanEmv : public EmvAlgebra {
 public:
  static Element set(std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (int m : members)
      if (m < 1) throw Error(ErrorKind::invalid_input, "finite-set members start at 1");
    return Element(std::vector<std::int64_t>(members.begin(), members.end()));
  }
  /// A_i = {1, ..., i}.
  static Element initial(int i) {
    std::vector<int> m;
    for (int k = 1; k <= i; ++k) m.push_back(k);
    return set(m);
  }
  static std::vector<int> members(const Element& x) { return {x.key().begin(), x.key().end()}; }

  std::string name() const override { return "FinSet"; }
  bool is_finite() const override { return false; }
  std::optional<Element> top() const override { return std::nullopt; }
  Element zero() const override { return Element(); }
  Element join(const Element& x, const Element& y) const override {
    std::vector<std::int64_t> out;
    std::set_union(x.key().begin(), x.key().end(), y.key().begin(), y.key().end(), std::back_inserter(out));
    return Element(std::move(out));
  }
  Element meet(const Element& x, const Element& y) const override {
    std::vector<std::int64_t> out;
    std::set_intersection(x.key().begin(), x.key().end(), y.key().begin(), y.key().end(), std::back_inserter(out));
    return Element(std::move(out));
  }
  Element oplus(const Element& x, const Element& y) const override { return join(x, y); }
  Element dominating(const Element& x) const override { return x; }
  bool leq(const Element& x, const Element& y) const override {
    return std::includes(y.key().begin(), y.key().end(), x.key().begin(), x.key().end());
  }
  bool is_idempotent(const Element&) const override { return true; }
  std::vector<Element> elements(int level) const override {
    std::vector<Element> out;
    const int n = std::max(level, 0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::int64_t> m;
      for (int b = 0; b < n; ++b)
        if (mask & (1u << b)) m.push_back(b + 1);
      out.emplace_back(std::move(m));
    }
    return out;
  }
  std::vector<Element> idempotents(int level) const override { return elements(level); }
  bool contains(const Element& x) const override {
    const auto& k = x.key();
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] < 1 || (i && k[i] <= k[i - 1])) return false;
    return true;
  }
  std::string format(const Element& x) const override {
    std::string s = "{";
    for (std::size_t i = 0; i < x.key().size(); ++i) s += (i ? "," : "") + std::to_string(x.key()[i]);
    return s + "}";
  }
  int level_of(const Element& x) const override {
    return x.key().empty() ? 0 : static_cast<int>(x.key().back());
  }

 protected:
  Element do_lambda(const Element& b, const Element& x) const override {
    std::vector<std::int64_t> out;
    std::set_difference(b.key().begin(), b.key().end(), x.key().begin(), x.key().end(), std::back_inserter(out));
    return Element(std::move(out));
  }
};

// ---------------------------------------------------------------------------

/// MV-algebra N containing a direct sum M as a maximal ideal: Low(v) is v,
/// High(v) is the complement of v.
class UnitizedMv : public EmvAlgebra {
 public:
  explicit UnitizedMv(std::shared_ptr<const DirectSumEmv> base) : base_(std::move(base)) {}

  const DirectSumEmv& base() const { return *base_; }
  std::shared_ptr<const DirectSumEmv> base_ptr() const { return base_; }

  Element low(const Element& v) const { return tagged(0, v); }
  Element high(const Element& v) const { return tagged(1, v); }
  bool is_low(const Element& x) const { return x.key().at(0) == 0; }
  Element payload(const Element& x) const {
    return Element(std::vector<std::int64_t>(x.key().begin() + 1, x.key().end()));
  }
  /// The embedding ι = Low.
  Element embed(const Element& v) const { return low(v); }

  Element neg(const Element& x) const { return is_low(x) ? high(payload(x)) : low(payload(x)); }

  std::string name() const override { return "U(" + base_->name() + ")"; }
  bool is_finite() const override { return base_->is_finite(); }
  std::optional<Element> top() const override { return high(base_->zero()); }
  Element zero() const override { return low(base_->zero()); }

  Element oplus(const Element& x, const Element& y) const override {
    const auto& m = *base_;
    auto v = payload(x), w = payload(y);
    if (is_low(x) && is_low(y)) return low(m.oplus(v, w));
    if (!is_low(x) && !is_low(y)) return high(rel_odot(v, w));
    if (!is_low(x)) std::swap(v, w);
    // v ⊕ ¬w = ¬(w ⊙ ¬v)
    return high(rel_odot(w, rel_neg(v, w)));
  }
  Element join(const Element& x, const Element& y) const override {
    const auto& m = *base_;
    auto v = payload(x), w = payload(y);
    if (is_low(x) && is_low(y)) return low(m.join(v, w));
    if (!is_low(x) && !is_low(y)) return high(m.meet(v, w));
    if (!is_low(x)) std::swap(v, w);
    // v ∨ ¬w = ¬(w ∧ ¬v)
    return high(m.meet(w, rel_neg(v, w)));
  }
  Element meet(const Element& x, const Element& y) const override {
    const auto& m = *base_;
    auto v = payload(x), w = payload(y);
    if (is_low(x) && is_low(y)) return low(m.meet(v, w));
    if (!is_low(x) && !is_low(y)) return high(m.join(v, w));
    if (!is_low(x)) std::swap(v, w);
    // v ∧ ¬w
    return low(m.meet(v, rel_neg(w, v)));
  }
  Element dominating(const Element& x) const override {
    if (is_low(x)) return low(base_->dominating(payload(x)));
    return *top();
  }
  std::vector<Element> elements(int level) const override {
    auto vs = base_->elements(level);
    std::vector<Element> out;
    for (auto& v : vs) out.push_back(low(v));
    for (auto& v : vs) out.push_back(high(v));
    return out;
  }
  bool contains(const Element& x) const override {
    if (x.key().empty() || (x.key()[0] != 0 && x.key()[0] != 1)) return false;
    return base_->contains(payload(x));
  }
  std::string format(const Element& x) const override {
    return std::string(is_low(x) ? "Low" : "High") + base_->format(payload(x));
  }
  int level_of(const Element& x) const override { return base_->level_of(payload(x)); }
  bool interval_finite(const Element& a) const override { return base_->is_finite() || is_low(a); }

 protected:
  Element do_lambda(const Element& b, const Element& x) const override {
    // b is Boolean in N, so λ_b(x) = b ∧ ¬x.
    return meet(b, neg(x));
  }

 private:
  Element tagged(std::int64_t tag, const Element& v) const {
    std::vector<std::int64_t> k{tag};
    k.insert(k.end(), v.key().begin(), v.key().end());
    return Element(std::move(k));
  }
  /// ¬v computed inside [0, dominating(v ∨ w)]; enough for meets and ⊙ with w.
  Element rel_neg(const Element& v, const Element& w) const {
    const auto& m = *base_;
    return m.lambda(m.dominating(m.join(v, w)), v);
  }
  Element rel_odot(const Element& v, const Element& w) const { return odot(*base_, v, w); }

  std::shared_ptr<const DirectSumEmv> base_;
};

inline std::shared_ptr<UnitizedMv> unitize(std::shared_ptr<const DirectSumEmv> m) {
  return std::make_shared<UnitizedMv>(std::move(m));
}

}  // namespace emvkit
