#pragma once

// MV terms over a finite set of named variables, and structural evaluation
// into any carrier that supplies zero/one/oplus/neg.

#include <algorithm>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "emvkit/core.hpp"

namespace emvkit {

class MvTerm {
 public:
  enum class Op { zero, one, var, oplus, neg };

  MvTerm() = default;

  static MvTerm zero() { return MvTerm(make(Op::zero, {}, {}, {})); }
  static MvTerm one() { return MvTerm(make(Op::one, {}, {}, {})); }
  static MvTerm var(std::string name) { return MvTerm(make(Op::var, std::move(name), {}, {})); }
  static MvTerm oplus(const MvTerm& t, const MvTerm& s) {
    return MvTerm(make(Op::oplus, {}, t.node_, s.node_));
  }
  static MvTerm neg(const MvTerm& t) { return MvTerm(make(Op::neg, {}, t.node_, {})); }

  // Derived connectives expand by their MV definitions.
  static MvTerm odot(const MvTerm& t, const MvTerm& s) { return neg(oplus(neg(t), neg(s))); }
  static MvTerm vee(const MvTerm& t, const MvTerm& s) { return oplus(odot(t, neg(s)), s); }
  static MvTerm wedge(const MvTerm& t, const MvTerm& s) { return neg(vee(neg(t), neg(s))); }

  bool empty() const { return node_ == nullptr; }
  Op op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  MvTerm lhs() const { return MvTerm(node_->lhs); }
  MvTerm rhs() const { return MvTerm(node_->rhs); }

  int depth() const {
    if (empty()) return 0;
    switch (op()) {
      case Op::oplus: return 1 + std::max(lhs().depth(), rhs().depth());
      case Op::neg: return 1 + lhs().depth();
      default: return 0;
    }
  }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    collect(out);
    return out;
  }

  std::string to_string() const {
    if (empty()) return "<empty>";
    switch (op()) {
      case Op::zero: return "0";
      case Op::one: return "1";
      case Op::var: return name();
      case Op::oplus: return "(" + lhs().to_string() + " + " + rhs().to_string() + ")";
      case Op::neg: return "~" + lhs().to_string();
    }
    return "?";
  }

  /// Simultaneous substitution of variables by terms.
  MvTerm substitute(const std::function<MvTerm(const std::string&)>& sigma) const {
    switch (op()) {
      case Op::zero:
      case Op::one: return *this;
      case Op::var: return sigma(name());
      case Op::oplus: return oplus(lhs().substitute(sigma), rhs().substitute(sigma));
      case Op::neg: return neg(lhs().substitute(sigma));
    }
    return *this;
  }

 private:
  struct Node {
    Op op;
    std::string name;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit MvTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::shared_ptr<const Node> make(Op op, std::string name, std::shared_ptr<const Node> l,
                                          std::shared_ptr<const Node> r) {
    return std::make_shared<const Node>(Node{op, std::move(name), std::move(l), std::move(r)});
  }

  void collect(std::set<std::string>& out) const {
    if (empty()) return;
    switch (op()) {
      case Op::var: out.insert(name()); break;
      case Op::oplus:
        lhs().collect(out);
        rhs().collect(out);
        break;
      case Op::neg: lhs().collect(out); break;
      default: break;
    }
  }

  std::shared_ptr<const Node> node_;
};

/// Structural evaluation. `Ops` provides zero(), one(), oplus(a, b), neg(a);
/// `Assign` maps a variable name to a value and throws on unbound names.
template <class Value, class Ops, class Assign>
Value evaluate(const MvTerm& t, const Ops& ops, const Assign& assign) {
  switch (t.op()) {
    case MvTerm::Op::zero: return ops.zero();
    case MvTerm::Op::one: return ops.one();
    case MvTerm::Op::var: return assign(t.name());
    case MvTerm::Op::oplus:
      return ops.oplus(evaluate<Value>(t.lhs(), ops, assign), evaluate<Value>(t.rhs(), ops, assign));
    case MvTerm::Op::neg: return ops.neg(evaluate<Value>(t.lhs(), ops, assign));
  }
  throw Error(ErrorKind::invalid_input, "malformed term");
}

/// Random term over `vars` with depth at most `max_depth`.
template <class Rng>
MvTerm random_term(Rng& rng, const std::vector<std::string>& vars, int max_depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  int roll = pick(rng);
  if (max_depth == 0 || roll < 3) {
    std::uniform_int_distribution<std::size_t> leaf(0, vars.size() + 1);
    std::size_t k = leaf(rng);
    if (k == vars.size()) return MvTerm::zero();
    if (k == vars.size() + 1) return MvTerm::one();
    return MvTerm::var(vars[k]);
  }
  if (roll < 6) return MvTerm::neg(random_term(rng, vars, max_depth - 1));
  return MvTerm::oplus(random_term(rng, vars, max_depth - 1), random_term(rng, vars, max_depth - 1));
}

}  // namespace emvkit
