#pragma once

// Named morphism families: worked examples and negative fixtures.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "emvkit/emv_algebra.hpp"
#include "emvkit/morphism.hpp"

namespace emvkit {

/// f_i(X) = X∖{i} on [∅, A_i] → [∅, A_{i-1}], i ≥ 1.
inline EmvMorphism setminus_family(std::shared_ptr<const FinSetBooleanEmv> fs) {
  auto make = [](int i) {
    return MorphismEntry{"A" + std::to_string(i), FinSetBooleanEmv::initial(i), FinSetBooleanEmv::initial(i - 1),
                         [i](const Element& x) {
                           auto m = FinSetBooleanEmv::members(x);
                           m.erase(std::remove(m.begin(), m.end(), i), m.end());
                           return FinSetBooleanEmv::set(m);
                         }};
  };
  EmvMorphism f;
  f.source = fs;
  f.target = fs;
  f.name = "setminus";
  f.enumerate = [make](int level) {
    std::vector<MorphismEntry> out;
    for (int i = 1; i <= level; ++i) out.push_back(make(i));
    return out;
  };
  f.source_cover = [fs, make](const Element& b) -> std::optional<MorphismEntry> {
    return make(std::max(1, fs->level_of(b)));
  };
  f.target_cover = [fs, make](const Element& c) -> std::optional<MorphismEntry> { return make(fs->level_of(c) + 1); };
  return f;
}

/// Strong homomorphism of FinSet induced by the transposition (1 2) of ℕ.
inline StrongEmvHom swap12_hom(std::shared_ptr<const FinSetBooleanEmv> fs) {
  return StrongEmvHom{fs, fs,
                      [](const Element& x) {
                        auto m = FinSetBooleanEmv::members(x);
                        for (auto& v : m) v = v == 1 ? 2 : (v == 2 ? 1 : v);
                        return FinSetBooleanEmv::set(m);
                      },
                      "swap12"};
}

/// Example family on direct sums: f_I(x) = (h_i(x_i))_{i∈I} on [0,a_I] for
/// finite I. `homs[k]` acts on pattern position k.
inline EmvMorphism coordinatewise_family(std::shared_ptr<const DirectSumEmv> src, std::shared_ptr<const DirectSumEmv> tgt,
                                         std::vector<MvHom> homs) {
  if (src->pattern().size() != tgt->pattern().size() || homs.size() != src->pattern().size() ||
      src->repeat() != tgt->repeat())
    throw Error(ErrorKind::invalid_input, "coordinatewise: pattern shapes differ");
  for (std::size_t k = 0; k < homs.size(); ++k)
    if (!is_mv_hom(homs[k].map, src->pattern()[k], tgt->pattern()[k]))
      throw Error(ErrorKind::invalid_input, "coordinatewise: component " + std::to_string(k) + " is not an MV-homomorphism");
  const std::size_t p = homs.size();
  auto make = [src, tgt, homs, p](const std::vector<int>& I) {
    std::string key = "I{";
    for (std::size_t t = 0; t < I.size(); ++t) key += (t ? "," : "") + std::to_string(I[t]);
    key += "}";
    std::set<int> in(I.begin(), I.end());
    return MorphismEntry{key, src->indicator(I), tgt->indicator(I), [src, tgt, homs, p, in](const Element& x) {
                           std::map<int, int> out;
                           for (auto [i, v] : src->decode(x))
                             if (in.count(i)) out[i] = homs[static_cast<std::size_t>(i) % p](v);
                           return tgt->encode(out);
                         }};
  };
  EmvMorphism f;
  f.source = src;
  f.target = tgt;
  f.name = "coordinatewise";
  f.finite_index = !src->repeat();
  f.enumerate = [src, make](int level) {
    const int n = src->coords(level);
    std::vector<MorphismEntry> out;
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> I;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) I.push_back(i);
      out.push_back(make(I));
    }
    return out;
  };
  auto support = [](const DirectSumEmv& m, const Element& x) {
    std::vector<int> I;
    for (auto [i, v] : m.decode(x)) I.push_back(i);
    return I;
  };
  f.source_cover = [src, make, support](const Element& b) -> std::optional<MorphismEntry> {
    return make(support(*src, b));
  };
  f.target_cover = [tgt, make, support](const Element& c) -> std::optional<MorphismEntry> {
    return make(support(*tgt, c));
  };
  f.directed = [src, make, support](const MorphismEntry& i, const MorphismEntry& j) -> std::optional<MorphismEntry> {
    return make(support(*src, src->join(i.domain_top, j.domain_top)));
  };
  return f;
}

/// Strong homomorphism of a direct sum permuting two coordinates. Factors at
/// both coordinates must coincide.
inline StrongEmvHom coordinate_swap_hom(std::shared_ptr<const DirectSumEmv> ds, int i, int j) {
  if (!(ds->factor(i) == ds->factor(j))) throw Error(ErrorKind::invalid_input, "coordinate_swap: factors differ");
  return StrongEmvHom{ds, ds,
                      [ds, i, j](const Element& x) {
                        std::map<int, int> out;
                        for (auto [k, v] : ds->decode(x)) out[k == i ? j : (k == j ? i : k)] = v;
                        return ds->encode(out);
                      },
                      "swap" + std::to_string(i) + std::to_string(j)};
}

/// Restriction of the family of a strong homomorphism to an idempotent set.
inline EmvMorphism strong_restrict(const StrongEmvHom& h, const IdempotentSet& K, int level = kDefaultBound) {
  auto r = restrict_morphism(morphism_from_strong_hom(h, level), K, level);
  r.name = "strong_restrict(" + h.name + "," + K.name + ")";
  return r;
}

/// {x ↦ x ∧ c} over all idempotents a, into [0, a∧c]. Satisfies the two
/// ≈-identity clauses but is a valid morphism only when c dominates everything.
inline EmvMorphism meet_with_family(AlgebraPtr m, Element c) {
  EmvMorphism f;
  f.source = m;
  f.target = m;
  f.name = "meet_with(" + m->format(c) + ")";
  f.finite_index = m->is_finite();
  auto make = [m, c](const Element& a) {
    return MorphismEntry{m->format(a), a, m->meet(a, c), [m, c](const Element& x) { return m->meet(x, c); }};
  };
  f.enumerate = [m, make](int level) {
    std::vector<MorphismEntry> out;
    for (auto& a : m->idempotents(level)) out.push_back(make(a));
    return out;
  };
  f.source_cover = [make](const Element& b) -> std::optional<MorphismEntry> { return make(b); };
  f.directed = [m, make](const MorphismEntry& i, const MorphismEntry& j) -> std::optional<MorphismEntry> {
    return make(m->join(i.domain_top, j.domain_top));
  };
  return f;
}

/// Valid family on a direct sum of Ł₂'s whose values at e₀ grow without a
/// maximum: f_n on [0, A_n] sends e₀ to {0} ∪ {odd < 2n} and e_k to {2k}.
inline EmvMorphism nonstandard_family(std::shared_ptr<const DirectSumEmv> ds) {
  if (!ds->repeat() || ds->pattern().size() != 1 || ds->pattern()[0].size() != 2)
    throw Error(ErrorKind::invalid_input, "nonstandard family needs the repeated direct sum of L2");
  auto range = [](int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    return v;
  };
  auto make = [ds, range](int n) {
    return MorphismEntry{"A" + std::to_string(n), ds->indicator(range(n)), ds->indicator(range(2 * n)),
                         [ds, n](const Element& x) {
                           std::vector<int> out;
                           for (auto [k, v] : ds->decode(x)) {
                             if (k != 0) {
                               out.push_back(2 * k);
                               continue;
                             }
                             out.push_back(0);
                             for (int o = 1; o < 2 * n; o += 2) out.push_back(o);
                           }
                           return ds->indicator(out);
                         }};
  };
  EmvMorphism f;
  f.source = ds;
  f.target = ds;
  f.name = "nonstandard";
  f.enumerate = [make](int level) {
    std::vector<MorphismEntry> out;
    for (int n = 1; n <= level; ++n) out.push_back(make(n));
    return out;
  };
  f.source_cover = [ds, make](const Element& b) -> std::optional<MorphismEntry> {
    return make(std::max(1, ds->level_of(b)));
  };
  f.target_cover = [ds, make](const Element& c) -> std::optional<MorphismEntry> {
    return make(std::max(1, (ds->level_of(c) + 1) / 2));
  };
  f.directed = [ds, make](const MorphismEntry& i, const MorphismEntry& j) -> std::optional<MorphismEntry> {
    return make(std::max({1, ds->level_of(i.domain_top), ds->level_of(j.domain_top)}));
  };
  return f;
}

// Negative fixtures -----------------------------------------------------------

/// Ł₃ with the single entry at a = 0; e(f) = {0} is not full.
inline EmvMorphism non_full_fixture() {
  auto m = TableEmv::from_mv(mk_chain(3));
  auto z = m->zero();
  return finite_family(m, m, "non_full", {MorphismEntry{"0", z, z, [](const Element& x) { return x; }}});
}

/// B2 with identity and the atom swap, both on the top; breaks clause (iii).
inline EmvMorphism clause_iii_fixture() {
  auto m = TableEmv::from_mv(mk_boolean(2));
  auto top = *m->top();
  ElementMap swap = [](const Element& x) {
    int v = static_cast<int>(x.key().at(0));
    return index_element(((v & 1) << 1) | ((v >> 1) & 1));
  };
  return finite_family(m, m, "clause_iii",
                       {MorphismEntry{"id", top, top, [](const Element& x) { return x; }},
                        MorphismEntry{"swap", top, top, swap}});
}

/// B2 with P: x ↦ x∧{1} on the top and Q: [0,{1}] → [0,top]; no entry
/// dominates both P and Q.
inline EmvMorphism missing_directedness_fixture() {
  auto m = TableEmv::from_mv(mk_boolean(2));
  auto top = *m->top();
  auto a1 = index_element(1);
  return finite_family(m, m, "missing_directedness",
                       {MorphismEntry{"P", top, a1, [m, a1](const Element& x) { return m->meet(x, a1); }},
                        MorphismEntry{"Q", a1, top, [top](const Element& x) {
                                        return x == index_element(0) ? x : top;
                                      }}});
}

}  // namespace emvkit
