#pragma once

// JSON documents for algebras, elements, morphisms and congruences, and the
// report records printed by the command-line tool.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "emvkit/builtins.hpp"
#include "emvkit/category.hpp"
#include "emvkit/congruence.hpp"
#include "emvkit/core.hpp"
#include "emvkit/emv_algebra.hpp"
#include "emvkit/emv_checks.hpp"
#include "emvkit/free.hpp"
#include "emvkit/morphism.hpp"
#include "emvkit/mv_core.hpp"

namespace emvkit::doc {

using json = nlohmann::json;

[[noreturn]] inline void bad(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::invalid_input, "at " + (path.empty() ? std::string("/") : path) + ": " + msg);
}

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path, "missing field \"" + key + "\"");
  return *it;
}

inline int int_field(const json& j, const std::string& key, const std::string& path) {
  const auto& v = field(j, key, path);
  if (!v.is_number_integer()) bad(path + "/" + key, "expected an integer");
  return v.get<int>();
}

inline std::string str_field(const json& j, const std::string& key, const std::string& path) {
  const auto& v = field(j, key, path);
  if (!v.is_string()) bad(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

inline std::vector<int> int_list(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) bad(path + "/" + std::to_string(i), "expected an integer");
    out.push_back(j[i].get<int>());
  }
  return out;
}

/// Square table given as a list of rows, flattened row-major.
inline std::vector<int> square(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array() || j.size() != n) bad(path, "expected " + std::to_string(n) + " rows");
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = int_list(j[i], path + "/" + std::to_string(i));
    if (row.size() != n) bad(path + "/" + std::to_string(i), "expected " + std::to_string(n) + " entries");
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

inline json rows(const std::vector<int>& flat, std::size_t n) {
  json out = json::array();
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(std::vector<int>(flat.begin() + static_cast<std::ptrdiff_t>(i * n),
                                   flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
  return out;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Algebras

struct AlgebraHandle {
  std::string kind;
  AlgebraPtr emv;                               // null for pomonoid documents
  std::optional<FiniteMvAlgebra> mv;            // finite MV kinds
  std::optional<PomonoidPresentation> pomonoid;
  std::vector<AlgebraHandle> parts;             // product factors, direct-sum pattern, unitized base
  json doc;                                     // canonical form
};

inline AlgebraHandle decode_algebra(const json& j, const std::string& path = "");

inline AlgebraHandle finite_handle(std::string kind, FiniteMvAlgebra mv, json doc) {
  AlgebraHandle h;
  h.kind = std::move(kind);
  h.emv = TableEmv::from_mv(mv);
  h.mv = std::move(mv);
  h.doc = std::move(doc);
  return h;
}

inline AlgebraHandle decode_algebra(const json& j, const std::string& path) {
  const std::string kind = str_field(j, "kind", path);
  try {
    if (kind == "chain") {
      int n = int_field(j, "n", path);
      return finite_handle(kind, mk_chain(n), json{{"kind", kind}, {"n", n}});
    }
    if (kind == "boolean") {
      int a = int_field(j, "atoms", path);
      if (a < 0 || a > 6) bad(path + "/atoms", "atoms must be in 0..6");
      return finite_handle(kind, mk_boolean(a), json{{"kind", kind}, {"atoms", a}});
    }
    if (kind == "table") {
      int n = int_field(j, "n", path);
      if (n < 1) bad(path + "/n", "carrier must be non-empty");
      const auto size = static_cast<std::size_t>(n);
      auto plus = square(field(j, "oplus", path), size, path + "/oplus");
      auto neg = int_list(field(j, "neg", path), path + "/neg");
      int zero = int_field(j, "zero", path);
      int one = int_field(j, "one", path);
      std::vector<std::string> labels;
      json doc{{"kind", kind}, {"n", n}, {"oplus", rows(plus, size)}, {"neg", neg}, {"zero", zero}, {"one", one}};
      if (j.contains("labels")) {
        labels = j.at("labels").get<std::vector<std::string>>();
        doc["labels"] = labels;
      }
      std::ostringstream name;
      name << "T" << n << "#" << std::hex << (fnv1a(doc.dump()) & 0xffffff);
      return finite_handle(kind, FiniteMvAlgebra::from_tables(size, plus, neg, zero, one, labels, name.str()), doc);
    }
    if (kind == "product") {
      const auto& fs = field(j, "factors", path);
      if (!fs.is_array() || fs.empty()) bad(path + "/factors", "expected a non-empty array");
      AlgebraHandle h;
      h.kind = kind;
      std::vector<AlgebraPtr> factors;
      std::vector<FiniteMvAlgebra> mvs;
      json docs = json::array();
      for (std::size_t i = 0; i < fs.size(); ++i) {
        h.parts.push_back(decode_algebra(fs[i], path + "/factors/" + std::to_string(i)));
        if (!h.parts.back().emv) bad(path + "/factors/" + std::to_string(i), "factor is not an algebra");
        factors.push_back(h.parts.back().emv);
        if (h.parts.back().mv) mvs.push_back(*h.parts.back().mv);
        docs.push_back(h.parts.back().doc);
      }
      h.emv = product_emv(factors);
      if (mvs.size() == factors.size()) h.mv = mk_product(mvs);
      h.doc = json{{"kind", kind}, {"factors", docs}};
      return h;
    }
    if (kind == "direct_sum") {
      const auto& ps = field(j, "pattern", path);
      if (!ps.is_array() || ps.empty()) bad(path + "/pattern", "expected a non-empty array");
      AlgebraHandle h;
      h.kind = kind;
      std::vector<FiniteMvAlgebra> pattern;
      json docs = json::array();
      for (std::size_t i = 0; i < ps.size(); ++i) {
        h.parts.push_back(decode_algebra(ps[i], path + "/pattern/" + std::to_string(i)));
        if (!h.parts.back().mv) bad(path + "/pattern/" + std::to_string(i), "pattern entries must be finite MV-algebras");
        pattern.push_back(*h.parts.back().mv);
        docs.push_back(h.parts.back().doc);
      }
      const auto& rep = field(j, "repeat", path);
      if (!rep.is_boolean()) bad(path + "/repeat", "expected a boolean");
      h.emv = std::make_shared<DirectSumEmv>(pattern, rep.get<bool>());
      h.doc = json{{"kind", kind}, {"pattern", docs}, {"repeat", rep.get<bool>()}};
      return h;
    }
    if (kind == "finset_boolean") {
      AlgebraHandle h;
      h.kind = kind;
      h.emv = std::make_shared<FinSetBooleanEmv>();
      h.doc = json{{"kind", kind}};
      return h;
    }
    if (kind == "unitized") {
      AlgebraHandle h;
      h.kind = kind;
      h.parts.push_back(decode_algebra(field(j, "base", path), path + "/base"));
      auto ds = std::dynamic_pointer_cast<const DirectSumEmv>(h.parts[0].emv);
      if (!ds) bad(path + "/base", "unitization needs a direct_sum base");
      h.emv = unitize(ds);
      h.doc = json{{"kind", kind}, {"base", h.parts[0].doc}};
      return h;
    }
    if (kind == "pomonoid") {
      int n = int_field(j, "n", path);
      if (n < 1) bad(path + "/n", "carrier must be non-empty");
      const auto size = static_cast<std::size_t>(n);
      FinitePomonoid p;
      p.n = size;
      p.plus = square(field(j, "plus", path), size, path + "/plus");
      auto le = square(field(j, "le", path), size, path + "/le");
      for (int v : p.plus)
        if (v < 0 || v >= n) bad(path + "/plus", "entry out of range");
      for (int v : le) {
        if (v != 0 && v != 1) bad(path + "/le", "entries must be 0 or 1");
        p.le.push_back(v == 1);
      }
      p.zero = int_field(j, "zero", path);
      if (p.zero < 0 || p.zero >= n) bad(path + "/zero", "out of range");
      json doc{{"kind", kind}, {"n", n}, {"plus", rows(p.plus, size)}, {"le", rows(le, size)}, {"zero", p.zero}};
      if (j.contains("labels")) {
        p.labels = j.at("labels").get<std::vector<std::string>>();
        if (p.labels.size() != size) bad(path + "/labels", "label count must match n");
        doc["labels"] = p.labels;
      }
      AlgebraHandle h;
      h.kind = kind;
      h.pomonoid = PomonoidPresentation{"pomonoid" + std::to_string(n), true, [p](int) { return p; }};
      h.doc = doc;
      return h;
    }
  } catch (const json::exception& e) {
    bad(path, e.what());
  } catch (const Error& e) {
    if (e.message().rfind("at ", 0) == 0) throw;
    throw Error(e.kind(), "at " + (path.empty() ? std::string("/") : path) + ": " + e.message());
  }
  bad(path + "/kind", "unknown algebra kind \"" + kind + "\"");
}

inline json encode_algebra(const AlgebraHandle& h) { return h.doc; }

inline const AlgebraHandle& require_algebra(const AlgebraHandle& h, const std::string& what) {
  if (!h.emv) throw Error(ErrorKind::invalid_input, what + ": a " + h.kind + " document is not an EMV-algebra");
  return h;
}

// ---------------------------------------------------------------------------
// Elements

inline Element decode_element(const AlgebraHandle& h, const json& j, const std::string& path = "") {
  if (h.mv && h.kind != "product") {
    const int n = static_cast<int>(h.mv->size());
    if (j.is_number_integer()) {
      int v = j.get<int>();
      if (v < 0 || v >= n) bad(path, "index " + std::to_string(v) + " out of range");
      return index_element(v);
    }
    if (j.is_string()) {
      for (int x = 0; x < n; ++x)
        if (h.mv->label(x) == j.get<std::string>()) return index_element(x);
      bad(path, "no element labelled \"" + j.get<std::string>() + "\"");
    }
    bad(path, "expected an index or a label");
  }
  if (h.kind == "product") {
    auto P = std::dynamic_pointer_cast<const ProductEmv>(h.emv);
    if (!j.is_array() || j.size() != h.parts.size())
      bad(path, "expected an array of " + std::to_string(h.parts.size()) + " components");
    std::vector<Element> xs;
    for (std::size_t i = 0; i < j.size(); ++i) xs.push_back(decode_element(h.parts[i], j[i], path + "/" + std::to_string(i)));
    return P->tuple(xs);
  }
  if (h.kind == "finset_boolean") {
    auto xs = int_list(j, path);
    for (int x : xs)
      if (x < 1) bad(path, "finite-set members start at 1");
    return FinSetBooleanEmv::set(xs);
  }
  if (h.kind == "direct_sum") {
    auto ds = std::dynamic_pointer_cast<const DirectSumEmv>(h.emv);
    if (!j.is_object()) bad(path, "expected a {coordinate: value} object");
    std::map<int, int> v;
    for (auto it = j.begin(); it != j.end(); ++it) {
      int i = 0;
      try {
        std::size_t used = 0;
        i = std::stoi(it.key(), &used);
        if (used != it.key().size() || i < 0) throw std::invalid_argument("");
      } catch (const std::exception&) {
        bad(path + "/" + it.key(), "coordinate must be a non-negative integer");
      }
      if (!ds->repeat() && i >= static_cast<int>(ds->pattern().size())) bad(path + "/" + it.key(), "coordinate out of range");
      const auto& factor = h.parts[static_cast<std::size_t>(i) % h.parts.size()];
      v[i] = static_cast<int>(decode_element(factor, it.value(), path + "/" + it.key()).key().at(0));
    }
    return ds->encode(v);
  }
  if (h.kind == "unitized") {
    auto N = std::dynamic_pointer_cast<const UnitizedMv>(h.emv);
    if (!j.is_object() || j.size() != 1 || !(j.contains("low") || j.contains("high")))
      bad(path, "expected {\"low\": x} or {\"high\": x}");
    bool low = j.contains("low");
    auto v = decode_element(h.parts[0], low ? j.at("low") : j.at("high"), path + (low ? "/low" : "/high"));
    return low ? N->low(v) : N->high(v);
  }
  bad(path, "a " + h.kind + " document has no element encoding");
}

inline json encode_element(const AlgebraHandle& h, const Element& x) {
  if (h.mv && h.kind != "product") return x.key().at(0);
  if (h.kind == "product") {
    auto P = std::dynamic_pointer_cast<const ProductEmv>(h.emv);
    json out = json::array();
    auto cs = P->components(x);
    for (std::size_t i = 0; i < cs.size(); ++i) out.push_back(encode_element(h.parts[i], cs[i]));
    return out;
  }
  if (h.kind == "finset_boolean") return FinSetBooleanEmv::members(x);
  if (h.kind == "direct_sum") {
    auto ds = std::dynamic_pointer_cast<const DirectSumEmv>(h.emv);
    json out = json::object();
    for (auto& [i, v] : ds->decode(x)) out[std::to_string(i)] = v;
    return out;
  }
  if (h.kind == "unitized") {
    auto N = std::dynamic_pointer_cast<const UnitizedMv>(h.emv);
    return json{{N->is_low(x) ? "low" : "high", encode_element(h.parts[0], N->payload(x))}};
  }
  throw Error(ErrorKind::unsupported, "a " + h.kind + " document has no element encoding");
}

// ---------------------------------------------------------------------------
// Morphisms

struct MorphismHandle {
  EmvMorphism morphism;
  AlgebraHandle source;
  AlgebraHandle target;
  json doc;
};

struct HomHandle {
  StrongEmvHom hom;
  AlgebraHandle source;
  AlgebraHandle target;
  json doc;
};

inline IdempotentSet decode_subset(const AlgebraHandle& h, const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a subset name");
  const auto s = j.get<std::string>();
  const auto& m = h.emv;
  if (s == "all") return all_idempotents(m);
  if (s == "top") {
    if (!m->top()) bad(path, "the algebra has no top element");
    return idempotent_list("top", {*m->top()});
  }
  if (s == "even") {
    if (h.kind != "finset_boolean") bad(path, "\"even\" needs a finset_boolean algebra");
    return IdempotentSet{"A_even", [](int l) {
                           std::vector<Element> v;
                           for (int k = 0; 2 * k <= l + 1; ++k) v.push_back(FinSetBooleanEmv::initial(2 * k));
                           return v;
                         }};
  }
  if (s == "segments") {
    auto ds = std::dynamic_pointer_cast<const DirectSumEmv>(m);
    if (!ds) bad(path, "\"segments\" needs a direct_sum algebra");
    return IdempotentSet{"segments", [ds](int l) {
                           std::vector<Element> v{ds->zero()};
                           std::vector<int> supp;
                           for (int n = 0; n < ds->coords(l); ++n) {
                             supp.push_back(n);
                             v.push_back(ds->indicator(supp));
                           }
                           return v;
                         }};
  }
  bad(path, "unknown subset \"" + s + "\" (all, top, even, segments)");
}

inline HomHandle decode_hom(const json& j, const std::string& path) {
  const auto kind = str_field(j, "kind", path);
  if (kind == "identity") {
    auto a = decode_algebra(field(j, "algebra", path), path + "/algebra");
    require_algebra(a, path);
    return HomHandle{identity_hom(a.emv), a, a, json{{"kind", kind}, {"algebra", a.doc}}};
  }
  if (kind == "swap12") {
    auto a = decode_algebra(json{{"kind", "finset_boolean"}});
    return HomHandle{swap12_hom(std::dynamic_pointer_cast<const FinSetBooleanEmv>(a.emv)), a, a, json{{"kind", kind}}};
  }
  if (kind == "coordinate_swap") {
    auto a = decode_algebra(field(j, "algebra", path), path + "/algebra");
    auto ds = std::dynamic_pointer_cast<const DirectSumEmv>(a.emv);
    if (!ds) bad(path + "/algebra", "coordinate_swap needs a direct_sum algebra");
    int i = int_field(j, "i", path), k = int_field(j, "j", path);
    return HomHandle{coordinate_swap_hom(ds, i, k), a, a, json{{"kind", kind}, {"algebra", a.doc}, {"i", i}, {"j", k}}};
  }
  if (kind == "projection") {
    auto p = decode_algebra(field(j, "product", path), path + "/product");
    auto P = std::dynamic_pointer_cast<const ProductEmv>(p.emv);
    if (!P) bad(path + "/product", "expected a product algebra");
    int i = int_field(j, "index", path);
    if (i < 0 || i >= static_cast<int>(p.parts.size())) bad(path + "/index", "factor index out of range");
    return HomHandle{projection_hom(P, static_cast<std::size_t>(i)), p, p.parts[static_cast<std::size_t>(i)],
                     json{{"kind", kind}, {"product", p.doc}, {"index", i}}};
  }
  if (kind == "table") {
    auto a = decode_algebra(field(j, "source", path), path + "/source");
    auto b = decode_algebra(field(j, "target", path), path + "/target");
    if (!a.mv || !b.mv || a.kind == "product" || b.kind == "product")
      bad(path, "table homomorphisms need chain, boolean or table algebras");
    auto map = int_list(field(j, "map", path), path + "/map");
    if (map.size() != a.mv->size()) bad(path + "/map", "expected one entry per source element");
    for (int v : map)
      if (v < 0 || v >= static_cast<int>(b.mv->size())) bad(path + "/map", "entry out of range");
    if (!is_mv_hom(map, *a.mv, *b.mv)) bad(path + "/map", "not an MV-homomorphism");
    StrongEmvHom h{a.emv, b.emv, [map](const Element& x) { return index_element(map.at(static_cast<std::size_t>(x.key().at(0)))); },
                   "h"};
    return HomHandle{h, a, b, json{{"kind", kind}, {"source", a.doc}, {"target", b.doc}, {"map", map}}};
  }
  bad(path + "/kind", "unknown homomorphism kind \"" + kind + "\"");
}

inline MorphismHandle decode_morphism(const json& j, int level, const std::string& path = "");

/// Explicit family over a finite source: [{"key", "a", "map": [[x, f(x)], ...]}].
inline MorphismHandle decode_family(const json& j, const std::string& path) {
  auto s = decode_algebra(field(j, "source", path), path + "/source");
  auto t = decode_algebra(field(j, "target", path), path + "/target");
  require_algebra(s, path + "/source");
  require_algebra(t, path + "/target");
  if (!s.emv->is_finite()) bad(path + "/source", "explicit families need a finite source");
  const auto& es = field(j, "entries", path);
  if (!es.is_array()) bad(path + "/entries", "expected an array");
  std::vector<MorphismEntry> entries;
  json out_entries = json::array();
  for (std::size_t k = 0; k < es.size(); ++k) {
    const std::string p = path + "/entries/" + std::to_string(k);
    auto a = decode_element(s, field(es[k], "a", p), p + "/a");
    if (!s.emv->is_idempotent(a)) bad(p + "/a", "domain top must be idempotent");
    const auto& mj = field(es[k], "map", p);
    if (!mj.is_array()) bad(p + "/map", "expected an array of [x, f(x)] pairs");
    std::map<Element, Element> table;
    for (std::size_t r = 0; r < mj.size(); ++r) {
      const std::string pr = p + "/map/" + std::to_string(r);
      if (!mj[r].is_array() || mj[r].size() != 2) bad(pr, "expected a pair");
      auto x = decode_element(s, mj[r][0], pr + "/0");
      if (!s.emv->leq(x, a)) bad(pr + "/0", "argument is not below the domain top");
      table[x] = decode_element(t, mj[r][1], pr + "/1");
    }
    for (auto& x : interval_elements(*s.emv, a, 0))
      if (!table.count(x)) bad(p + "/map", "no value for " + s.emv->format(x));
    std::string key = es[k].contains("key") ? str_field(es[k], "key", p) : s.emv->format(a);
    auto src = s.emv;
    ElementMap fn = [table, src, key](const Element& x) {
      auto it = table.find(x);
      if (it == table.end()) throw Error(ErrorKind::domain_error, "entry " + key + " is undefined at " + src->format(x));
      return it->second;
    };
    entries.push_back(MorphismEntry{key, a, table.at(a), fn});
    json pairs = json::array();
    for (auto& [x, y] : table) pairs.push_back(json::array({encode_element(s, x), encode_element(t, y)}));
    out_entries.push_back(json{{"key", key}, {"a", encode_element(s, a)}, {"map", pairs}});
  }
  std::string name = j.contains("name") ? str_field(j, "name", path) : "f";
  MorphismHandle h{finite_family(s.emv, t.emv, name, entries), s, t, json{}};
  h.doc = json{{"kind", "family"}, {"name", name}, {"source", s.doc}, {"target", t.doc}, {"entries", out_entries}};
  return h;
}

/// Writes a family with finite source and finite index as an explicit document.
inline json explicit_family(const MorphismHandle& h) {
  const auto& S = *h.source.emv;
  json entries = json::array();
  for (auto& e : h.morphism.entries(0)) {
    json pairs = json::array();
    for (auto& x : interval_elements(S, e.domain_top, 0))
      pairs.push_back(json::array({encode_element(h.source, x), encode_element(h.target, e(x))}));
    entries.push_back(json{{"key", e.key}, {"a", encode_element(h.source, e.domain_top)}, {"map", pairs}});
  }
  return json{{"kind", "family"}, {"name", h.morphism.name}, {"source", h.source.doc}, {"target", h.target.doc},
              {"entries", entries}};
}

inline bool explicit_possible(const MorphismHandle& h) {
  return h.source.emv->is_finite() && h.morphism.finite_index;
}

inline Congruence decode_congruence(const AlgebraHandle& a, const json& j, const std::string& path, json* canonical = nullptr);

inline MorphismHandle decode_builtin(const json& j, int level, const std::string& path) {
  const auto name = str_field(j, "name", path);
  auto fixed = [&](EmvMorphism f, const json& sdoc, const json& tdoc) {
    auto s = decode_algebra(sdoc);
    auto t = decode_algebra(tdoc);
    f.source = s.emv;
    f.target = t.emv;
    return MorphismHandle{f, s, t, json{{"kind", "builtin"}, {"name", name}}};
  };
  if (name == "identity") {
    auto a = decode_algebra(field(j, "algebra", path), path + "/algebra");
    require_algebra(a, path + "/algebra");
    return MorphismHandle{identity_family(a.emv), a, a, json{{"kind", "builtin"}, {"name", name}, {"algebra", a.doc}}};
  }
  if (name == "setminus") {
    auto a = decode_algebra(json{{"kind", "finset_boolean"}});
    return MorphismHandle{setminus_family(std::dynamic_pointer_cast<const FinSetBooleanEmv>(a.emv)), a, a,
                          json{{"kind", "builtin"}, {"name", name}}};
  }
  if (name == "strong" || name == "strong_restrict") {
    auto h = decode_hom(field(j, "hom", path), path + "/hom");
    json doc{{"kind", "builtin"}, {"name", name}, {"hom", h.doc}};
    if (name == "strong") return MorphismHandle{morphism_from_strong_hom(h.hom, level), h.source, h.target, doc};
    auto K = decode_subset(h.source, field(j, "subset", path), path + "/subset");
    doc["subset"] = j.at("subset");
    return MorphismHandle{strong_restrict(h.hom, K, level), h.source, h.target, doc};
  }
  if (name == "projection") {
    auto h = decode_hom(json{{"kind", "projection"}, {"product", field(j, "product", path)}, {"index", field(j, "index", path)}},
                        path);
    auto P = std::dynamic_pointer_cast<const ProductEmv>(h.source.emv);
    return MorphismHandle{projection_family(P, static_cast<std::size_t>(j.at("index").get<int>()), level), h.source, h.target,
                          json{{"kind", "builtin"}, {"name", name}, {"product", h.source.doc}, {"index", j.at("index")}}};
  }
  if (name == "coordinatewise") {
    auto s = decode_algebra(field(j, "source", path), path + "/source");
    auto t = decode_algebra(field(j, "target", path), path + "/target");
    auto sd = std::dynamic_pointer_cast<const DirectSumEmv>(s.emv);
    auto td = std::dynamic_pointer_cast<const DirectSumEmv>(t.emv);
    if (!sd || !td) bad(path, "coordinatewise needs direct_sum source and target");
    const auto& hs = field(j, "homs", path);
    if (!hs.is_array() || hs.size() != sd->pattern().size()) bad(path + "/homs", "expected one table per pattern entry");
    std::vector<MvHom> homs;
    json tables = json::array();
    for (std::size_t i = 0; i < hs.size(); ++i) {
      auto map = int_list(hs[i], path + "/homs/" + std::to_string(i));
      const auto& a = sd->pattern()[i];
      const auto& b = td->pattern()[i % td->pattern().size()];
      if (map.size() != a.size() || !is_mv_hom(map, a, b)) bad(path + "/homs/" + std::to_string(i), "not an MV-homomorphism");
      homs.push_back(MvHom{a, b, map});
      tables.push_back(map);
    }
    return MorphismHandle{coordinatewise_family(sd, td, homs), s, t,
                          json{{"kind", "builtin"}, {"name", name}, {"source", s.doc}, {"target", t.doc}, {"homs", tables}}};
  }
  if (name == "meet_with") {
    auto a = decode_algebra(field(j, "algebra", path), path + "/algebra");
    require_algebra(a, path + "/algebra");
    auto c = decode_element(a, field(j, "c", path), path + "/c");
    if (!a.emv->is_idempotent(c)) bad(path + "/c", "c must be idempotent");
    return MorphismHandle{meet_with_family(a.emv, c), a, a,
                          json{{"kind", "builtin"}, {"name", name}, {"algebra", a.doc}, {"c", encode_element(a, c)}}};
  }
  if (name == "nonstandard") {
    auto a = decode_algebra(field(j, "algebra", path), path + "/algebra");
    auto ds = std::dynamic_pointer_cast<const DirectSumEmv>(a.emv);
    if (!ds) bad(path + "/algebra", "nonstandard needs a direct_sum algebra");
    return MorphismHandle{nonstandard_family(ds), a, a, json{{"kind", "builtin"}, {"name", name}, {"algebra", a.doc}}};
  }
  if (name == "non_full") return fixed(non_full_fixture(), json{{"kind", "chain"}, {"n", 3}}, json{{"kind", "chain"}, {"n", 3}});
  if (name == "clause_iii")
    return fixed(clause_iii_fixture(), json{{"kind", "boolean"}, {"atoms", 2}}, json{{"kind", "boolean"}, {"atoms", 2}});
  if (name == "missing_directedness")
    return fixed(missing_directedness_fixture(), json{{"kind", "boolean"}, {"atoms", 2}}, json{{"kind", "boolean"}, {"atoms", 2}});
  bad(path + "/name", "unknown builtin \"" + name + "\"");
}

inline MorphismHandle decode_morphism(const json& j, int level, const std::string& path) {
  const auto kind = str_field(j, "kind", path);
  try {
    if (kind == "family") return decode_family(j, path);
    if (kind == "builtin") return decode_builtin(j, level, path);
    if (kind == "compose") {
      auto outer = decode_morphism(field(j, "outer", path), level, path + "/outer");
      auto inner = decode_morphism(field(j, "inner", path), level, path + "/inner");
      if (!same_algebra(inner.morphism.target, outer.morphism.source))
        throw Error(ErrorKind::precondition_violation,
                    "at " + path + ": target of the inner family is not the source of the outer family");
      return MorphismHandle{compose(outer.morphism, inner.morphism, level), inner.source, outer.target,
                            json{{"kind", kind}, {"outer", outer.doc}, {"inner", inner.doc}}};
    }
    if (kind == "restrict") {
      auto f = decode_morphism(field(j, "family", path), level, path + "/family");
      auto K = decode_subset(f.source, field(j, "subset", path), path + "/subset");
      return MorphismHandle{restrict_morphism(f.morphism, K, level), f.source, f.target,
                            json{{"kind", kind}, {"family", f.doc}, {"subset", j.at("subset")}}};
    }
    if (kind == "mediating") {
      auto s = decode_algebra(field(j, "source", path), path + "/source");
      require_algebra(s, path + "/source");
      const auto& fs = field(j, "factors", path);
      if (!fs.is_array() || fs.empty()) bad(path + "/factors", "expected a non-empty array");
      std::vector<EmvMorphism> factors;
      json docs = json::array(), tdocs = json::array();
      for (std::size_t i = 0; i < fs.size(); ++i) {
        auto f = decode_morphism(fs[i], level, path + "/factors/" + std::to_string(i));
        if (!same_algebra(f.morphism.source, s.emv))
          throw Error(ErrorKind::precondition_violation,
                      "at " + path + "/factors/" + std::to_string(i) + ": source differs from the mediating source");
        factors.push_back(f.morphism);
        docs.push_back(f.doc);
        tdocs.push_back(f.target.doc);
      }
      auto g = mediating_morphism(s.emv, factors, level);
      auto t = decode_algebra(json{{"kind", "product"}, {"factors", tdocs}});
      g.target = t.emv;
      return MorphismHandle{g, s, t, json{{"kind", kind}, {"source", s.doc}, {"factors", docs}}};
    }
    if (kind == "free_lift") {
      auto gens = field(j, "gens", path).get<std::vector<std::string>>();
      auto t = decode_algebra(field(j, "target", path), path + "/target");
      require_algebra(t, path + "/target");
      const auto& as = field(j, "assign", path);
      if (!as.is_object()) bad(path + "/assign", "expected an object");
      std::map<std::string, Element> assign;
      json adoc = json::object();
      for (auto it = as.begin(); it != as.end(); ++it) {
        assign[it.key()] = decode_element(t, it.value(), path + "/assign/" + it.key());
        adoc[it.key()] = encode_element(t, assign[it.key()]);
      }
      const std::string mode = j.contains("mode") ? str_field(j, "mode", path) : "strict";
      if (mode != "strict" && mode != "weak") bad(path + "/mode", "mode is strict or weak");
      auto F = mk_free_mv(gens);
      LiftTarget T{t.emv, assign};
      auto phi = mode == "weak" ? weakly_free_lift(F, T, level) : free_lift(F, T, level);
      AlgebraHandle fh;
      fh.kind = "free";
      fh.emv = F;
      fh.doc = json{{"kind", "free"}, {"gens", gens}};
      return MorphismHandle{phi, fh, t,
                            json{{"kind", kind}, {"gens", gens}, {"target", t.doc}, {"assign", adoc}, {"mode", mode}}};
    }
    if (kind == "natural_projection") {
      auto a = decode_algebra(field(j, "algebra", path), path + "/algebra");
      require_algebra(a, path + "/algebra");
      json canon;
      auto theta = decode_congruence(a, field(j, "congruence", path), path + "/congruence", &canon);
      auto q = quotient(a.emv, theta);
      AlgebraHandle qh;
      qh.kind = "quotient";
      qh.emv = q.algebra;
      return MorphismHandle{natural_projection(a.emv, theta), a, qh,
                            json{{"kind", kind}, {"algebra", a.doc}, {"congruence", canon}}};
    }
  } catch (const json::exception& e) {
    bad(path, e.what());
  }
  bad(path + "/kind", "unknown morphism kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// Congruences

/// {"classes": [[x, ...], ...]} listing every non-singleton class, or
/// {"generated_by": [[x, y], ...]}.
inline Congruence decode_congruence(const AlgebraHandle& a, const json& j, const std::string& path, json* canonical) {
  require_algebra(a, path);
  if (!a.emv->is_finite()) throw Error(ErrorKind::unsupported, "at " + path + ": congruence documents need a finite algebra");
  std::vector<std::pair<Element, Element>> seeds;
  if (j.contains("classes")) {
    const auto& cs = j.at("classes");
    if (!cs.is_array()) bad(path + "/classes", "expected an array");
    std::map<Element, std::size_t> seen;
    for (std::size_t c = 0; c < cs.size(); ++c) {
      if (!cs[c].is_array() || cs[c].empty()) bad(path + "/classes/" + std::to_string(c), "expected a non-empty array");
      std::vector<Element> xs;
      for (std::size_t i = 0; i < cs[c].size(); ++i) {
        auto x = decode_element(a, cs[c][i], path + "/classes/" + std::to_string(c) + "/" + std::to_string(i));
        if (seen.count(x)) bad(path + "/classes/" + std::to_string(c), a.emv->format(x) + " appears in two classes");
        seen[x] = c;
        xs.push_back(x);
      }
      for (std::size_t i = 1; i < xs.size(); ++i) seeds.emplace_back(xs[0], xs[i]);
    }
    std::map<Element, int> cls;
    int next = static_cast<int>(cs.size());
    for (auto& x : a.emv->elements(0)) cls[x] = seen.count(x) ? static_cast<int>(seen[x]) : next++;
    auto theta = from_classes(a.emv, "theta", cls);
    if (canonical) *canonical = json{{"classes", cs}};
    return theta;
  }
  if (j.contains("generated_by")) {
    const auto& ps = j.at("generated_by");
    if (!ps.is_array()) bad(path + "/generated_by", "expected an array of pairs");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string p = path + "/generated_by/" + std::to_string(i);
      if (!ps[i].is_array() || ps[i].size() != 2) bad(p, "expected a pair");
      seeds.emplace_back(decode_element(a, ps[i][0], p + "/0"), decode_element(a, ps[i][1], p + "/1"));
    }
    auto theta = generate_congruence(a.emv, seeds);
    theta.name = "theta";
    if (canonical) *canonical = json{{"generated_by", ps}};
    return theta;
  }
  bad(path, "expected \"classes\" or \"generated_by\"");
}

/// Non-singleton classes of a relation on a finite algebra, in element order.
inline json encode_classes(const AlgebraHandle& a, const Congruence& theta) {
  auto E = a.emv->elements(0);
  std::vector<bool> used(E.size());
  json out = json::array();
  for (std::size_t i = 0; i < E.size(); ++i) {
    if (used[i]) continue;
    json cls = json::array({encode_element(a, E[i])});
    for (std::size_t k = i + 1; k < E.size(); ++k)
      if (!used[k] && theta.related(E[i], E[k])) {
        used[k] = true;
        cls.push_back(encode_element(a, E[k]));
      }
    if (cls.size() > 1) out.push_back(cls);
  }
  return out;
}

/// The quotient as an MV table document; ¬x is λ_top(x).
inline json quotient_table(const Quotient& q) {
  const auto& Q = *q.algebra;
  auto E = Q.elements(0);
  const std::size_t n = E.size();
  auto top = Q.top();
  if (!top) throw Error(ErrorKind::unsupported, "quotient has no top element");
  std::vector<int> plus, neg;
  std::vector<std::string> labels;
  for (auto& x : E) {
    for (auto& y : E) plus.push_back(static_cast<int>(Q.oplus(x, y).key().at(0)));
    neg.push_back(static_cast<int>(Q.lambda(*top, x).key().at(0)));
    labels.push_back(Q.format(x));
  }
  return json{{"kind", "table"},
              {"n", n},
              {"oplus", rows(plus, n)},
              {"neg", neg},
              {"zero", Q.zero().key().at(0)},
              {"one", top->key().at(0)},
              {"labels", labels}};
}

// ---------------------------------------------------------------------------
// Reports

struct Report {
  Verdict verdict;
  std::optional<double> seconds;  // only with --timing
  json extra = json::object();
};

inline Verdict from_mv_report(const MvReport& r, const FiniteMvAlgebra& m) {
  if (r.pass) return Verdict::passing("mv-axioms", true, 0, "table");
  std::map<std::string, std::string> w;
  const char* names[] = {"x", "y", "z"};
  for (std::size_t i = 0; i < r.witnesses.size(); ++i)
    w[i < 3 ? names[i] : "w" + std::to_string(i)] = m.label(r.witnesses[i]);
  return Verdict::failing("mv-axioms", r.axiom, w, 0);
}

inline json report_json(const Report& r) {
  const auto& v = r.verdict;
  json out{{"check", v.check}, {"verdict", to_string(v.status)}, {"bound", v.bound}};
  if (!v.clause.empty()) out["clause"] = v.clause;
  if (!v.witness.empty()) out["witness"] = v.witness;
  if (!v.decided_by.empty()) out["decided_by"] = v.decided_by;
  if (!v.notes.empty()) out["notes"] = v.notes;
  for (auto it = r.extra.begin(); it != r.extra.end(); ++it) out[it.key()] = it.value();
  if (r.seconds) out["seconds"] = *r.seconds;
  return out;
}

inline std::string report_text(const Report& r) {
  const auto& v = r.verdict;
  std::string s = v.check + ": " + to_string(v.status);
  if (!v.clause.empty()) s += " clause=" + v.clause;
  if (v.bound) s += " bound=" + std::to_string(v.bound);
  if (!v.witness.empty()) {
    s += " witness={";
    bool first = true;
    for (auto& [k, w] : v.witness) {
      s += (first ? "" : ", ") + k + "=" + w;
      first = false;
    }
    s += "}";
  }
  if (!v.decided_by.empty()) s += " by=" + v.decided_by;
  for (auto it = r.extra.begin(); it != r.extra.end(); ++it)
    s += " " + it.key() + "=" + (it.value().is_string() ? it.value().get<std::string>() : it.value().dump());
  for (auto& n : v.notes) s += " [" + n + "]";
  if (r.seconds) {
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << *r.seconds;
    s += " time=" + t.str() + "s";
  }
  return s;
}

/// 0 when nothing failed, 1 otherwise.
inline int exit_code(const std::vector<Report>& rs) {
  for (auto& r : rs)
    if (r.verdict.failed()) return 1;
  return 0;
}

}  // namespace emvkit::doc
