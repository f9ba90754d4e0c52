// emvkit: command-line front end for the emvkit headers.
//
// Exit codes: 0 no failing verdict, 1 some verdict failed, 2 invalid input.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emvkit/doc.hpp"
#include "emvkit/suite.hpp"

namespace {

using emvkit::Error;
using emvkit::ErrorKind;
using emvkit::Verdict;
using emvkit::doc::json;
using emvkit::doc::Report;

struct Common {
  int bound = emvkit::kDefaultBound;
  bool json_out = false;
  bool timing = false;
  std::string out;
};

int default_bound() {
  if (const char* env = std::getenv("EMVKIT_BOUND")) {
    try {
      int b = std::stoi(env);
      if (b >= 0) return b;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring EMVKIT_BOUND=" << env << "\n";
  }
  return emvkit::kDefaultBound;
}

json read_doc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_input, path + ": " + e.what());
  }
}

void write_doc(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_input, "cannot write " + path);
  out << j.dump(2) << "\n";
}

class Runner {
 public:
  explicit Runner(const Common& c) : c_(c) {}

  template <class F>
  Verdict timed(F&& f, std::optional<double>& secs) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v = f();
    if (c_.timing) secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return v;
  }

  template <class F>
  Report& run(const std::string& check, F&& f, json extra = json::object()) {
    Report r;
    r.verdict = timed(f, r.seconds);
    r.verdict.check = check;
    r.extra = std::move(extra);
    reports_.push_back(std::move(r));
    return reports_.back();
  }

  int finish() const {
    for (auto& r : reports_)
      std::cout << (c_.json_out ? emvkit::doc::report_json(r).dump() : emvkit::doc::report_text(r)) << "\n";
    return emvkit::doc::exit_code(reports_);
  }

 private:
  const Common& c_;
  std::vector<Report> reports_;
};

int cmd_check(const Common& c, const std::string& path) {
  auto h = emvkit::doc::decode_algebra(read_doc(path));
  Runner r(c);
  if (h.pomonoid) {
    auto rep = emvkit::check_alt_axioms(*h.pomonoid, c.bound);
    r.run("alt-conditions", [&] { return rep.conditions; });
    r.run("emv-axioms", [&] { return rep.emv; });
    return r.finish();
  }
  if (h.mv) {
    auto& mv = r.run("mv-axioms", [&] { return emvkit::doc::from_mv_report(emvkit::check_mv_axioms(*h.mv), *h.mv); });
    if (!mv.verdict.ok()) return r.finish();
  }
  r.run("emv-axioms", [&] { return emvkit::check_emv_axioms(*h.emv, c.bound); });
  return r.finish();
}

emvkit::doc::MorphismHandle load_morphism(const Common& c, const std::string& path) {
  return emvkit::doc::decode_morphism(read_doc(path), c.bound);
}

json morphism_output(const emvkit::doc::MorphismHandle& h) {
  return emvkit::doc::explicit_possible(h) ? emvkit::doc::explicit_family(h) : h.doc;
}

int cmd_morphism(const Common& c, const std::string& path) {
  auto f = load_morphism(c, path);
  Runner r(c);
  r.run("validate", [&] { return emvkit::validate_morphism(f.morphism, c.bound); }, json{{"morphism", f.morphism.name}});
  if (!c.out.empty()) write_doc(c.out, f.doc);
  return r.finish();
}

int cmd_similar(const Common& c, const std::string& a, const std::string& b) {
  auto f = load_morphism(c, a);
  auto g = load_morphism(c, b);
  if (!emvkit::same_algebra(f.morphism.source, g.morphism.source) || !emvkit::same_algebra(f.morphism.target, g.morphism.target))
    throw Error(ErrorKind::precondition_violation, "similar: the families have different sources or targets");
  Runner r(c);
  r.run("similar", [&] { return emvkit::similar(f.morphism, g.morphism, c.bound); },
        json{{"f", f.morphism.name}, {"g", g.morphism.name}});
  return r.finish();
}

int cmd_compose(const Common& c, const std::string& outer, const std::string& inner) {
  auto d = json{{"kind", "compose"}, {"outer", read_doc(outer)}, {"inner", read_doc(inner)}};
  auto h = emvkit::doc::decode_morphism(d, c.bound);
  Runner r(c);
  r.run("validate", [&] { return emvkit::validate_morphism(h.morphism, c.bound); }, json{{"morphism", h.morphism.name}});
  if (!c.out.empty()) write_doc(c.out, morphism_output(h));
  return r.finish();
}

int cmd_kernel(const Common& c, const std::string& path) {
  auto f = load_morphism(c, path);
  auto theta = emvkit::kernel(f.morphism, c.bound);
  json extra = json::object();
  const bool finite = f.source.emv->is_finite();
  if (finite) extra["classes"] = emvkit::doc::encode_classes(f.source, theta);
  Runner r(c);
  r.run("congruence", [&] { return emvkit::is_congruence(*f.source.emv, theta, c.bound); }, extra);
  if (!c.out.empty()) {
    if (!finite) throw Error(ErrorKind::unsupported, "kernel documents need a finite source");
    write_doc(c.out, json{{"kind", "congruence"}, {"algebra", f.source.doc}, {"classes", extra["classes"]}});
  }
  return r.finish();
}

int cmd_quotient(const Common& c, const std::string& alg, const std::string& cong) {
  auto a = emvkit::doc::decode_algebra(read_doc(alg));
  emvkit::doc::require_algebra(a, alg);
  auto theta = emvkit::doc::decode_congruence(a, read_doc(cong), "");
  Runner r(c);
  auto& v = r.run("congruence", [&] { return emvkit::is_congruence(*a.emv, theta, c.bound); });
  if (!v.verdict.ok()) return r.finish();
  auto q = emvkit::quotient(a.emv, theta);
  r.run("emv-axioms", [&] { return emvkit::check_emv_axioms(*q.algebra, 0); },
        json{{"size", q.algebra->elements(0).size()}});
  if (!c.out.empty()) write_doc(c.out, emvkit::doc::quotient_table(q));
  return r.finish();
}

int cmd_product(const Common& c, const std::string& source, const std::vector<std::string>& factors) {
  json fs = json::array();
  for (auto& p : factors) fs.push_back(read_doc(p));
  auto h = emvkit::doc::decode_morphism(json{{"kind", "mediating"}, {"source", read_doc(source)}, {"factors", fs}}, c.bound);
  std::vector<emvkit::EmvMorphism> parts;
  for (std::size_t i = 0; i < fs.size(); ++i)
    parts.push_back(emvkit::doc::decode_morphism(fs[i], c.bound, "/factors/" + std::to_string(i)).morphism);
  auto P = std::dynamic_pointer_cast<const emvkit::ProductEmv>(h.target.emv);
  Runner r(c);
  r.run("validate", [&] { return emvkit::validate_morphism(h.morphism, c.bound); }, json{{"morphism", h.morphism.name}});
  for (std::size_t i = 0; i < parts.size(); ++i)
    r.run("projection-" + std::to_string(i), [&] {
      return emvkit::approx_equal(emvkit::compose(emvkit::projection_family(P, i, c.bound), h.morphism, c.bound), parts[i],
                                  c.bound);
    });
  r.run("universal", [&] { return emvkit::check_product_universal(h.source.emv, parts, h.morphism, c.bound); });
  if (!c.out.empty()) write_doc(c.out, morphism_output(h));
  return r.finish();
}

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

int cmd_free_lift(const Common& c, const std::string& gens, const std::string& target,
                  const std::vector<std::string>& assigns, bool weak) {
  std::vector<std::string> names;
  std::stringstream ss(gens);
  for (std::string g; std::getline(ss, g, ',');)
    if (!g.empty()) names.push_back(g);
  json assign = json::object();
  for (auto& a : assigns) {
    auto eq = a.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::invalid_input, "--assign expects name=value, got " + a);
    assign[a.substr(0, eq)] = parse_value(a.substr(eq + 1));
  }
  json d{{"kind", "free_lift"}, {"gens", names}, {"target", read_doc(target)}, {"assign", assign},
         {"mode", weak ? "weak" : "strict"}};
  auto h = emvkit::doc::decode_morphism(d, c.bound);
  auto F = std::dynamic_pointer_cast<const emvkit::FreeMv>(h.source.emv);
  emvkit::LiftTarget T{h.target.emv, {}};
  for (auto& [k, v] : h.doc["assign"].items()) T.assign[k] = emvkit::doc::decode_element(h.target, v);
  json keys = json::array();
  for (auto& e : h.morphism.entries(0)) keys.push_back(e.key);
  Runner r(c);
  r.run("validate", [&] { return emvkit::validate_morphism(h.morphism, c.bound); }, json{{"entries", keys}});
  if (weak) {
    auto strict = emvkit::strict_commutes(h.morphism, *F, T, c.bound);
    r.run("sim-commutation", [&] { return emvkit::sim_commutes(h.morphism, *F, T, c.bound); },
          json{{"strict", emvkit::to_string(strict.status)}});
  } else {
    r.run("strict-commutation", [&] { return emvkit::strict_commutes(h.morphism, *F, T, c.bound); });
  }
  if (!c.out.empty()) write_doc(c.out, h.doc);
  return r.finish();
}

int cmd_unitize(const Common& c, const std::string& path) {
  auto base = emvkit::doc::decode_algebra(read_doc(path));
  auto h = emvkit::doc::decode_algebra(json{{"kind", "unitized"}, {"base", base.doc}});
  auto N = std::dynamic_pointer_cast<const emvkit::UnitizedMv>(h.emv);
  emvkit::Subset low{"Low", [N](const emvkit::Element& x) { return N->is_low(x); }};
  Runner r(c);
  r.run("emv-axioms", [&] { return emvkit::check_emv_axioms(*N, c.bound); });
  r.run("low-ideal", [&] { return emvkit::is_ideal(*N, low, c.bound); });
  r.run("low-maximal", [&] { return emvkit::is_maximal_ideal(*N, low, c.bound); });
  if (!c.out.empty()) write_doc(c.out, h.doc);
  return r.finish();
}

int cmd_suite(const Common& c, const std::string& level, bool mutant) {
  emvkit::SuiteOptions opt;
  opt.full = level == "full";
  opt.bound = c.bound;
  opt.inject_mutant = mutant;
  bool failed = false;
  emvkit::run_acceptance(opt, [&](const emvkit::CriterionResult& r) {
    failed |= !r.pass;
    if (c.json_out) {
      json j{{"criterion", r.id}, {"name", r.name}, {"verdict", r.pass ? "pass" : "fail"}, {"detail", r.detail},
             {"bound", opt.bound}};
      if (c.timing) j["seconds"] = r.seconds;
      std::cout << j.dump() << std::endl;
    } else {
      std::cout << "criterion " << r.id << " " << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.detail << ")";
      if (c.timing) std::cout << " time=" << r.seconds << "s";
      std::cout << std::endl;
    }
  });
  return failed ? 1 : 0;
}

int exit_for(const Error& e) { return e.kind() == ErrorKind::bound_exhausted ? 1 : 2; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emvkit: checks for EMV-algebras, their morphisms and free objects"};
  app.require_subcommand(1);
  Common c;
  c.bound = default_bound();

  auto common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--bound", c.bound, "probe level for infinite backends")->check(CLI::NonNegativeNumber);
    sub->add_flag("--json", c.json_out, "one JSON report per line");
    sub->add_flag("--timing", c.timing, "add wall time to reports");
    if (with_out) sub->add_option("-o,--output", c.out, "write the resulting document here");
  };

  std::string a, b;
  std::vector<std::string> rest, assigns;
  std::string gens, level = "quick";
  bool weak = false, mutant = false;
  int code = 0;

  auto* check = app.add_subcommand("check", "axiom checks for an algebra document");
  check->add_option("algebra", a)->required();
  common(check, false);
  check->callback([&] { code = cmd_check(c, a); });

  auto* morphism = app.add_subcommand("morphism", "validate a morphism document");
  morphism->add_option("morphism", a)->required();
  common(morphism, true);
  morphism->callback([&] { code = cmd_morphism(c, a); });

  auto* similar = app.add_subcommand("similar", "f ≈ g (one direction)");
  similar->add_option("f", a)->required();
  similar->add_option("g", b)->required();
  common(similar, false);
  similar->callback([&] { code = cmd_similar(c, a, b); });

  auto* comp = app.add_subcommand("compose", "h∘f for documents h and f");
  comp->add_option("outer", a, "applied second")->required();
  comp->add_option("inner", b, "applied first")->required();
  common(comp, true);
  comp->callback([&] { code = cmd_compose(c, a, b); });

  auto* kern = app.add_subcommand("kernel", "kernel congruence of a morphism");
  kern->add_option("morphism", a)->required();
  common(kern, true);
  kern->callback([&] { code = cmd_kernel(c, a); });

  auto* quot = app.add_subcommand("quotient", "quotient of a finite algebra by a congruence document");
  quot->add_option("algebra", a)->required();
  quot->add_option("congruence", b)->required();
  common(quot, true);
  quot->callback([&] { code = cmd_quotient(c, a, b); });

  auto* prod = app.add_subcommand("product", "mediating morphism into the product of the factor targets");
  prod->add_option("source", a)->required();
  prod->add_option("factors", rest)->required();
  common(prod, true);
  prod->callback([&] { code = cmd_product(c, a, rest); });

  auto* lift = app.add_subcommand("free-lift", "lift of an assignment along the free MV-algebra");
  lift->add_option("--gens", gens, "comma-separated generator names")->required();
  lift->add_option("--target", a, "target algebra document")->required();
  lift->add_option("--assign", assigns, "name=value, value as JSON or an element label");
  lift->add_flag("--weak", weak, "weakly free lift into a target without top");
  common(lift, true);
  lift->callback([&] { code = cmd_free_lift(c, gens, a, assigns, weak); });

  auto* unit = app.add_subcommand("unitize", "unitization of a direct-sum document");
  unit->add_option("algebra", a)->required();
  common(unit, true);
  unit->callback([&] { code = cmd_unitize(c, a); });

  auto* suite = app.add_subcommand("suite", "acceptance battery");
  suite->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  suite->add_flag("--inject-mutant", mutant)->group("");
  common(suite, false);
  suite->callback([&] { code = cmd_suite(c, level, mutant); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
