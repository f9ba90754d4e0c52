#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "emvkit/doc.hpp"

using namespace emvkit;
using json = nlohmann::json;

namespace {

const std::string kCli = EMVKIT_CLI;
const std::string kData = EMVKIT_DATA;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + "'" + kCli + "' " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return "'" + kData + "/" + name + ".json'"; }

json load(const std::string& name) {
  std::ifstream in(kData + "/" + name + ".json");
  return json::parse(in);
}

std::string tmp(const std::string& name) { return ::testing::TempDir() + "emvkit_" + name + ".json"; }

}  // namespace

TEST(Doc, AlgebraRoundTrip) {
  for (auto name : {"chain4", "boolean2", "ds_l2_l3", "finset", "product_l2_l3", "unitized_l2", "table_l3"}) {
    auto h = doc::decode_algebra(load(name));
    auto again = doc::decode_algebra(doc::encode_algebra(h));
    EXPECT_EQ(doc::encode_algebra(again), doc::encode_algebra(h)) << name;
    EXPECT_EQ(again.emv->name(), h.emv->name()) << name;
  }
}

TEST(Doc, ElementRoundTrip) {
  for (auto name : {"chain4", "boolean2", "ds_l2_l3", "finset", "product_l2_l3", "unitized_l2"}) {
    auto h = doc::decode_algebra(load(name));
    for (auto& x : h.emv->elements(2)) {
      auto j = doc::encode_element(h, x);
      EXPECT_EQ(doc::decode_element(h, j), x) << name << " " << j.dump();
    }
  }
}

TEST(Doc, ChainLabelsDecode) {
  auto h = doc::decode_algebra(load("chain4"));
  EXPECT_EQ(doc::decode_element(h, json("1/3")), index_element(1));
  EXPECT_THROW(doc::decode_element(h, json("1/2")), Error);
  EXPECT_THROW(doc::decode_element(h, json(9)), Error);
}

TEST(Doc, MorphismFixturesDecode) {
  for (auto name : {"setminus", "id_finset", "swap12", "swap12_even", "id_l3", "coordinatewise", "b2_swap", "id_b2"}) {
    auto m = doc::decode_morphism(load(name), 3);
    EXPECT_TRUE(validate_morphism(m.morphism, 3).ok()) << name;
  }
}

TEST(Doc, BadDocumentsNamePath) {
  try {
    doc::decode_algebra(load("bad_chain"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_size);
  }
  try {
    doc::decode_algebra(json{{"kind", "product"}, {"factors", json::array({json{{"kind", "chain"}}})}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
    EXPECT_NE(std::string(e.what()).find("factors"), std::string::npos) << e.what();
  }
}

TEST(Cli, CheckExitCodes) {
  EXPECT_EQ(run("check " + data("chain4")).code, 0);
  auto bad = run("check " + data("corrupted_l3"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("fail"), std::string::npos);
  EXPECT_EQ(run("check " + data("bad_chain")).code, 2);
  EXPECT_EQ(run("check " + data("truncated")).code, 2);
  EXPECT_EQ(run("check /nonexistent.json").code, 2);
  EXPECT_EQ(run("check " + data("pomonoid_l3")).code, 0);
  EXPECT_EQ(run("check " + data("pomonoid_reversed")).code, 1);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, InfiniteCheckIsBounded) {
  auto r = run("check " + data("ds_l2_l3") + " --bound 2 --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("pass-up-to-bound"), std::string::npos);
}

TEST(Cli, MorphismValidation) {
  EXPECT_EQ(run("morphism " + data("setminus")).code, 0);
  for (auto name : {"non_full", "clause_iii", "missing_directedness"}) EXPECT_EQ(run("morphism " + data(name)).code, 1) << name;
}

TEST(Cli, Similarity) {
  EXPECT_EQ(run("similar " + data("setminus") + " " + data("id_finset")).code, 0);
  EXPECT_EQ(run("similar " + data("swap12") + " " + data("id_finset")).code, 1);
  EXPECT_EQ(run("similar " + data("setminus") + " " + data("id_l3")).code, 2);
}

TEST(Cli, ComposeOutputRevalidates) {
  auto out = tmp("compose");
  ASSERT_EQ(run("compose " + data("swap12") + " " + data("setminus") + " -o '" + out + "'").code, 0);
  EXPECT_EQ(run("morphism '" + out + "'").code, 0);
}

TEST(Cli, KernelAndQuotient) {
  EXPECT_EQ(run("kernel " + data("setminus") + " --bound 3").code, 0);
  auto out = tmp("quotient");
  auto r = run("quotient " + data("boolean2") + " " + data("cong_b2_half") + " -o '" + out + "' --json");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(run("check '" + out + "'").code, 0);
  auto bad = run("quotient " + data("chain3") + " " + data("cong_l3_bad"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("witness"), std::string::npos);
}

TEST(Cli, ProductOutputRevalidates) {
  auto out = tmp("product");
  ASSERT_EQ(run("product " + data("boolean2") + " " + data("id_b2") + " " + data("b2_swap") + " -o '" + out + "'").code, 0);
  EXPECT_EQ(run("morphism '" + out + "'").code, 0);
}

TEST(Cli, FreeLift) {
  auto out = tmp("lift");
  auto r = run("free-lift --gens x --target " + data("chain3") + " --assign x=1/2 -o '" + out + "'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("phi_1"), std::string::npos);
  std::ifstream in(out);
  EXPECT_EQ(json::parse(in).at("kind"), "free_lift");
  EXPECT_EQ(run("morphism '" + out + "'").code, 0);
  EXPECT_EQ(run("free-lift --gens x --target " + data("ds_l2") + " --assign x='{\"0\":1}' --weak --bound 3").code, 0);
  EXPECT_EQ(run("free-lift --gens x --target " + data("chain3") + " --assign y=0").code, 2);
}

TEST(Cli, Unitize) { EXPECT_EQ(run("unitize " + data("ds_l2") + " --bound 2").code, 0); }

TEST(Cli, JsonIsByteStable) {
  auto a = run("check " + data("ds_l2_l3") + " --bound 2 --json");
  auto b = run("check " + data("ds_l2_l3") + " --bound 2 --json");
  EXPECT_EQ(a.out, b.out);
  EXPECT_NO_THROW((void)json::parse(a.out.substr(0, a.out.find('\n'))));
  EXPECT_EQ(a.out.find("seconds"), std::string::npos);
  EXPECT_NE(run("check " + data("chain4") + " --json --timing").out.find("seconds"), std::string::npos);
}

TEST(Cli, EnvironmentBound) {
  auto r = run("check " + data("ds_l2_l3") + " --json", "EMVKIT_BOUND=1");
  EXPECT_NE(r.out.find("\"bound\":1"), std::string::npos) << r.out;
}

TEST(Cli, SuiteQuick) {
  auto r = run("suite --level quick");
  EXPECT_EQ(r.code, 0) << r.out;
  auto m = run("suite --level quick --inject-mutant");
  EXPECT_EQ(m.code, 1);
  EXPECT_NE(m.out.find("criterion 2 lambda-identities: FAIL"), std::string::npos) << m.out;
}
