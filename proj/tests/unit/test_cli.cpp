#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "opsim/cli.hpp"
#include "opsim/error.hpp"
#include "opsim/instances.hpp"
#include "opsim/linalg.hpp"

using namespace opsim;

namespace {
Json find_verdict(const Json& report, const std::string& name) {
  for (const auto& v : report["verdicts"])
    if (v["name"] == name) return v;
  return nullptr;
}
}  // namespace

TEST(Cli, RotaOnHalfDiagonal) {
  Operator T = Operator::Zero(2, 2);
  T(0, 0) = T(1, 1) = 0.5;
  const Json cfg = {{"t", matrix_to_json(T)}, {"d", 20}};
  const auto out = cli::run_config("rota", cfg, ".");
  EXPECT_EQ(out.exit_code, cli::kExitOk);
  EXPECT_EQ(find_verdict(out.report, "T1_contraction")["status"], "pass");
  EXPECT_LE(out.report["results"]["norm_T1"].get<double>(), 1.0);
  for (const auto& v : out.report["verdicts"]) {
    EXPECT_TRUE(v.contains("tolerance"));
    EXPECT_TRUE(v.contains("truncation"));
  }
}

TEST(Cli, FoguelUnitVector) {
  const Json cfg = {{"alpha", {{"kind", "explicit"}, {"table", {1, 0, 0}}}}, {"N", 2}, {"m", 4}};
  const auto out = cli::run_config("foguel", cfg, ".");
  const Json& r = out.report["results"];
  EXPECT_EQ(r["A"], 1.0);
  EXPECT_EQ(r["B2"]["partial"], 1.0);
  EXPECT_EQ(r["B3"]["partial"], 1.0);
  EXPECT_NEAR(r["power_diffs"][0]["value"].get<double>(), 1.0, 1e-14);
  EXPECT_EQ(out.exit_code, cli::kExitOk);
}

TEST(Cli, FailingVerdictGivesExitTwo) {
  const Json cfg = {{"t1", {{"generate", {{"kind", "contraction"}, {"n", 3}, {"cap", 1.0}}}}},
                    {"expect_max", 0.5},
                    {"count", 4}};
  EXPECT_EQ(cli::run_config("dominance", cfg, ".").exit_code, cli::kExitFail);
}

TEST(Cli, InputErrorsCarryPointers) {
  try {
    cli::run_config("rota", Json{{"d", 3}}, ".");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.pointer(), "/t");
  }
  try {
    cli::run_config("rota", Json{{"t", "no/such/file.json"}}, ".");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.pointer(), "/t");
  }
  EXPECT_THROW(cli::run_config("rota", Json{{"bogus", 1}}, "."), InputError);
  EXPECT_THROW(cli::run_config("nothing", Json::object(), "."), InputError);
  const Json bad = {{"t1", {{"rows", 2}, {"cols", 2}, {"data", {1, 2, 3}}}}, {"t2", {{"rows", 1}, {"cols", 1}, {"data", {0}}}}};
  EXPECT_THROW(cli::run_config("nearness", bad, "."), InputError);
}

TEST(Cli, EchoReproducesRun) {
  const Json cfg = {{"t", {{"generate", {{"kind", "gaussian"}, {"n", 3}, {"cap", 0.7}}}}},
                    {"rho", "const:1"},
                    {"seed", 42}};
  const auto a = cli::run_config("crho", cfg, ".");
  const auto b = cli::run_config("crho", a.report["config"], ".");
  EXPECT_EQ(a.report["results"].dump(), b.report["results"].dump());
  EXPECT_EQ(a.report["verdicts"].dump(), b.report["verdicts"].dump());
}

TEST(GenInstance, Contract) {
  EXPECT_EQ(gen_instance("gaussian", 4, 0.3, 5), gen_instance("gaussian", 4, 0.3, 5));
  EXPECT_EQ(spectral_radius(gen_instance("gaussian", 5, 0.0, 5)), 0.0);
  EXPECT_NEAR(spectral_radius(gen_instance("gaussian", 8, 0.9, 5)), 0.9, 1e-8);
  EXPECT_THROW(gen_instance("weird", 3, 0.5, 1), InputError);
}

TEST(Cli, SchemaListsExactlyTheReaderKeys) {
  std::ifstream in(OPSIM_SCHEMA_PATH);
  ASSERT_TRUE(in.good());
  const Json schema = Json::parse(in);
  std::size_t seen = 0;
  for (const auto& branch : schema["allOf"]) {
    const std::string sub = branch["if"]["properties"]["subcommand"]["const"];
    std::vector<std::string> expected = cli::keys_for(sub);
    expected.insert(expected.end(), {"description", "seed", "subcommand"});
    std::vector<std::string> listed;
    for (const auto& [k, _] : branch["then"]["properties"].items()) listed.push_back(k);
    std::sort(expected.begin(), expected.end());
    std::sort(listed.begin(), listed.end());
    EXPECT_EQ(listed, expected) << sub;
    ++seen;
  }
  EXPECT_EQ(seen, cli::subcommands().size());
}
