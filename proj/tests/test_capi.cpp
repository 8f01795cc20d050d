#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <json.hpp>

#include "cfsim.h"

using nlohmann::json;

namespace {

constexpr const char* kOptimalSpec =
    "input_state = maximally_mixed\n"
    "charlie = 0,0,1\n"
    "alice = 1,0,0\n"
    "debbie = 0.70710678,0,0.70710678\n"
    "bob = -0.70710678,0,0.70710678\n";

struct Guard {
  cfs_scenario* scenario = nullptr;
  cfs_report* report = nullptr;
  ~Guard() {
    cfs_scenario_free(scenario);
    cfs_report_free(report);
  }
};

}  // namespace

TEST_CASE("version string") {
  CHECK(std::strcmp(cfs_version(), "0.1.0") == 0);
}

TEST_CASE("simulate through the shared API") {
  Guard g;
  char err[256] = {0};
  REQUIRE(cfs_scenario_parse_text(kOptimalSpec, &g.scenario, err,
                                  sizeof(err)) == CFS_OK);
  REQUIRE(cfs_simulate(g.scenario, 0, &g.report, err, sizeof(err)) == CFS_OK);
  const json r = json::parse(cfs_report_json(g.report));
  CHECK(r.at("S").get<double>() ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(r.at("membership").at("verdict").get<std::string>() == "outside");
  CHECK(r.at("time_symmetry").at("symmetric").get<bool>());
  CHECK(r.at("version").get<std::string>() == "0.1.0");
}

TEST_CASE("simulate is deterministic byte for byte") {
  Guard g1, g2;
  char err[256] = {0};
  REQUIRE(cfs_scenario_parse_text(kOptimalSpec, &g1.scenario, err,
                                  sizeof(err)) == CFS_OK);
  REQUIRE(cfs_scenario_parse_text(kOptimalSpec, &g2.scenario, err,
                                  sizeof(err)) == CFS_OK);
  REQUIRE(cfs_simulate(g1.scenario, 0, &g1.report, err, sizeof(err)) == CFS_OK);
  REQUIRE(cfs_simulate(g2.scenario, 0, &g2.report, err, sizeof(err)) == CFS_OK);
  CHECK(std::string(cfs_report_json(g1.report)) ==
        std::string(cfs_report_json(g2.report)));
}

TEST_CASE("parse errors carry the offending line") {
  Guard g;
  char err[256] = {0};
  const char* broken =
      "input_state = maximally_mixed\n"
      "charlie = 0,0,1\n"
      "alice = banana\n";
  CHECK(cfs_scenario_parse_text(broken, &g.scenario, err, sizeof(err)) ==
        CFS_ERROR_PARSE);
  CHECK(g.scenario == nullptr);
  CHECK(std::string(err).find("line 3") != std::string::npos);

  char err2[256] = {0};
  const char* unknown =
      "charlie = 0,0,1\nalice = 1,0,0\ndebbie = 0,1,0\nbob = 0,0,1\n"
      "flavour = strange\n";
  CHECK(cfs_scenario_parse_text(unknown, &g.scenario, err2, sizeof(err2)) ==
        CFS_ERROR_PARSE);
  CHECK(std::string(err2).find("unknown key") != std::string::npos);
}

TEST_CASE("membership over JSON payloads") {
  Guard g;
  char err[256] = {0};
  const char* uniform =
      R"({"p": [[[[0.25,0.25],[0.25,0.25]],[[0.25,0.25],[0.25,0.25]]],)"
      R"([[[0.25,0.25],[0.25,0.25]],[[0.25,0.25],[0.25,0.25]]]]})";
  REQUIRE(cfs_membership(uniform, 1e-9, &g.report, err, sizeof(err)) == CFS_OK);
  const json r = json::parse(cfs_report_json(g.report));
  CHECK(r.at("membership").at("verdict").get<std::string>() == "inside");

  cfs_report* bad = nullptr;
  CHECK(cfs_membership("{not json", 1e-9, &bad, err, sizeof(err)) ==
        CFS_ERROR_PARSE);
  CHECK(bad == nullptr);

  // Structurally valid JSON but an unnormalized table: invariant violation.
  cfs_report* unnorm = nullptr;
  const char* off =
      R"({"p": [[[[0.5,0.25],[0.25,0.25]],[[0.25,0.25],[0.25,0.25]]],)"
      R"([[[0.25,0.25],[0.25,0.25]],[[0.25,0.25],[0.25,0.25]]]]})";
  CHECK(cfs_membership(off, 1e-9, &unnorm, err, sizeof(err)) ==
        CFS_ERROR_INVARIANT);
}

TEST_CASE("boxworld and wigner-demo reports") {
  Guard g;
  char err[256] = {0};
  REQUIRE(cfs_boxworld(&g.report, err, sizeof(err)) == CFS_OK);
  const json r = json::parse(cfs_report_json(g.report));
  CHECK(r.at("S").get<double>() == 4.0);
  CHECK(r.at("membership").at("verdict").get<std::string>() == "outside");
  CHECK(r.at("ape").at("verdict").get<std::string>() == "fail");

  cfs_report* demo = nullptr;
  REQUIRE(cfs_wigner_demo(&demo, err, sizeof(err)) == CFS_OK);
  const json d = json::parse(cfs_report_json(demo));
  CHECK(d.at("mixture_check").at("maximally_mixed").get<bool>());
  cfs_report_free(demo);
}

TEST_CASE("lemmas and sweep through the shared API") {
  Guard g;
  char err[256] = {0};
  REQUIRE(cfs_lemmas(50, 7, 1e-9, &g.report, err, sizeof(err)) == CFS_OK);
  const json r = json::parse(cfs_report_json(g.report));
  CHECK(r.at("lemma_campaign").at("mediator_independence_failures").get<int>() ==
        0);
  CHECK(r.at("opem_campaign").at("conclusion_failures").get<int>() == 0);

  // Campaigns replay byte for byte under the same seed.
  cfs_report* again = nullptr;
  REQUIRE(cfs_lemmas(50, 7, 1e-9, &again, err, sizeof(err)) == CFS_OK);
  CHECK(std::string(cfs_report_json(g.report)) ==
        std::string(cfs_report_json(again)));
  cfs_report_free(again);

  cfs_report* sweep = nullptr;
  REQUIRE(cfs_sweep(nullptr, 8, 16, 3, &sweep, err, sizeof(err)) == CFS_OK);
  const json s = json::parse(cfs_report_json(sweep));
  CHECK(s.at("best_S").get<double>() <= 2.0 * std::sqrt(2.0) + 1e-6);
  cfs_report_free(sweep);

  cfs_report* bad = nullptr;
  CHECK(cfs_sweep(nullptr, 4, 16, 3, &bad, err, sizeof(err)) ==
        CFS_ERROR_BAD_ARGUMENT);
}

TEST_CASE("null-argument handling") {
  char err[256] = {0};
  cfs_scenario* scenario = nullptr;
  CHECK(cfs_scenario_parse_text(nullptr, &scenario, err, sizeof(err)) ==
        CFS_ERROR_BAD_ARGUMENT);
  CHECK(cfs_scenario_parse_text(kOptimalSpec, nullptr, err, sizeof(err)) ==
        CFS_ERROR_BAD_ARGUMENT);
  cfs_report* report = nullptr;
  CHECK(cfs_simulate(nullptr, 0, &report, err, sizeof(err)) ==
        CFS_ERROR_BAD_ARGUMENT);
  CHECK(cfs_report_json(nullptr) == nullptr);
  CHECK(cfs_scenario_set_tol(nullptr, 1e-9) == CFS_ERROR_BAD_ARGUMENT);
  cfs_scenario_free(nullptr);
  cfs_report_free(nullptr);
}
