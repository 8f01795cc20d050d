// Command-line front end. Links the shared C API only; text output is
// rendered from the report's JSON document so both modes carry the same
// numbers (text at 9 significant digits, JSON at full precision).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfsim.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvariant = 2;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string fmt_vec(const json& v) {
  return "(" + fmt(v.at(0).get<double>()) + ", " + fmt(v.at(1).get<double>()) +
         ", " + fmt(v.at(2).get<double>()) + ")";
}

int status_to_exit(cfs_status status) {
  switch (status) {
    case CFS_OK:
      return kExitOk;
    case CFS_ERROR_INVARIANT:
      return kExitInvariant;
    default:
      return kExitUsage;
  }
}

void print_assumption(const char* label, const json& rep) {
  std::cout << label << ": " << rep.at("verdict").get<std::string>()
            << "  (deviation " << fmt(rep.at("deviation").get<double>()) << ")";
  if (rep.contains("witness")) {
    std::cout << "  [" << rep.at("witness").get<std::string>() << "]";
  }
  std::cout << "\n";
}

void print_membership(const json& m) {
  const std::string verdict = m.at("verdict").get<std::string>();
  std::cout << "membership: " << verdict;
  if (verdict == "outside") {
    const json& facet = m.at("facet");
    std::cout << "  (facet bound " << fmt(facet.at("bound").get<double>())
              << ", value " << fmt(facet.at("value").get<double>())
              << (facet.at("chsh_equivalent").get<bool>() ? ", CHSH-equivalent"
                                                          : "")
              << ")";
  }
  std::cout << "\n";
}

void print_correlators(const json& report) {
  const json& c = report.at("correlators");
  std::cout << "correlators:\n";
  std::cout << "  <A0 B0> = " << fmt(c.at("E00").get<double>()) << "\n";
  std::cout << "  <A0 B1> = " << fmt(c.at("E01").get<double>()) << "\n";
  std::cout << "  <A1 B0> = " << fmt(c.at("E10").get<double>()) << "\n";
  std::cout << "  <A1 B1> = " << fmt(c.at("E11").get<double>()) << "\n";
  std::cout << "S = " << fmt(report.at("S").get<double>()) << "\n";
}

void render_simulate(const json& r) {
  std::cout << "cfsim simulate (v" << r.at("version").get<std::string>()
            << ")" << (r.at("reverse").get<bool>() ? "  [reversed order]" : "")
            << "\n";
  const json& cfg = r.at("config");
  std::cout << "input_state: "
            << cfg.at("input_state").at("kind").get<std::string>() << "\n";
  std::cout << "settings: charlie " << fmt_vec(cfg.at("charlie")) << "  alice "
            << fmt_vec(cfg.at("alice")) << "\n          debbie "
            << fmt_vec(cfg.at("debbie")) << "  bob " << fmt_vec(cfg.at("bob"))
            << "\n";
  print_correlators(r);
  const json& nst = r.at("no_signalling_in_time");
  std::cout << "no-signalling in time: "
            << (nst.at("past_ok").get<bool>() &&
                        nst.at("future_ok").get<bool>()
                    ? "pass"
                    : "FAIL")
            << "  (past dev " << fmt(nst.at("past_deviation").get<double>())
            << ", future dev " << fmt(nst.at("future_deviation").get<double>())
            << ")\n";
  const json& ots = r.at("time_symmetry");
  std::cout << "operational time symmetry: "
            << (ots.at("symmetric").get<bool>() ? "pass" : "FAIL")
            << "  (max dev " << fmt(ots.at("max_deviation").get<double>())
            << ")\n";
  print_membership(r.at("membership"));
}

void render_membership(const json& r) {
  std::cout << "cfsim membership (v" << r.at("version").get<std::string>()
            << ")\n";
  print_correlators(r);
  const json& sig = r.at("signalling");
  std::cout << "marginal independence: a|y "
            << (sig.at("a_marginal_independent_of_y").get<bool>() ? "pass"
                                                                  : "FAIL")
            << " (" << fmt(sig.at("a_marginal_deviation").get<double>())
            << "), b|x "
            << (sig.at("b_marginal_independent_of_x").get<bool>() ? "pass"
                                                                  : "FAIL")
            << " (" << fmt(sig.at("b_marginal_deviation").get<double>())
            << ")\n";
  print_membership(r.at("membership"));
  if (r.at("membership").at("verdict").get<std::string>() == "inside") {
    std::cout << "weights:";
    for (const json& w : r.at("membership").at("weights")) {
      std::cout << " " << fmt(w.get<double>());
    }
    std::cout << "\n";
  }
}

void render_lemmas(const json& r) {
  std::cout << "cfsim lemmas (v" << r.at("version").get<std::string>()
            << ")  samples=" << r.at("samples").get<int>()
            << " seed=" << r.at("seed").get<std::uint64_t>() << "\n";
  const json& lem = r.at("lemma_campaign");
  std::cout << "mediator independence: "
            << lem.at("mediator_independence_failures").get<int>()
            << " failures (max dev "
            << fmt(lem.at("max_mediator_deviation").get<double>()) << ")\n";
  std::cout << "response screening:    "
            << lem.at("response_screening_failures").get<int>()
            << " failures (max dev "
            << fmt(lem.at("max_screening_deviation").get<double>()) << ")\n";
  std::cout << "precondition failures: "
            << lem.at("precondition_failures").get<int>() << "\n";
  if (lem.contains("counterexample")) {
    std::cout << "counterexample recorded in JSON output\n";
  }
  const json& op = r.at("opem_campaign");
  std::cout << "operational-mediation campaign: "
            << op.at("conclusion_failures").get<int>()
            << " conclusion failures, max q-normalization dev "
            << fmt(op.at("max_q_normalization_deviation").get<double>())
            << "\n";
  const json& adv = r.at("adversarial_witness");
  std::cout << "adversarial witness: verdict "
            << adv.at("report").at("verdict").get<std::string>()
            << ", conclusion deviation "
            << fmt(adv.at("conclusion_deviation").get<double>()) << "\n";
}

void render_boxworld(const json& r) {
  std::cout << "cfsim boxworld (v" << r.at("version").get<std::string>()
            << ")\n";
  std::cout << "pseudo-event distribution p(c,d|x,y) = 1 iff (c,d)=(x,y)\n";
  const json& a = r.at("model").at("a_responses");
  const json& b = r.at("model").at("b_responses");
  std::cout << "responses: A_x(c): x0=(" << a.at(0).at(0).get<int>() << ","
            << a.at(0).at(1).get<int>() << ") x1=(" << a.at(1).at(0).get<int>()
            << "," << a.at(1).at(1).get<int>() << ")\n";
  std::cout << "           B_y(c,d): y1,c1,d1=" << b.at(1).at(1).at(1).get<int>()
            << ", +1 elsewhere\n";
  print_correlators(r);
  print_membership(r.at("membership"));
  print_assumption("absoluteness of pseudo events", r.at("ape"));
  const json& sig = r.at("signalling");
  std::cout << "marginal deviations: a|y "
            << fmt(sig.at("a_marginal_deviation").get<double>()) << ", b|x "
            << fmt(sig.at("b_marginal_deviation").get<double>()) << "\n";
}

void render_sweep(const json& r) {
  std::cout << "cfsim sweep (v" << r.at("version").get<std::string>()
            << ")  grid=" << r.at("grid").get<int>()
            << " refine=" << r.at("refine").get<int>()
            << " seed=" << r.at("seed").get<std::uint64_t>() << "\n";
  std::cout << "best S = " << fmt(r.at("best_S").get<double>()) << "\n";
  const json& s = r.at("settings");
  std::cout << "settings: charlie " << fmt_vec(s.at("charlie")) << "  alice "
            << fmt_vec(s.at("alice")) << "\n          debbie "
            << fmt_vec(s.at("debbie")) << "  bob " << fmt_vec(s.at("bob"))
            << "\n";
  const json& comp = r.at("complementarity");
  std::cout << "complementarity: |charlie.alice| = "
            << fmt(comp.at("charlie_alice").get<double>())
            << ", |debbie.bob| = " << fmt(comp.at("debbie_bob").get<double>())
            << "\n";
}

void render_wigner_demo(const json& r) {
  std::cout << "cfsim wigner-demo (v" << r.at("version").get<std::string>()
            << ")\n";
  std::cout << "lab state amplitudes (system x device x friend basis):\n";
  const json& amps = r.at("lab_state_amplitudes");
  for (int i = 0; i < 8; ++i) {
    const double re = amps.at(i).at(0).get<double>();
    const double im = amps.at(i).at(1).get<double>();
    if (re == 0.0 && im == 0.0) continue;
    std::cout << "  |" << ((i >> 2) & 1) << ((i >> 1) & 1) << (i & 1)
              << "> : " << fmt(re) << (im < 0 ? " - " : " + ")
              << fmt(std::abs(im)) << "i\n";
  }
  const json& red = r.at("reduced_system_state");
  std::cout << "reduced system state:\n";
  for (int i = 0; i < 2; ++i) {
    std::cout << "  [" << fmt(red.at(i).at(0).at(0).get<double>()) << ", "
              << fmt(red.at(i).at(1).at(0).get<double>()) << "]\n";
  }
  const json& mix = r.at("mixture_check");
  std::cout << "probabilistic-mixture check: "
            << (mix.at("maximally_mixed").get<bool>() ? "maximally mixed"
                                                      : "NOT maximally mixed")
            << " (offdiagonal " << fmt(mix.at("offdiagonal").get<double>())
            << ")\n";
}

struct ReportGuard {
  cfs_report* handle = nullptr;
  ~ReportGuard() { cfs_report_free(handle); }
};

struct ScenarioGuard {
  cfs_scenario* handle = nullptr;
  ~ScenarioGuard() { cfs_scenario_free(handle); }
};

int emit(cfs_status status, cfs_report* raw, const char* errbuf,
         bool json_mode, void (*renderer)(const json&)) {
  ReportGuard report{raw};
  if (status != CFS_OK) {
    std::cerr << "error: " << errbuf << "\n";
    return status_to_exit(status);
  }
  const std::string text = cfs_report_json(report.handle);
  if (json_mode) {
    std::cout << text << "\n";
  } else {
    renderer(json::parse(text));
  }
  return kExitOk;
}

int load_scenario(const std::string& path, double tol_override, bool has_tol,
                  ScenarioGuard& scenario, char* errbuf, size_t errcap) {
  const cfs_status status =
      cfs_scenario_parse_file(path.c_str(), &scenario.handle, errbuf, errcap);
  if (status != CFS_OK) {
    std::cerr << "error: " << path << ": " << errbuf << "\n";
    return status_to_exit(status);
  }
  if (has_tol) cfs_scenario_set_tol(scenario.handle, tol_override);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"timelike Wigner's-Friend simulator and polytope toolkit"};
  app.require_subcommand(1);
  char errbuf[1024] = {0};

  bool json_mode = false;
  app.add_flag("--json", json_mode, "emit the full-precision JSON report");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the sequential protocol");
  std::string sim_spec;
  bool sim_reverse = false;
  double sim_tol = 1e-9;
  bool sim_has_tol = false;
  sim->add_option("--spec", sim_spec, "scenario file");
  sim->add_option("spec_positional", sim_spec, "scenario file");
  sim->add_flag("--reverse", sim_reverse, "run the stages in reversed order");
  sim->add_option("--tol", sim_tol, "verdict tolerance")
      ->each([&](const std::string&) { sim_has_tol = true; });

  // membership
  auto* mem = app.add_subcommand("membership",
                                 "decide hull membership of a behavior");
  std::string mem_behavior;
  double mem_tol = 1e-9;
  mem->add_option("--behavior", mem_behavior, "behavior JSON file")
      ->required();
  mem->add_option("--tol", mem_tol, "LP feasibility tolerance");

  // lemmas
  auto* lem = app.add_subcommand(
      "lemmas", "property campaigns for the derived implications");
  int lem_samples = 500;
  unsigned long long lem_seed = 1;
  double lem_tol = 1e-9;
  lem->add_option("--samples", lem_samples, "number of sampled pairs");
  lem->add_option("--seed", lem_seed, "master seed");
  lem->add_option("--tol", lem_tol, "predicate tolerance");

  // boxworld
  auto* box = app.add_subcommand(
      "boxworld", "deterministic construction reaching S = 4");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "search for the maximal sequential value");
  std::string sweep_spec;
  int sweep_grid = 32;
  int sweep_refine = 128;
  unsigned long long sweep_seed = 0;
  sweep->add_option("--spec", sweep_spec, "scenario file (input state only)");
  sweep->add_option("--grid", sweep_grid, "points per refinement scan (>= 8)");
  sweep->add_option("--refine", sweep_refine, "refinement iterations");
  sweep->add_option("--seed", sweep_seed, "seed for the random restarts");

  // wigner-demo
  auto* demo = app.add_subcommand(
      "wigner-demo", "amplification map and reduced-state demonstration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  if (sim->parsed()) {
    if (sim_spec.empty()) {
      std::cerr << "error: simulate needs a scenario file (--spec PATH)\n";
      return kExitUsage;
    }
    ScenarioGuard scenario;
    const int rc = load_scenario(sim_spec, sim_tol, sim_has_tol, scenario,
                                 errbuf, sizeof(errbuf));
    if (rc != kExitOk) return rc;
    cfs_report* report = nullptr;
    const cfs_status status = cfs_simulate(scenario.handle, sim_reverse,
                                           &report, errbuf, sizeof(errbuf));
    return emit(status, report, errbuf, json_mode, render_simulate);
  }

  if (mem->parsed()) {
    std::ifstream in(mem_behavior, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot open behavior file '" << mem_behavior
                << "'\n";
      return kExitUsage;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    cfs_report* report = nullptr;
    const cfs_status status = cfs_membership(buf.str().c_str(), mem_tol,
                                             &report, errbuf, sizeof(errbuf));
    return emit(status, report, errbuf, json_mode, render_membership);
  }

  if (lem->parsed()) {
    cfs_report* report = nullptr;
    const cfs_status status = cfs_lemmas(lem_samples, lem_seed, lem_tol,
                                         &report, errbuf, sizeof(errbuf));
    return emit(status, report, errbuf, json_mode, render_lemmas);
  }

  if (box->parsed()) {
    cfs_report* report = nullptr;
    const cfs_status status = cfs_boxworld(&report, errbuf, sizeof(errbuf));
    return emit(status, report, errbuf, json_mode, render_boxworld);
  }

  if (sweep->parsed()) {
    ScenarioGuard scenario;
    if (!sweep_spec.empty()) {
      const int rc = load_scenario(sweep_spec, 0.0, false, scenario, errbuf,
                                   sizeof(errbuf));
      if (rc != kExitOk) return rc;
    }
    cfs_report* report = nullptr;
    const cfs_status status =
        cfs_sweep(scenario.handle, sweep_grid, sweep_refine, sweep_seed,
                  &report, errbuf, sizeof(errbuf));
    return emit(status, report, errbuf, json_mode, render_sweep);
  }

  if (demo->parsed()) {
    cfs_report* report = nullptr;
    const cfs_status status = cfs_wigner_demo(&report, errbuf, sizeof(errbuf));
    return emit(status, report, errbuf, json_mode, render_wigner_demo);
  }

  return kExitUsage;
}
