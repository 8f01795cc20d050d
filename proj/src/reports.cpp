#include "cf/reports.hpp"

#include <cmath>

#include "cf/polytope.hpp"

namespace cf {

namespace {

json config_echo(const SpecFile& spec) {
  json input{{"kind", spec.input_state_kind}};
  if (spec.input_state_kind == "pure") {
    input["polar"] = spec.polar;
    input["azimuthal"] = spec.azimuthal;
  }
  return json{{"input_state", input},
              {"charlie", to_json(spec.config.charlie)},
              {"alice", to_json(spec.config.alice)},
              {"debbie", to_json(spec.config.debbie)},
              {"bob", to_json(spec.config.bob)},
              {"tol", spec.tol}};
}

json correlator_block(const BehaviorTable& bt) {
  return json{{"E00", bt.correlator(0, 0)},
              {"E01", bt.correlator(0, 1)},
              {"E10", bt.correlator(1, 0)},
              {"E11", bt.correlator(1, 1)}};
}

json header(const char* command, std::uint64_t seed) {
  return json{{"version", kToolVersion}, {"command", command}, {"seed", seed}};
}

}  // namespace

json simulate_report(const SpecFile& spec, bool reverse) {
  const BehaviorTable fwd = run_forward(spec.config);
  const BehaviorTable rev = run_reverse(spec.config);
  const BehaviorTable& behavior = reverse ? rev : fwd;

  json report = header("simulate", spec.seed);
  report["reverse"] = reverse;
  report["config"] = config_echo(spec);
  report["behavior"] = to_json(behavior);
  report["correlators"] = correlator_block(behavior);
  report["S"] = chsh(behavior);

  NoSignallingReport nst = marginal_signalling(fwd);
  nst.past_ok = nst.past_deviation <= spec.tol;
  nst.future_ok = nst.future_deviation <= spec.tol;
  report["no_signalling_in_time"] = to_json(nst);
  report["time_symmetry"] =
      to_json(ots_check(forward_record(fwd), reverse_record(rev), spec.tol));
  report["membership"] = to_json(membership(behavior, spec.tol));
  return report;
}

json membership_report(const BehaviorTable& behavior, double tol) {
  behavior.validate(std::max(tol, 1e-9));
  json report = header("membership", 0);
  report["tol"] = tol;
  report["behavior"] = to_json(behavior);
  report["correlators"] = correlator_block(behavior);
  report["S"] = chsh(behavior);
  report["signalling"] = to_json(signalling_check(behavior, tol));
  report["membership"] = to_json(membership(behavior, tol));
  return report;
}

json lemmas_report(int samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw std::invalid_argument("lemmas: samples must be >= 1");
  json report = header("lemmas", seed);
  report["samples"] = samples;
  report["tol"] = tol;

  const LemmaCampaignResult lem = run_lemma_campaign(samples, seed, tol);
  json lemma_block{{"samples", lem.samples},
                   {"precondition_failures", lem.precondition_failures},
                   {"mediator_independence_failures", lem.mediator_failures},
                   {"response_screening_failures", lem.screening_failures},
                   {"max_mediator_deviation", lem.max_mediator_deviation},
                   {"max_screening_deviation", lem.max_screening_deviation}};
  if (lem.counterexample) {
    lemma_block["counterexample"] = to_json(*lem.counterexample);
  }
  report["lemma_campaign"] = lemma_block;

  const OpemCampaignResult op = run_opem_campaign(samples, seed, tol);
  json opem_block{
      {"samples", op.samples},
      {"precondition_failures", op.precondition_failures},
      {"conclusion_failures", op.conclusion_failures},
      {"max_conclusion_deviation", op.max_conclusion_deviation},
      {"max_q_normalization_deviation", op.max_normalization_deviation}};
  if (op.counterexample) {
    opem_block["counterexample"] = to_json(*op.counterexample);
  }
  report["opem_campaign"] = opem_block;

  // Non-vacuity witness: a forward table with the factorization intact but a
  // setting-dependent pseudo-event marginal fails the conclusion itself.
  const CfPair adv = adversarial_retrocausal_pair(derive_seed(seed, 0x5eed));
  const AssumptionReport witness =
      check_mediator_independence(adv.fwd, adv.rev, tol);
  report["adversarial_witness"] =
      json{{"report", to_json(witness)},
           {"nrc_forward", to_json(check_nrc(adv.fwd, tol))},
           {"ats", to_json(check_ats(adv.fwd, adv.rev, tol))},
           {"conclusion_deviation", mediator_independence_deviation(adv.fwd)}};
  return report;
}

json boxworld_report() {
  const BoxworldResult res = boxworld_construction();
  json report = header("boxworld", 0);

  json pcd = json::array();
  for (int c = 0; c < 2; ++c) {
    json jc = json::array();
    for (int d = 0; d < 2; ++d) {
      json jd = json::array();
      for (int x = 0; x < 2; ++x) {
        json jx = json::array();
        for (int y = 0; y < 2; ++y) jx.push_back(res.model.pcd.v[c][d][x][y]);
        jd.push_back(jx);
      }
      jc.push_back(jd);
    }
    pcd.push_back(jc);
  }
  json a_resp = json::array();
  for (int x = 0; x < 2; ++x)
    a_resp.push_back(
        json::array({res.model.a_resp[x][0], res.model.a_resp[x][1]}));
  json b_resp = json::array();
  for (int y = 0; y < 2; ++y) {
    json jy = json::array();
    for (int c = 0; c < 2; ++c)
      jy.push_back(
          json::array({res.model.b_resp[y][c][0], res.model.b_resp[y][c][1]}));
    b_resp.push_back(jy);
  }
  report["model"] =
      json{{"pcd", pcd}, {"a_responses", a_resp}, {"b_responses", b_resp}};
  report["behavior"] = to_json(res.behavior);
  report["correlators"] = correlator_block(res.behavior);
  report["S"] = res.s;
  report["membership"] = to_json(membership(res.behavior));
  report["ape"] = to_json(check_ape(res.model.pcd));
  report["signalling"] = to_json(signalling_check(res.behavior, 1e-12));
  return report;
}

json sweep_report(const SpecFile* spec_or_null, int grid, int refine,
                  std::uint64_t seed) {
  json report = header("sweep", seed);
  report["grid"] = grid;
  report["refine"] = refine;

  DensityMatrix input = DensityMatrix::maximally_mixed(2);
  if (spec_or_null) {
    input = spec_or_null->config.input_state;
    report["config"] = config_echo(*spec_or_null);
  }
  const SweepResult res = tsirelson_search(input, grid, refine, seed);
  report["best_S"] = res.best_s;
  report["angles"] = res.angles;
  report["settings"] = json{{"charlie", to_json(res.charlie)},
                            {"alice", to_json(res.alice)},
                            {"debbie", to_json(res.debbie)},
                            {"bob", to_json(res.bob)}};
  report["complementarity"] =
      json{{"charlie_alice", std::abs(res.charlie.dot(res.alice))},
           {"debbie_bob", std::abs(res.debbie.dot(res.bob))}};
  return report;
}

json wigner_demo_report() {
  json report = header("wigner-demo", 0);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::vector<cnum> system{inv_sqrt2, inv_sqrt2};
  const std::vector<cnum> lab = matvec(lab_map_isometry(), system);
  json amps = json::array();
  for (const cnum& a : lab) amps.push_back(json::array({a.real(), a.imag()}));
  report["lab_state_amplitudes"] = amps;

  const DensityMatrix lab_state = lab_map(DensityMatrix::pure(system));
  const DensityMatrix reduced = partial_trace(lab_state, {2, 2, 2}, 0);
  json red = json::array();
  for (int i = 0; i < 2; ++i) {
    json row = json::array();
    for (int j = 0; j < 2; ++j) {
      const cnum e = reduced.matrix().at(i, j);
      row.push_back(json::array({e.real(), e.imag()}));
    }
    red.push_back(row);
  }
  report["reduced_system_state"] = red;

  const double offdiag = std::abs(reduced.matrix().at(0, 1));
  const double diag_dev =
      std::max(std::abs(reduced.matrix().at(0, 0).real() - 0.5),
               std::abs(reduced.matrix().at(1, 1).real() - 0.5));
  report["mixture_check"] = json{{"offdiagonal", offdiag},
                                 {"diagonal_deviation", diag_dev},
                                 {"maximally_mixed", offdiag < 1e-12 &&
                                                         diag_dev < 1e-12}};
  return report;
}

}  // namespace cf
