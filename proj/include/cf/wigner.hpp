#pragma once

// Circuit-level simulation of the sequential (timelike) Wigner's-Friend
// protocol. Each friend's measurement is modeled as a unitary dilation onto
// a fresh memory qubit; the super-observer either reads the memory (setting
// 0, adopting the friend's outcome) or rewinds the dilation and measures the
// system directly (setting 1). Stages are processed sequentially on
// outcome-conditioned states, so the live dimension never exceeds 4.

#include <array>
#include <string>

#include "cf/tensor.hpp"

namespace cf {

// Outcome index convention used by every table in this project:
// index 0 <-> outcome +1, index 1 <-> outcome -1.
inline constexpr int outcome_sign(int index) { return index == 0 ? 1 : -1; }
inline constexpr int outcome_index(int sign) { return sign == 1 ? 0 : 1; }

/// Input state plus the four qubit observables behind the settings:
/// x=0 -> charlie, x=1 -> alice, y=0 -> debbie, y=1 -> bob.
struct ScenarioConfig {
  DensityMatrix input_state;
  BlochVector charlie;
  BlochVector alice;
  BlochVector debbie;
  BlochVector bob;

  ScenarioConfig(DensityMatrix input, BlochVector c, BlochVector a,
                 BlochVector d, BlochVector b);

  static ScenarioConfig with_mixed_input(BlochVector c, BlochVector a,
                                         BlochVector d, BlochVector b);
};

/// Empirical distribution p(a,b|x,y) over binary outcomes and settings.
struct BehaviorTable {
  // p[a][b][x][y], outcome indices per outcome_sign().
  double p[2][2][2][2] = {};

  void validate(double tol = 1e-12) const;
  /// <A_x B_y> = sum_ab a*b*p(a,b|x,y).
  double correlator(int x, int y) const;
  double max_abs_diff(const BehaviorTable& o) const;
};

/// A prepare-measure experiment record: outcome e under preparation setting
/// u, then outcome f under measurement setting v, as p(e,f|u,v).
struct PrepMeasureRecord {
  std::array<std::string, 2> prep_labels;
  std::array<std::string, 2> meas_labels;
  double p[2][2][2][2] = {};  // [e][f][u][v]

  void validate(double tol = 1e-12) const;
};

/// Lab amplification map: |0> -> |0 0 0>, |1> -> |1 1 1> on
/// system (x) device (x) friend, applied as an isometry to the state.
/// Pure inputs map to pure 8-dimensional outputs.
DensityMatrix lab_map(const DensityMatrix& system_state);

/// 8x2 isometry realizing lab_map on amplitudes.
ComplexMatrix lab_map_isometry();

/// Measurement dilation on system (x) memory, with the memory starting in
/// |0>: flips the memory conditioned on the system lying in the -1
/// eigenstate of the given observable. Unitary (and Hermitian), so the same
/// matrix also rewinds the measurement.
ComplexMatrix dilation_unitary(const BlochVector& basis);

/// Full forward protocol: Charlie/Alice stage with setting x, then
/// Debbie/Bob stage with setting y, for all four setting pairs.
BehaviorTable run_forward(const ScenarioConfig& config);

/// Same pipeline with the Debbie/Bob stage acting first; the joint
/// distribution p(b,a|y,x) of the reversed experiment is re-indexed into the
/// usual BehaviorTable layout p[a][b][x][y].
BehaviorTable run_reverse(const ScenarioConfig& config);

/// Independent analytic oracle for the sequential correlator:
/// sum_ab a*b*Tr[P_b^m P_a^n rho P_a^n]. Equals n.m when rho = I/2.
double channel_correlator(const BlochVector& n, const BlochVector& m,
                          const DensityMatrix& rho_in);

PrepMeasureRecord forward_record(const BehaviorTable& forward);
PrepMeasureRecord reverse_record(const BehaviorTable& reverse);

struct TimeSymmetryReport {
  bool symmetric = false;
  double max_deviation = 0.0;
};

/// Operational time symmetry: p_rev(f,e|v,u) == p_fwd(e,f|u,v) for all
/// arguments, within tol. Throws std::invalid_argument when the records'
/// setting label sets do not match role-for-role.
TimeSymmetryReport ots_check(const PrepMeasureRecord& forward,
                             const PrepMeasureRecord& reverse, double tol);

struct NoSignallingReport {
  // a-marginal independent of the later setting y (holds by temporal order).
  bool past_ok = false;
  double past_deviation = 0.0;
  // b-marginal independent of the earlier setting x; fails outside the
  // no-signalling-in-time preparation sector.
  bool future_ok = false;
  double future_deviation = 0.0;

  bool both_ok() const { return past_ok && future_ok; }
};

/// Checks both no-signalling-in-time conditions on the forward behavior of
/// the given scenario.
NoSignallingReport nst_check(const ScenarioConfig& config, double tol);

/// Same marginal checks evaluated directly on a behavior table.
NoSignallingReport marginal_signalling(const BehaviorTable& behavior);

}  // namespace cf
