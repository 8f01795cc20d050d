#pragma once

// Numerical-optimization layer: deterministic-strategy enumeration, LP
// membership in the convex hull of the 16 local-deterministic behaviors with
// inside/outside certificates, CHSH evaluation, a search for the maximal
// sequential quantum value, and the context-dependent construction that
// reaches the algebraic bound of 4.

#include <array>
#include <cstdint>
#include <optional>

#include "cf/causal.hpp"

namespace cf {

/// Deterministic outcome assignments a(x), b(y) in {+1,-1}.
struct DeterministicStrategy {
  std::array<int, 2> a_of_x;
  std::array<int, 2> b_of_y;

  BehaviorTable behavior() const;
};

/// Flat component order of a behavior used by facet coefficients:
/// index = ((a*2 + b)*2 + x)*2 + y with outcome indices per outcome_sign().
inline constexpr int behavior_flat_index(int a, int b, int x, int y) {
  return ((a * 2 + b) * 2 + x) * 2 + y;
}

std::array<double, 16> flatten(const BehaviorTable& bt);

/// The 16 deterministic strategies in a fixed documented order:
/// index = 4*ia + ib where ia encodes (a(0),a(1)) and ib encodes (b(0),b(1)),
/// bit 0 for setting 0, bit set meaning outcome -1.
std::array<DeterministicStrategy, 16> enumerate_strategies();
std::array<BehaviorTable, 16> enumerate_vertices();

/// S = <A0B0> + <A0B1> + <A1B0> - <A1B1>.
double chsh(const BehaviorTable& behavior);

struct Facet {
  std::array<double, 16> coeff;
  double bound = 0.0;  // max over the 16 vertices, recomputed after scaling
  double value = 0.0;  // coeff . behavior
  bool chsh_equivalent = false;
};

/// Either convex weights over the deterministic strategies (inside) or a
/// separating facet with its achieved value (outside).
struct MembershipCertificate {
  bool inside = false;
  std::array<double, 16> weights{};  // meaningful iff inside
  std::optional<Facet> facet;        // present iff outside
};

/// Feasibility LP over the 16 vertex weights (two-phase simplex, Bland's
/// rule). Infeasibility yields a separating hyperplane from the phase-one
/// dual, canonicalized to zero block sums and normalized so that a
/// CHSH-equivalent facet reads bound 2; otherwise to unit infinity norm.
/// Throws InvariantError on numerically ill-conditioned input.
MembershipCertificate membership(const BehaviorTable& behavior,
                                 double tol = 1e-9);

struct SweepOptions {
  /// Start refinement from these x-z-plane angles (radians) for
  /// (charlie, alice, debbie, bob) and skip the coarse stage.
  std::optional<std::array<double, 4>> initial_angles;
};

struct SweepResult {
  double best_s = 0.0;
  std::array<double, 4> angles{};  // x-z plane angles, same order as above
  BlochVector charlie, alice, debbie, bob;
};

/// Coarse grid over x-z-plane Bloch angles (product grid capped at 12 points
/// per axis, plus seeded random starts) followed by per-axis
/// coordinate-descent scans of `grid` points in shrinking brackets, all
/// evaluated through run_forward. Best S is monotone nondecreasing across
/// refinement iterations; grid ties resolve to the lexicographically
/// smallest angles.
SweepResult tsirelson_search(const DensityMatrix& input_state, int grid,
                             int refine_iters, std::uint64_t seed = 0,
                             const SweepOptions& options = {});

/// Setting-dependent pseudo-event distribution with deterministic responses:
/// the object that escapes the convex-average argument once the pseudo-event
/// marginal may depend on the settings.
struct ContextDependentModel {
  PcdTable pcd;
  int a_resp[2][2] = {};     // A_x^{(c)} in {+1,-1}, indexed [x][c]
  int b_resp[2][2][2] = {};  // B_y^{(c,d)} in {+1,-1}, indexed [y][c][d]

  BehaviorTable behavior() const;
};

struct BoxworldResult {
  ContextDependentModel model;
  BehaviorTable behavior;
  double s = 0.0;
};

/// The deterministic construction reaching S = 4: the pseudo-event pair
/// tracks the setting pair exactly, and one response flips sign in the
/// (1,1) context.
BoxworldResult boxworld_construction();

struct SignallingReport {
  bool a_marginal_ok = false;  // independent of y
  bool b_marginal_ok = false;  // independent of x
  double a_deviation = 0.0;
  double b_deviation = 0.0;
};

/// Marginal-independence classification of a behavior.
SignallingReport signalling_check(const BehaviorTable& behavior, double tol);

}  // namespace cf
