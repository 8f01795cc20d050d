#include "cf/polytope.hpp"

#include <algorithm>
#include <cmath>

#include "cf/wigner.hpp"

namespace cf {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr int kRows = 17;      // 16 behavior entries + weight normalization
constexpr int kWeights = 16;   // one weight per deterministic strategy
constexpr int kCols = kWeights + kRows;  // weights + artificials

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

BehaviorTable DeterministicStrategy::behavior() const {
  BehaviorTable bt;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const int a = outcome_index(a_of_x[x]);
      const int b = outcome_index(b_of_y[y]);
      bt.p[a][b][x][y] = 1.0;
    }
  return bt;
}

std::array<double, 16> flatten(const BehaviorTable& bt) {
  std::array<double, 16> out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          out[behavior_flat_index(a, b, x, y)] = bt.p[a][b][x][y];
  return out;
}

std::array<DeterministicStrategy, 16> enumerate_strategies() {
  std::array<DeterministicStrategy, 16> out;
  for (int ia = 0; ia < 4; ++ia) {
    for (int ib = 0; ib < 4; ++ib) {
      DeterministicStrategy s;
      for (int x = 0; x < 2; ++x) s.a_of_x[x] = (ia >> x) & 1 ? -1 : 1;
      for (int y = 0; y < 2; ++y) s.b_of_y[y] = (ib >> y) & 1 ? -1 : 1;
      out[ia * 4 + ib] = s;
    }
  }
  return out;
}

std::array<BehaviorTable, 16> enumerate_vertices() {
  std::array<BehaviorTable, 16> out;
  const auto strategies = enumerate_strategies();
  for (int i = 0; i < 16; ++i) out[i] = strategies[i].behavior();
  return out;
}

double chsh(const BehaviorTable& behavior) {
  return behavior.correlator(0, 0) + behavior.correlator(0, 1) +
         behavior.correlator(1, 0) - behavior.correlator(1, 1);
}

namespace {

struct Phase1Result {
  bool feasible = false;
  double objective = 0.0;
  std::array<double, kWeights> weights{};
  std::array<double, kRows> dual{};
};

// Phase-one simplex for { V w = r, 1.w = 1, w >= 0 } with one artificial per
// row, Bland's rule for anti-cycling, pivot tolerance 1e-11. Artificials may
// not re-enter once they leave the basis.
Phase1Result phase1_simplex(const std::array<std::array<double, kWeights>, kRows>& a,
                            const std::array<double, kRows>& rhs) {
  // Tableau rows: constraints; columns: weights, artificials, rhs.
  std::array<std::array<double, kCols + 1>, kRows> t{};
  std::array<int, kRows> basis{};
  std::array<bool, kCols> dead{};
  for (int i = 0; i < kRows; ++i) {
    for (int j = 0; j < kWeights; ++j) t[i][j] = a[i][j];
    t[i][kWeights + i] = 1.0;
    t[i][kCols] = rhs[i];
    basis[i] = kWeights + i;
  }

  const auto cost = [](int j) { return j >= kWeights ? 1.0 : 0.0; };

  for (int iter = 0; iter < 5000; ++iter) {
    // Reduced costs from the current basis.
    int entering = -1;
    for (int j = 0; j < kCols; ++j) {
      if (dead[j]) continue;
      bool basic = false;
      for (int i = 0; i < kRows; ++i) basic |= basis[i] == j;
      if (basic) continue;
      double z = 0.0;
      for (int i = 0; i < kRows; ++i) z += cost(basis[i]) * t[i][j];
      if (cost(j) - z < -kPivotTol) {
        entering = j;  // Bland: smallest eligible index
        break;
      }
    }
    if (entering < 0) break;

    int leaving = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < kRows; ++i) {
      if (t[i][entering] > kPivotTol) {
        const double ratio = t[i][kCols] / t[i][entering];
        if (leaving < 0 || ratio < best_ratio - kPivotTol ||
            (std::abs(ratio - best_ratio) <= kPivotTol &&
             basis[i] < basis[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
    }
    if (leaving < 0) {
      throw InvariantError("membership: phase-one subproblem unbounded");
    }

    const double pivot = t[leaving][entering];
    for (int j = 0; j <= kCols; ++j) t[leaving][j] /= pivot;
    for (int i = 0; i < kRows; ++i) {
      if (i == leaving) continue;
      const double factor = t[i][entering];
      if (factor == 0.0) continue;
      for (int j = 0; j <= kCols; ++j) t[i][j] -= factor * t[leaving][j];
    }
    if (basis[leaving] >= kWeights) dead[basis[leaving]] = true;
    basis[leaving] = entering;
  }

  Phase1Result res;
  for (int i = 0; i < kRows; ++i) {
    res.objective += cost(basis[i]) * t[i][kCols];
    if (basis[i] < kWeights) res.weights[basis[i]] = t[i][kCols];
  }
  // Dual from the artificial columns: y_k = 1 - reduced_cost(artificial k).
  for (int k = 0; k < kRows; ++k) {
    double z = 0.0;
    for (int i = 0; i < kRows; ++i) z += cost(basis[i]) * t[i][kWeights + k];
    res.dual[k] = z;  // cost of artificial is 1; y_k = 1 - (1 - z) = z
  }
  res.feasible = true;
  return res;
}

struct FacetDecomposition {
  double t[2][2];   // correlator coefficients per (x,y)
  double alpha[2][2], beta[2][2], mu[2][2];
};

FacetDecomposition decompose(const std::array<double, 16>& f) {
  FacetDecomposition d{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double tt = 0.0, aa = 0.0, bb = 0.0, mm = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double v = f[behavior_flat_index(a, b, x, y)];
          tt += outcome_sign(a) * outcome_sign(b) * v;
          aa += outcome_sign(a) * v;
          bb += outcome_sign(b) * v;
          mm += v;
        }
      d.t[x][y] = tt / 4.0;
      d.alpha[x][y] = aa / 4.0;
      d.beta[x][y] = bb / 4.0;
      d.mu[x][y] = mm / 4.0;
    }
  return d;
}

}  // namespace

MembershipCertificate membership(const BehaviorTable& behavior, double tol) {
  try {
    behavior.validate(std::max(tol, 1e-9));
  } catch (const InvariantError& e) {
    throw InvariantError(std::string("membership: ill-conditioned input: ") +
                         e.what());
  }

  const auto vertices = enumerate_vertices();
  std::array<std::array<double, 16>, 16> vflat;
  for (int i = 0; i < 16; ++i) vflat[i] = flatten(vertices[i]);
  const std::array<double, 16> target = flatten(behavior);

  std::array<std::array<double, kWeights>, kRows> a{};
  std::array<double, kRows> rhs{};
  for (int k = 0; k < 16; ++k) {
    for (int i = 0; i < 16; ++i) a[k][i] = vflat[i][k];
    rhs[k] = target[k];
  }
  for (int i = 0; i < 16; ++i) a[16][i] = 1.0;
  rhs[16] = 1.0;

  const Phase1Result lp = phase1_simplex(a, rhs);

  MembershipCertificate cert;
  if (lp.objective <= tol) {
    cert.inside = true;
    double sum = 0.0;
    for (int i = 0; i < 16; ++i) {
      cert.weights[i] = std::max(lp.weights[i], 0.0);
      sum += cert.weights[i];
    }
    if (!(sum > 0.0)) throw InvariantError("membership: degenerate weights");
    for (double& w : cert.weights) w /= sum;
    // Soundness: the weights must reconstruct the behavior.
    for (int k = 0; k < 16; ++k) {
      double rec = 0.0;
      for (int i = 0; i < 16; ++i) rec += cert.weights[i] * vflat[i][k];
      if (std::abs(rec - target[k]) > 1e-9) {
        throw InvariantError(
            "membership: inside certificate fails to reconstruct the input");
      }
    }
    return cert;
  }

  // Outside: separating hyperplane from the phase-one dual. Adding a
  // constant to any (x,y) block shifts facet.p and facet.v equally for
  // normalized tables, so blocks are first centered to zero sum.
  std::array<double, 16> f;
  for (int k = 0; k < 16; ++k) f[k] = lp.dual[k];
  FacetDecomposition d = decompose(f);
  for (int a2 = 0; a2 < 2; ++a2)
    for (int b2 = 0; b2 < 2; ++b2)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          f[behavior_flat_index(a2, b2, x, y)] -= d.mu[x][y];
  d = decompose(f);

  double tmax = 0.0, tmin = 1e300, offdiag = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      tmax = std::max(tmax, std::abs(d.t[x][y]));
      tmin = std::min(tmin, std::abs(d.t[x][y]));
      offdiag = std::max({offdiag, std::abs(d.alpha[x][y]),
                          std::abs(d.beta[x][y]), std::abs(d.mu[x][y])});
    }
  const double sign_product =
      d.t[0][0] * d.t[0][1] * d.t[1][0] * d.t[1][1];
  const bool chsh_like = tmax > kPivotTol && offdiag <= 1e-7 * tmax &&
                         (tmax - tmin) <= 1e-7 * tmax && sign_product < 0.0;

  auto vertex_max = [&](const std::array<double, 16>& facet) {
    double m = -1e300;
    for (int i = 0; i < 16; ++i) {
      double dot = 0.0;
      for (int k = 0; k < 16; ++k) dot += facet[k] * vflat[i][k];
      m = std::max(m, dot);
    }
    return m;
  };

  double scale = 1.0;
  if (chsh_like) {
    const double bound0 = vertex_max(f);
    if (bound0 <= kPivotTol) {
      throw InvariantError("membership: degenerate separating facet");
    }
    scale = 2.0 / bound0;
  } else {
    double infnorm = 0.0;
    for (double v : f) infnorm = std::max(infnorm, std::abs(v));
    if (infnorm <= kPivotTol) {
      throw InvariantError("membership: vanishing separating facet");
    }
    scale = 1.0 / infnorm;
  }
  for (double& v : f) v *= scale;

  Facet facet;
  facet.coeff = f;
  facet.chsh_equivalent = chsh_like;
  facet.bound = vertex_max(f);  // recomputed, so facet.v <= bound exactly
  facet.value = 0.0;
  for (int k = 0; k < 16; ++k) facet.value += f[k] * target[k];
  if (!(facet.value > facet.bound + 1e-9)) {
    throw InvariantError(
        "membership: separation margin below certificate tolerance");
  }
  cert.inside = false;
  cert.facet = facet;
  return cert;
}

namespace {

BlochVector planar(double angle) {
  return BlochVector{std::sin(angle), 0.0, std::cos(angle)};
}

double eval_angles(const DensityMatrix& input, const std::array<double, 4>& th) {
  const ScenarioConfig cfg(input, planar(th[0]), planar(th[1]), planar(th[2]),
                           planar(th[3]));
  return chsh(run_forward(cfg));
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

bool lex_less(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  for (int i = 0; i < 4; ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

SweepResult tsirelson_search(const DensityMatrix& input_state, int grid,
                             int refine_iters, std::uint64_t seed,
                             const SweepOptions& options) {
  require(grid >= 8, "tsirelson_search: grid must be at least 8");
  require(refine_iters >= 0, "tsirelson_search: negative refinement count");

  const double two_pi = 2.0 * M_PI;
  std::array<double, 4> best{};
  double best_s = -1e300;
  double bracket = two_pi / 8.0;

  const auto consider = [&](const std::array<double, 4>& th) {
    const double s = eval_angles(input_state, th);
    if (s > best_s || (s == best_s && lex_less(th, best))) {
      best_s = s;
      best = th;
    }
  };

  if (options.initial_angles) {
    best = *options.initial_angles;
    best_s = eval_angles(input_state, best);
    bracket = two_pi / static_cast<double>(grid);
  } else {
    // Product stage capped at 12 points per axis; the requested resolution
    // is applied in the refinement scans below.
    const int coarse = std::min(grid, 12);
    const double step = two_pi / coarse;
    std::array<double, 4> th{};
    for (int i0 = 0; i0 < coarse; ++i0)
      for (int i1 = 0; i1 < coarse; ++i1)
        for (int i2 = 0; i2 < coarse; ++i2)
          for (int i3 = 0; i3 < coarse; ++i3) {
            th = {i0 * step, i1 * step, i2 * step, i3 * step};
            consider(th);
          }
    // Seeded random restarts keep the sweep reproducible per seed.
    std::uint64_t state = seed;
    for (int r = 0; r < 32; ++r) {
      for (double& ang : th) {
        state += 0x9e3779b97f4a7c15ull;
        ang = static_cast<double>(mix64(state) >> 11) * 0x1.0p-53 * two_pi;
      }
      consider(th);
    }
    bracket = step;
  }

  for (int iter = 0; iter < refine_iters; ++iter) {
    const int axis = iter % 4;
    const double lo = best[axis] - bracket;
    const double span = 2.0 * bracket;
    for (int k = 0; k < grid; ++k) {
      std::array<double, 4> th = best;
      th[axis] = lo + span * static_cast<double>(k) / (grid - 1);
      consider(th);
    }
    if (axis == 3) bracket = std::max(bracket * 0.5, 1e-12);
  }

  SweepResult res;
  res.best_s = best_s;
  res.angles = best;
  res.charlie = planar(best[0]);
  res.alice = planar(best[1]);
  res.debbie = planar(best[2]);
  res.bob = planar(best[3]);
  return res;
}

BehaviorTable ContextDependentModel::behavior() const {
  BehaviorTable bt;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          const double w = pcd.v[c][d][x][y];
          if (w == 0.0) continue;
          const int a = outcome_index(a_resp[x][c]);
          const int b = outcome_index(b_resp[y][c][d]);
          bt.p[a][b][x][y] += w;
        }
  bt.validate(1e-12);
  return bt;
}

BoxworldResult boxworld_construction() {
  ContextDependentModel model;
  // The pseudo-event pair tracks the setting pair exactly.
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) model.pcd.v[x][y][x][y] = 1.0;
  // Responses: +1 everywhere except B_1^{(1,1)} = -1. Contexts of zero
  // weight keep the +1 default.
  for (int x = 0; x < 2; ++x)
    for (int c = 0; c < 2; ++c) model.a_resp[x][c] = 1;
  for (int y = 0; y < 2; ++y)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d) model.b_resp[y][c][d] = 1;
  model.b_resp[1][1][1] = -1;

  BoxworldResult res;
  res.model = model;
  res.behavior = model.behavior();
  res.s = chsh(res.behavior);
  return res;
}

SignallingReport signalling_check(const BehaviorTable& behavior, double tol) {
  const NoSignallingReport marg = marginal_signalling(behavior);
  SignallingReport rep;
  rep.a_deviation = marg.past_deviation;
  rep.b_deviation = marg.future_deviation;
  rep.a_marginal_ok = rep.a_deviation <= tol;
  rep.b_marginal_ok = rep.b_deviation <= tol;
  return rep;
}

}  // namespace cf
