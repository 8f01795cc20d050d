#include "cf/wigner.hpp"

#include <cmath>
#include <optional>

namespace cf {

namespace {

constexpr double kBranchCutoff = 1e-14;
constexpr double kRewindTol = 1e-10;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ScenarioConfig::ScenarioConfig(DensityMatrix input, BlochVector c,
                               BlochVector a, BlochVector d, BlochVector b)
    : input_state(std::move(input)), charlie(c), alice(a), debbie(d), bob(b) {
  require(input_state.dim() == 2, "ScenarioConfig: input state must be a qubit");
  for (const BlochVector* n : {&charlie, &alice, &debbie, &bob}) {
    if (std::abs(n->norm() - 1.0) > kUnitNormTol) {
      throw std::invalid_argument("ScenarioConfig: observable not unit norm");
    }
  }
}

ScenarioConfig ScenarioConfig::with_mixed_input(BlochVector c, BlochVector a,
                                                BlochVector d, BlochVector b) {
  return ScenarioConfig(DensityMatrix::maximally_mixed(2), c, a, d, b);
}

void BehaviorTable::validate(double tol) const {
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double sum = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double v = p[a][b][x][y];
          if (!(v >= -tol && v <= 1.0 + tol)) {
            throw InvariantError("BehaviorTable: entry outside [0,1]");
          }
          sum += v;
        }
      }
      if (std::abs(sum - 1.0) > tol) {
        throw InvariantError("BehaviorTable: setting pair not normalized");
      }
    }
  }
}

double BehaviorTable::correlator(int x, int y) const {
  double e = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      e += outcome_sign(a) * outcome_sign(b) * p[a][b][x][y];
    }
  }
  return e;
}

double BehaviorTable::max_abs_diff(const BehaviorTable& o) const {
  double dev = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          dev = std::max(dev, std::abs(p[a][b][x][y] - o.p[a][b][x][y]));
  return dev;
}

void PrepMeasureRecord::validate(double tol) const {
  for (int u = 0; u < 2; ++u) {
    for (int v = 0; v < 2; ++v) {
      double sum = 0.0;
      for (int e = 0; e < 2; ++e)
        for (int f = 0; f < 2; ++f) sum += p[e][f][u][v];
      if (std::abs(sum - 1.0) > tol) {
        throw InvariantError("PrepMeasureRecord: setting pair not normalized");
      }
    }
  }
}

ComplexMatrix lab_map_isometry() {
  ComplexMatrix v(8, 2);
  v.at(0, 0) = 1.0;  // |0> -> |000>
  v.at(7, 1) = 1.0;  // |1> -> |111>
  return v;
}

DensityMatrix lab_map(const DensityMatrix& system_state) {
  require(system_state.dim() == 2, "lab_map: input must be a qubit state");
  const ComplexMatrix v = lab_map_isometry();
  return DensityMatrix(matmul(matmul(v, system_state.matrix()), dagger(v)));
}

ComplexMatrix dilation_unitary(const BlochVector& basis) {
  if (std::abs(basis.norm() - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("dilation_unitary: non-unit Bloch vector");
  }
  ComplexMatrix flip(2, 2);
  flip.at(0, 1) = 1.0;
  flip.at(1, 0) = 1.0;
  const ComplexMatrix plus = projector_from_bloch(basis, +1);
  const ComplexMatrix minus = projector_from_bloch(basis, -1);
  return add(kron(plus, ComplexMatrix::identity(2)), kron(minus, flip));
}

namespace {

struct Branch {
  double prob = 0.0;
  // Normalized conditional post-measurement system state. Kept as a raw
  // matrix: low-probability branches magnify float noise past the strict
  // state validators, while their contribution to the behavior stays
  // bounded by the branch probability itself.
  std::optional<ComplexMatrix> post;
};

ComplexMatrix hermitize(const ComplexMatrix& m) {
  ComplexMatrix out = m;
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      out.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
    }
  }
  return out;
}

// One friend/super-observer stage. setting 0: dilate onto a fresh memory
// qubit and read the memory (outcome adopts the friend's result). setting 1:
// dilate, rewind, and measure the super-observer's own observable on the
// system. Branch index 0 carries outcome +1.
std::array<Branch, 2> run_stage(const ComplexMatrix& system,
                                const BlochVector& friend_basis,
                                const BlochVector& super_observable,
                                int setting) {
  std::array<Branch, 2> out;
  const ComplexMatrix u = dilation_unitary(friend_basis);

  ComplexMatrix mem0(2, 2);
  mem0.at(0, 0) = 1.0;
  const ComplexMatrix joint0 = kron(system, mem0);
  const ComplexMatrix dilated = matmul(matmul(u, joint0), dagger(u));

  if (setting == 0) {
    for (int m = 0; m < 2; ++m) {
      ComplexMatrix memproj(2, 2);
      memproj.at(m, m) = 1.0;
      const ComplexMatrix proj = kron(ComplexMatrix::identity(2), memproj);
      const ComplexMatrix sub = matmul(matmul(proj, dilated), proj);
      const double prob = trace(sub).real();
      out[m].prob = std::max(prob, 0.0);
      if (prob < kBranchCutoff) {
        out[m].prob = 0.0;
        continue;
      }
      const ComplexMatrix cond = scale(sub, cnum{1.0 / prob, 0.0});
      out[m].post = hermitize(partial_trace_matrix(cond, {2, 2}, 0));
    }
  } else {
    const ComplexMatrix rewound = matmul(matmul(dagger(u), dilated), u);
    // The memory must be back in |0> and disentangled after the rewind.
    const ComplexMatrix mem = partial_trace_matrix(rewound, {2, 2}, 1);
    if (std::abs(mem.at(0, 0).real() - 1.0) > kRewindTol) {
      throw InvariantError("run_stage: memory not disentangled after rewind");
    }
    const ComplexMatrix sys = partial_trace_matrix(rewound, {2, 2}, 0);
    for (int i = 0; i < 2; ++i) {
      const ComplexMatrix proj =
          projector_from_bloch(super_observable, outcome_sign(i));
      const ComplexMatrix sub = matmul(matmul(proj, sys), proj);
      const double prob = trace(sub).real();
      out[i].prob = std::max(prob, 0.0);
      if (prob < kBranchCutoff) {
        out[i].prob = 0.0;
        continue;
      }
      out[i].post = hermitize(scale(sub, cnum{1.0 / prob, 0.0}));
    }
  }
  return out;
}

// first = (friend, super) pair acting first with setting s1, second likewise
// with s2. Returns p(o1,o2|s1,s2) indexed [o1][o2][s1][s2].
void run_two_stages(const DensityMatrix& input, const BlochVector& friend1,
                    const BlochVector& super1, const BlochVector& friend2,
                    const BlochVector& super2, double table[2][2][2][2]) {
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      double sum = 0.0;
      double block[2][2] = {};
      const std::array<Branch, 2> first =
          run_stage(input.matrix(), friend1, super1, s1);
      for (int o1 = 0; o1 < 2; ++o1) {
        if (first[o1].prob <= 0.0) continue;
        const std::array<Branch, 2> second =
            run_stage(*first[o1].post, friend2, super2, s2);
        for (int o2 = 0; o2 < 2; ++o2) {
          block[o1][o2] = first[o1].prob * second[o2].prob;
          sum += block[o1][o2];
        }
      }
      if (!(sum > 0.0)) {
        throw InvariantError("run_two_stages: vanishing total probability");
      }
      for (int o1 = 0; o1 < 2; ++o1) {
        for (int o2 = 0; o2 < 2; ++o2) {
          table[o1][o2][s1][s2] = block[o1][o2] / sum;
        }
      }
    }
  }
}

}  // namespace

BehaviorTable run_forward(const ScenarioConfig& config) {
  BehaviorTable out;
  run_two_stages(config.input_state, config.charlie, config.alice,
                 config.debbie, config.bob, out.p);
  out.validate();
  return out;
}

BehaviorTable run_reverse(const ScenarioConfig& config) {
  // Debbie/Bob act first (outcome b, setting y), then Charlie/Alice
  // (outcome a, setting x); re-index p(b,a|y,x) into p[a][b][x][y].
  double rev[2][2][2][2];
  run_two_stages(config.input_state, config.debbie, config.bob, config.charlie,
                 config.alice, rev);
  BehaviorTable out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) out.p[a][b][x][y] = rev[b][a][y][x];
  out.validate();
  return out;
}

double channel_correlator(const BlochVector& n, const BlochVector& m,
                          const DensityMatrix& rho_in) {
  double e = 0.0;
  for (int ai = 0; ai < 2; ++ai) {
    const ComplexMatrix pa = projector_from_bloch(n, outcome_sign(ai));
    const ComplexMatrix mid = matmul(matmul(pa, rho_in.matrix()), pa);
    for (int bi = 0; bi < 2; ++bi) {
      const ComplexMatrix pb = projector_from_bloch(m, outcome_sign(bi));
      const double prob = trace(matmul(pb, mid)).real();
      e += outcome_sign(ai) * outcome_sign(bi) * prob;
    }
  }
  return e;
}

PrepMeasureRecord forward_record(const BehaviorTable& forward) {
  PrepMeasureRecord rec;
  rec.prep_labels = {"x=0", "x=1"};
  rec.meas_labels = {"y=0", "y=1"};
  for (int e = 0; e < 2; ++e)
    for (int f = 0; f < 2; ++f)
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) rec.p[e][f][u][v] = forward.p[e][f][u][v];
  return rec;
}

PrepMeasureRecord reverse_record(const BehaviorTable& reverse) {
  // In the reversed experiment the Debbie/Bob pair prepares (outcome b,
  // setting y) and the Charlie/Alice pair measures (outcome a, setting x).
  PrepMeasureRecord rec;
  rec.prep_labels = {"y=0", "y=1"};
  rec.meas_labels = {"x=0", "x=1"};
  for (int e = 0; e < 2; ++e)
    for (int f = 0; f < 2; ++f)
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) rec.p[e][f][u][v] = reverse.p[f][e][v][u];
  return rec;
}

TimeSymmetryReport ots_check(const PrepMeasureRecord& forward,
                             const PrepMeasureRecord& reverse, double tol) {
  if (forward.prep_labels != reverse.meas_labels ||
      forward.meas_labels != reverse.prep_labels) {
    throw std::invalid_argument("ots_check: setting label sets do not match");
  }
  TimeSymmetryReport rep;
  for (int e = 0; e < 2; ++e) {
    for (int f = 0; f < 2; ++f) {
      for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
          const double dev =
              std::abs(reverse.p[f][e][v][u] - forward.p[e][f][u][v]);
          rep.max_deviation = std::max(rep.max_deviation, dev);
        }
      }
    }
  }
  rep.symmetric = rep.max_deviation <= tol;
  return rep;
}

NoSignallingReport marginal_signalling(const BehaviorTable& behavior) {
  NoSignallingReport rep;
  for (int a = 0; a < 2; ++a) {
    for (int x = 0; x < 2; ++x) {
      double m[2];
      for (int y = 0; y < 2; ++y) {
        m[y] = behavior.p[a][0][x][y] + behavior.p[a][1][x][y];
      }
      rep.past_deviation = std::max(rep.past_deviation, std::abs(m[0] - m[1]));
    }
  }
  for (int b = 0; b < 2; ++b) {
    for (int y = 0; y < 2; ++y) {
      double m[2];
      for (int x = 0; x < 2; ++x) {
        m[x] = behavior.p[0][b][x][y] + behavior.p[1][b][x][y];
      }
      rep.future_deviation =
          std::max(rep.future_deviation, std::abs(m[0] - m[1]));
    }
  }
  return rep;
}

NoSignallingReport nst_check(const ScenarioConfig& config, double tol) {
  NoSignallingReport rep = marginal_signalling(run_forward(config));
  rep.past_ok = rep.past_deviation <= tol;
  rep.future_ok = rep.future_deviation <= tol;
  return rep;
}

}  // namespace cf
