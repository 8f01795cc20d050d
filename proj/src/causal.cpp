#include "cf/causal.hpp"

#include <cmath>
#include <sstream>

namespace cf {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Deterministic generator: splitmix64 stream with a [0,1) double view.
struct SmallRng {
  std::uint64_t state;

  explicit SmallRng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

void dirichlet_fill(SmallRng& rng, double* out, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = -std::log1p(-rng.uniform()) + 1e-12;
    sum += out[i];
  }
  for (int i = 0; i < n; ++i) out[i] /= sum;
}

// Deviation accumulator keeping the worst witness.
struct DevTracker {
  double dev = 0.0;
  std::optional<std::string> witness;
  int indeterminate = 0;

  void consider(double delta, const std::string& where) {
    if (delta > dev) {
      dev = delta;
      witness = where;
    }
  }
};

std::string tuple_str(std::initializer_list<std::pair<const char*, int>> parts) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, value] : parts) {
    if (!first) os << " ";
    os << name << "=" << value;
    first = false;
  }
  return os.str();
}

AssumptionReport finish(const std::string& predicate, const DevTracker& t,
                        double tol) {
  AssumptionReport rep;
  rep.predicate = predicate;
  rep.deviation = t.dev;
  rep.indeterminate_count = t.indeterminate;
  rep.verdict = t.dev <= tol ? Verdict::kPass : Verdict::kFail;
  if (rep.verdict == Verdict::kFail) rep.witness = t.witness;
  return rep;
}

// Marginals of a JointTable, all conditioned on the settings.
struct JointMarginals {
  double pc[2][2][2] = {};         // p(c|x,y)
  double pd[2][2][2] = {};         // p(d|x,y)
  double pca[2][2][2][2] = {};     // p(c,a|x,y)
  double pcd[2][2][2][2] = {};     // p(c,d|x,y)
  double pcad[2][2][2][2][2] = {}; // p(c,a,d|x,y)
  double pcdb[2][2][2][2][2] = {}; // p(c,d,b|x,y)

  explicit JointMarginals(const JointTable& t) {
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 2; ++a)
        for (int d = 0; d < 2; ++d)
          for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
              for (int y = 0; y < 2; ++y) {
                const double p = t.v[c][a][d][b][x][y];
                pc[c][x][y] += p;
                pd[d][x][y] += p;
                pca[c][a][x][y] += p;
                pcd[c][d][x][y] += p;
                pcad[c][a][d][x][y] += p;
                pcdb[c][d][b][x][y] += p;
              }
  }
};

}  // namespace

void JointTable::validate(double tol) const {
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double sum = 0.0;
      for (int c = 0; c < 2; ++c)
        for (int a = 0; a < 2; ++a)
          for (int d = 0; d < 2; ++d)
            for (int b = 0; b < 2; ++b) {
              const double p = v[c][a][d][b][x][y];
              if (!(p >= -tol && p <= 1.0 + tol)) {
                throw InvariantError("JointTable: entry outside [0,1]");
              }
              sum += p;
            }
      if (std::abs(sum - 1.0) > tol) {
        throw InvariantError("JointTable: setting pair not normalized");
      }
    }
  }
}

double JointTable::max_abs_diff(const JointTable& o) const {
  double dev = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d)
        for (int b = 0; b < 2; ++b)
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
              dev = std::max(dev, std::abs(v[c][a][d][b][x][y] -
                                           o.v[c][a][d][b][x][y]));
  return dev;
}

JointTable JointTable::relabeled() const {
  JointTable out;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d)
        for (int b = 0; b < 2; ++b)
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
              out.v[1 - c][1 - a][1 - d][1 - b][x][y] = v[c][a][d][b][x][y];
  return out;
}

void PcdTable::validate(double tol) const {
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double sum = 0.0;
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          const double p = v[c][d][x][y];
          if (!(p >= -tol && p <= 1.0 + tol)) {
            throw InvariantError("PcdTable: entry outside [0,1]");
          }
          sum += p;
        }
      if (std::abs(sum - 1.0) > tol) {
        throw InvariantError("PcdTable: setting pair not normalized");
      }
    }
  }
}

void MarginalBundle::validate(double tol) const {
  pcd.validate(tol);
  for (int x = 0; x < 2; ++x)
    for (int c = 0; c < 2; ++c) {
      const double sum = pa[0][x][c] + pa[1][x][c];
      if (std::abs(sum - 1.0) > tol || pa[0][x][c] < -tol || pa[1][x][c] < -tol) {
        throw InvariantError("MarginalBundle: a-response row not normalized");
      }
    }
  for (int y = 0; y < 2; ++y)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d) {
        const double sum = pb[0][y][c][d] + pb[1][y][c][d];
        if (std::abs(sum - 1.0) > tol || pb[0][y][c][d] < -tol ||
            pb[1][y][c][d] < -tol) {
          throw InvariantError("MarginalBundle: b-response row not normalized");
        }
      }
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kVacuous:
      return "vacuous";
  }
  return "unknown";
}

BehaviorTable marginalize_ab(const JointTable& joint) {
  BehaviorTable out;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d)
        for (int b = 0; b < 2; ++b)
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
              out.p[a][b][x][y] += joint.v[c][a][d][b][x][y];
  return out;
}

AssumptionReport check_nrc(const JointTable& joint, double tol) {
  const JointMarginals m(joint);
  DevTracker t;

  // (i) p(c|x,y) carries no setting dependence.
  for (int c = 0; c < 2; ++c) {
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        const double delta = std::abs(m.pc[c][x][y] - m.pc[c][0][0]);
        t.consider(delta, "p(c|x,y) != p(c) at " +
                              tuple_str({{"c", c}, {"x", x}, {"y", y}}));
      }
  }

  // (ii) p(a|c,x,y) = p(a|c,x).
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int x = 0; x < 2; ++x) {
        double val[2];
        bool ok[2];
        for (int y = 0; y < 2; ++y) {
          ok[y] = m.pc[c][x][y] > kConditioningFloor;
          val[y] = ok[y] ? m.pca[c][a][x][y] / m.pc[c][x][y] : 0.0;
          if (!ok[y]) ++t.indeterminate;
        }
        if (ok[0] && ok[1]) {
          t.consider(std::abs(val[0] - val[1]),
                     "p(a|c,x,y) varies with y at " +
                         tuple_str({{"a", a}, {"c", c}, {"x", x}}));
        }
      }

  // (iii) p(d|c,a,x,y) = p(d|c,a,x).
  for (int d = 0; d < 2; ++d)
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 2; ++a)
        for (int x = 0; x < 2; ++x) {
          double val[2];
          bool ok[2];
          for (int y = 0; y < 2; ++y) {
            ok[y] = m.pca[c][a][x][y] > kConditioningFloor;
            val[y] = ok[y] ? m.pcad[c][a][d][x][y] / m.pca[c][a][x][y] : 0.0;
            if (!ok[y]) ++t.indeterminate;
          }
          if (ok[0] && ok[1]) {
            t.consider(std::abs(val[0] - val[1]),
                       "p(d|c,a,x,y) varies with y at " +
                           tuple_str({{"d", d}, {"c", c}, {"a", a}, {"x", x}}));
          }
        }

  // (iv) a cannot depend on the later pseudo event: p(a|c,x,d) = p(a|c,x).
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) {
            if (m.pcd[c][d][x][y] <= kConditioningFloor ||
                m.pc[c][x][y] <= kConditioningFloor) {
              ++t.indeterminate;
              continue;
            }
            const double with_d = m.pcad[c][a][d][x][y] / m.pcd[c][d][x][y];
            const double without_d = m.pca[c][a][x][y] / m.pc[c][x][y];
            t.consider(std::abs(with_d - without_d),
                       "p(a|c,x,d) != p(a|c,x) at " +
                           tuple_str({{"a", a},
                                      {"c", c},
                                      {"d", d},
                                      {"x", x},
                                      {"y", y}}));
          }

  return finish("NRC", t, tol);
}

AssumptionReport check_nrc_reverse(const JointTable& joint, double tol) {
  const JointMarginals m(joint);
  DevTracker t;

  // (R1) p(d|x,y) carries no setting dependence.
  for (int d = 0; d < 2; ++d)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        t.consider(std::abs(m.pd[d][x][y] - m.pd[d][0][0]),
                   "p(d|x,y) != p(d) at " +
                       tuple_str({{"d", d}, {"x", x}, {"y", y}}));
      }

  // (R2) p(c|d,y,x) = p(c|d,y).
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d)
      for (int y = 0; y < 2; ++y) {
        double val[2];
        bool ok[2];
        for (int x = 0; x < 2; ++x) {
          ok[x] = m.pd[d][x][y] > kConditioningFloor;
          val[x] = ok[x] ? m.pcd[c][d][x][y] / m.pd[d][x][y] : 0.0;
          if (!ok[x]) ++t.indeterminate;
        }
        if (ok[0] && ok[1]) {
          t.consider(std::abs(val[0] - val[1]),
                     "p(c|d,y,x) varies with x at " +
                         tuple_str({{"c", c}, {"d", d}, {"y", y}}));
        }
      }

  // (R3) p(b|d,y,c,x) = p(b|d,y,c).
  for (int b = 0; b < 2; ++b)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        for (int y = 0; y < 2; ++y) {
          double val[2];
          bool ok[2];
          for (int x = 0; x < 2; ++x) {
            ok[x] = m.pcd[c][d][x][y] > kConditioningFloor;
            val[x] = ok[x] ? m.pcdb[c][d][b][x][y] / m.pcd[c][d][x][y] : 0.0;
            if (!ok[x]) ++t.indeterminate;
          }
          if (ok[0] && ok[1]) {
            t.consider(std::abs(val[0] - val[1]),
                       "p(b|d,y,c,x) varies with x at " +
                           tuple_str({{"b", b}, {"c", c}, {"d", d}, {"y", y}}));
          }
        }

  return finish("NRC-reversed", t, tol);
}

AssumptionReport check_ats(const JointTable& fwd, const JointTable& rev,
                           double tol) {
  DevTracker t;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d)
        for (int b = 0; b < 2; ++b)
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
              const double delta = std::abs(fwd.v[c][a][d][b][x][y] -
                                            rev.v[c][a][d][b][x][y]);
              t.consider(delta, "reversed joint differs at " +
                                    tuple_str({{"c", c},
                                               {"a", a},
                                               {"d", d},
                                               {"b", b},
                                               {"x", x},
                                               {"y", y}}));
            }
  return finish("ATS", t, tol);
}

AssumptionReport check_spe(const JointTable& joint, double tol) {
  const JointMarginals m(joint);
  DevTracker t;
  for (int b = 0; b < 2; ++b)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) {
            double val[2];
            bool ok[2];
            for (int a = 0; a < 2; ++a) {
              ok[a] = m.pcad[c][a][d][x][y] > kConditioningFloor;
              val[a] = ok[a] ? joint.v[c][a][d][b][x][y] / m.pcad[c][a][d][x][y]
                             : 0.0;
              if (!ok[a]) ++t.indeterminate;
            }
            if (ok[0] && ok[1]) {
              t.consider(std::abs(val[0] - val[1]),
                         "p(b|c,x,a,d,y) varies with a at " +
                             tuple_str({{"b", b},
                                        {"c", c},
                                        {"d", d},
                                        {"x", x},
                                        {"y", y}}));
            }
          }
  return finish("SPE", t, tol);
}

AssumptionReport check_om(const JointTable& joint, double tol) {
  const JointMarginals m(joint);
  DevTracker t;
  for (int b = 0; b < 2; ++b)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        for (int y = 0; y < 2; ++y) {
          double lo = 2.0, hi = -1.0;
          for (int a = 0; a < 2; ++a)
            for (int x = 0; x < 2; ++x) {
              if (m.pcad[c][a][d][x][y] <= kConditioningFloor) {
                ++t.indeterminate;
                continue;
              }
              const double val =
                  joint.v[c][a][d][b][x][y] / m.pcad[c][a][d][x][y];
              lo = std::min(lo, val);
              hi = std::max(hi, val);
            }
          if (hi >= lo) {
            t.consider(hi - lo, "p(b|a,c,d,x,y) varies with (a,x) at " +
                                    tuple_str({{"b", b},
                                               {"c", c},
                                               {"d", d},
                                               {"y", y}}));
          }
        }
  return finish("OM", t, tol);
}

AssumptionReport check_om(const MarginalBundle& bundle, double /*tol*/) {
  bundle.validate(1e-9);
  AssumptionReport rep;
  rep.predicate = "OM";
  // The bundle's b-response is a function of (y,c,d) alone; mediation holds
  // structurally.
  rep.verdict = Verdict::kPass;
  return rep;
}

AssumptionReport check_ape(const PcdTable& pcd, double tol) {
  DevTracker t;
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          t.consider(std::abs(pcd.v[c][d][x][y] - pcd.v[c][d][0][0]),
                     "p(c,d|x,y) depends on settings at " +
                         tuple_str({{"c", c}, {"d", d}, {"x", x}, {"y", y}}));
        }
  return finish("APE", t, tol);
}

double mediator_independence_deviation(const JointTable& joint) {
  const JointMarginals m(joint);
  double dev = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          dev = std::max(dev, std::abs(m.pcd[c][d][x][y] - m.pcd[c][d][0][0]));
  return dev;
}

namespace {

bool preconditions_hold(const JointTable& fwd, const JointTable& rev,
                        double tol) {
  return check_nrc(fwd, tol).passed() && check_nrc_reverse(rev, tol).passed() &&
         check_ats(fwd, rev, tol).passed();
}

}  // namespace

AssumptionReport check_mediator_independence(const JointTable& fwd,
                                             const JointTable& rev,
                                             double tol) {
  DevTracker t;
  const JointMarginals m(fwd);
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          t.consider(std::abs(m.pcd[c][d][x][y] - m.pcd[c][d][0][0]),
                     "p(c,d|x,y) != p(c,d) at " +
                         tuple_str({{"c", c}, {"d", d}, {"x", x}, {"y", y}}));
        }
  AssumptionReport rep = finish("mediator-independence", t, tol);
  if (!preconditions_hold(fwd, rev, tol)) {
    rep.verdict = Verdict::kVacuous;
    rep.witness = "precondition failed (factorization or time symmetry)";
  }
  return rep;
}

AssumptionReport check_response_screening(const JointTable& fwd,
                                          const JointTable& rev, double tol) {
  const JointMarginals m(fwd);
  DevTracker t;

  // p(a|c,d,x,y) carries no y dependence.
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        for (int x = 0; x < 2; ++x) {
          double val[2];
          bool ok[2];
          for (int y = 0; y < 2; ++y) {
            ok[y] = m.pcd[c][d][x][y] > kConditioningFloor;
            val[y] = ok[y] ? m.pcad[c][a][d][x][y] / m.pcd[c][d][x][y] : 0.0;
            if (!ok[y]) ++t.indeterminate;
          }
          if (ok[0] && ok[1]) {
            t.consider(std::abs(val[0] - val[1]),
                       "p(a|c,d,x,y) varies with y at " +
                           tuple_str({{"a", a}, {"c", c}, {"d", d}, {"x", x}}));
          }
        }

  // p(b|y,c,x,d) carries no x dependence.
  for (int b = 0; b < 2; ++b)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        for (int y = 0; y < 2; ++y) {
          double val[2];
          bool ok[2];
          for (int x = 0; x < 2; ++x) {
            ok[x] = m.pcd[c][d][x][y] > kConditioningFloor;
            val[x] = ok[x] ? m.pcdb[c][d][b][x][y] / m.pcd[c][d][x][y] : 0.0;
            if (!ok[x]) ++t.indeterminate;
          }
          if (ok[0] && ok[1]) {
            t.consider(std::abs(val[0] - val[1]),
                       "p(b|y,c,x,d) varies with x at " +
                           tuple_str({{"b", b}, {"c", c}, {"d", d}, {"y", y}}));
          }
        }

  // With the forward factorization, d drops too: p(a|c,x,d) = p(a|c,x).
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) {
            if (m.pcd[c][d][x][y] <= kConditioningFloor ||
                m.pc[c][x][y] <= kConditioningFloor) {
              ++t.indeterminate;
              continue;
            }
            const double with_d = m.pcad[c][a][d][x][y] / m.pcd[c][d][x][y];
            const double without_d = m.pca[c][a][x][y] / m.pc[c][x][y];
            t.consider(std::abs(with_d - without_d),
                       "p(a|c,x,d) != p(a|c,x) at " +
                           tuple_str({{"a", a}, {"c", c}, {"d", d}, {"x", x}}));
          }

  AssumptionReport rep = finish("response-screening", t, tol);
  if (!preconditions_hold(fwd, rev, tol)) {
    rep.verdict = Verdict::kVacuous;
    rep.witness = "precondition failed (factorization or time symmetry)";
  }
  return rep;
}

CfModel build_cf_model(const CdDistribution& pcd, const AResponse& pa,
                       const BResponse& pb) {
  double sum = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d) {
      require(pcd.v[c][d] >= -1e-12, "build_cf_model: negative p(c,d)");
      sum += pcd.v[c][d];
    }
  require(std::abs(sum - 1.0) <= 1e-9, "build_cf_model: p(c,d) not normalized");
  for (int x = 0; x < 2; ++x)
    for (int c = 0; c < 2; ++c)
      require(std::abs(pa.v[0][x][c] + pa.v[1][x][c] - 1.0) <= 1e-9,
              "build_cf_model: a-response row not normalized");
  for (int y = 0; y < 2; ++y)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        require(std::abs(pb.v[0][y][c][d] + pb.v[1][y][c][d] - 1.0) <= 1e-9,
                "build_cf_model: b-response row not normalized");

  CfModel model;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d)
        for (int b = 0; b < 2; ++b)
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
              model.joint.v[c][a][d][b][x][y] =
                  pcd.v[c][d] * pa.v[a][x][c] * pb.v[b][y][c][d];
  model.behavior = marginalize_ab(model.joint);
  return model;
}

JointTable opem_q(const MarginalBundle& bundle) {
  bundle.validate(1e-9);
  JointTable q;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d)
        for (int b = 0; b < 2; ++b)
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
              q.v[c][a][d][b][x][y] = bundle.pcd.v[c][d][x][y] *
                                      bundle.pa[a][x][c] * bundle.pb[b][y][c][d];
  return q;
}

AssumptionReport opem_mediator_independence(const MarginalBundle& fwd_bundle,
                                            const MarginalBundle& rev_bundle,
                                            double tol) {
  fwd_bundle.validate(1e-9);
  rev_bundle.validate(1e-9);

  const JointTable q_fwd = opem_q(fwd_bundle);
  // Reversed construction under the role dictionary (c,a,x) <-> (d,b,y):
  // q(a,b,c,d|x,y) = p(c,d|y,x) p(b|y,d) p(a|x,c,d).
  JointTable q_rev;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d)
        for (int b = 0; b < 2; ++b)
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
              q_rev.v[c][a][d][b][x][y] = rev_bundle.pcd.v[d][c][y][x] *
                                          rev_bundle.pa[b][y][d] *
                                          rev_bundle.pb[a][x][d][c];

  bool vacuous = false;
  std::string vacuous_why;

  const double ats_dev = q_fwd.max_abs_diff(q_rev);
  if (ats_dev > tol) {
    vacuous = true;
    vacuous_why = "time-symmetry compatibility of the q constructions failed";
  }

  double fwd_nrc_dev = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d)
      for (int x = 0; x < 2; ++x)
        fwd_nrc_dev = std::max(fwd_nrc_dev,
                               std::abs(fwd_bundle.pcd.v[c][d][x][1] -
                                        fwd_bundle.pcd.v[c][d][x][0]));
  double rev_nrc_dev = 0.0;
  for (int d = 0; d < 2; ++d)
    for (int c = 0; c < 2; ++c)
      for (int y = 0; y < 2; ++y)
        rev_nrc_dev = std::max(rev_nrc_dev,
                               std::abs(rev_bundle.pcd.v[d][c][y][1] -
                                        rev_bundle.pcd.v[d][c][y][0]));
  if (!vacuous && (fwd_nrc_dev > tol || rev_nrc_dev > tol)) {
    vacuous = true;
    vacuous_why = "pseudo-event marginal depends on the other stage's setting";
  }

  DevTracker t;
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          t.consider(std::abs(fwd_bundle.pcd.v[c][d][x][y] -
                              fwd_bundle.pcd.v[c][d][0][0]),
                     "p(c,d|x,y) != p(c,d) at " +
                         tuple_str({{"c", c}, {"d", d}, {"x", x}, {"y", y}}));
        }
  AssumptionReport rep = finish("OPEM mediator-independence", t, tol);
  if (vacuous) {
    rep.verdict = Verdict::kVacuous;
    rep.witness = vacuous_why;
  }
  return rep;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t z = master_seed + (index + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

MarginalBundle sample_bundle(std::uint64_t seed) {
  SmallRng rng(seed);
  MarginalBundle b;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double cells[4];
      dirichlet_fill(rng, cells, 4);
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) b.pcd.v[c][d][x][y] = cells[c * 2 + d];
    }
  for (int x = 0; x < 2; ++x)
    for (int c = 0; c < 2; ++c) {
      const double u = rng.uniform();
      b.pa[0][x][c] = u;
      b.pa[1][x][c] = 1.0 - u;
    }
  for (int y = 0; y < 2; ++y)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d) {
        const double u = rng.uniform();
        b.pb[0][y][c][d] = u;
        b.pb[1][y][c][d] = 1.0 - u;
      }
  return b;
}

CfPair sample_cf_pair(std::uint64_t seed) {
  SmallRng rng(seed);
  double cells[4];
  dirichlet_fill(rng, cells, 4);
  CdDistribution pcd;
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d) pcd.v[c][d] = cells[c * 2 + d];

  AResponse pa;
  for (int x = 0; x < 2; ++x)
    for (int c = 0; c < 2; ++c) {
      const double u = rng.uniform();
      pa.v[0][x][c] = u;
      pa.v[1][x][c] = 1.0 - u;
    }
  BResponse pb;
  for (int y = 0; y < 2; ++y)
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d) {
        const double u = rng.uniform();
        pb.v[0][y][c][d] = u;
        pb.v[1][y][c][d] = 1.0 - u;
      }

  CfPair pair;
  pair.fwd = build_cf_model(pcd, pa, pb).joint;

  // Reversed-order conditional chain from the same ingredients:
  // p(d) p(c|d) p(b|d,y,c) p(a|x,c).
  double pd[2] = {pcd.v[0][0] + pcd.v[1][0], pcd.v[0][1] + pcd.v[1][1]};
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d)
        for (int b = 0; b < 2; ++b)
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
              const double c_given_d = pcd.v[c][d] / pd[d];
              pair.rev.v[c][a][d][b][x][y] =
                  pd[d] * c_given_d * pb.v[b][y][c][d] * pa.v[a][x][c];
            }
  return pair;
}

std::pair<MarginalBundle, MarginalBundle> sample_opem_pair(std::uint64_t seed) {
  SmallRng rng(seed);
  double cells[4];
  dirichlet_fill(rng, cells, 4);
  double pa[2][2][2];  // [a][x][c]
  for (int x = 0; x < 2; ++x)
    for (int c = 0; c < 2; ++c) {
      const double u = rng.uniform();
      pa[0][x][c] = u;
      pa[1][x][c] = 1.0 - u;
    }
  double pbyd[2][2][2];  // [b][y][d], c-independent so a reversed bundle exists
  for (int y = 0; y < 2; ++y)
    for (int d = 0; d < 2; ++d) {
      const double u = rng.uniform();
      pbyd[0][y][d] = u;
      pbyd[1][y][d] = 1.0 - u;
    }

  MarginalBundle fwd;
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) fwd.pcd.v[c][d][x][y] = cells[c * 2 + d];
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x)
      for (int c = 0; c < 2; ++c) fwd.pa[a][x][c] = pa[a][x][c];
  for (int b = 0; b < 2; ++b)
    for (int y = 0; y < 2; ++y)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) fwd.pb[b][y][c][d] = pbyd[b][y][d];

  // Role dictionary: pcd slot holds p(d,c|y,x), pa slot the first response
  // p(b|y,d), pb slot the second response p(a|x,d,c).
  MarginalBundle rev;
  for (int d = 0; d < 2; ++d)
    for (int c = 0; c < 2; ++c)
      for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) rev.pcd.v[d][c][y][x] = cells[c * 2 + d];
  for (int b = 0; b < 2; ++b)
    for (int y = 0; y < 2; ++y)
      for (int d = 0; d < 2; ++d) rev.pa[b][y][d] = pbyd[b][y][d];
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x)
      for (int d = 0; d < 2; ++d)
        for (int c = 0; c < 2; ++c) rev.pb[a][x][d][c] = pa[a][x][c];

  return {fwd, rev};
}

CfPair adversarial_retrocausal_pair(std::uint64_t seed) {
  SmallRng rng(seed);
  // d responds to x through the friend's dynamics: allowed by the forward
  // factorization, but it pins p(c,d|x) to x.
  double pd_given_x[2] = {0.9, 0.1};  // p(d=+1 | x)
  double pa[2][2][2];
  for (int x = 0; x < 2; ++x)
    for (int c = 0; c < 2; ++c) {
      const double u = 0.2 + 0.6 * rng.uniform();
      pa[0][x][c] = u;
      pa[1][x][c] = 1.0 - u;
    }
  double pb[2][2][2];  // [b][y][d]
  for (int y = 0; y < 2; ++y)
    for (int d = 0; d < 2; ++d) {
      const double u = 0.2 + 0.6 * rng.uniform();
      pb[0][y][d] = u;
      pb[1][y][d] = 1.0 - u;
    }

  CfPair pair;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d)
        for (int b = 0; b < 2; ++b)
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
              const double p_d = d == 0 ? pd_given_x[x] : 1.0 - pd_given_x[x];
              pair.fwd.v[c][a][d][b][x][y] =
                  0.5 * pa[a][x][c] * p_d * pb[b][y][d];
            }
  // Any factorized reversed table: the pair then fails time symmetry while
  // the forward factorization holds.
  pair.rev = sample_cf_pair(derive_seed(seed, 1)).rev;
  return pair;
}

LemmaCampaignResult run_lemma_campaign(int samples, std::uint64_t master_seed,
                                       double tol) {
  LemmaCampaignResult res;
  res.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const CfPair pair = sample_cf_pair(derive_seed(master_seed, i));
    if (!check_nrc(pair.fwd, tol).passed() ||
        !check_nrc_reverse(pair.rev, tol).passed() ||
        !check_ats(pair.fwd, pair.rev, tol).passed()) {
      ++res.precondition_failures;
      continue;
    }
    const AssumptionReport med =
        check_mediator_independence(pair.fwd, pair.rev, tol);
    const AssumptionReport scr =
        check_response_screening(pair.fwd, pair.rev, tol);
    res.max_mediator_deviation =
        std::max(res.max_mediator_deviation, med.deviation);
    res.max_screening_deviation =
        std::max(res.max_screening_deviation, scr.deviation);
    if (!med.passed()) {
      ++res.mediator_failures;
      if (!res.counterexample) res.counterexample = pair.fwd;
    }
    if (!scr.passed()) {
      ++res.screening_failures;
      if (!res.counterexample) res.counterexample = pair.fwd;
    }
  }
  return res;
}

OpemCampaignResult run_opem_campaign(int samples, std::uint64_t master_seed,
                                     double tol) {
  OpemCampaignResult res;
  res.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const auto [fwd, rev] = sample_opem_pair(derive_seed(master_seed, i));
    const JointTable q = opem_q(fwd);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        double sum = 0.0;
        for (int c = 0; c < 2; ++c)
          for (int a = 0; a < 2; ++a)
            for (int d = 0; d < 2; ++d)
              for (int b = 0; b < 2; ++b) sum += q.v[c][a][d][b][x][y];
        res.max_normalization_deviation =
            std::max(res.max_normalization_deviation, std::abs(sum - 1.0));
      }
    const AssumptionReport rep = opem_mediator_independence(fwd, rev, tol);
    if (rep.verdict == Verdict::kVacuous) {
      ++res.precondition_failures;
    } else {
      res.max_conclusion_deviation =
          std::max(res.max_conclusion_deviation, rep.deviation);
      if (!rep.passed()) {
        ++res.conclusion_failures;
        if (!res.counterexample) res.counterexample = fwd;
      }
    }
  }
  return res;
}

}  // namespace cf
