#pragma once

// Classical probability-table engine for the four-event scenario: assumption
// predicates over joint tables (no-retrocausality factorizations, time
// symmetry, screening conditions), constructors for factorized models, the
// derived independence/screening implications, and the operational-mediation
// construction that replaces a global joint with marginals.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cf/wigner.hpp"

namespace cf {

// Table indices map outcome +1 -> 0 and outcome -1 -> 1 (outcome_sign()),
// for all four events c, a, d, b; settings x, y are used directly.

/// Hypothetical classical joint p(c,a,d,b|x,y). The same layout stores joints
/// of the reversed experiment: an entry is always the probability assigned to
/// the assignment (c,a,d,b) under settings (x,y), whichever temporal order
/// produced it.
struct JointTable {
  double v[2][2][2][2][2][2] = {};  // [c][a][d][b][x][y]

  void validate(double tol = 1e-12) const;
  double max_abs_diff(const JointTable& o) const;
  /// Simultaneous relabeling +1 <-> -1 of all four outcomes.
  JointTable relabeled() const;
};

/// Setting-conditioned pseudo-event distribution p(c,d|x,y).
struct PcdTable {
  double v[2][2][2][2] = {};  // [c][d][x][y]

  void validate(double tol = 1e-12) const;
};

/// The operational-marginal objects: p(c,d|x,y), p(a|x,c), p(b|y,c,d),
/// without a presumed global joint.
///
/// A bundle for the reversed experiment reuses this shape under the role
/// dictionary (c,a,x) <-> (d,b,y): its pcd slot holds p(d,c|y,x) as
/// pcd[d][c][y][x], its pa slot holds p(b|y,d) as pa[b][y][d], and its pb
/// slot holds p(a|x,d,c) as pb[a][x][d][c].
struct MarginalBundle {
  PcdTable pcd;
  double pa[2][2][2] = {};        // [a][x][c]
  double pb[2][2][2][2] = {};     // [b][y][c][d]

  void validate(double tol = 1e-12) const;
};

enum class Verdict { kPass, kFail, kVacuous };

const char* verdict_name(Verdict v);

/// Outcome of one assumption predicate: verdict, the largest deviation from
/// the asserted equality, and the witnessing index tuple on failure.
/// Conditional equalities at index tuples whose conditioning event has
/// probability below 1e-12 are indeterminate: they are skipped and counted.
struct AssumptionReport {
  std::string predicate;
  Verdict verdict = Verdict::kPass;
  double deviation = 0.0;
  int indeterminate_count = 0;
  std::optional<std::string> witness;

  bool passed() const { return verdict == Verdict::kPass; }
};

inline constexpr double kPredicateTol = 1e-9;
inline constexpr double kConditioningFloor = 1e-12;

/// p(a,b|x,y) = sum_cd p(c,a,d,b|x,y).
BehaviorTable marginalize_ab(const JointTable& joint);

/// Forward no-retrocausality factorization: p(c|x,y) = p(c),
/// p(a|c,x,y) = p(a|c,x), p(d|c,a,x,y) = p(d|c,a,x), and the clause that a
/// cannot depend on the later pseudo event: p(a|c,x,d) = p(a|c,x).
AssumptionReport check_nrc(const JointTable& joint, double tol = kPredicateTol);

/// The reversed-order factorization structure p(d) p(c|y,d) p(b|d,y,c)
/// p(a|d,y,b,c,x), checked as its three conditional independences.
AssumptionReport check_nrc_reverse(const JointTable& joint,
                                   double tol = kPredicateTol);

/// Axiological time symmetry: the reversed experiment assigns the same
/// probability to every assignment, i.e. entrywise equality of the tables.
AssumptionReport check_ats(const JointTable& fwd, const JointTable& rev,
                           double tol = kPredicateTol);

/// Screening via pseudo events: p(b|c,x,a,d,y) = p(b|c,x,d,y).
/// a-independence only; the x-dependence is retained.
AssumptionReport check_spe(const JointTable& joint, double tol = kPredicateTol);

/// Operational mediation: p(b|a,c,d,x,y) = p(b|c,d,y), dropping both a and x.
/// Strictly stronger than check_spe.
AssumptionReport check_om(const JointTable& joint, double tol = kPredicateTol);

/// On a bundle the b-response has no (a,x) slots, so mediation is structural;
/// this overload validates the bundle and reports accordingly.
AssumptionReport check_om(const MarginalBundle& bundle,
                          double tol = kPredicateTol);

/// Absoluteness of pseudo events, as the checkable mediator-independence
/// consequence: p(c,d|x,y) carries no setting dependence.
AssumptionReport check_ape(const PcdTable& pcd, double tol = kPredicateTol);

/// Largest deviation of p(c,d|x,y) from a setting-independent p(c,d).
double mediator_independence_deviation(const JointTable& joint);

/// Derived implication: forward factorization + reversed factorization +
/// time symmetry force p(c,d|x,y) = p(c,d). Returns kVacuous when a
/// precondition fails; the deviation field always reports the conclusion.
AssumptionReport check_mediator_independence(const JointTable& fwd,
                                             const JointTable& rev,
                                             double tol = kPredicateTol);

/// Derived implication: under the same preconditions the truly-observed
/// responses are screened by the pseudo events: p(a|c,d,x,y) = p(a|c,x,d),
/// p(b|y,c,x,d) = p(b|y,c,d), and (with the forward factorization)
/// p(a|c,x,d) = p(a|c,x).
AssumptionReport check_response_screening(const JointTable& fwd,
                                          const JointTable& rev,
                                          double tol = kPredicateTol);

/// Factorized classical model p(c,d) p(a|x,c) p(b|y,c,d) and its behavior.
struct CfModel {
  JointTable joint;
  BehaviorTable behavior;
};

struct CdDistribution {
  double v[2][2] = {};  // [c][d]
};

struct AResponse {
  double v[2][2][2] = {};  // [a][x][c]
};

struct BResponse {
  double v[2][2][2][2] = {};  // [b][y][c][d]
};

CfModel build_cf_model(const CdDistribution& pcd, const AResponse& pa,
                       const BResponse& pb);

/// Operationally constructed distribution
/// q(a,b,c,d|x,y) := p(c,d|x,y) p(a|x,c) p(b|y,c,d), returned in JointTable
/// layout. Normalized per (x,y) by construction.
JointTable opem_q(const MarginalBundle& bundle);

/// Mediator independence from operational marginals alone: the forward
/// q-construction must equal the reversed one entrywise (time-symmetry
/// compatibility), both pseudo-event marginals must carry only their own
/// stage's setting (no-retrocausality forms), and then p(c,d|x,y) = p(c,d)
/// is asserted. rev_bundle uses the role dictionary documented on
/// MarginalBundle.
AssumptionReport opem_mediator_independence(const MarginalBundle& fwd_bundle,
                                            const MarginalBundle& rev_bundle,
                                            double tol = kPredicateTol);

// --- deterministic sampling (campaigns are reproducible per sample) ---

/// Per-sample seed derived from (master_seed, sample_index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Dirichlet-style random bundle: uniform simplex fill for p(c,d|x,y) per
/// setting pair, uniform rows for the responses.
MarginalBundle sample_bundle(std::uint64_t seed);

struct CfPair {
  JointTable fwd;
  JointTable rev;
};

/// Shared-factorization pair: p(c,d), p(a|x,c), p(b|y,c,d) sampled once,
/// the forward table assembled in forward order and the reversed table
/// through the reversed-order conditional chain. Satisfies the
/// factorization and time-symmetry preconditions by construction.
CfPair sample_cf_pair(std::uint64_t seed);

/// Bundle pair for the operational-mediation campaign: a shared
/// setting-independent p(c,d) with a c-independent b-response, plus the
/// role-swapped reversed bundle assembled from the same ingredients.
std::pair<MarginalBundle, MarginalBundle> sample_opem_pair(std::uint64_t seed);

/// Adversarial pair: forward factorization holds but p(c,d|x) depends on x,
/// so time symmetry against a factorized reversed table must fail and the
/// mediator-independence conclusion is violated (non-vacuity witness).
CfPair adversarial_retrocausal_pair(std::uint64_t seed);

struct LemmaCampaignResult {
  int samples = 0;
  int precondition_failures = 0;
  int mediator_failures = 0;
  int screening_failures = 0;
  double max_mediator_deviation = 0.0;
  double max_screening_deviation = 0.0;
  std::optional<JointTable> counterexample;
};

LemmaCampaignResult run_lemma_campaign(int samples, std::uint64_t master_seed,
                                       double tol = kPredicateTol);

struct OpemCampaignResult {
  int samples = 0;
  int precondition_failures = 0;
  int conclusion_failures = 0;
  double max_conclusion_deviation = 0.0;
  double max_normalization_deviation = 0.0;
  std::optional<MarginalBundle> counterexample;
};

OpemCampaignResult run_opem_campaign(int samples, std::uint64_t master_seed,
                                     double tol = kPredicateTol);

}  // namespace cf
