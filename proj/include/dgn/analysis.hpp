#pragma once
// Convergence constants for cooperative diffusion Gauss-Newton, the
// certificate assembled from them, and an auditor that replays a diffusion
// trace against every inequality the certificate relies on.

#include <limits>
#include <string>
#include <vector>

#include "dgn/network.hpp"
#include "dgn/problem.hpp"
#include "dgn/solvers.hpp"

namespace dgn {

struct Lemma1 {
  double t1 = 0.0;
  double t2 = 0.0;
};

// t1 = alpha omega / (2 Sigma_min)
// t2 = (1 - alpha) Sigma_max / Sigma_min + sqrt(2) N alpha omega e_min / Sigma_min^2
Lemma1 lemma1_constants(const BoundsProfile& bounds, double alpha, int nodes);

struct PairCounts {
  int n_kl = 0;        // common neighbours
  int n_l = 0;         // |N_l|
  int n_k_given_l = 0; // in N_k, not in N_l
  int n_l_given_k = 0; // in N_l, not in N_k
};

PairCounts pair_counts(const NeighborhoodStats& stats, int k, int l);

struct Lemma2 {
  double a1 = 1.0;
  double a2 = 0.0;
};

// a1 = 1 + (alpha n_kl + 2 alpha n_kl gamma_f) / (2 n_l sigma_min^2)
// a2 = (n_l + 3 n_k|l + 3 n_l|k) alpha sigma_max eps_max / (2 n_l sigma_min^2)
Lemma2 lemma2_constants(const BoundsProfile& bounds, const PairCounts& counts, double alpha);
Lemma2 lemma2_constants(const BoundsProfile& bounds, const NeighborhoodStats& stats, double alpha, int k, int l);

// Pi^i = a2 sum_{j=1..i} a1^{j-1} for i = 1..horizon (element i-1 holds Pi^i).
std::vector<double> pi_sequence(double a1, double a2, int horizon);

struct Discrepancy {
  double zeta = 0.0;
  double xi = 0.0;
};

// zeta = N n_k gamma_F Pi / sigma_min^2
// xi   = N^2 gamma_f Pi / sigma_min^2
//        + (N sigma_max eps_max + N^2 gamma_f Pi) zeta / (sigma_min^2 (1 - zeta))
// Throws ExpansionConditionViolated when zeta >= 1.
Discrepancy discrepancy_bound(const BoundsProfile& bounds, int nodes, int n_k_max, double pi);

struct EquilibriumPair {
  double y_min = 0.0;
  double y_max = 0.0;
  double discriminant = 0.0;
};

// Fixed points of phi(y) = t1 g^2 y^2 + t2 g y + alpha xi.
// Throws InvalidArgument unless t1 > 0 and g > 0; NoRealEquilibrium when the
// discriminant is negative.
EquilibriumPair equilibria(double t1, double t2, double g_norm, double alpha, double xi);

double equilibrium_discriminant(double t1, double t2, double g_norm, double alpha, double xi);

struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool contains_open(double v) const { return v > lower && v < upper; }
};

struct StabilityWindows {
  Interval g_window;          // component of {g > 0 : 0 < disc(g) < 4} holding the actual g
  Interval g_window_literal;  // the published closed form, reported for comparison
  Interval alpha_window;      // (max{(t2^2g^2-2t2g-3)/(4t1 xi g^2),0}, min{(t2^2g^2-2t2g+1)/(4t1 xi g^2),1})
  double derivative_at_y_min = 0.0;  // |1 - sqrt(disc)|
  bool stable = false;               // derivative_at_y_min < 1
};

StabilityWindows stability_windows(double t1, double t2, double g_norm, double alpha, double xi);

struct LemmaConstants {
  double t1 = 0.0, t2 = 0.0;
  double theta = 0.0;                // worst-pair theta
  double a1_max = 1.0, a2_max = 0.0; // worst over connected pairs
  std::vector<double> pi;            // Pi^1..Pi^H
  std::vector<double> zeta;          // zeta_1..zeta_H
  std::vector<double> mu;            // worst-pair mu^i, i = 1..H
  double xi = 0.0;                   // sup over the horizon
  bool xi_valid = true;              // false when some zeta_i >= 1
  int horizon = 0;
};

struct ConditionFlag {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // > 0 on the passing side
  std::string detail;
};

struct ConvergenceCertificate {
  BoundsProfile bounds;
  LemmaConstants constants;
  EquilibriumPair equilibria;
  bool equilibria_exist = false;
  StabilityWindows windows;
  double g_norm = 0.0;        // ||G||_2
  double g_frobenius = 0.0;   // ||G||_F
  double lambda_bound = 0.0;  // 1 / (min n_k sigma_min^2), used by the audit
  double lambda_bound_main_text = 0.0;  // 1 / (min n_k sigma_min), reported only
  double initial_error = 0.0;
  double alpha = 0.0;
  std::vector<ConditionFlag> flags;
  bool overall = false;

  const ConditionFlag& flag(const std::string& name) const;
};

struct CertifyOptions {
  int horizon = 0;  // 0: use config.max_iters
  int bound_samples = 256;
  std::uint64_t bound_seed = 0;
  double safety_factor = 1.05;
};

// Never throws on a failed condition; only bound estimation errors propagate.
ConvergenceCertificate certify(const NlsProblem& problem, const Network& network, const SolverConfig& config,
                               const Vector& x0, const CertifyOptions& options = {});

// Certificate from an already estimated bounds profile.
ConvergenceCertificate certify_with_bounds(const NlsProblem& problem, const Network& network,
                                           const SolverConfig& config, const Vector& x0, int horizon,
                                           const BoundsProfile& bounds);

struct AuditRow {
  int iteration = 0;
  std::string check;  // a, a_loose, b, c_raw, c_agg, d, e
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  bool informational = false;  // reported, not part of the verdict
  double slack() const { return rhs - lhs; }
};

struct AuditReport {
  std::vector<AuditRow> rows;
  int iterations_audited = 0;
  int failed = 0;
  double max_lambda_measured = 0.0;  // max_k ||Q_k(X)^{-1}|| over the run
  bool pass() const { return failed == 0; }
};

// Requires a diffusion trace with shadow non-cooperative descents recorded.
AuditReport audit_trace(const RunTrace& trace, const ConvergenceCertificate& certificate, const Network& network,
                        const BoundsProfile& bounds, const NlsProblem& problem);

}  // namespace dgn
