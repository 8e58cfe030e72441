#pragma once
// Distributed nonlinear least-squares problems: node k owns the scalar
// residual f_k(x) and its 1 x M Jacobian row F_k(x); the network jointly
// minimises sum_k f_k(x)^2 over a box domain.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dgn {

using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Matrix = Eigen::MatrixXd;

struct BoxDomain {
  Vector lower;
  Vector upper;

  BoxDomain() = default;
  // Throws BadDimensions on size mismatch, BadParams when lower > upper.
  BoxDomain(Vector lo, Vector hi);

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vector& x) const;
  Vector center() const { return 0.5 * (lower + upper); }
};

// Pure residual model. Implementations must be reentrant.
class ResidualModel {
 public:
  virtual ~ResidualModel() = default;
  virtual int nodes() const = 0;
  virtual int dim() const = 0;
  virtual double residual(int k, const Vector& x) const = 0;
  virtual RowVector jacobian_row(int k, const Vector& x) const = 0;
};

enum class ProblemKind { Linear, ScalarSqrt, ExponentialFit, Localization };

std::string_view to_string(ProblemKind kind) noexcept;
ProblemKind parse_problem_kind(std::string_view text);

class NlsProblem {
 public:
  NlsProblem(std::shared_ptr<const ResidualModel> model, BoxDomain domain, Vector minimizer,
             Vector ground_truth);

  int nodes() const { return model_->nodes(); }
  int dim() const { return model_->dim(); }
  const BoxDomain& domain() const { return domain_; }
  const Vector& minimizer() const { return minimizer_; }
  const Vector& ground_truth() const { return ground_truth_; }
  const ResidualModel& model() const { return *model_; }

  // Checked evaluation: OutOfDomain outside the box, NonFiniteValue on NaN/Inf.
  double residual(int k, const Vector& x) const;
  RowVector jacobian_row(int k, const Vector& x) const;

  void require_in_domain(const Vector& x) const;

 private:
  std::shared_ptr<const ResidualModel> model_;
  BoxDomain domain_;
  Vector minimizer_;
  Vector ground_truth_;
};

struct GlobalEvaluation {
  Vector residuals;  // N
  Matrix jacobian;   // N x M
  double cost = 0.0;
};

GlobalEvaluation evaluate_global(const NlsProblem& problem, const Vector& x);

// ||sum_k F_k(x)^T f_k(x)||, half the gradient norm of the cost.
double stationarity_norm(const NlsProblem& problem, const Vector& x);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Linear;
  int nodes = 1;
  int dim = 1;
  double noise = 0.0;
  std::uint64_t seed = 0;
  // Localization only: anchors sit on a circle of this radius around the
  // origin; the domain is a box of this half-width around the target.
  double anchor_radius = 10.0;
  double domain_halfwidth = 1.0;
};

NlsProblem make_problem(const ProblemSpec& spec);

struct BoundsProfile {
  double sigma_min = 0.0, sigma_max = 0.0;  // per-node ||F_k||
  double Sigma_min = 0.0, Sigma_max = 0.0;  // singular values of stacked F
  double omega = 0.0;                       // Lipschitz modulus of F
  double gamma_f = 0.0, gamma_F = 0.0;
  double e_max = 0.0, e_min = 0.0;          // full-network residual norm
  double eps_max = 0.0, eps_min = 0.0;      // per-node |f_k|
  double safety_factor = 1.0;
  int samples = 0;
};

// gamma_f = omega (e_max + Sigma_max), gamma_F = 2 Sigma_max omega.
void derive_lipschitz(BoundsProfile& bounds);

BoundsProfile estimate_bounds(const NlsProblem& problem, int samples, std::uint64_t seed,
                              double safety_factor = 1.05);

// Box corners first (when M <= 10), then a seeded rotated Halton sequence.
std::vector<Vector> sample_domain(const BoxDomain& domain, int count, std::uint64_t seed);

struct JacobianCheck {
  double max_error = 0.0;  // max |analytic - central difference| / (1 + |analytic|)
  int points = 0;
  bool pass = false;
};

JacobianCheck check_jacobian(const NlsProblem& problem, int points, std::uint64_t seed,
                             double tolerance = 1e-5);

}  // namespace dgn
