#include <cmath>
#include <limits>

#include "dgn/error.hpp"
#include "dgn/problem.hpp"

namespace dgn {

namespace {

// Extreme singular values of an N x M matrix via the M x M Gram matrix.
std::pair<double, double> singular_range(const Matrix& f) {
  const Matrix gram = f.transpose() * f;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  return {std::sqrt(std::max(ev.minCoeff(), 0.0)), std::sqrt(std::max(ev.maxCoeff(), 0.0))};
}

double spectral_norm_small(const Matrix& f) { return singular_range(f).second; }

}  // namespace

void derive_lipschitz(BoundsProfile& b) {
  b.gamma_f = b.omega * (b.e_max + b.Sigma_max);
  b.gamma_F = 2.0 * b.Sigma_max * b.omega;
}

BoundsProfile estimate_bounds(const NlsProblem& problem, int samples, std::uint64_t seed, double safety_factor) {
  if (samples < 2) throw Error(ErrorCode::InsufficientSamples, "need at least 2 sample points");
  if (!(safety_factor >= 1.0) || !std::isfinite(safety_factor)) {
    throw Error(ErrorCode::BadParams, "safety factor must be >= 1");
  }
  const int n = problem.nodes();
  const double inf = std::numeric_limits<double>::infinity();

  const std::vector<Vector> points = sample_domain(problem.domain(), samples, seed);
  std::vector<Matrix> jac(points.size());

  BoundsProfile b;
  b.samples = samples;
  b.safety_factor = safety_factor;
  b.sigma_min = b.Sigma_min = b.eps_min = inf;
  std::vector<int> sign_seen(static_cast<std::size_t>(n), 0);

  for (std::size_t i = 0; i < points.size(); ++i) {
    const GlobalEvaluation ev = evaluate_global(problem, points[i]);
    for (int k = 0; k < n; ++k) {
      const double s = ev.jacobian.row(k).norm();
      if (s <= 1e-12) {
        throw Error(ErrorCode::DegenerateJacobian, "node " + std::to_string(k) + " has a vanishing Jacobian row");
      }
      b.sigma_min = std::min(b.sigma_min, s);
      b.sigma_max = std::max(b.sigma_max, s);
      const double r = ev.residuals[k];
      b.eps_min = std::min(b.eps_min, std::abs(r));
      b.eps_max = std::max(b.eps_max, std::abs(r));
      sign_seen[k] |= r > 0 ? 1 : (r < 0 ? 2 : 3);
    }
    const auto [smin, smax] = singular_range(ev.jacobian);
    if (smin <= 1e-12) throw Error(ErrorCode::DegenerateJacobian, "stacked Jacobian is rank deficient");
    b.Sigma_min = std::min(b.Sigma_min, smin);
    b.Sigma_max = std::max(b.Sigma_max, smax);
    b.e_max = std::max(b.e_max, ev.residuals.norm());
    jac[i] = ev.jacobian;
  }
  // A residual that changes sign over the box vanishes somewhere inside it.
  for (int seen : sign_seen) {
    if (seen == 3) b.eps_min = 0.0;
  }

  // Secant slopes over all sample pairs, plus short inward probes that
  // approach the local derivative.
  const Vector width = problem.domain().upper - problem.domain().lower;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double dist = (points[i] - points[j]).norm();
      if (dist == 0.0) continue;
      b.omega = std::max(b.omega, spectral_norm_small(jac[i] - jac[j]) / dist);
    }
    for (int c = 0; c < problem.dim(); ++c) {
      if (width[c] == 0.0) continue;
      Vector q = points[i];
      const double step = 1e-4 * width[c];
      q[c] += q[c] + step <= problem.domain().upper[c] ? step : -step;
      const Matrix jq = evaluate_global(problem, q).jacobian;
      b.omega = std::max(b.omega, spectral_norm_small(jq - jac[i]) / step);
    }
  }

  b.e_min = evaluate_global(problem, problem.minimizer()).residuals.norm();

  const double up = safety_factor, down = 1.0 / safety_factor;
  b.sigma_max *= up;
  b.Sigma_max *= up;
  b.omega *= up;
  b.e_max *= up;
  b.eps_max *= up;
  b.sigma_min *= down;
  b.Sigma_min *= down;
  b.e_min *= down;
  b.eps_min *= down;
  derive_lipschitz(b);
  return b;
}

}  // namespace dgn
