#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dgn/error.hpp"
#include "dgn/network.hpp"
#include "dgn/simd/kernels.hpp"

namespace dgn {

namespace {

constexpr int kPowerIterations = 20000;

// Row-major copy for the matvec kernel.
std::vector<double> row_major(const Eigen::MatrixXd& a) {
  std::vector<double> out(static_cast<std::size_t>(a.size()));
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out[static_cast<std::size_t>(r * a.cols() + c)] = a(r, c);
  return out;
}

// Returns a negative value when the iteration does not settle on a simple
// real dominant eigenvalue.
double power_iteration(const Eigen::MatrixXd& a) {
  const std::size_t n = static_cast<std::size_t>(a.rows());
  const std::vector<double> flat = row_major(a);
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);

  std::vector<double> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + 1.7 * static_cast<double>(i));
  double norm = std::sqrt(simd::squared_norm(v));
  for (double& x : v) x /= norm;

  for (int it = 0; it < kPowerIterations; ++it) {
    simd::matvec(flat, v, w);
    const double wn = std::sqrt(simd::squared_norm(w));
    if (wn == 0.0) return -1.0;
    const double mu = simd::dot(v, w);
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = w[i] - mu * v[i];
      res2 += d * d;
    }
    if (std::sqrt(res2) <= 1e-13 * scale * std::sqrt(static_cast<double>(n))) return std::abs(mu);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
  }
  return -1.0;
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw Error(ErrorCode::BadDimensions, "spectral radius needs a square matrix");
  if (!a.allFinite()) throw Error(ErrorCode::NonFiniteValue, "matrix has non-finite entries");
  if (a.isZero(0.0)) return 0.0;

  const double rho = power_iteration(a);
  if (rho >= 0.0) return rho;

  Eigen::EigenSolver<Eigen::MatrixXd> eig(a, false);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "eigenvalue iteration did not converge");
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) throw Error(ErrorCode::BadDimensions, "empty matrix");
  const Eigen::MatrixXd gram = a.transpose() * a;
  return std::sqrt(spectral_radius(gram));
}

}  // namespace dgn
