#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "dgn/error.hpp"
#include "dgn/problem.hpp"

namespace dgn {

namespace {

std::string describe(const Vector& x) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index j = 0; j < x.size(); ++j) os << (j ? ", " : "") << x[j];
  os << "]";
  return os.str();
}

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

constexpr std::array<int, 20> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

}  // namespace

BoxDomain::BoxDomain(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw Error(ErrorCode::BadDimensions, "box bounds must have equal positive length");
  }
  for (Eigen::Index j = 0; j < lower.size(); ++j) {
    if (!(lower[j] <= upper[j])) throw Error(ErrorCode::BadParams, "box lower bound exceeds upper bound");
  }
}

bool BoxDomain::contains(const Vector& x) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!(x[j] >= lower[j] && x[j] <= upper[j])) return false;
  }
  return true;
}

std::string_view to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::Linear: return "linear";
    case ProblemKind::ScalarSqrt: return "scalar_sqrt";
    case ProblemKind::ExponentialFit: return "exponential_fit";
    case ProblemKind::Localization: return "localization";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(std::string_view text) {
  for (ProblemKind k : {ProblemKind::Linear, ProblemKind::ScalarSqrt, ProblemKind::ExponentialFit,
                        ProblemKind::Localization}) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorCode::BadParams, "unknown problem kind '" + std::string(text) + "'");
}

NlsProblem::NlsProblem(std::shared_ptr<const ResidualModel> model, BoxDomain domain, Vector minimizer,
                       Vector ground_truth)
    : model_(std::move(model)),
      domain_(std::move(domain)),
      minimizer_(std::move(minimizer)),
      ground_truth_(std::move(ground_truth)) {
  if (!model_ || model_->nodes() < 1 || model_->dim() < 1) {
    throw Error(ErrorCode::BadDimensions, "problem needs at least one node and one parameter");
  }
  if (domain_.dim() != model_->dim() || minimizer_.size() != model_->dim() ||
      ground_truth_.size() != model_->dim()) {
    throw Error(ErrorCode::BadDimensions, "domain/minimizer dimension does not match the model");
  }
}

void NlsProblem::require_in_domain(const Vector& x) const {
  if (x.size() != dim()) throw Error(ErrorCode::BadDimensions, "parameter vector has wrong length");
  if (!x.allFinite()) throw Error(ErrorCode::NonFiniteValue, "parameter vector " + describe(x));
  if (!domain_.contains(x)) throw Error(ErrorCode::OutOfDomain, "point " + describe(x) + " leaves the box");
}

double NlsProblem::residual(int k, const Vector& x) const {
  require_in_domain(x);
  const double r = model_->residual(k, x);
  if (!std::isfinite(r)) throw Error(ErrorCode::NonFiniteValue, "residual of node " + std::to_string(k));
  return r;
}

RowVector NlsProblem::jacobian_row(int k, const Vector& x) const {
  require_in_domain(x);
  RowVector row = model_->jacobian_row(k, x);
  if (!row.allFinite()) throw Error(ErrorCode::NonFiniteValue, "Jacobian row of node " + std::to_string(k));
  return row;
}

GlobalEvaluation evaluate_global(const NlsProblem& problem, const Vector& x) {
  GlobalEvaluation out;
  const int n = problem.nodes();
  out.residuals.resize(n);
  out.jacobian.resize(n, problem.dim());
  for (int k = 0; k < n; ++k) {
    out.residuals[k] = problem.residual(k, x);
    out.jacobian.row(k) = problem.jacobian_row(k, x);
    out.cost += out.residuals[k] * out.residuals[k];
  }
  return out;
}

double stationarity_norm(const NlsProblem& problem, const Vector& x) {
  const GlobalEvaluation ev = evaluate_global(problem, x);
  return (ev.jacobian.transpose() * ev.residuals).norm();
}

std::vector<Vector> sample_domain(const BoxDomain& domain, int count, std::uint64_t seed) {
  const int m = domain.dim();
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(std::max(count, 0)));
  const Vector width = domain.upper - domain.lower;

  if (m <= 10) {
    const int corners = 1 << m;
    for (int c = 0; c < corners && static_cast<int>(points.size()) < count; ++c) {
      Vector p(m);
      for (int j = 0; j < m; ++j) p[j] = (c >> j) & 1 ? domain.upper[j] : domain.lower[j];
      points.push_back(std::move(p));
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector shift(m);
  for (int j = 0; j < m; ++j) shift[j] = unit(rng);

  for (std::uint64_t i = 1; static_cast<int>(points.size()) < count; ++i) {
    Vector p(m);
    for (int j = 0; j < m; ++j) {
      double u = j < static_cast<int>(kPrimes.size()) ? radical_inverse(i, kPrimes[j]) + shift[j] : unit(rng);
      u -= std::floor(u);
      p[j] = domain.lower[j] + u * width[j];
    }
    points.push_back(std::move(p));
  }
  return points;
}

JacobianCheck check_jacobian(const NlsProblem& problem, int points, std::uint64_t seed, double tolerance) {
  const BoxDomain& box = problem.domain();
  const int m = problem.dim();
  // Keep the stencil strictly inside the box.
  Vector lo = box.lower + 0.05 * (box.upper - box.lower);
  Vector hi = box.upper - 0.05 * (box.upper - box.lower);
  const BoxDomain interior(lo, hi);

  JacobianCheck out;
  const ResidualModel& model = problem.model();
  for (const Vector& x : sample_domain(interior, points + (m <= 10 ? (1 << m) : 0), seed)) {
    if (out.points == points) break;
    ++out.points;
    for (int k = 0; k < problem.nodes(); ++k) {
      const RowVector analytic = model.jacobian_row(k, x);
      for (int j = 0; j < m; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
        Vector xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const double fd = (model.residual(k, xp) - model.residual(k, xm)) / (2.0 * h);
        const double err = std::abs(analytic[j] - fd) / (1.0 + std::abs(analytic[j]));
        out.max_error = std::max(out.max_error, err);
      }
    }
  }
  out.pass = out.max_error <= tolerance;
  return out;
}

}  // namespace dgn
