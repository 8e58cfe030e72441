#include <cmath>
#include <numbers>
#include <random>

#include "dgn/error.hpp"
#include "dgn/problem.hpp"

namespace dgn {

namespace {

// f_k(x) = a_k^T x - b_k
class LinearModel final : public ResidualModel {
 public:
  LinearModel(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {}
  int nodes() const override { return static_cast<int>(a_.rows()); }
  int dim() const override { return static_cast<int>(a_.cols()); }
  double residual(int k, const Vector& x) const override { return a_.row(k).dot(x) - b_[k]; }
  RowVector jacobian_row(int k, const Vector&) const override { return a_.row(k); }

 private:
  Matrix a_;
  Vector b_;
};

// f_k(x) = x^2 - c_k
class ScalarSqrtModel final : public ResidualModel {
 public:
  explicit ScalarSqrtModel(Vector c) : c_(std::move(c)) {}
  int nodes() const override { return static_cast<int>(c_.size()); }
  int dim() const override { return 1; }
  double residual(int k, const Vector& x) const override { return x[0] * x[0] - c_[k]; }
  RowVector jacobian_row(int, const Vector& x) const override { return RowVector::Constant(1, 2.0 * x[0]); }

 private:
  Vector c_;
};

// f_k(x) = x0 exp(x1 t_k) - y_k
class ExponentialFitModel final : public ResidualModel {
 public:
  ExponentialFitModel(Vector t, Vector y) : t_(std::move(t)), y_(std::move(y)) {}
  int nodes() const override { return static_cast<int>(t_.size()); }
  int dim() const override { return 2; }
  double residual(int k, const Vector& x) const override { return x[0] * std::exp(x[1] * t_[k]) - y_[k]; }
  RowVector jacobian_row(int k, const Vector& x) const override {
    const double e = std::exp(x[1] * t_[k]);
    RowVector row(2);
    row << e, x[0] * t_[k] * e;
    return row;
  }

 private:
  Vector t_, y_;
};

// f_k(x) = ||x - a_k|| - r_k : range measurement from anchor k.
class LocalizationModel final : public ResidualModel {
 public:
  LocalizationModel(Matrix anchors, Vector ranges) : anchors_(std::move(anchors)), ranges_(std::move(ranges)) {}
  int nodes() const override { return static_cast<int>(anchors_.rows()); }
  int dim() const override { return 2; }
  double residual(int k, const Vector& x) const override {
    return (x - anchors_.row(k).transpose()).norm() - ranges_[k];
  }
  RowVector jacobian_row(int k, const Vector& x) const override {
    const Vector d = x - anchors_.row(k).transpose();
    return (d / d.norm()).transpose();
  }

 private:
  Matrix anchors_;
  Vector ranges_;
};

// Full-step centralized GN used to pin down x* for nonlinear generators.
Vector refine_minimizer(const ResidualModel& model, Vector x) {
  const int n = model.nodes(), m = model.dim();
  for (int it = 0; it < 200; ++it) {
    Matrix normal = Matrix::Zero(m, m);
    Vector rhs = Vector::Zero(m);
    for (int k = 0; k < n; ++k) {
      const RowVector row = model.jacobian_row(k, x);
      normal.noalias() += row.transpose() * row;
      rhs.noalias() += row.transpose() * model.residual(k, x);
    }
    const Vector step = normal.ldlt().solve(rhs);
    if (!step.allFinite()) throw Error(ErrorCode::SingularNormalMatrix, "minimizer refinement diverged");
    x -= step;
    if (step.norm() <= 1e-12 * (1.0 + x.norm())) break;
  }
  return x;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::BadDimensions, what);
}

}  // namespace

NlsProblem make_problem(const ProblemSpec& spec) {
  const int n = spec.nodes, m = spec.dim;
  require(n >= 1, "need at least one node");
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) throw Error(ErrorCode::BadParams, "noise must be >= 0");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::shared_ptr<const ResidualModel> model;
  Vector truth, minimizer, lo, hi;

  switch (spec.kind) {
    case ProblemKind::Linear: {
      require(m >= 1 && n >= m, "linear problem needs N >= M >= 1");
      Matrix a(n, m);
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < m; ++j) a(k, j) = gauss(rng);
      truth.resize(m);
      for (int j = 0; j < m; ++j) truth[j] = 2.0 * unit(rng) - 1.0;
      Vector b = a * truth;
      for (int k = 0; k < n; ++k) b[k] += spec.noise * gauss(rng);
      minimizer = (a.transpose() * a).llt().solve(a.transpose() * b);
      lo = truth.cwiseMin(minimizer).array() - 2.0;
      hi = truth.cwiseMax(minimizer).array() + 2.0;
      model = std::make_shared<LinearModel>(std::move(a), std::move(b));
      break;
    }
    case ProblemKind::ScalarSqrt: {
      require(m == 1, "scalar_sqrt requires M = 1");
      Vector c(n);
      for (int k = 0; k < n; ++k) c[k] = 2.0 + spec.noise * gauss(rng);
      truth = Vector::Constant(1, std::sqrt(2.0));
      minimizer = Vector::Constant(1, std::sqrt(c.mean()));
      lo = Vector::Constant(1, 1.0);
      hi = Vector::Constant(1, 2.0);
      model = std::make_shared<ScalarSqrtModel>(std::move(c));
      break;
    }
    case ProblemKind::ExponentialFit: {
      require(m == 2, "exponential_fit requires M = 2");
      require(n >= 2, "exponential_fit requires N >= 2");
      truth.resize(2);
      truth << 1.0 + unit(rng), -1.0 + 2.0 * unit(rng);
      Vector t(n), y(n);
      for (int k = 0; k < n; ++k) {
        t[k] = static_cast<double>(k) / (n - 1);
        y[k] = truth[0] * std::exp(truth[1] * t[k]) + spec.noise * gauss(rng);
      }
      auto fit = std::make_shared<ExponentialFitModel>(std::move(t), std::move(y));
      minimizer = refine_minimizer(*fit, truth);
      lo = truth.array() - 0.5;
      hi = truth.array() + 0.5;
      model = std::move(fit);
      break;
    }
    case ProblemKind::Localization: {
      require(m == 2, "localization requires M = 2");
      require(n >= 3, "localization requires N >= 3 anchors");
      if (!(spec.anchor_radius > 0.0) || !(spec.domain_halfwidth > 0.0)) {
        throw Error(ErrorCode::BadParams, "anchor_radius and domain_halfwidth must be positive");
      }
      const double sector = 2.0 * std::numbers::pi / n;
      Matrix anchors(n, 2);
      for (int k = 0; k < n; ++k) {
        const double angle = sector * (k + 0.2 * (unit(rng) - 0.5));
        const double radius = spec.anchor_radius * (1.0 + 0.1 * (unit(rng) - 0.5));
        anchors(k, 0) = radius * std::cos(angle);
        anchors(k, 1) = radius * std::sin(angle);
      }
      truth.resize(2);
      truth << 2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0;
      Vector ranges(n);
      for (int k = 0; k < n; ++k) {
        ranges[k] = (truth - anchors.row(k).transpose()).norm() + spec.noise * gauss(rng);
      }
      auto loc = std::make_shared<LocalizationModel>(std::move(anchors), std::move(ranges));
      minimizer = refine_minimizer(*loc, truth);
      lo = truth.array() - spec.domain_halfwidth;
      hi = truth.array() + spec.domain_halfwidth;
      model = std::move(loc);
      break;
    }
  }

  BoxDomain domain(lo, hi);
  if (!minimizer.allFinite() || !domain.contains(minimizer)) {
    throw Error(ErrorCode::BadParams, "noise too large: the minimizer falls outside the domain");
  }
  return NlsProblem(std::move(model), std::move(domain), std::move(minimizer), std::move(truth));
}

}  // namespace dgn
