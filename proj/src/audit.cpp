#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dgn/analysis.hpp"
#include "dgn/error.hpp"
#include "dgn/simd/kernels.hpp"

namespace dgn {

namespace {

Vector node_state(const Vector& x_g, int k, int m) { return x_g.segment(static_cast<Eigen::Index>(k) * m, m); }

Matrix normal_matrix(const NlsProblem& problem, const std::vector<int>& terms, const std::vector<const Vector*>& at) {
  const int m = problem.dim();
  Matrix q = Matrix::Zero(m, m);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const RowVector row = problem.jacobian_row(terms[t], *at[t]);
    q.noalias() += row.transpose() * row;
  }
  return q;
}

}  // namespace

AuditReport audit_trace(const RunTrace& trace, const ConvergenceCertificate& cert, const Network& network,
                        const BoundsProfile& bounds, const NlsProblem& problem) {
  if (trace.mode != SolverMode::Diffusion) throw Error(ErrorCode::InvalidArgument, "audit needs a diffusion trace");
  const int n = trace.nodes, m = trace.dim;
  if (network.nodes() != n || problem.nodes() != n || problem.dim() != m) {
    throw Error(ErrorCode::BadDimensions, "trace, network and problem disagree");
  }
  const int steps = trace.iterations();
  for (int i = 0; i < steps; ++i) {
    const IterationRecord& r = trace.records[i];
    if (!r.aggregates || !r.coop_descent || !r.noncoop_descent) {
      throw Error(ErrorCode::TraceIncomplete, "iteration " + std::to_string(i) + " lacks recorded descents");
    }
  }

  const LemmaConstants& lc = cert.constants;
  const double alpha = trace.alpha;
  const double g = cert.g_norm;
  const NeighborhoodStats stats = neighborhood_stats(network.topology);
  const double omega_norm = std::sqrt(static_cast<double>(stats.max_n()));
  const double e_growth = 1.0 + alpha * bounds.gamma_f * cert.lambda_bound * omega_norm;
  const std::vector<double> pi =
      pi_sequence(lc.a1_max, lc.a2_max, std::max({steps, lc.horizon, 1}));

  const Eigen::MatrixXd& cm = network.weights.matrix();
  std::vector<double> weights(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) weights[static_cast<std::size_t>(k) * n + l] = cm(k, l);
  const Vector x_star = problem.minimizer().replicate(n, 1);

  AuditReport rep;
  auto add = [&](int i, const char* check, double lhs, double rhs, bool strict, bool info = false) {
    AuditRow row{i, check, lhs, rhs, strict ? lhs < rhs : lhs <= rhs, info};
    if (!info && !row.pass) ++rep.failed;
    rep.rows.push_back(std::move(row));
  };

  for (int i = 0; i < steps; ++i) {
    const IterationRecord& r = trace.records[i];
    const Vector& x = r.x_g;
    const Vector& agg = *r.aggregates;
    const double e = r.global_error;
    const double e_next = trace.records[i + 1].global_error;
    const double dd = (*r.coop_descent - *r.noncoop_descent).norm();
    const double pi_i = pi[static_cast<std::size_t>(std::max(i, 1) - 1)];

    add(i, "a", e_next, lc.t1 * g * g * e * e + lc.t2 * g * e + alpha * lc.xi, false);
    add(i, "a_loose", e_next, lc.t1 * e * e + (lc.t2 + cert.g_frobenius + 1.0) * e + alpha * dd, false, true);
    add(i, "b", dd, lc.xi, false);

    double raw = 0.0, mixed = 0.0;
    for (int k = 0; k < n; ++k) {
      const Vector xk = node_state(x, k, m);
      for (int l = 0; l < n; ++l) {
        raw = std::max(raw, (node_state(x, l, m) - xk).norm());
        mixed = std::max(mixed, (node_state(agg, l, m) - xk).norm());
      }
    }
    add(i, "c_raw", raw, pi_i, false);
    add(i, "c_agg", mixed, n * pi_i, false);

    std::vector<Vector> xs(n), as(n);
    for (int k = 0; k < n; ++k) {
      xs[k] = node_state(x, k, m);
      as[k] = node_state(agg, k, m);
    }
    double contraction = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto& nb = network.topology.neighbors(k);
      std::vector<const Vector*> own(nb.size(), &xs[k]);
      std::vector<const Vector*> coop;
      coop.reserve(nb.size());
      for (int l : nb) coop.push_back(trace.adapt_at == AdaptAt::NeighborAggregates ? &as[l] : &as[k]);
      const Matrix q_own = normal_matrix(problem, nb, own);
      const Matrix q_coop = normal_matrix(problem, nb, coop);
      const Matrix s = q_coop - q_own;
      const Matrix prod = q_own.ldlt().solve(s);
      contraction = std::max(contraction, spectral_norm(prod));
      Eigen::SelfAdjointEigenSolver<Matrix> eig(q_coop, Eigen::EigenvaluesOnly);
      rep.max_lambda_measured = std::max(rep.max_lambda_measured, 1.0 / eig.eigenvalues().minCoeff());
    }
    add(i, "d", contraction, 1.0, true);

    Vector diff = x - x_star, mixed_diff(diff.size());
    simd::combine_rows(weights, std::span<const double>(diff.data(), diff.size()),
                       std::span<double>(mixed_diff.data(), mixed_diff.size()), n, m);
    add(i, "e", e_next, e_growth * mixed_diff.norm(), false);
  }
  rep.iterations_audited = steps;
  return rep;
}

}  // namespace dgn
