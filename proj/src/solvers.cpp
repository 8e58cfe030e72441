#include <cmath>

#include "dgn/error.hpp"
#include "dgn/simd/kernels.hpp"
#include "dgn/solvers.hpp"

namespace dgn {

namespace {

std::span<const double> segment(const Vector& v, int k, int m) {
  return {v.data() + static_cast<std::ptrdiff_t>(k) * m, static_cast<std::size_t>(m)};
}

Vector node_state(const Vector& x_g, int k, int m) { return x_g.segment(static_cast<Eigen::Index>(k) * m, m); }

// x - alpha d, checked against the box.
Vector apply_step(const NlsProblem& problem, const Vector& x, double alpha, const Vector& d) {
  Vector next = x - alpha * d;
  if (!next.allFinite()) throw Error(ErrorCode::NonFiniteValue, "update produced a non-finite estimate");
  if (!problem.domain().contains(next)) throw Error(ErrorCode::OutOfDomain, "update left the domain");
  return next;
}

std::vector<double> row_major(const Eigen::MatrixXd& a) {
  std::vector<double> out(static_cast<std::size_t>(a.size()));
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out[static_cast<std::size_t>(r * a.cols() + c)] = a(r, c);
  return out;
}

}  // namespace

std::string_view to_string(SolverMode mode) noexcept {
  switch (mode) {
    case SolverMode::Centralized: return "centralized";
    case SolverMode::Noncooperative: return "noncooperative";
    case SolverMode::Diffusion: return "diffusion";
  }
  return "unknown";
}

SolverMode parse_solver_mode(std::string_view text) {
  for (SolverMode m : {SolverMode::Centralized, SolverMode::Noncooperative, SolverMode::Diffusion}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorCode::BadParams, "unknown solver mode '" + std::string(text) + "'");
}

std::string_view to_string(AdaptAt where) noexcept {
  return where == AdaptAt::NeighborAggregates ? "neighbor_aggregates" : "own_aggregate";
}

AdaptAt parse_adapt_at(std::string_view text) {
  if (text == "neighbor_aggregates") return AdaptAt::NeighborAggregates;
  if (text == "own_aggregate") return AdaptAt::OwnAggregate;
  throw Error(ErrorCode::BadParams, "unknown adapt_at '" + std::string(text) + "'");
}

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::Tol: return "tol";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::Singular: return "singular";
    case StopReason::OutOfDomain: return "out_of_domain";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::ValidationError, "solver.alpha must lie in (0, 1]");
  if (max_iters < 1) throw Error(ErrorCode::ValidationError, "solver.max_iters must be >= 1");
  if (!(tol >= 0.0) || !std::isfinite(tol)) throw Error(ErrorCode::ValidationError, "solver.tol must be >= 0");
}

Vector gauss_newton_direction(const NlsProblem& problem, const std::vector<int>& terms,
                              const std::vector<const Vector*>& points) {
  const int m = problem.dim();
  Matrix normal = Matrix::Zero(m, m);
  Vector rhs = Vector::Zero(m);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const RowVector row = problem.jacobian_row(terms[t], *points[t]);
    const double r = problem.residual(terms[t], *points[t]);
    normal.noalias() += row.transpose() * row;
    rhs.noalias() += row.transpose() * r;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(normal, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff(), lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmax / lmin > kMaxCondition) {
    throw Error(ErrorCode::SingularNormalMatrix, "normal matrix is singular or too ill-conditioned");
  }
  return normal.llt().solve(rhs);
}

Vector centralized_step(const NlsProblem& problem, const Vector& x, double alpha) {
  std::vector<int> terms(static_cast<std::size_t>(problem.nodes()));
  for (int k = 0; k < problem.nodes(); ++k) terms[k] = k;
  const std::vector<const Vector*> points(terms.size(), &x);
  return apply_step(problem, x, alpha, gauss_newton_direction(problem, terms, points));
}

Vector noncooperative_descents(const NlsProblem& problem, const Topology& topology, const Vector& x_g) {
  const int n = problem.nodes(), m = problem.dim();
  if (topology.nodes() != n || x_g.size() != static_cast<Eigen::Index>(n) * m) {
    throw Error(ErrorCode::BadDimensions, "stacked state does not match the network");
  }
  Vector d(x_g.size());
  for (int k = 0; k < n; ++k) {
    const Vector xk = node_state(x_g, k, m);
    const auto& nb = topology.neighbors(k);
    try {
      d.segment(static_cast<Eigen::Index>(k) * m, m) =
          gauss_newton_direction(problem, nb, std::vector<const Vector*>(nb.size(), &xk));
    } catch (const Error& e) {
      throw Error(e.code(), "node " + std::to_string(k) + ": " + e.what());
    }
  }
  return d;
}

Vector noncooperative_step(const NlsProblem& problem, const Topology& topology, const Vector& x_g, double alpha,
                           Vector* descents) {
  const int n = problem.nodes(), m = problem.dim();
  const Vector d = noncooperative_descents(problem, topology, x_g);
  Vector next(x_g.size());
  for (int k = 0; k < n; ++k) {
    next.segment(static_cast<Eigen::Index>(k) * m, m) =
        apply_step(problem, node_state(x_g, k, m), alpha, node_state(d, k, m));
  }
  if (descents) *descents = d;
  return next;
}

DiffusionStep diffusion_step(const NlsProblem& problem, const Network& network, const Vector& x_g, double alpha,
                             AdaptAt adapt_at) {
  const int n = problem.nodes(), m = problem.dim();
  if (network.nodes() != n || x_g.size() != static_cast<Eigen::Index>(n) * m) {
    throw Error(ErrorCode::BadDimensions, "stacked state does not match the network");
  }
  DiffusionStep out;
  out.aggregates.resize(x_g.size());
  out.descents.resize(x_g.size());
  out.next.resize(x_g.size());

  // Round 1: exchange raw estimates and combine.
  const std::vector<double> weights = row_major(network.weights.matrix());
  simd::combine_rows(weights, std::span<const double>(x_g.data(), x_g.size()),
                     std::span<double>(out.aggregates.data(), out.aggregates.size()), n, m);

  // Round 2: exchange aggregates, then adapt.
  std::vector<Vector> agg(n);
  for (int k = 0; k < n; ++k) agg[k] = node_state(out.aggregates, k, m);
  for (int k = 0; k < n; ++k) {
    const auto& nb = network.topology.neighbors(k);
    std::vector<const Vector*> points;
    points.reserve(nb.size());
    for (int l : nb) points.push_back(adapt_at == AdaptAt::NeighborAggregates ? &agg[l] : &agg[k]);
    Vector d;
    try {
      d = gauss_newton_direction(problem, nb, points);
    } catch (const Error& e) {
      throw Error(e.code(), "node " + std::to_string(k) + ": " + e.what());
    }
    out.descents.segment(static_cast<Eigen::Index>(k) * m, m) = d;
    out.next.segment(static_cast<Eigen::Index>(k) * m, m) = apply_step(problem, agg[k], alpha, d);
  }
  return out;
}

double global_error(const Vector& x_g, const Vector& minimizer, Vector* per_node) {
  const int m = static_cast<int>(minimizer.size());
  const int n = static_cast<int>(x_g.size() / m);
  Vector diff = x_g - minimizer.replicate(n, 1);
  double total = 0.0;
  if (per_node) per_node->resize(n);
  for (int k = 0; k < n; ++k) {
    const double sq = simd::squared_norm(segment(diff, k, m));
    total += sq;
    if (per_node) (*per_node)[k] = std::sqrt(sq);
  }
  return std::sqrt(total);
}

RunTrace run(const NlsProblem& problem, const Network& network, const SolverConfig& config, const Vector& x0) {
  config.validate();
  const int n = problem.nodes(), m = problem.dim();
  if (network.nodes() != n) throw Error(ErrorCode::BadDimensions, "network and problem node counts differ");
  problem.require_in_domain(x0);

  RunTrace trace;
  trace.mode = config.mode;
  trace.adapt_at = config.adapt_at;
  trace.nodes = n;
  trace.dim = m;
  trace.alpha = config.alpha;

  auto push_state = [&](Vector x_g) {
    IterationRecord rec;
    rec.iteration = static_cast<int>(trace.records.size());
    rec.global_error = global_error(x_g, problem.minimizer(), &rec.node_errors);
    rec.x_g = std::move(x_g);
    trace.records.push_back(std::move(rec));
  };
  push_state(x0.replicate(n, 1));

  const double stop_norm = config.tol * std::sqrt(static_cast<double>(n));
  for (int i = 0; i < config.max_iters; ++i) {
    IterationRecord& cur = trace.records.back();
    Vector next;
    try {
      switch (config.mode) {
        case SolverMode::Centralized:
          next = centralized_step(problem, node_state(cur.x_g, 0, m), config.alpha).replicate(n, 1);
          break;
        case SolverMode::Noncooperative: {
          Vector d;
          next = noncooperative_step(problem, network.topology, cur.x_g, config.alpha, &d);
          cur.noncoop_descent = std::move(d);
          break;
        }
        case SolverMode::Diffusion: {
          DiffusionStep step = diffusion_step(problem, network, cur.x_g, config.alpha, config.adapt_at);
          // Shadow non-cooperative descent at the same state, for diagnostics only.
          try {
            cur.noncoop_descent = noncooperative_descents(problem, network.topology, cur.x_g);
          } catch (const Error&) {
          }
          cur.aggregates = std::move(step.aggregates);
          cur.coop_descent = std::move(step.descents);
          next = std::move(step.next);
          break;
        }
      }
    } catch (const Error& e) {
      trace.stop_reason = e.code() == ErrorCode::OutOfDomain ? StopReason::OutOfDomain : StopReason::Singular;
      trace.stop_detail = e.what();
      return trace;
    }
    const double moved = (next - cur.x_g).norm();
    push_state(std::move(next));
    if (moved <= stop_norm) {
      trace.stop_reason = StopReason::Tol;
      return trace;
    }
  }
  trace.stop_reason = StopReason::MaxIters;
  return trace;
}

}  // namespace dgn
