#pragma once
// Centralized, non-cooperative and cooperative diffusion Gauss-Newton
// iterations, run as synchronous rounds over a simulated network.
//
// Node estimates are stacked as x_G = col{x_1, ..., x_N} (length N*M);
// node k occupies segment [k*M, (k+1)*M).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgn/network.hpp"
#include "dgn/problem.hpp"

namespace dgn {

enum class SolverMode { Centralized, Noncooperative, Diffusion };

std::string_view to_string(SolverMode mode) noexcept;
SolverMode parse_solver_mode(std::string_view text);

// Where node k evaluates neighbour l's residual and Jacobian in the
// adaptation phase: at l's aggregate (as written) or at k's own aggregate.
enum class AdaptAt { NeighborAggregates, OwnAggregate };

std::string_view to_string(AdaptAt where) noexcept;
AdaptAt parse_adapt_at(std::string_view text);

struct SolverConfig {
  double alpha = 1.0;
  int max_iters = 100;
  double tol = 0.0;
  SolverMode mode = SolverMode::Diffusion;
  AdaptAt adapt_at = AdaptAt::NeighborAggregates;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

// Condition-number ceiling for the M x M normal matrices.
inline constexpr double kMaxCondition = 1e12;

// [sum_l F_l^T F_l]^{-1} sum_l F_l^T f_l with term l evaluated at points[l].
// Throws SingularNormalMatrix when the normal matrix is not safely SPD.
Vector gauss_newton_direction(const NlsProblem& problem, const std::vector<int>& terms,
                              const std::vector<const Vector*>& points);

Vector centralized_step(const NlsProblem& problem, const Vector& x, double alpha);

// d_G: every node's descent with all neighbour terms at its own estimate.
Vector noncooperative_descents(const NlsProblem& problem, const Topology& topology, const Vector& x_g);

Vector noncooperative_step(const NlsProblem& problem, const Topology& topology, const Vector& x_g,
                           double alpha, Vector* descents = nullptr);

struct DiffusionStep {
  Vector next;        // x_G^{i+1}
  Vector aggregates;  // X_G^i
  Vector descents;    // D_G^i
};

DiffusionStep diffusion_step(const NlsProblem& problem, const Network& network, const Vector& x_g,
                             double alpha, AdaptAt adapt_at = AdaptAt::NeighborAggregates);

enum class StopReason { Tol, MaxIters, Singular, OutOfDomain };

std::string_view to_string(StopReason reason) noexcept;

struct IterationRecord {
  int iteration = 0;
  Vector x_g;                       // state at this iteration
  std::optional<Vector> aggregates; // X_G (diffusion)
  std::optional<Vector> coop_descent;     // D_G used to leave this state
  std::optional<Vector> noncoop_descent;  // d_G at the same state
  double global_error = 0.0;        // ||x_G - stacked x*||
  Vector node_errors;               // ||x_k - x*||
};

struct RunTrace {
  SolverMode mode = SolverMode::Diffusion;
  AdaptAt adapt_at = AdaptAt::NeighborAggregates;
  int nodes = 0;
  int dim = 0;
  double alpha = 0.0;
  std::vector<IterationRecord> records;  // records[i] holds state i
  StopReason stop_reason = StopReason::MaxIters;
  std::string stop_detail;

  // Number of updates performed.
  int iterations() const { return static_cast<int>(records.size()) - 1; }
  double final_global_error() const { return records.back().global_error; }
};

// Runs from x0 replicated at every node. Centralized mode keeps every node
// at the fusion-centre estimate. Step failures end the run and are reported
// through stop_reason rather than thrown.
RunTrace run(const NlsProblem& problem, const Network& network, const SolverConfig& config, const Vector& x0);

// ||x_G - col{x*,...,x*}|| and the per-node pieces.
double global_error(const Vector& x_g, const Vector& minimizer, Vector* per_node = nullptr);

}  // namespace dgn
