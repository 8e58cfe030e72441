#pragma once

#include "dgn/network.hpp"
#include "dgn/problem.hpp"
#include "dgn/solvers.hpp"

namespace dgn::testing {

inline Network make_network(TopologyKind kind, int n, CombinationRule rule = CombinationRule::Uniform) {
  TopologySpec s;
  s.kind = kind;
  s.nodes = n;
  Topology t = build_topology(s);
  CombinationMatrix c = combination_matrix(t, rule);
  return Network{std::move(t), std::move(c)};
}

inline Network identity_network(TopologyKind kind, int n) {
  TopologySpec s;
  s.kind = kind;
  s.nodes = n;
  Topology t = build_topology(s);
  CombinationMatrix c = CombinationMatrix::identity(t);
  return Network{std::move(t), std::move(c)};
}

inline ProblemSpec problem_spec(ProblemKind kind, int n, int m, double noise, std::uint64_t seed) {
  ProblemSpec s;
  s.kind = kind;
  s.nodes = n;
  s.dim = m;
  s.noise = noise;
  s.seed = seed;
  return s;
}

inline SolverConfig solver(SolverMode mode, double alpha, int iters, double tol = 0.0,
                           AdaptAt adapt = AdaptAt::NeighborAggregates) {
  SolverConfig c;
  c.mode = mode;
  c.alpha = alpha;
  c.max_iters = iters;
  c.tol = tol;
  c.adapt_at = adapt;
  return c;
}

// Largest absolute difference between the stacked states of two traces;
// infinity when their lengths differ.
inline double max_state_difference(const RunTrace& a, const RunTrace& b) {
  if (a.records.size() != b.records.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    worst = std::max(worst, (a.records[i].x_g - b.records[i].x_g).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace dgn::testing
