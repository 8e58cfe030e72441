#pragma once
// Flat "key = value" experiment configuration with dotted namespaces.
// Lines starting with '#' are comments. Unknown keys are rejected.

#include <iosfwd>
#include <optional>
#include <string>

#include "dgn/network.hpp"
#include "dgn/problem.hpp"
#include "dgn/solvers.hpp"

namespace dgn {

struct ExperimentConfig {
  ProblemSpec problem;
  TopologySpec topology;
  std::string edges_file;  // topology.kind = from_edges
  CombinationRule rule = CombinationRule::Uniform;
  SolverConfig solver;

  // Starting point: init.x0 when given, otherwise x* + init.offset in every
  // component.
  double init_offset = 0.1;
  std::optional<Vector> init_x0;

  int horizon = 0;  // 0: solver.max_iters
  double safety_factor = 1.05;
  int bound_samples = 256;
  std::uint64_t bound_seed = 0;

  std::string output_dir = "out";

  // Throws ValidationError naming the first offending key.
  void validate() const;
};

// ParseError (with line number) for malformed lines; ValidationError naming
// the key for unknown, duplicate, missing or out-of-range entries.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Commented template; parse_config(to_text(c)) reproduces c and
// to_text(parse_config(to_text(c))) == to_text(c).
std::string to_text(const ExperimentConfig& config);
ExperimentConfig default_config();

// Topology with the edges file resolved (relative to base_dir).
Topology build_topology(const ExperimentConfig& config, const std::string& base_dir = ".");
Network build_network(const ExperimentConfig& config, const std::string& base_dir = ".");
Vector initial_point(const ExperimentConfig& config, const NlsProblem& problem);

}  // namespace dgn
