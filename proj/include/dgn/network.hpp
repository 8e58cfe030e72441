#pragma once
// Communication topology, combination weights and their Kronecker lift.

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dgn {

// Symmetric adjacency with mandatory self-loops: every node is a member of
// its own neighbourhood.
class Topology {
 public:
  // Builds from an undirected edge list (0-indexed). Self-loops are added.
  // Throws BadParams on out-of-range endpoints.
  Topology(int nodes, const std::vector<std::pair<int, int>>& edges);

  int nodes() const { return n_; }
  bool linked(int k, int l) const { return adj_[static_cast<std::size_t>(k) * n_ + l] != 0; }
  // Neighbourhood of k in ascending order, k included.
  const std::vector<int>& neighbors(int k) const { return nbrs_[k]; }
  int degree(int k) const { return static_cast<int>(nbrs_[k].size()) - 1; }
  bool connected() const;
  std::vector<std::pair<int, int>> edges() const;  // k < l

  Topology permuted(const std::vector<int>& perm) const;  // node k -> perm[k]

 private:
  int n_;
  std::vector<unsigned char> adj_;
  std::vector<std::vector<int>> nbrs_;
};

enum class TopologyKind { Complete, Ring, Path, RandomGeometric, FromEdges };

std::string_view to_string(TopologyKind kind) noexcept;
TopologyKind parse_topology_kind(std::string_view text);

struct TopologySpec {
  TopologyKind kind = TopologyKind::Complete;
  int nodes = 1;
  double radius = 0.5;                          // random_geometric
  std::vector<std::pair<int, int>> edges;       // from_edges, 0-indexed
  std::uint64_t seed = 0;
};

Topology build_topology(const TopologySpec& spec);

// Edge-list text: first line "N", then one "k l" pair per line, 1-indexed.
Topology read_edge_list(std::istream& in);
void write_edge_list(const Topology& topology, std::ostream& out);

enum class CombinationRule { Uniform, Metropolis };

std::string_view to_string(CombinationRule rule) noexcept;
CombinationRule parse_combination_rule(std::string_view text);

// Row-stochastic nonnegative weights whose support lies inside the
// topology's neighbourhoods.
class CombinationMatrix {
 public:
  // Validates the support, nonnegativity and unit row sums (1e-12);
  // throws InvalidCombination otherwise.
  CombinationMatrix(const Topology& topology, Eigen::MatrixXd weights);

  static CombinationMatrix identity(const Topology& topology);

  int nodes() const { return static_cast<int>(w_.rows()); }
  double operator()(int k, int l) const { return w_(k, l); }
  const Eigen::MatrixXd& matrix() const { return w_; }

 private:
  Eigen::MatrixXd w_;
};

CombinationMatrix combination_matrix(const Topology& topology, CombinationRule rule);

// G = C kron I_M.
Eigen::MatrixXd extend(const CombinationMatrix& c, int m);

// Largest eigenvalue modulus. Power iteration first; falls back to a full
// eigen-decomposition when the dominant eigenvalue is not simple and real.
double spectral_radius(const Eigen::MatrixXd& a);

// ||A||_2 = sqrt(rho(A^T A)).
double spectral_norm(const Eigen::MatrixXd& a);

struct NeighborhoodStats {
  std::vector<int> n;          // |N_k|
  Eigen::MatrixXi common;      // n_kl = |N_k ∩ N_l|
  Eigen::MatrixXi only_first;  // n_{k|l} = |N_k \ N_l|

  int n_k_given_l(int k, int l) const { return only_first(k, l); }
  int n_l_given_k(int k, int l) const { return only_first(l, k); }
  int max_n() const;
  int min_n() const;
};

NeighborhoodStats neighborhood_stats(const Topology& topology);

struct Network {
  Topology topology;
  CombinationMatrix weights;

  int nodes() const { return topology.nodes(); }
};

}  // namespace dgn
