#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

#include "dgn/error.hpp"
#include "dgn/network.hpp"

namespace dgn {

Topology::Topology(int nodes, const std::vector<std::pair<int, int>>& edges)
    : n_(nodes), adj_(static_cast<std::size_t>(std::max(nodes, 0)) * std::max(nodes, 0), 0) {
  if (nodes < 1) throw Error(ErrorCode::BadParams, "topology needs at least one node");
  for (int k = 0; k < n_; ++k) adj_[static_cast<std::size_t>(k) * n_ + k] = 1;
  for (const auto& [k, l] : edges) {
    if (k < 0 || l < 0 || k >= n_ || l >= n_) {
      throw Error(ErrorCode::BadParams, "edge (" + std::to_string(k) + "," + std::to_string(l) + ") out of range");
    }
    adj_[static_cast<std::size_t>(k) * n_ + l] = 1;
    adj_[static_cast<std::size_t>(l) * n_ + k] = 1;
  }
  nbrs_.resize(n_);
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l)
      if (linked(k, l)) nbrs_[k].push_back(l);
}

bool Topology::connected() const {
  std::vector<char> seen(n_, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int count = 1;
  while (!frontier.empty()) {
    const int k = frontier.front();
    frontier.pop();
    for (int l : nbrs_[k]) {
      if (!seen[l]) {
        seen[l] = 1;
        ++count;
        frontier.push(l);
      }
    }
  }
  return count == n_;
}

std::vector<std::pair<int, int>> Topology::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k < n_; ++k)
    for (int l = k + 1; l < n_; ++l)
      if (linked(k, l)) out.emplace_back(k, l);
  return out;
}

Topology Topology::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) throw Error(ErrorCode::BadParams, "permutation has wrong length");
  std::vector<std::pair<int, int>> e;
  for (const auto& [k, l] : edges()) e.emplace_back(perm[k], perm[l]);
  return Topology(n_, e);
}

std::string_view to_string(TopologyKind kind) noexcept {
  switch (kind) {
    case TopologyKind::Complete: return "complete";
    case TopologyKind::Ring: return "ring";
    case TopologyKind::Path: return "path";
    case TopologyKind::RandomGeometric: return "random_geometric";
    case TopologyKind::FromEdges: return "from_edges";
  }
  return "unknown";
}

TopologyKind parse_topology_kind(std::string_view text) {
  for (TopologyKind k : {TopologyKind::Complete, TopologyKind::Ring, TopologyKind::Path,
                         TopologyKind::RandomGeometric, TopologyKind::FromEdges}) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorCode::BadParams, "unknown topology kind '" + std::string(text) + "'");
}

Topology build_topology(const TopologySpec& spec) {
  const int n = spec.nodes;
  if (n < 1) throw Error(ErrorCode::BadParams, "topology needs at least one node");
  std::vector<std::pair<int, int>> edges;
  switch (spec.kind) {
    case TopologyKind::Complete:
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) edges.emplace_back(k, l);
      return Topology(n, edges);
    case TopologyKind::Ring:
      for (int k = 0; k + 1 < n; ++k) edges.emplace_back(k, k + 1);
      if (n >= 3) edges.emplace_back(n - 1, 0);
      return Topology(n, edges);
    case TopologyKind::Path:
      for (int k = 0; k + 1 < n; ++k) edges.emplace_back(k, k + 1);
      return Topology(n, edges);
    case TopologyKind::FromEdges:
      return Topology(n, spec.edges);
    case TopologyKind::RandomGeometric: {
      if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) {
        throw Error(ErrorCode::BadParams, "random_geometric radius must be positive");
      }
      std::mt19937_64 rng(spec.seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<double> px(n), py(n);
      for (int attempt = 0; attempt < 1000; ++attempt) {
        for (int k = 0; k < n; ++k) {
          px[k] = unit(rng);
          py[k] = unit(rng);
        }
        edges.clear();
        for (int k = 0; k < n; ++k)
          for (int l = k + 1; l < n; ++l)
            if (std::hypot(px[k] - px[l], py[k] - py[l]) <= spec.radius) edges.emplace_back(k, l);
        Topology t(n, edges);
        if (t.connected()) return t;
      }
      throw Error(ErrorCode::DisconnectedAfterRetries, "no connected geometric graph within 1000 draws");
    }
  }
  throw Error(ErrorCode::BadParams, "unhandled topology kind");
}

Topology read_edge_list(std::istream& in) {
  std::string line;
  int lineno = 0;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    if (n < 0) {
      if (!(ls >> n) || n < 1) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected node count");
      }
    } else {
      int k = 0, l = 0;
      if (!(ls >> k >> l)) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 'k l'");
      }
      if (k < 1 || l < 1 || k > n || l > n) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": node index out of range");
      }
      edges.emplace_back(k - 1, l - 1);
    }
    std::string rest;
    if (ls >> rest) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": trailing text");
  }
  if (n < 0) throw Error(ErrorCode::ParseError, "empty edge list");
  return Topology(n, edges);
}

void write_edge_list(const Topology& topology, std::ostream& out) {
  out << topology.nodes() << '\n';
  for (const auto& [k, l] : topology.edges()) out << k + 1 << ' ' << l + 1 << '\n';
}

std::string_view to_string(CombinationRule rule) noexcept {
  switch (rule) {
    case CombinationRule::Uniform: return "uniform";
    case CombinationRule::Metropolis: return "metropolis";
  }
  return "unknown";
}

CombinationRule parse_combination_rule(std::string_view text) {
  if (text == "uniform") return CombinationRule::Uniform;
  if (text == "metropolis") return CombinationRule::Metropolis;
  throw Error(ErrorCode::BadParams, "unknown combination rule '" + std::string(text) + "'");
}

CombinationMatrix::CombinationMatrix(const Topology& topology, Eigen::MatrixXd weights) : w_(std::move(weights)) {
  const int n = topology.nodes();
  if (w_.rows() != n || w_.cols() != n) throw Error(ErrorCode::InvalidCombination, "weights must be N x N");
  for (int k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int l = 0; l < n; ++l) {
      const double c = w_(k, l);
      if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidCombination, "negative or non-finite weight");
      if (c != 0.0 && !topology.linked(k, l)) {
        throw Error(ErrorCode::InvalidCombination,
                    "weight on non-neighbour pair (" + std::to_string(k) + "," + std::to_string(l) + ")");
      }
      sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidCombination, "row " + std::to_string(k) + " does not sum to one");
    }
  }
}

CombinationMatrix CombinationMatrix::identity(const Topology& topology) {
  return CombinationMatrix(topology, Eigen::MatrixXd::Identity(topology.nodes(), topology.nodes()));
}

CombinationMatrix combination_matrix(const Topology& topology, CombinationRule rule) {
  const int n = topology.nodes();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const auto& nb = topology.neighbors(k);
    if (rule == CombinationRule::Uniform) {
      for (int l : nb) w(k, l) = 1.0 / static_cast<double>(nb.size());
      continue;
    }
    double off = 0.0;
    for (int l : nb) {
      if (l == k) continue;
      w(k, l) = 1.0 / std::max(topology.degree(k), topology.degree(l));
      off += w(k, l);
    }
    w(k, k) = std::max(0.0, 1.0 - off);
  }
  return CombinationMatrix(topology, std::move(w));
}

Eigen::MatrixXd extend(const CombinationMatrix& c, int m) {
  if (m < 1) throw Error(ErrorCode::BadParams, "block size must be >= 1");
  const int n = c.nodes();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n) * m, static_cast<Eigen::Index>(n) * m);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      if (c(k, l) != 0.0)
        for (int j = 0; j < m; ++j) g(k * m + j, l * m + j) = c(k, l);
  return g;
}

int NeighborhoodStats::max_n() const { return *std::max_element(n.begin(), n.end()); }
int NeighborhoodStats::min_n() const { return *std::min_element(n.begin(), n.end()); }

NeighborhoodStats neighborhood_stats(const Topology& topology) {
  const int n = topology.nodes();
  NeighborhoodStats s;
  s.n.resize(n);
  s.common = Eigen::MatrixXi::Zero(n, n);
  s.only_first = Eigen::MatrixXi::Zero(n, n);
  for (int k = 0; k < n; ++k) s.n[k] = static_cast<int>(topology.neighbors(k).size());
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      int both = 0;
      for (int u : topology.neighbors(k))
        if (topology.linked(l, u)) ++both;
      s.common(k, l) = both;
      s.only_first(k, l) = s.n[k] - both;
    }
  }
  return s;
}

}  // namespace dgn
