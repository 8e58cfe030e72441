#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dgn/config.hpp"
#include "dgn/error.hpp"

namespace dgn {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
T parse_number(const std::string& key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::ValidationError, key + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

template <class E, class F>
E parse_enum(const std::string& key, std::string_view text, F parse) {
  try {
    return parse(text);
  } catch (const Error&) {
    throw Error(ErrorCode::ValidationError, key + ": unknown value '" + std::string(text) + "'");
  }
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Key {
  const char* name;
  const char* comment;
  bool required;
  std::function<void(ExperimentConfig&, const std::string&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<Key>& keys() {
  using C = ExperimentConfig;
  using S = std::string;
  using V = std::string_view;
  static const std::vector<Key> table = {
      {"problem.kind", "linear | scalar_sqrt | exponential_fit | localization", true,
       [](C& c, const S& k, V v) { c.problem.kind = parse_enum<ProblemKind>(k, v, parse_problem_kind); },
       [](const C& c) { return S(to_string(c.problem.kind)); }},
      {"problem.nodes", "number of nodes N", true,
       [](C& c, const S& k, V v) { c.problem.nodes = parse_number<int>(k, v); },
       [](const C& c) { return std::to_string(c.problem.nodes); }},
      {"problem.dim", "parameter dimension M (scalar_sqrt: 1, exponential_fit and localization: 2)", true,
       [](C& c, const S& k, V v) { c.problem.dim = parse_number<int>(k, v); },
       [](const C& c) { return std::to_string(c.problem.dim); }},
      {"problem.noise", "measurement noise standard deviation", false,
       [](C& c, const S& k, V v) { c.problem.noise = parse_number<double>(k, v); },
       [](const C& c) { return format_double(c.problem.noise); }},
      {"problem.seed", nullptr, false,
       [](C& c, const S& k, V v) { c.problem.seed = parse_number<std::uint64_t>(k, v); },
       [](const C& c) { return std::to_string(c.problem.seed); }},
      {"problem.anchor_radius", "localization: anchor circle radius", false,
       [](C& c, const S& k, V v) { c.problem.anchor_radius = parse_number<double>(k, v); },
       [](const C& c) { return format_double(c.problem.anchor_radius); }},
      {"problem.domain_halfwidth", "localization: half-width of the search box around the target", false,
       [](C& c, const S& k, V v) { c.problem.domain_halfwidth = parse_number<double>(k, v); },
       [](const C& c) { return format_double(c.problem.domain_halfwidth); }},
      {"topology.kind", "complete | ring | path | random_geometric | from_edges", true,
       [](C& c, const S& k, V v) { c.topology.kind = parse_enum<TopologyKind>(k, v, parse_topology_kind); },
       [](const C& c) { return S(to_string(c.topology.kind)); }},
      {"topology.radius", "random_geometric: connection radius in the unit square", false,
       [](C& c, const S& k, V v) { c.topology.radius = parse_number<double>(k, v); },
       [](const C& c) { return format_double(c.topology.radius); }},
      {"topology.edges_file", "from_edges: edge list path, relative to this file", false,
       [](C& c, const S&, V v) { c.edges_file = S(v); },
       [](const C& c) { return c.edges_file; }},
      {"topology.seed", nullptr, false,
       [](C& c, const S& k, V v) { c.topology.seed = parse_number<std::uint64_t>(k, v); },
       [](const C& c) { return std::to_string(c.topology.seed); }},
      {"network.rule", "uniform | metropolis", false,
       [](C& c, const S& k, V v) { c.rule = parse_enum<CombinationRule>(k, v, parse_combination_rule); },
       [](const C& c) { return S(to_string(c.rule)); }},
      {"solver.mode", "centralized | noncooperative | diffusion (run only)", false,
       [](C& c, const S& k, V v) { c.solver.mode = parse_enum<SolverMode>(k, v, parse_solver_mode); },
       [](const C& c) { return S(to_string(c.solver.mode)); }},
      {"solver.alpha", "step size in (0, 1]", true,
       [](C& c, const S& k, V v) { c.solver.alpha = parse_number<double>(k, v); },
       [](const C& c) { return format_double(c.solver.alpha); }},
      {"solver.max_iters", nullptr, true,
       [](C& c, const S& k, V v) { c.solver.max_iters = parse_number<int>(k, v); },
       [](const C& c) { return std::to_string(c.solver.max_iters); }},
      {"solver.tol", "stop when ||x^{i+1} - x^i|| <= tol sqrt(N); 0 runs to max_iters", false,
       [](C& c, const S& k, V v) { c.solver.tol = parse_number<double>(k, v); },
       [](const C& c) { return format_double(c.solver.tol); }},
      {"solver.adapt_at", "neighbor_aggregates | own_aggregate", false,
       [](C& c, const S& k, V v) { c.solver.adapt_at = parse_enum<AdaptAt>(k, v, parse_adapt_at); },
       [](const C& c) { return S(to_string(c.solver.adapt_at)); }},
      {"init.offset", "x0 = x* + offset in every component, unless init.x0 is set", false,
       [](C& c, const S& k, V v) { c.init_offset = parse_number<double>(k, v); },
       [](const C& c) { return format_double(c.init_offset); }},
      {"init.x0", "explicit comma-separated start point", false,
       [](C& c, const S& k, V v) {
         if (v.empty()) {
           c.init_x0.reset();
           return;
         }
         std::vector<double> vals;
         std::size_t pos = 0;
         while (true) {
           const auto comma = v.find(',', pos);
           vals.push_back(parse_number<double>(k, trim(v.substr(pos, comma - pos))));
           if (comma == V::npos) break;
           pos = comma + 1;
         }
         c.init_x0 = Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
       },
       [](const C& c) {
         S out;
         if (!c.init_x0) return out;
         for (Eigen::Index i = 0; i < c.init_x0->size(); ++i) {
           if (i) out += ",";
           out += format_double((*c.init_x0)[i]);
         }
         return out;
       }},
      {"analysis.horizon", "iterations covered by the certificate; 0 uses solver.max_iters", false,
       [](C& c, const S& k, V v) { c.horizon = parse_number<int>(k, v); },
       [](const C& c) { return std::to_string(c.horizon); }},
      {"analysis.safety_factor", "inflation of estimated maxima (minima are divided by it)", false,
       [](C& c, const S& k, V v) { c.safety_factor = parse_number<double>(k, v); },
       [](const C& c) { return format_double(c.safety_factor); }},
      {"analysis.bound_samples", nullptr, false,
       [](C& c, const S& k, V v) { c.bound_samples = parse_number<int>(k, v); },
       [](const C& c) { return std::to_string(c.bound_samples); }},
      {"analysis.bound_seed", nullptr, false,
       [](C& c, const S& k, V v) { c.bound_seed = parse_number<std::uint64_t>(k, v); },
       [](const C& c) { return std::to_string(c.bound_seed); }},
      {"output.dir", nullptr, false, [](C& c, const S&, V v) { c.output_dir = S(v); },
       [](const C& c) { return c.output_dir; }},
  };
  return table;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw Error(ErrorCode::ValidationError, key + " " + what);
}

}  // namespace

void ExperimentConfig::validate() const {
  require(problem.nodes >= 1, "problem.nodes", "must be >= 1");
  require(problem.dim >= 1, "problem.dim", "must be >= 1");
  require(std::isfinite(problem.noise) && problem.noise >= 0.0, "problem.noise", "must be >= 0");
  require(problem.anchor_radius > 0.0 && std::isfinite(problem.anchor_radius), "problem.anchor_radius",
          "must be > 0");
  require(problem.domain_halfwidth > 0.0 && std::isfinite(problem.domain_halfwidth), "problem.domain_halfwidth",
          "must be > 0");
  switch (problem.kind) {
    case ProblemKind::Linear: require(problem.nodes >= problem.dim, "problem.nodes", "must be >= problem.dim"); break;
    case ProblemKind::ScalarSqrt: require(problem.dim == 1, "problem.dim", "must be 1 for scalar_sqrt"); break;
    case ProblemKind::ExponentialFit:
      require(problem.dim == 2, "problem.dim", "must be 2 for exponential_fit");
      require(problem.nodes >= 2, "problem.nodes", "must be >= 2 for exponential_fit");
      break;
    case ProblemKind::Localization:
      require(problem.dim == 2, "problem.dim", "must be 2 for localization");
      require(problem.nodes >= 3, "problem.nodes", "must be >= 3 for localization");
      break;
  }
  require(topology.radius > 0.0, "topology.radius", "must be > 0");
  require(topology.kind != TopologyKind::FromEdges || !edges_file.empty(), "topology.edges_file",
          "is required when topology.kind = from_edges");
  solver.validate();
  require(std::isfinite(init_offset), "init.offset", "must be finite");
  require(!init_x0 || init_x0->size() == problem.dim, "init.x0", "must have problem.dim components");
  require(!init_x0 || init_x0->allFinite(), "init.x0", "must be finite");
  require(horizon >= 0, "analysis.horizon", "must be >= 0");
  require(safety_factor >= 1.0 && std::isfinite(safety_factor), "analysis.safety_factor", "must be >= 1");
  require(bound_samples >= 2, "analysis.bound_samples", "must be >= 2");
  require(!output_dir.empty(), "output.dir", "must not be empty");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty key");
    const auto& table = keys();
    auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return key == k.name; });
    if (it == table.end()) {
      throw Error(ErrorCode::ValidationError, key + ": unknown key (line " + std::to_string(line_no) + ")");
    }
    if (!seen.emplace(key, line_no).second) {
      throw Error(ErrorCode::ValidationError, key + ": duplicate key (line " + std::to_string(line_no) + ")");
    }
    it->set(cfg, key, value);
  }
  for (const Key& k : keys()) {
    if (k.required && !seen.count(k.name)) throw Error(ErrorCode::ValidationError, std::string(k.name) + " is required");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  return parse_config(in);
}

std::string to_text(const ExperimentConfig& config) {
  std::ostringstream os;
  os << "# dgn experiment configuration\n";
  std::string section;
  for (const Key& k : keys()) {
    const std::string name = k.name;
    const std::string ns = name.substr(0, name.find('.'));
    if (ns != section) {
      os << "\n# --- " << ns << "\n";
      section = ns;
    }
    if (k.comment) os << "# " << k.comment << (k.required ? " (required)" : "") << "\n";
    else if (k.required) os << "# (required)\n";
    const std::string value = k.get(config);
    os << name << " =" << (value.empty() ? "" : " " + value) << "\n";
  }
  return os.str();
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.problem.kind = ProblemKind::Localization;
  c.problem.nodes = 6;
  c.problem.dim = 2;
  c.problem.noise = 0.001;
  c.problem.seed = 1;
  c.problem.anchor_radius = 5000.0;
  c.problem.domain_halfwidth = 0.01;
  c.topology.kind = TopologyKind::Complete;
  c.rule = CombinationRule::Uniform;
  c.solver.mode = SolverMode::Diffusion;
  c.solver.alpha = 0.2;
  c.solver.max_iters = 60;
  c.solver.tol = 0.0;
  c.init_offset = 0.001;
  return c;
}

Topology build_topology(const ExperimentConfig& config, const std::string& base_dir) {
  if (config.topology.kind != TopologyKind::FromEdges) {
    TopologySpec spec = config.topology;
    spec.nodes = config.problem.nodes;
    return build_topology(spec);
  }
  std::filesystem::path p(config.edges_file);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::IoError, "cannot open edge list '" + p.string() + "'");
  Topology t = read_edge_list(in);
  if (t.nodes() != config.problem.nodes) {
    throw Error(ErrorCode::ValidationError, "topology.edges_file has " + std::to_string(t.nodes()) +
                                                " nodes but problem.nodes = " + std::to_string(config.problem.nodes));
  }
  return t;
}

Network build_network(const ExperimentConfig& config, const std::string& base_dir) {
  Topology t = build_topology(config, base_dir);
  CombinationMatrix c = combination_matrix(t, config.rule);
  return Network{std::move(t), std::move(c)};
}

Vector initial_point(const ExperimentConfig& config, const NlsProblem& problem) {
  if (config.init_x0) return *config.init_x0;
  return problem.minimizer() + Vector::Constant(problem.dim(), config.init_offset);
}

}  // namespace dgn
