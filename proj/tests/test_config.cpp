#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "dgn/config.hpp"
#include "dgn/error.hpp"

using namespace dgn;

namespace {

ErrorCode code_of(const std::string& text, std::string* message = nullptr) {
  std::istringstream in(text);
  try {
    parse_config(in);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "config accepted:\n" << text;
  return ErrorCode::InvalidArgument;
}

std::string minimal() {
  return "problem.kind = linear\nproblem.nodes = 5\nproblem.dim = 3\ntopology.kind = complete\n"
         "solver.alpha = 1\nsolver.max_iters = 1\n";
}

}  // namespace

TEST(Config, TemplateRoundTripsBitIdentically) {
  const std::string text = to_text(default_config());
  std::istringstream in(text);
  const ExperimentConfig back = parse_config(in);
  EXPECT_EQ(to_text(back), text);
}

TEST(Config, NonDefaultValuesRoundTrip) {
  ExperimentConfig c = default_config();
  c.problem.noise = 0.1 + 0.2;  // not a short decimal
  c.solver.adapt_at = AdaptAt::OwnAggregate;
  c.init_x0 = Vector::Constant(2, 1.0 / 3.0);
  c.topology.kind = TopologyKind::RandomGeometric;
  c.topology.seed = 18446744073709551615ull;
  std::istringstream in(to_text(c));
  const ExperimentConfig back = parse_config(in);
  EXPECT_EQ(back.problem.noise, c.problem.noise);
  EXPECT_EQ(*back.init_x0, *c.init_x0);
  EXPECT_EQ(back.topology.seed, c.topology.seed);
  EXPECT_EQ(back.solver.adapt_at, AdaptAt::OwnAggregate);
  EXPECT_EQ(to_text(back), to_text(c));
}

TEST(Config, MinimalFileUsesDefaults) {
  std::istringstream in(minimal());
  const ExperimentConfig c = parse_config(in);
  EXPECT_EQ(c.problem.kind, ProblemKind::Linear);
  EXPECT_EQ(c.rule, CombinationRule::Uniform);
  EXPECT_EQ(c.solver.mode, SolverMode::Diffusion);
  EXPECT_EQ(c.safety_factor, 1.05);
  EXPECT_FALSE(c.init_x0.has_value());
}

TEST(Config, ValidationErrorsNameTheKey) {
  auto replace = [](std::string text, const std::string& from, const std::string& to) {
    text.replace(text.find(from), from.size(), to);
    return text;
  };
  std::string msg;
  EXPECT_EQ(code_of(replace(minimal(), "solver.alpha = 1", "solver.alpha = 1.5"), &msg), ErrorCode::ValidationError);
  EXPECT_NE(msg.find("solver.alpha"), std::string::npos);
  EXPECT_EQ(code_of(replace(minimal(), "topology.kind = complete\n", ""), &msg), ErrorCode::ValidationError);
  EXPECT_NE(msg.find("topology.kind"), std::string::npos);
  EXPECT_EQ(code_of(minimal() + "solver.speed = 3\n", &msg), ErrorCode::ValidationError);
  EXPECT_NE(msg.find("solver.speed"), std::string::npos);
  EXPECT_EQ(code_of(minimal() + "problem.nodes = 6\n", &msg), ErrorCode::ValidationError);
  EXPECT_NE(msg.find("duplicate"), std::string::npos);
  EXPECT_EQ(code_of(replace(minimal(), "linear", "cubic"), &msg), ErrorCode::ValidationError);
  EXPECT_NE(msg.find("problem.kind"), std::string::npos);
  EXPECT_EQ(code_of(replace(minimal(), "problem.nodes = 5", "problem.nodes = five"), &msg),
            ErrorCode::ValidationError);
  EXPECT_EQ(code_of(replace(minimal(), "solver.max_iters = 1", "solver.max_iters = 0"), &msg),
            ErrorCode::ValidationError);
  EXPECT_NE(msg.find("solver.max_iters"), std::string::npos);
  EXPECT_EQ(code_of(replace(minimal(), "problem.nodes = 5", "problem.nodes = 2"), &msg), ErrorCode::ValidationError);
  EXPECT_EQ(code_of(minimal() + "init.x0 = 1, 2\n", &msg), ErrorCode::ValidationError);
  EXPECT_NE(msg.find("init.x0"), std::string::npos);
  EXPECT_EQ(code_of(minimal() + "analysis.safety_factor = 0.5\n", &msg), ErrorCode::ValidationError);
  EXPECT_EQ(code_of(replace(minimal(), "complete", "from_edges"), &msg), ErrorCode::ValidationError);
  EXPECT_NE(msg.find("topology.edges_file"), std::string::npos);
}

TEST(Config, ParseErrorsCarryTheLineNumber) {
  std::string msg;
  EXPECT_EQ(code_of(minimal() + "# fine\n\nthis line has no equals\n", &msg), ErrorCode::ParseError);
  EXPECT_NE(msg.find("line 9"), std::string::npos) << msg;
  EXPECT_EQ(code_of("= 3\n", &msg), ErrorCode::ParseError);
  EXPECT_NE(msg.find("line 1"), std::string::npos);
}

TEST(Config, LoadFromFileAndEdgeList) {
  const std::string dir = ::testing::TempDir();
  {
    std::ofstream e(dir + "/ring4.edges");
    e << "4\n1 2\n2 3\n3 4\n4 1\n";
    std::ofstream c(dir + "/exp.cfg");
    c << "problem.kind = localization\nproblem.nodes = 4\nproblem.dim = 2\ntopology.kind = from_edges\n"
         "topology.edges_file = ring4.edges\nsolver.alpha = 0.5\nsolver.max_iters = 5\ninit.x0 = 0.1, -0.2\n";
  }
  const ExperimentConfig c = load_config(dir + "/exp.cfg");
  const Network net = build_network(c, dir);
  EXPECT_EQ(net.topology.edges().size(), 4u);
  EXPECT_TRUE(net.topology.linked(0, 3));
  const NlsProblem p = make_problem(c.problem);
  EXPECT_EQ(initial_point(c, p), (Vector(2) << 0.1, -0.2).finished());
  try {
    load_config(dir + "/missing.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(Config, InitialPointDefaultsToAnOffsetFromTheMinimizer) {
  ExperimentConfig c = default_config();
  const NlsProblem p = make_problem(c.problem);
  EXPECT_EQ(initial_point(c, p), p.minimizer() + Vector::Constant(2, c.init_offset));
}
