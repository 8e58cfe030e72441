#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "dgn/error.hpp"
#include "dgn/solvers.hpp"
#include "helpers.hpp"

using namespace dgn;
using namespace dgn::testing;

TEST(Solvers, LinearProblemSolvedInOneFullStep) {
  const NlsProblem p = make_problem(problem_spec(ProblemKind::Linear, 5, 3, 0.3, 4));
  const Network net = make_network(TopologyKind::Complete, 5);
  const Vector x0 = p.domain().center();
  for (SolverMode mode : {SolverMode::Centralized, SolverMode::Diffusion}) {
    const RunTrace t = run(p, net, solver(mode, 1.0, 1), x0);
    ASSERT_EQ(t.iterations(), 1);
    EXPECT_LE(t.final_global_error(), 1e-10) << to_string(mode);
  }
}

TEST(Solvers, CentralizedReproducesNewtonForSquareRoot) {
  const NlsProblem p = make_problem(problem_spec(ProblemKind::ScalarSqrt, 1, 1, 0.0, 0));
  const Network net = make_network(TopologyKind::Complete, 1);
  const RunTrace t = run(p, net, solver(SolverMode::Centralized, 1.0, 4), Vector::Constant(1, 1.0));
  // x <- x - (x^2 - 2) / (2x): 3/2, 17/12, 577/408, 665857/470832.
  const double expected[] = {1.0, 1.5, 17.0 / 12.0, 577.0 / 408.0, 665857.0 / 470832.0};
  for (int i = 0; i <= 4; ++i) EXPECT_NEAR(t.records[i].x_g[0], expected[i], 1e-15);
}

TEST(Solvers, DampedStepScalesTheDirection) {
  const NlsProblem p = make_problem(problem_spec(ProblemKind::ScalarSqrt, 1, 1, 0.0, 0));
  const Vector next = centralized_step(p, Vector::Constant(1, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(next[0], 1.25);
}

TEST(Solvers, SingleNodeModesCoincide) {
  for (ProblemKind kind : {ProblemKind::ScalarSqrt, ProblemKind::Linear}) {
    const NlsProblem p = make_problem(problem_spec(kind, 1, 1, 0.0, 3));
    const Network net = make_network(TopologyKind::Complete, 1);
    const Vector x0 = p.domain().center();
    const RunTrace c = run(p, net, solver(SolverMode::Centralized, 0.7, 10), x0);
    const RunTrace n = run(p, net, solver(SolverMode::Noncooperative, 0.7, 10), x0);
    const RunTrace d = run(p, net, solver(SolverMode::Diffusion, 0.7, 10), x0);
    EXPECT_EQ(max_state_difference(c, n), 0.0);
    EXPECT_EQ(max_state_difference(c, d), 0.0);
  }
}

TEST(Solvers, IdentityCombinationWithOwnAggregateMatchesNoncooperative) {
  ProblemSpec s = problem_spec(ProblemKind::Localization, 8, 2, 0.1, 5);
  const NlsProblem p = make_problem(s);
  const Network net = identity_network(TopologyKind::Ring, 8);
  const Vector x0 = p.ground_truth() + Vector::Constant(2, 0.3);
  const RunTrace a =
      run(p, net, solver(SolverMode::Diffusion, 0.8, 25, 0.0, AdaptAt::OwnAggregate), x0);
  const RunTrace b = run(p, net, solver(SolverMode::Noncooperative, 0.8, 25), x0);
  EXPECT_EQ(max_state_difference(a, b), 0.0);
}

TEST(Solvers, IdentityCombinationFirstStepMatchesNoncooperative) {
  const NlsProblem p = make_problem(problem_spec(ProblemKind::Localization, 6, 2, 0.1, 6));
  const Network net = identity_network(TopologyKind::Path, 6);
  const Vector x0 = p.ground_truth() + Vector::Constant(2, -0.2);
  const Vector xg = x0.replicate(6, 1);
  const DiffusionStep d = diffusion_step(p, net, xg, 0.6);
  EXPECT_EQ(d.aggregates, xg);
  EXPECT_EQ(d.next, noncooperative_step(p, net.topology, xg, 0.6));
}

TEST(Solvers, DiffusionRecordsAggregatesAndBothDescents) {
  const NlsProblem p = make_problem(problem_spec(ProblemKind::Localization, 6, 2, 0.05, 1));
  const Network net = make_network(TopologyKind::Ring, 6, CombinationRule::Metropolis);
  const RunTrace t = run(p, net, solver(SolverMode::Diffusion, 0.5, 5), p.ground_truth());
  ASSERT_EQ(t.iterations(), 5);
  for (int i = 0; i < 5; ++i) {
    EXPECT_TRUE(t.records[i].aggregates.has_value());
    EXPECT_TRUE(t.records[i].coop_descent.has_value());
    EXPECT_TRUE(t.records[i].noncoop_descent.has_value());
  }
  EXPECT_FALSE(t.records.back().coop_descent.has_value());
  // x^{i+1} = X^i - alpha D^i
  const auto& r = t.records[2];
  EXPECT_LE((t.records[3].x_g - (*r.aggregates - 0.5 * *r.coop_descent)).norm(), 1e-15);
}

TEST(Solvers, RunsAreBitReproducible) {
  const NlsProblem p = make_problem(problem_spec(ProblemKind::ExponentialFit, 7, 2, 0.02, 8));
  const Network net = make_network(TopologyKind::Ring, 7, CombinationRule::Metropolis);
  const SolverConfig c = solver(SolverMode::Diffusion, 0.5, 30);
  const Vector x0 = p.domain().center();
  EXPECT_EQ(max_state_difference(run(p, net, c, x0), run(p, net, c, x0)), 0.0);
}

TEST(Solvers, StopsOnTolerance) {
  const NlsProblem p = make_problem(problem_spec(ProblemKind::ScalarSqrt, 3, 1, 0.01, 1));
  const Network net = make_network(TopologyKind::Complete, 3);
  const RunTrace t = run(p, net, solver(SolverMode::Diffusion, 1.0, 100, 1e-12), Vector::Constant(1, 1.9));
  EXPECT_EQ(t.stop_reason, StopReason::Tol);
  EXPECT_LT(t.iterations(), 100);
  EXPECT_LE(t.final_global_error(), 1e-11);
  const RunTrace u = run(p, net, solver(SolverMode::Diffusion, 1.0, 3), Vector::Constant(1, 1.9));
  EXPECT_EQ(u.stop_reason, StopReason::MaxIters);
  EXPECT_EQ(u.iterations(), 3);
}

namespace {

class ShiftModel final : public ResidualModel {
 public:
  int nodes() const override { return 2; }
  int dim() const override { return 1; }
  double residual(int, const Vector& x) const override { return x[0] * x[0]; }
  RowVector jacobian_row(int, const Vector& x) const override { return RowVector::Constant(1, 2.0 * x[0]); }
};

class FarTarget final : public ResidualModel {
 public:
  int nodes() const override { return 2; }
  int dim() const override { return 1; }
  double residual(int, const Vector& x) const override { return x[0] - 10.0; }
  RowVector jacobian_row(int, const Vector&) const override { return RowVector::Ones(1); }
};

}  // namespace

TEST(Solvers, SingularNormalMatrixStopsTheRun) {
  const NlsProblem p(std::make_shared<ShiftModel>(), BoxDomain(Vector::Constant(1, -1.0), Vector::Ones(1)),
                     Vector::Zero(1), Vector::Zero(1));
  const Network net = make_network(TopologyKind::Complete, 2);
  for (SolverMode mode : {SolverMode::Centralized, SolverMode::Noncooperative, SolverMode::Diffusion}) {
    const RunTrace t = run(p, net, solver(mode, 1.0, 5), Vector::Zero(1));
    EXPECT_EQ(t.stop_reason, StopReason::Singular) << to_string(mode);
    EXPECT_EQ(t.iterations(), 0);
    EXPECT_FALSE(t.stop_detail.empty());
  }
}

TEST(Solvers, LeavingTheDomainStopsTheRun) {
  const NlsProblem p(std::make_shared<FarTarget>(), BoxDomain(Vector::Zero(1), Vector::Ones(1)),
                     Vector::Ones(1), Vector::Ones(1));
  const Network net = make_network(TopologyKind::Complete, 2);
  const RunTrace t = run(p, net, solver(SolverMode::Diffusion, 1.0, 5), Vector::Zero(1));
  EXPECT_EQ(t.stop_reason, StopReason::OutOfDomain);
}

TEST(Solvers, ConfigValidation) {
  const NlsProblem p = make_problem(problem_spec(ProblemKind::ScalarSqrt, 2, 1, 0.0, 0));
  const Network net = make_network(TopologyKind::Complete, 2);
  for (const SolverConfig& c : {solver(SolverMode::Diffusion, 0.0, 5), solver(SolverMode::Diffusion, 1.5, 5),
                                solver(SolverMode::Diffusion, 0.5, 0), solver(SolverMode::Diffusion, 0.5, 5, -1.0)}) {
    try {
      run(p, net, c, Vector::Constant(1, 1.5));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    }
  }
  EXPECT_THROW(run(p, make_network(TopologyKind::Complete, 3), solver(SolverMode::Diffusion, 1, 1),
                   Vector::Constant(1, 1.5)),
               Error);
  EXPECT_THROW(run(p, net, solver(SolverMode::Diffusion, 1, 1), Vector::Constant(1, 5.0)), Error);
}

TEST(Solvers, GlobalErrorSplitsPerNode) {
  Vector xg(4);
  xg << 1, 1, 4, 5;
  Vector per;
  const double e = global_error(xg, Vector::Constant(2, 1.0), &per);
  EXPECT_DOUBLE_EQ(per[0], 0.0);
  EXPECT_DOUBLE_EQ(per[1], 5.0);
  EXPECT_DOUBLE_EQ(e, 5.0);
}

TEST(Solvers, ModeNamesRoundTrip) {
  for (SolverMode m : {SolverMode::Centralized, SolverMode::Noncooperative, SolverMode::Diffusion})
    EXPECT_EQ(parse_solver_mode(to_string(m)), m);
  EXPECT_EQ(parse_adapt_at("own_aggregate"), AdaptAt::OwnAggregate);
  EXPECT_THROW(parse_solver_mode("gossip"), Error);
}

TEST(Solvers, NoncooperativeOnAPathSolvesEachNeighbourhoodProblem) {
  const int n = 6, m = 2;
  const NlsProblem p = make_problem(problem_spec(ProblemKind::Linear, n, m, 0.2, 11));
  const Network net = make_network(TopologyKind::Path, n);
  Vector x_g(n * m);
  for (int i = 0; i < n * m; ++i) x_g[i] = 0.1 * i - 0.3;
  const Vector next = noncooperative_step(p, net.topology, x_g, 1.0);

  // Oracle: least squares over the neighbourhood rows, a_l x = b_l with b_l = -f_l(0).
  const Vector zero = Vector::Zero(m);
  for (int k = 0; k < n; ++k) {
    const auto& nb = net.topology.neighbors(k);
    Matrix a(nb.size(), m);
    Vector b(nb.size());
    for (std::size_t r = 0; r < nb.size(); ++r) {
      a.row(r) = p.jacobian_row(nb[r], zero);
      b[r] = -p.residual(nb[r], zero);
    }
    const Vector ls = a.colPivHouseholderQr().solve(b);
    EXPECT_LE((next.segment(k * m, m) - ls).norm(), 1e-10) << "node " << k;
  }
}
