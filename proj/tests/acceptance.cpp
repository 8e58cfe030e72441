// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every tolerance used below is pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "dgn/analysis.hpp"
#include "dgn/config.hpp"
#include "dgn/error.hpp"
#include "helpers.hpp"
#include "oracles/formula_cases.hpp"

using namespace dgn;
using namespace dgn::testing;

namespace {

constexpr double kOneStepTol = 1e-10;
constexpr double kOneStepSeconds = 1.0;
constexpr double kCollapseSeconds = 1.0;
constexpr double kJacobianTol = 1e-5;
constexpr int kJacobianPoints = 100;
constexpr int kRandomTopologies = 1000;
constexpr double kRowSumTol = 1e-12;
constexpr double kRhoTol = 1e-8;
constexpr int kMinAuditedIterations = 50;
constexpr double kAuditSeconds = 10.0;
constexpr double kConvergedError = 1e-6;
constexpr int kCooperationInstances = 20;
constexpr int kCooperationRequired = 16;
constexpr int kCooperationIteration = 20;
constexpr double kFormulaRelTol = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("criterion %d [%s] %s: %s\n", id, pass ? "PASS" : "FAIL", title, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Runs `body`, turning an escaped exception into a failure line.
void criterion(int id, const char* title, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, title, false, std::string("exception: ") + e.what());
  }
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

void linear_one_step() {
  const auto t0 = Clock::now();
  const NlsProblem p = make_problem(problem_spec(ProblemKind::Linear, 5, 3, 0.0, 1));
  const Network net = make_network(TopologyKind::Complete, 5);
  const Vector x0 = p.domain().lower + 0.3 * (p.domain().upper - p.domain().lower);
  double worst = 0.0;
  bool exact = true;
  for (SolverMode mode : {SolverMode::Centralized, SolverMode::Diffusion}) {
    const RunTrace t = run(p, net, solver(mode, 1.0, 1), x0);
    exact = exact && t.iterations() == 1 && t.records[0].global_error > kOneStepTol;
    worst = std::max(worst, t.final_global_error());
  }
  const double secs = seconds_since(t0);
  report(1, "linear one-step", exact && worst <= kOneStepTol && secs < kOneStepSeconds,
         "max global_error after 1 update " + fmt("%.3e", worst) + ", " + fmt("%.3f s", secs));
}

void mode_collapse() {
  const auto t0 = Clock::now();
  double single = 0.0;
  for (ProblemKind kind : {ProblemKind::Linear, ProblemKind::ScalarSqrt}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const NlsProblem p = make_problem(problem_spec(kind, 1, 1, 0.1, seed));
      const Network net = make_network(TopologyKind::Complete, 1);
      const Vector x0 = p.domain().lower + 0.3 * (p.domain().upper - p.domain().lower);
      const RunTrace c = run(p, net, solver(SolverMode::Centralized, 0.8, 20), x0);
      const RunTrace n = run(p, net, solver(SolverMode::Noncooperative, 0.8, 20), x0);
      const RunTrace d = run(p, net, solver(SolverMode::Diffusion, 0.8, 20), x0);
      single = std::max({single, max_state_difference(c, n), max_state_difference(c, d)});
    }
  }

  // C = I_N. With the adaptation evaluated at the node's own aggregate the
  // two traces coincide for every topology; with the literal neighbour-
  // aggregate evaluation they coincide on the first update, and on every
  // update when all neighbourhoods are equal (complete graph).
  double own = 0.0, first = 0.0, complete = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const NlsProblem p = make_problem(problem_spec(ProblemKind::Localization, 7, 2, 0.1, seed));
    const Vector x0 = p.ground_truth() + Vector::Constant(2, 0.25);
    for (TopologyKind kind : {TopologyKind::Ring, TopologyKind::Path}) {
      const Network net = identity_network(kind, 7);
      const RunTrace d = run(p, net, solver(SolverMode::Diffusion, 0.7, 20, 0.0, AdaptAt::OwnAggregate), x0);
      const RunTrace n = run(p, net, solver(SolverMode::Noncooperative, 0.7, 20), x0);
      own = std::max(own, max_state_difference(d, n));
      const Vector xg = x0.replicate(7, 1);
      first = std::max(first, (diffusion_step(p, net, xg, 0.7).next -
                               noncooperative_step(p, net.topology, xg, 0.7)).cwiseAbs().maxCoeff());
    }
    const Network full = identity_network(TopologyKind::Complete, 7);
    complete = std::max(complete, max_state_difference(run(p, full, solver(SolverMode::Diffusion, 0.7, 20), x0),
                                                       run(p, full, solver(SolverMode::Noncooperative, 0.7, 20), x0)));
  }
  const double secs = seconds_since(t0);
  const bool pass = single == 0.0 && own == 0.0 && first == 0.0 && complete == 0.0 && secs < kCollapseSeconds;
  report(2, "mode collapse", pass,
         "N=1 max diff " + fmt("%g", single) + "; C=I own-aggregate " + fmt("%g", own) + ", literal first step " +
             fmt("%g", first) + ", literal complete " + fmt("%g", complete) + ", " + fmt("%.3f s", secs));
}

void jacobian_consistency() {
  int checked = 0, passed = 0;
  double worst = 0.0;
  const ProblemSpec kinds[] = {problem_spec(ProblemKind::Linear, 6, 3, 0.1, 0),
                               problem_spec(ProblemKind::ScalarSqrt, 4, 1, 0.05, 0),
                               problem_spec(ProblemKind::ExponentialFit, 8, 2, 0.02, 0),
                               problem_spec(ProblemKind::Localization, 6, 2, 0.05, 0)};
  for (ProblemSpec s : kinds) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      s.seed = seed;
      const JacobianCheck c = check_jacobian(make_problem(s), kJacobianPoints, seed, kJacobianTol);
      ++checked;
      passed += c.pass && c.points == kJacobianPoints;
      worst = std::max(worst, c.max_error);
    }
  }
  report(3, "jacobian consistency", passed == checked,
         std::to_string(passed) + "/" + std::to_string(checked) + " problems, max rel error " + fmt("%.2e", worst));
}

void combination_conditions() {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> size(1, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int bad_support = 0, bad_sign = 0, bad_sum = 0, bad_rho = 0, bad_lift = 0;
  double worst_sum = 0.0, worst_rho = 0.0;
  for (int trial = 0; trial < kRandomTopologies; ++trial) {
    const int n = size(rng);
    const double p = unit(rng);
    std::vector<std::pair<int, int>> edges;
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l)
        if (unit(rng) < p) edges.emplace_back(k, l);
    const Topology t(n, edges);
    for (CombinationRule rule : {CombinationRule::Uniform, CombinationRule::Metropolis}) {
      const CombinationMatrix c = combination_matrix(t, rule);
      for (int k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l) {
          bad_support += !t.linked(k, l) && c(k, l) != 0.0;
          bad_sign += c(k, l) < 0.0;
          sum += c(k, l);
        }
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        bad_sum += std::abs(sum - 1.0) > kRowSumTol;
      }
      const double rho = spectral_radius(c.matrix());
      worst_rho = std::max(worst_rho, std::abs(rho - 1.0));
      bad_rho += std::abs(rho - 1.0) > kRhoTol;
      for (int m : {1, 2, 3}) bad_lift += std::abs(spectral_radius(extend(c, m)) - rho) > kRhoTol;
    }
  }
  const bool pass = bad_support + bad_sign + bad_sum + bad_rho + bad_lift == 0;
  report(4, "combination matrix conditions", pass,
         std::to_string(kRandomTopologies) + " topologies x 2 rules; violations support/sign/sum/rho/lift = " +
             std::to_string(bad_support) + "/" + std::to_string(bad_sign) + "/" + std::to_string(bad_sum) + "/" +
             std::to_string(bad_rho) + "/" + std::to_string(bad_lift) + ", max |rowsum-1| " +
             fmt("%.1e", worst_sum) + ", max |rho-1| " + fmt("%.1e", worst_rho));
}

struct CertifiedRun {
  ConvergenceCertificate certificate;
  RunTrace trace;
  AuditReport audit;
};

CertifiedRun certified_run(const ExperimentConfig& cfg) {
  const NlsProblem p = make_problem(cfg.problem);
  const Network net = build_network(cfg);
  const Vector x0 = initial_point(cfg, p);
  CertifyOptions o;
  o.horizon = cfg.horizon;
  o.bound_samples = cfg.bound_samples;
  o.bound_seed = cfg.bound_seed;
  o.safety_factor = cfg.safety_factor;
  ConvergenceCertificate c = certify(p, net, cfg.solver, x0, o);
  RunTrace t = run(p, net, cfg.solver, x0);
  AuditReport a = audit_trace(t, c, net, c.bounds, p);
  return {std::move(c), std::move(t), std::move(a)};
}

void inequality_audit() {
  const auto t0 = Clock::now();
  const ExperimentConfig cfg = default_config();
  const CertifiedRun r = certified_run(cfg);
  double max_disc = 0.0;
  for (const AuditRow& row : r.audit.rows)
    if (row.check == "b") max_disc = std::max(max_disc, row.lhs);
  const double secs = seconds_since(t0);
  const bool in_window = r.certificate.windows.alpha_window.contains_open(cfg.solver.alpha);
  const bool pass = cfg.problem.kind == ProblemKind::Localization && cfg.problem.nodes == 6 &&
                    cfg.topology.kind == TopologyKind::Complete && r.certificate.overall && in_window &&
                    r.audit.iterations_audited >= kMinAuditedIterations && r.audit.pass() &&
                    max_disc <= r.certificate.constants.xi && secs < kAuditSeconds;
  report(5, "inequality audit", pass,
         std::string("certified=") + (r.certificate.overall ? "yes" : "no") + ", alpha " +
             fmt("%g", cfg.solver.alpha) + " in (" + fmt("%g", r.certificate.windows.alpha_window.lower) + ", " +
             fmt("%g", r.certificate.windows.alpha_window.upper) + "), " + std::to_string(r.audit.iterations_audited) +
             " iterations, " + std::to_string(r.audit.failed) + " failed checks, max ||D-d|| " +
             fmt("%.3e", max_disc) + " <= xi " + fmt("%.3e", r.certificate.constants.xi) + ", " + fmt("%.2f s", secs));
}

void convergence_under_certificate() {
  const ExperimentConfig cfg = default_config();
  const CertifiedRun r = certified_run(cfg);
  const bool starts_inside = r.certificate.initial_error < r.certificate.equilibria.y_max;
  const double final_error = r.trace.final_global_error();

  // Same instance over a topology with a pair of nodes sharing no neighbour.
  ExperimentConfig split = cfg;
  split.topology.kind = TopologyKind::FromEdges;
  const NlsProblem p = make_problem(split.problem);
  const Topology t(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  const Network net{t, combination_matrix(t, CombinationRule::Uniform)};
  const ConvergenceCertificate broken = certify(p, net, split.solver, initial_point(split, p));

  const bool pass = r.certificate.overall && starts_inside && final_error <= kConvergedError &&
                    !broken.flag("connectivity").pass && !broken.overall;
  report(6, "convergence under certificate", pass,
         "||x0-x*|| " + fmt("%.3e", r.certificate.initial_error) + " < y_max " +
             fmt("%.3e", r.certificate.equilibria.y_max) + ", error after " + std::to_string(r.trace.iterations()) +
             " iterations " + fmt("%.3e", final_error) + "; disconnected instance overall=" +
             (broken.overall ? "pass" : "fail"));
}

void cooperation_benefit() {
  int better = 0, reduced = 0;
  for (int seed = 0; seed < kCooperationInstances; ++seed) {
    ProblemSpec s = problem_spec(ProblemKind::Localization, 10, 2, 0.3, 100 + seed);
    s.anchor_radius = 10.0;
    s.domain_halfwidth = 2.0;
    const NlsProblem p = make_problem(s);
    const Network net = make_network(TopologyKind::Ring, 10);
    const Vector x0 = p.ground_truth() + Vector::Constant(2, 1.0);
    const RunTrace d = run(p, net, solver(SolverMode::Diffusion, 0.5, kCooperationIteration), x0);
    const RunTrace n = run(p, net, solver(SolverMode::Noncooperative, 0.5, kCooperationIteration), x0);
    if (d.iterations() < kCooperationIteration || n.iterations() < kCooperationIteration) continue;
    const double ed = d.records[kCooperationIteration].global_error;
    const double en = n.records[kCooperationIteration].global_error;
    better += ed <= en;
    reduced += ed <= d.records[1].global_error && en <= n.records[1].global_error;
  }
  report(7, "cooperation benefit", better >= kCooperationRequired && reduced == kCooperationInstances,
         "diffusion <= non-cooperative at iteration " + std::to_string(kCooperationIteration) + " in " +
             std::to_string(better) + "/" + std::to_string(kCooperationInstances) + " instances; error reduced in " +
             std::to_string(reduced) + "/" + std::to_string(kCooperationInstances));
}

void formula_oracles() {
  int total = 0, ok = 0;
  double worst = 0.0;
  auto check = [&](double got, double want) {
    const double e = rel_err(got, want);
    worst = std::max(worst, e);
    ++total;
    ok += e <= kFormulaRelTol;
  };
  for (const auto& c : oracles::kLemma1Cases) {
    BoundsProfile b;
    b.omega = c.omega;
    b.Sigma_min = c.Sigma_min;
    b.Sigma_max = c.Sigma_max;
    b.e_min = c.e_min;
    const Lemma1 l = lemma1_constants(b, c.alpha, c.nodes);
    check(l.t1, c.t1);
    check(l.t2, c.t2);
  }
  for (const auto& c : oracles::kLemma2Cases) {
    BoundsProfile b;
    b.sigma_min = c.sigma_min;
    b.sigma_max = c.sigma_max;
    b.eps_max = c.eps_max;
    b.gamma_f = c.gamma_f;
    const Lemma2 l = lemma2_constants(b, PairCounts{c.n_kl, c.n_l, c.n_k_given_l, c.n_l_given_k}, c.alpha);
    check(l.a1, c.a1);
    check(l.a2, c.a2);
  }
  for (const auto& c : oracles::kPiCases) check(pi_sequence(c.a1, c.a2, c.i).back(), c.pi);
  for (const auto& c : oracles::kDiscrepancyCases) {
    BoundsProfile b;
    b.sigma_min = c.sigma_min;
    b.sigma_max = c.sigma_max;
    b.eps_max = c.eps_max;
    b.gamma_f = c.gamma_f;
    b.gamma_F = c.gamma_F;
    const Discrepancy d = discrepancy_bound(b, c.nodes, c.n_k, c.pi);
    check(d.zeta, c.zeta);
    check(d.xi, c.xi);
  }
  for (const auto& c : oracles::kEquilibriumCases) {
    const EquilibriumPair e = equilibria(c.t1, c.t2, c.g, c.alpha, c.xi);
    check(e.y_min, c.y_min);
    check(e.y_max, c.y_max);
  }
  const std::size_t cases = std::size(oracles::kLemma1Cases) + std::size(oracles::kLemma2Cases) +
                            std::size(oracles::kPiCases) + std::size(oracles::kDiscrepancyCases) +
                            std::size(oracles::kEquilibriumCases);
  report(8, "formula oracles", ok == total && cases == 125,
         std::to_string(ok) + "/" + std::to_string(total) + " values from " + std::to_string(cases) +
             " cases within rel " + fmt("%g", kFormulaRelTol) + ", worst " + fmt("%.2e", worst));
}

}  // namespace

int main() {
  criterion(1, "linear one-step", linear_one_step);
  criterion(2, "mode collapse", mode_collapse);
  criterion(3, "jacobian consistency", jacobian_consistency);
  criterion(4, "combination matrix conditions", combination_conditions);
  criterion(5, "inequality audit", inequality_audit);
  criterion(6, "convergence under certificate", convergence_under_certificate);
  criterion(7, "cooperation benefit", cooperation_benefit);
  criterion(8, "formula oracles", formula_oracles);
  std::printf("acceptance: %d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
