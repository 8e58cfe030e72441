#include <algorithm>
#include <cmath>
#include <sstream>

#include "dgn/analysis.hpp"
#include "dgn/error.hpp"

namespace dgn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

const ConditionFlag& ConvergenceCertificate::flag(const std::string& name) const {
  for (const auto& f : flags)
    if (f.name == name) return f;
  throw Error(ErrorCode::InvalidArgument, "no certificate flag named '" + name + "'");
}

ConvergenceCertificate certify_with_bounds(const NlsProblem& problem, const Network& network,
                                           const SolverConfig& config, const Vector& x0, int horizon,
                                           const BoundsProfile& bounds) {
  config.validate();
  const int n = problem.nodes();
  if (network.nodes() != n) throw Error(ErrorCode::BadDimensions, "network and problem node counts differ");
  if (x0.size() != problem.dim()) throw Error(ErrorCode::BadDimensions, "x0 has the wrong dimension");
  if (horizon < 1) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");

  const double alpha = config.alpha;
  const BoundsProfile& b = bounds;
  const NeighborhoodStats stats = neighborhood_stats(network.topology);
  const double s2min = b.sigma_min * b.sigma_min, s2max = b.sigma_max * b.sigma_max;

  ConvergenceCertificate cert;
  cert.bounds = b;
  cert.alpha = alpha;
  LemmaConstants& lc = cert.constants;
  lc.horizon = horizon;

  const Lemma1 l1 = lemma1_constants(b, alpha, n);
  lc.t1 = l1.t1;
  lc.t2 = l1.t2;

  // Pairwise quantities over ordered pairs k != l.
  int disconnected = 0;
  double mismatch_ratio = 0.0;  // max (n_k|l + n_l|k) / n_l
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (k == l) continue;
      const PairCounts c = pair_counts(stats, k, l);
      mismatch_ratio = std::max(mismatch_ratio, double(c.n_k_given_l + c.n_l_given_k) / c.n_l);
      if (c.n_kl == 0) {
        ++disconnected;
        continue;
      }
      const Lemma2 l2 = lemma2_constants(b, c, alpha);
      lc.a1_max = std::max(lc.a1_max, l2.a1);
      lc.a2_max = std::max(lc.a2_max, l2.a2);
      lc.theta = std::max(lc.theta, (c.n_kl + 2.0 * c.n_kl * b.gamma_f) / (2.0 * c.n_l * s2min));
    }
  }

  lc.pi = pi_sequence(lc.a1_max, lc.a2_max, horizon);
  lc.zeta.resize(lc.pi.size());
  lc.mu.assign(lc.pi.size(), 0.0);
  lc.xi = 0.0;
  lc.xi_valid = true;
  for (std::size_t i = 0; i < lc.pi.size(); ++i) {
    try {
      const Discrepancy d = discrepancy_bound(b, n, stats.max_n(), lc.pi[i]);
      lc.zeta[i] = d.zeta;
      lc.xi = std::max(lc.xi, d.xi);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ExpansionConditionViolated) throw;
      lc.zeta[i] = n * stats.max_n() * b.gamma_F * lc.pi[i] / s2min;
      lc.xi_valid = false;
    }
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        if (k == l) continue;
        const PairCounts c = pair_counts(stats, k, l);
        const double mu = (c.n_kl * b.gamma_F * lc.pi[i] + (c.n_k_given_l + c.n_l_given_k) * s2max) / (c.n_l * s2min);
        lc.mu[i] = std::max(lc.mu[i], mu);
      }
    }
  }
  if (!lc.xi_valid) lc.xi = kInf;

  const Eigen::MatrixXd& cm = network.weights.matrix();
  cert.g_norm = spectral_norm(cm);
  cert.g_frobenius = cm.norm() * std::sqrt(static_cast<double>(problem.dim()));
  cert.lambda_bound = 1.0 / (stats.min_n() * s2min);
  cert.lambda_bound_main_text = 1.0 / (stats.min_n() * b.sigma_min);
  cert.initial_error = std::sqrt(static_cast<double>(n)) * (x0 - problem.minimizer()).norm();

  const double g = cert.g_norm;
  auto add = [&](std::string name, bool pass, double margin, std::string detail) {
    cert.flags.push_back({std::move(name), pass, margin, std::move(detail)});
  };

  // 1. every pair of neighbourhoods overlaps
  add("connectivity", disconnected == 0, disconnected == 0 ? 1.0 : -double(disconnected),
      std::to_string(disconnected) + " ordered pairs with n_kl = 0");

  // 2. neighbourhood mismatch against the Jacobian-norm spread
  {
    const double rhs = s2min / s2max;
    add("neighborhood_mismatch", mismatch_ratio < rhs, rhs - mismatch_ratio,
        "max (n_k|l + n_l|k)/n_l = " + fmt(mismatch_ratio) + " vs sigma_min^2/sigma_max^2 = " + fmt(rhs));
  }

  // 3. real equilibria
  const double disc = lc.xi_valid ? equilibrium_discriminant(lc.t1, lc.t2, g, alpha, lc.xi) : kNaN;
  const bool linear = !(lc.t1 > 0.0);
  if (!lc.xi_valid) {
    cert.equilibria = {kNaN, kNaN, kNaN};
    cert.equilibria_exist = false;
  } else if (linear) {
    // phi is affine: one fixed point when t2 g < 1, none above it.
    const double slope = lc.t2 * g;
    cert.equilibria.discriminant = disc;
    cert.equilibria.y_max = kInf;
    cert.equilibria.y_min = slope < 1.0 ? alpha * lc.xi / (1.0 - slope) : kNaN;
    cert.equilibria_exist = slope < 1.0;
  } else {
    try {
      cert.equilibria = equilibria(lc.t1, lc.t2, g, alpha, lc.xi);
      cert.equilibria_exist = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoRealEquilibrium) throw;
      cert.equilibria = {kNaN, kNaN, disc};
      cert.equilibria_exist = false;
    }
  }
  add("discriminant", cert.equilibria_exist && disc >= 0.0, lc.xi_valid ? disc : -kInf,
      "(1 - t2 g)^2 - 4 t1 alpha xi g^2 = " + fmt(disc));

  // 4-5. stability of y_min
  if (lc.xi_valid) {
    cert.windows = stability_windows(lc.t1, lc.t2, g, alpha, lc.xi);
  } else {
    cert.windows.g_window = {kNaN, kNaN};
    cert.windows.g_window_literal = {kNaN, kNaN};
    cert.windows.alpha_window = {kNaN, kNaN};
    cert.windows.derivative_at_y_min = kInf;
    cert.windows.stable = false;
  }
  {
    const bool pass = cert.windows.stable && cert.windows.g_window.contains_open(g);
    const double margin = lc.xi_valid ? std::min(disc, 4.0 - disc) : -kInf;
    add("g_norm_window", pass, margin,
        "||G|| = " + fmt(g) + " in (" + fmt(cert.windows.g_window.lower) + ", " + fmt(cert.windows.g_window.upper) +
            "); closed form (" + fmt(cert.windows.g_window_literal.lower) + ", " +
            fmt(cert.windows.g_window_literal.upper) + ")");
  }
  {
    const Interval& w = cert.windows.alpha_window;
    const bool pass = w.contains_open(alpha);
    const double margin = lc.xi_valid ? std::min(alpha - w.lower, w.upper - alpha) : -kInf;
    add("alpha_window", pass, margin, "alpha = " + fmt(alpha) + " in (" + fmt(w.lower) + ", " + fmt(w.upper) + ")");
  }

  // 6. expansion factors below one over the horizon
  {
    const double zmax = *std::max_element(lc.zeta.begin(), lc.zeta.end());
    const double mmax = *std::max_element(lc.mu.begin(), lc.mu.end());
    add("expansion", zmax < 1.0 && mmax < 1.0, 1.0 - std::max(zmax, mmax),
        "max zeta = " + fmt(zmax) + ", max mu = " + fmt(mmax));
  }

  // 7. step size small enough for the horizon, per connected pair
  {
    double margin = kInf;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        if (k == l) continue;
        const PairCounts c = pair_counts(stats, k, l);
        if (c.n_kl == 0) continue;
        const double theta = (c.n_kl + 2.0 * c.n_kl * b.gamma_f) / (2.0 * c.n_l * s2min);
        const double base = 1.0 + alpha * theta;
        const double lhs = alpha * (std::pow(base, horizon + 1) - base);
        const double num = c.n_l * s2min - (c.n_k_given_l + c.n_l_given_k) * s2max;
        const double den = c.n_kl * b.gamma_F * (c.n_l + 3.0 * c.n_k_given_l + 3.0 * c.n_l_given_k) * b.sigma_max *
                           b.eps_max;
        double rhs;
        if (den > 0.0) rhs = num / den;
        else rhs = num > 0.0 ? kInf : (num < 0.0 ? -kInf : 0.0);
        margin = std::min(margin, rhs - lhs);
      }
    }
    add("step_size_smallness", margin > 0.0, margin, "min over pairs of rhs - lhs = " + fmt(margin));
  }

  // 8. start inside the basin
  {
    const double y_max = cert.equilibria.y_max;
    const bool pass = cert.equilibria_exist && cert.initial_error < y_max;
    add("initial_error", pass, cert.equilibria_exist ? y_max - cert.initial_error : -kInf,
        "||x_G^0 - x*|| = " + fmt(cert.initial_error) + " vs y_max = " + fmt(y_max));
  }

  cert.overall = std::all_of(cert.flags.begin(), cert.flags.end(), [](const ConditionFlag& f) { return f.pass; });
  return cert;
}

ConvergenceCertificate certify(const NlsProblem& problem, const Network& network, const SolverConfig& config,
                               const Vector& x0, const CertifyOptions& options) {
  config.validate();
  const int horizon = options.horizon > 0 ? options.horizon : config.max_iters;
  const BoundsProfile b = estimate_bounds(problem, options.bound_samples, options.bound_seed, options.safety_factor);
  return certify_with_bounds(problem, network, config, x0, horizon, b);
}

}  // namespace dgn
