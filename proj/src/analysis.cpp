#include <algorithm>
#include <cmath>

#include "dgn/analysis.hpp"
#include "dgn/error.hpp"

namespace dgn {

Lemma1 lemma1_constants(const BoundsProfile& b, double alpha, int nodes) {
  Lemma1 out;
  out.t1 = alpha * b.omega / (2.0 * b.Sigma_min);
  out.t2 = (1.0 - alpha) * b.Sigma_max / b.Sigma_min +
           std::sqrt(2.0) * nodes * alpha * b.omega * b.e_min / (b.Sigma_min * b.Sigma_min);
  return out;
}

PairCounts pair_counts(const NeighborhoodStats& stats, int k, int l) {
  PairCounts c;
  c.n_kl = stats.common(k, l);
  c.n_l = stats.n[l];
  c.n_k_given_l = stats.n_k_given_l(k, l);
  c.n_l_given_k = stats.n_l_given_k(k, l);
  return c;
}

Lemma2 lemma2_constants(const BoundsProfile& b, const PairCounts& c, double alpha) {
  if (c.n_l <= 0) throw Error(ErrorCode::InvalidArgument, "n_l must be positive");
  const double denom = 2.0 * c.n_l * b.sigma_min * b.sigma_min;
  Lemma2 out;
  out.a1 = 1.0 + (alpha * c.n_kl + 2.0 * alpha * c.n_kl * b.gamma_f) / denom;
  out.a2 = (c.n_l + 3.0 * c.n_k_given_l + 3.0 * c.n_l_given_k) * alpha * b.sigma_max * b.eps_max / denom;
  return out;
}

Lemma2 lemma2_constants(const BoundsProfile& b, const NeighborhoodStats& stats, double alpha, int k, int l) {
  return lemma2_constants(b, pair_counts(stats, k, l), alpha);
}

std::vector<double> pi_sequence(double a1, double a2, int horizon) {
  if (horizon < 1) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
  std::vector<double> pi(static_cast<std::size_t>(horizon));
  double power = 1.0;  // a1^{j-1}
  double sum = 0.0;
  for (int i = 0; i < horizon; ++i) {
    sum += power;
    pi[i] = a2 * sum;
    power *= a1;
  }
  return pi;
}

Discrepancy discrepancy_bound(const BoundsProfile& b, int nodes, int n_k_max, double pi) {
  const double s2 = b.sigma_min * b.sigma_min;
  const double n = nodes;
  Discrepancy out;
  out.zeta = n * n_k_max * b.gamma_F * pi / s2;
  if (!(out.zeta < 1.0)) {
    throw Error(ErrorCode::ExpansionConditionViolated, "zeta = " + std::to_string(out.zeta) + " >= 1");
  }
  out.xi = n * n * b.gamma_f * pi / s2 +
           (n * b.sigma_max * b.eps_max + n * n * b.gamma_f * pi) * out.zeta / (s2 * (1.0 - out.zeta));
  return out;
}

double equilibrium_discriminant(double t1, double t2, double g, double alpha, double xi) {
  const double b = 1.0 - t2 * g;
  return b * b - 4.0 * t1 * alpha * xi * g * g;
}

EquilibriumPair equilibria(double t1, double t2, double g, double alpha, double xi) {
  if (!(t1 > 0.0) || !(g > 0.0)) throw Error(ErrorCode::InvalidArgument, "equilibria need t1 > 0 and g > 0");
  EquilibriumPair out;
  out.discriminant = equilibrium_discriminant(t1, t2, g, alpha, xi);
  if (out.discriminant < 0.0) {
    throw Error(ErrorCode::NoRealEquilibrium, "discriminant " + std::to_string(out.discriminant) + " < 0");
  }
  const double b = 1.0 - t2 * g;
  const double root = std::sqrt(out.discriminant);
  const double a2 = 2.0 * t1 * g * g;
  out.y_max = (b + root) / a2;
  // Product of the roots is alpha xi / (t1 g^2); use it to avoid cancellation.
  out.y_min = b > 0.0 ? 2.0 * alpha * xi / (b + root) : (b - root) / a2;
  return out;
}

namespace {

double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  if (num > 0.0) return std::numeric_limits<double>::infinity();
  if (num < 0.0) return -std::numeric_limits<double>::infinity();
  return 0.0;
}

// Positive real roots of a g^2 + b g + c.
void positive_roots(double a, double b, double c, std::vector<double>& out) {
  if (a == 0.0) {
    if (b != 0.0 && -c / b > 0.0) out.push_back(-c / b);
    return;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  for (double r : {q / a, q != 0.0 ? c / q : 0.0}) {
    if (r > 0.0 && std::isfinite(r)) out.push_back(r);
  }
}

}  // namespace

StabilityWindows stability_windows(double t1, double t2, double g, double alpha, double xi) {
  StabilityWindows w;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto disc_at = [&](double gg) { return equilibrium_discriminant(t1, t2, gg, alpha, xi); };
  auto holds = [&](double gg) {
    const double d = disc_at(gg);
    return d > 0.0 && d < 4.0;
  };

  const double disc = disc_at(g);
  w.derivative_at_y_min = disc >= 0.0 ? std::abs(1.0 - std::sqrt(disc)) : std::numeric_limits<double>::infinity();
  w.stable = w.derivative_at_y_min < 1.0;

  // disc(g) = A g^2 - 2 t2 g + 1; the window edges are where it crosses 0 or 4.
  const double a = t2 * t2 - 4.0 * t1 * alpha * xi;
  std::vector<double> edges{0.0};
  positive_roots(a, -2.0 * t2, 1.0, edges);
  positive_roots(a, -2.0 * t2, -3.0, edges);
  edges.push_back(std::numeric_limits<double>::infinity());
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (g > edges[i] && g < edges[i + 1]) {
      if (holds(g)) w.g_window = {edges[i], edges[i + 1]};
      else w.g_window = {nan, nan};
      break;
    }
  }
  if (!w.stable) w.g_window = {nan, nan};

  const double txi = t1 * alpha * xi;
  w.g_window_literal.lower = 1.0 / (t2 + 2.0 * std::sqrt(txi));
  w.g_window_literal.upper = (t2 + 2.0 * std::sqrt(t2 * t2 - txi)) / (t2 * t2 - 4.0 * txi);

  const double den = 4.0 * t1 * xi * g * g;
  const double tg = t2 * g;
  w.alpha_window.lower = std::max(safe_ratio(tg * tg - 2.0 * tg - 3.0, den), 0.0);
  w.alpha_window.upper = std::min(safe_ratio(tg * tg - 2.0 * tg + 1.0, den), 1.0);
  return w;
}

}  // namespace dgn
