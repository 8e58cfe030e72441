#pragma once
// Reference values computed with 50-digit arithmetic by
// make_formula_oracles.py and frozen in formula_oracles.inc.

namespace dgn::oracles {

struct Lemma1Case {
  double alpha, omega, Sigma_min, Sigma_max, e_min;
  int nodes;
  double t1, t2;
};

struct Lemma2Case {
  double alpha, sigma_min, sigma_max, eps_max, gamma_f;
  int n_kl, n_l, n_k_given_l, n_l_given_k;
  double a1, a2;
};

struct PiCase {
  double a1, a2;
  int i;
  double pi;
};

struct DiscrepancyCase {
  double sigma_min, sigma_max, eps_max, gamma_f, gamma_F;
  int nodes, n_k;
  double pi, zeta, xi;
};

struct EquilibriumCase {
  double t1, t2, g, alpha, xi, y_min, y_max;
};

#include "formula_oracles.inc"

}  // namespace dgn::oracles
