#pragma once

#include <vector>

#include "nehari/coupling.hpp"
#include "nehari/grid.hpp"

namespace nehari {

/// d-component grid function on a shared grid.
struct Field {
  const Grid* grid = nullptr;
  std::vector<ScalarField> comp;

  Field() = default;
  Field(const Grid& g, int d) : grid(&g), comp(d, ScalarField(g)) {}

  int d() const { return static_cast<int>(comp.size()); }
  void clamp_nonnegative();
  void scale(double c);
  /// Multiply the components of group h by c.
  void scale_group(const Decomposition& dec, int h, double c);
};

void check_conforms(const Grid& g, const CouplingSpec& spec, const Field& u);

/// Group aggregates of a field: the group norms ||u_h||_h^2, the interaction
/// matrix M_B(u), and the Nehari residuals G_h = ||u_h||^2 - sum_k MB_hk.
struct GroupStats {
  std::vector<double> group_norms;
  Matrix mb;
  std::vector<double> g;

  double offdiag_mass() const;  // sum of |MB_hk|, h != k
};

double eval_energy(const CouplingSpec& spec, const Decomposition& dec, const Field& u);

/// L2-gradient (PDE residual operator): component i is
/// -Lap u_i + lambda_i u_i - sum_j beta_ij u_j^2 u_i. Directional derivatives
/// of eval_energy in the weighted inner product match this exactly.
Field grad_energy(const CouplingSpec& spec, const Decomposition& dec, const Field& u);

GroupStats group_stats(const CouplingSpec& spec, const Decomposition& dec, const Field& u);

struct Membership {
  bool in_nehari = false;          // N: |G_h| small, groups nonzero
  bool in_nehari_relaxed = false;  // N-tilde: G_h <= tol, groups nonzero
  bool in_dominant = false;        // E: M_B strictly diagonally dominant
};

Membership membership(const CouplingSpec& spec, const Decomposition& dec, const Field& u,
                      double tol = 1e-8);

/// Quadratic form d^2 J(u)[v, v].
double second_diff(const CouplingSpec& spec, const Decomposition& dec, const Field& u,
                   const Field& v);

/// Weighted norm of the free gradient; small iff u is a free critical point.
double grad_residual_norm(const CouplingSpec& spec, const Decomposition& dec,
                          const Field& u);

}  // namespace nehari
