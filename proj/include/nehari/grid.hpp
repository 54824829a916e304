#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nehari {

enum class GridKind { Rectangle2D, Disk2D, Annulus2D, RadialLine };

std::string to_string(GridKind k);
GridKind grid_kind_from_string(const std::string& s);

/// Discretized domain: a uniform node lattice with an interior mask
/// (Dirichlet zero on masked nodes) and per-node quadrature weights.
///
/// Planar kinds live on an n-by-n lattice; RadialLine is a 1D grid of n
/// nodes r_i = i*h housing radially symmetric functions on R^N, N in {2,3}.
/// A Grid is immutable after construction and safe to share across threads.
struct Grid {
  GridKind kind = GridKind::Rectangle2D;
  int n = 0;       // points per axis
  double h = 0.0;  // spacing
  double x0 = 0.0, y0 = 0.0;
  int space_dim = 2;  // N (only meaningful for RadialLine)
  double side = 0.0, radius = 0.0, radius_inner = 0.0, r_max = 0.0;

  std::vector<std::uint8_t> interior;
  std::vector<double> quad_weight;

  static Grid square(double side, int n, bool centered = false);
  static Grid disk(double radius, int n);
  static Grid annulus(double r_in, double r_out, int n);
  static Grid radial_line(int space_dim, double r_max, int n);

  bool planar() const { return kind != GridKind::RadialLine; }
  int node_count() const { return planar() ? n * n : n; }
  int idx(int ix, int iy) const { return iy * n + ix; }
  double x(int ix) const { return x0 + ix * h; }
  double y(int iy) const { return y0 + iy * h; }
  bool is_interior(int ix, int iy) const {
    return ix >= 0 && ix < n && iy >= 0 && iy < n && interior[idx(ix, iy)];
  }
  double total_weight() const;

  /// True when the node lattice (and mask) has the full dihedral symmetry
  /// of the square about the origin. Needed by the polarization machinery.
  bool centered_symmetric() const;

  /// Copy of this grid with the interior restricted to x in [xlo, xhi).
  /// Throws std::runtime_error if the restriction has empty interior.
  Grid restricted_to_slab(double xlo, double xhi) const;
};

/// Grid function, zero on masked nodes.
struct ScalarField {
  const Grid* grid = nullptr;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(&g), v(g.node_count(), 0.0) {}

  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  int size() const { return static_cast<int>(v.size()); }

  void zero_masked();  // enforce the boundary invariant
};

void check_conforms(const Grid& g, const ScalarField& u);

/// Applies -Laplace to u: 5-point stencil with Dirichlet-zero ghost values
/// on planar grids, conservative (1/r^{N-1})(r^{N-1} u')' discretization on
/// radial lines with a reflection condition u'(0)=0 at the origin.
ScalarField neg_laplacian(const ScalarField& u);

/// Weighted L2 pairing: sum u v quadWeight.
double dot_weighted(const ScalarField& u, const ScalarField& v);

/// Discrete Dirichlet form sum grad(u).grad(v). Assembled face by face, so it
/// is exactly symmetric and equals dot_weighted(u, neg_laplacian(v)) to
/// roundoff.
double gradient_form(const ScalarField& u, const ScalarField& v);

/// <u,v>_lambda = gradient_form + lambda * L2 pairing.
double inner_product(const ScalarField& u, const ScalarField& v, double lambda);

inline double norm_sq(const ScalarField& u, double lambda) {
  return inner_product(u, u, lambda);
}

/// (sum |u|^p quadWeight)^{1/p}. The weighted terms are accumulated in sorted
/// order, so the result is invariant under node permutations that preserve
/// the multiset of values (polarization in particular). Throws for p < 1.
double lp_norm(const ScalarField& u, double p);

/// Conjugate gradient solve of (-Laplace + shift) x = b in the weighted
/// inner product. Returns the solution; throws on non-convergence.
ScalarField solve_shifted_poisson(const ScalarField& b, double shift,
                                  double tol = 1e-12, int max_iter = 100000);

/// First Dirichlet eigenvalue of -Laplace by inverse power iteration.
/// Bounded planar kinds only. Iteration cap 10000.
double first_eigenvalue(const Grid& g, double tol = 1e-10);

}  // namespace nehari
