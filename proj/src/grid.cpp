#include "nehari/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nehari {

namespace {

constexpr double kPi = 3.14159265358979323846;

double surface_constant(int space_dim) {
  // |S^{N-1}|: 2*pi for N=2, 4*pi for N=3.
  return space_dim == 2 ? 2.0 * kPi : 4.0 * kPi;
}

}  // namespace

std::string to_string(GridKind k) {
  switch (k) {
    case GridKind::Rectangle2D: return "rectangle2d";
    case GridKind::Disk2D: return "disk2d";
    case GridKind::Annulus2D: return "annulus2d";
    case GridKind::RadialLine: return "radialLine";
  }
  return "?";
}

GridKind grid_kind_from_string(const std::string& s) {
  if (s == "rectangle2d") return GridKind::Rectangle2D;
  if (s == "disk2d") return GridKind::Disk2D;
  if (s == "annulus2d") return GridKind::Annulus2D;
  if (s == "radialLine") return GridKind::RadialLine;
  throw std::runtime_error("unknown grid kind: " + s);
}

Grid Grid::square(double side, int n, bool centered) {
  if (n < 3 || side <= 0.0) throw std::invalid_argument("square: need n >= 3, side > 0");
  Grid g;
  g.kind = GridKind::Rectangle2D;
  g.n = n;
  g.h = side / (n - 1);
  g.side = side;
  g.x0 = centered ? -side / 2.0 : 0.0;
  g.y0 = g.x0;
  g.interior.assign(n * n, 0);
  g.quad_weight.assign(n * n, 0.0);
  for (int iy = 1; iy < n - 1; ++iy)
    for (int ix = 1; ix < n - 1; ++ix) {
      g.interior[g.idx(ix, iy)] = 1;
      g.quad_weight[g.idx(ix, iy)] = g.h * g.h;
    }
  return g;
}

Grid Grid::disk(double radius, int n) {
  if (n < 5 || n % 2 == 0) throw std::invalid_argument("disk: need odd n >= 5");
  if (radius <= 0.0) throw std::invalid_argument("disk: radius > 0");
  Grid g;
  g.kind = GridKind::Disk2D;
  g.n = n;
  g.h = 2.0 * radius / (n - 1);
  g.radius = radius;
  g.x0 = -radius;
  g.y0 = -radius;
  g.interior.assign(n * n, 0);
  g.quad_weight.assign(n * n, 0.0);
  // Nodes within a quarter cell of the circle are masked. With the Dirichlet
  // ghost sitting one cell past the last interior node, this centers the
  // effective boundary on the circle; calibrated on the known first
  // eigenvalue, it beats both the r < R and r < R - h/2 conventions.
  const double rc = radius - 0.25 * g.h;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double r2 = g.x(ix) * g.x(ix) + g.y(iy) * g.y(iy);
      if (r2 < rc * rc * (1.0 - 1e-14)) {
        g.interior[g.idx(ix, iy)] = 1;
        g.quad_weight[g.idx(ix, iy)] = g.h * g.h;
      }
    }
  return g;
}

Grid Grid::annulus(double r_in, double r_out, int n) {
  if (n < 5 || n % 2 == 0) throw std::invalid_argument("annulus: need odd n >= 5");
  if (!(0.0 < r_in && r_in < r_out)) throw std::invalid_argument("annulus: 0 < r_in < r_out");
  Grid g;
  g.kind = GridKind::Annulus2D;
  g.n = n;
  g.h = 2.0 * r_out / (n - 1);
  g.radius = r_out;
  g.radius_inner = r_in;
  g.x0 = -r_out;
  g.y0 = -r_out;
  g.interior.assign(n * n, 0);
  g.quad_weight.assign(n * n, 0.0);
  const double ro = r_out - 0.25 * g.h;
  const double ri = r_in + 0.25 * g.h;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double r2 = g.x(ix) * g.x(ix) + g.y(iy) * g.y(iy);
      if (r2 < ro * ro * (1.0 - 1e-14) && r2 > ri * ri * (1.0 + 1e-14)) {
        g.interior[g.idx(ix, iy)] = 1;
        g.quad_weight[g.idx(ix, iy)] = g.h * g.h;
      }
    }
  return g;
}

Grid Grid::radial_line(int space_dim, double r_max, int n) {
  if (space_dim != 2 && space_dim != 3)
    throw std::invalid_argument("radial_line: N must be 2 or 3");
  if (n < 3 || r_max <= 0.0) throw std::invalid_argument("radial_line: need n >= 3, r_max > 0");
  Grid g;
  g.kind = GridKind::RadialLine;
  g.n = n;
  g.space_dim = space_dim;
  g.h = r_max / (n - 1);
  g.r_max = r_max;
  g.interior.assign(n, 1);
  g.interior[n - 1] = 0;  // Dirichlet at the truncation radius
  g.quad_weight.assign(n, 0.0);
  // Finite-volume cell measures c_N (r_{i+1/2}^N - r_{i-1/2}^N)/N; these make
  // the weighted radial Laplacian exactly self-adjoint.
  const double cN = surface_constant(space_dim);
  const int N = space_dim;
  for (int i = 0; i + 1 < n; ++i) {
    double rlo = std::max(0.0, (i - 0.5) * g.h);
    double rhi = (i + 0.5) * g.h;
    g.quad_weight[i] = cN * (std::pow(rhi, N) - std::pow(rlo, N)) / N;
  }
  return g;
}

double Grid::total_weight() const {
  return std::accumulate(quad_weight.begin(), quad_weight.end(), 0.0);
}

bool Grid::centered_symmetric() const {
  if (!planar()) return false;
  if (n % 2 == 0) return false;
  if (std::abs(x0 + 0.5 * side) > 1e-12 * h && kind == GridKind::Rectangle2D) return false;
  // Disk/annulus masks are symmetric by construction (they depend on r only).
  return true;
}

Grid Grid::restricted_to_slab(double xlo, double xhi) const {
  if (!planar()) throw std::runtime_error("slab restriction needs a planar grid");
  Grid g = *this;
  int count = 0;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      int i = idx(ix, iy);
      if (!g.interior[i]) continue;
      if (x(ix) < xlo || x(ix) >= xhi) {
        g.interior[i] = 0;
        g.quad_weight[i] = 0.0;
      } else {
        ++count;
      }
    }
  if (count == 0) throw std::runtime_error("slab restriction has empty interior");
  return g;
}

void ScalarField::zero_masked() {
  for (int i = 0; i < size(); ++i)
    if (!grid->interior[i]) v[i] = 0.0;
}

void check_conforms(const Grid& g, const ScalarField& u) {
  if (u.grid != &g || static_cast<int>(u.v.size()) != g.node_count())
    throw std::runtime_error("field does not conform to grid");
}

ScalarField neg_laplacian(const ScalarField& u) {
  const Grid& g = *u.grid;
  ScalarField out(g);
  if (g.planar()) {
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix) {
        int i = g.idx(ix, iy);
        if (!g.interior[i]) continue;
        double c = u.v[i];
        double l = g.is_interior(ix - 1, iy) ? u.v[g.idx(ix - 1, iy)] : 0.0;
        double r = g.is_interior(ix + 1, iy) ? u.v[g.idx(ix + 1, iy)] : 0.0;
        double d = g.is_interior(ix, iy - 1) ? u.v[g.idx(ix, iy - 1)] : 0.0;
        double t = g.is_interior(ix, iy + 1) ? u.v[g.idx(ix, iy + 1)] : 0.0;
        out.v[i] = (4.0 * c - l - r - d - t) * inv_h2;
      }
  } else {
    const double cN = surface_constant(g.space_dim);
    const int N = g.space_dim;
    const int n = g.n;
    auto face_area = [&](double r) { return cN * std::pow(r, N - 1); };
    for (int i = 0; i + 1 < n; ++i) {
      double up = (i + 1 < n - 1) ? u.v[i + 1] : 0.0;  // Dirichlet at r_max
      double flux_hi = face_area((i + 0.5) * g.h) * (up - u.v[i]) / g.h;
      double flux_lo =
          i == 0 ? 0.0 : face_area((i - 0.5) * g.h) * (u.v[i] - u.v[i - 1]) / g.h;
      out.v[i] = (flux_lo - flux_hi) / g.quad_weight[i];
    }
  }
  return out;
}

double dot_weighted(const ScalarField& u, const ScalarField& v) {
  if (u.grid != v.grid) throw std::runtime_error("field grid mismatch");
  const Grid& g = *u.grid;
  double s = 0.0;
  for (int i = 0; i < g.node_count(); ++i) s += u.v[i] * v.v[i] * g.quad_weight[i];
  return s;
}

double gradient_form(const ScalarField& u, const ScalarField& v) {
  if (u.grid != v.grid) throw std::runtime_error("field grid mismatch");
  const Grid& g = *u.grid;
  double s = 0.0;
  if (g.planar()) {
    // Per face (du)(dv); the h factors cancel in 2D. Interior-masked faces
    // contribute u*v from the interior side.
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix) {
        int i = g.idx(ix, iy);
        if (!g.interior[i]) continue;
        if (g.is_interior(ix + 1, iy)) {
          int j = g.idx(ix + 1, iy);
          s += (u.v[j] - u.v[i]) * (v.v[j] - v.v[i]);
        } else {
          s += u.v[i] * v.v[i];
        }
        if (g.is_interior(ix, iy + 1)) {
          int j = g.idx(ix, iy + 1);
          s += (u.v[j] - u.v[i]) * (v.v[j] - v.v[i]);
        } else {
          s += u.v[i] * v.v[i];
        }
        if (!g.is_interior(ix - 1, iy)) s += u.v[i] * v.v[i];
        if (!g.is_interior(ix, iy - 1)) s += u.v[i] * v.v[i];
      }
  } else {
    const double cN = surface_constant(g.space_dim);
    const int N = g.space_dim;
    for (int i = 0; i + 1 < g.n; ++i) {
      double uu = (i + 1 < g.n - 1) ? u.v[i + 1] : 0.0;
      double vv = (i + 1 < g.n - 1) ? v.v[i + 1] : 0.0;
      double area = cN * std::pow((i + 0.5) * g.h, N - 1);
      s += area * (uu - u.v[i]) * (vv - v.v[i]) / g.h;
    }
  }
  return s;
}

double inner_product(const ScalarField& u, const ScalarField& v, double lambda) {
  return gradient_form(u, v) + lambda * dot_weighted(u, v);
}

double lp_norm(const ScalarField& u, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p >= 1 required");
  const Grid& g = *u.grid;
  std::vector<double> terms;
  terms.reserve(g.node_count());
  for (int i = 0; i < g.node_count(); ++i)
    if (g.interior[i]) terms.push_back(std::pow(std::abs(u.v[i]), p) * g.quad_weight[i]);
  std::sort(terms.begin(), terms.end());
  double s = std::accumulate(terms.begin(), terms.end(), 0.0);
  return std::pow(s, 1.0 / p);
}

ScalarField solve_shifted_poisson(const ScalarField& b, double shift, double tol,
                                  int max_iter) {
  const Grid& g = *b.grid;
  ScalarField x(g);
  ScalarField r = b;
  r.zero_masked();
  ScalarField p = r;
  double rs = dot_weighted(r, r);
  const double rs0 = rs;
  if (rs0 == 0.0) return x;
  for (int it = 0; it < max_iter; ++it) {
    ScalarField ap = neg_laplacian(p);
    if (shift != 0.0)
      for (int i = 0; i < g.node_count(); ++i)
        if (g.interior[i]) ap.v[i] += shift * p.v[i];
    double alpha = rs / dot_weighted(p, ap);
    for (int i = 0; i < g.node_count(); ++i) {
      x.v[i] += alpha * p.v[i];
      r.v[i] -= alpha * ap.v[i];
    }
    double rs_new = dot_weighted(r, r);
    if (rs_new <= tol * tol * rs0) return x;
    double beta = rs_new / rs;
    for (int i = 0; i < g.node_count(); ++i) p.v[i] = r.v[i] + beta * p.v[i];
    rs = rs_new;
  }
  throw std::runtime_error("solve_shifted_poisson: CG did not converge");
}

double first_eigenvalue(const Grid& g, double tol) {
  if (!g.planar()) throw std::runtime_error("first_eigenvalue: bounded planar grids only");
  ScalarField x(g);
  for (int i = 0; i < g.node_count(); ++i)
    if (g.interior[i]) x.v[i] = 1.0;
  double mu_prev = 0.0;
  const int cap = 10000;
  for (int it = 0; it < cap; ++it) {
    ScalarField y = solve_shifted_poisson(x, 0.0, 1e-13);
    double nn = std::sqrt(dot_weighted(y, y));
    for (double& v : y.v) v /= nn;
    double mu = gradient_form(y, y) / dot_weighted(y, y);
    x = y;
    if (it > 0 && std::abs(mu - mu_prev) < tol * std::abs(mu)) return mu;
    mu_prev = mu;
  }
  throw std::runtime_error("first_eigenvalue: no convergence within iteration cap");
}

}  // namespace nehari
