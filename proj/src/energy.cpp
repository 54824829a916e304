#include "nehari/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace nehari {

void Field::clamp_nonnegative() {
  for (auto& c : comp)
    for (double& v : c.v)
      if (v < 0.0) v = 0.0;
}

void Field::scale(double c) {
  for (auto& f : comp)
    for (double& v : f.v) v *= c;
}

void Field::scale_group(const Decomposition& dec, int h, double c) {
  for (int i = dec.group_begin(h); i < dec.group_end(h); ++i)
    for (double& v : comp[i].v) v *= c;
}

void check_conforms(const Grid& g, const CouplingSpec& spec, const Field& u) {
  if (u.grid != &g || u.d() != spec.d)
    throw std::runtime_error("field does not conform to grid/spec");
  for (const auto& c : u.comp) check_conforms(g, c);
}

namespace {

// Quartic interaction mass: sum u_i^2 u_j^2 quadWeight.
double pair_mass(const ScalarField& a, const ScalarField& b) {
  const Grid& g = *a.grid;
  double s = 0.0;
  for (int i = 0; i < g.node_count(); ++i)
    s += a.v[i] * a.v[i] * b.v[i] * b.v[i] * g.quad_weight[i];
  return s;
}

}  // namespace

double GroupStats::offdiag_mass() const {
  double s = 0.0;
  const int m = static_cast<int>(mb.size());
  for (int h = 0; h < m; ++h)
    for (int k = 0; k < m; ++k)
      if (h != k) s += std::abs(mb[h][k]);
  return s;
}

GroupStats group_stats(const CouplingSpec& spec, const Decomposition& dec, const Field& u) {
  const int m = dec.m();
  GroupStats st;
  st.group_norms.assign(m, 0.0);
  st.mb.assign(m, std::vector<double>(m, 0.0));
  st.g.assign(m, 0.0);
  for (int h = 0; h < m; ++h)
    for (int i = dec.group_begin(h); i < dec.group_end(h); ++i)
      st.group_norms[h] += inner_product(u.comp[i], u.comp[i], spec.lambda[i]);
  for (int h = 0; h < m; ++h)
    for (int k = h; k < m; ++k) {
      double s = 0.0;
      for (int i = dec.group_begin(h); i < dec.group_end(h); ++i) {
        int jbegin = (h == k) ? i : dec.group_begin(k);
        for (int j = jbegin; j < dec.group_end(k); ++j) {
          double bij = spec.beta[i][j];
          if (bij == 0.0) continue;
          double mass = pair_mass(u.comp[i], u.comp[j]);
          // Unordered off-diagonal pairs appear twice in the I_h x I_k sum.
          s += (h == k && i != j) ? 2.0 * bij * mass : bij * mass;
        }
      }
      st.mb[h][k] = s;
      st.mb[k][h] = s;
    }
  for (int h = 0; h < m; ++h) {
    double row = 0.0;
    for (int k = 0; k < m; ++k) row += st.mb[h][k];
    st.g[h] = st.group_norms[h] - row;
  }
  return st;
}

double eval_energy(const CouplingSpec& spec, const Decomposition& dec, const Field& u) {
  (void)dec;
  double quad = 0.0;
  for (int i = 0; i < spec.d; ++i)
    quad += inner_product(u.comp[i], u.comp[i], spec.lambda[i]);
  double quart = 0.0;
  for (int i = 0; i < spec.d; ++i) {
    quart += spec.beta[i][i] * pair_mass(u.comp[i], u.comp[i]);
    for (int j = i + 1; j < spec.d; ++j)
      if (spec.beta[i][j] != 0.0)
        quart += 2.0 * spec.beta[i][j] * pair_mass(u.comp[i], u.comp[j]);
  }
  return 0.5 * quad - 0.25 * quart;
}

Field grad_energy(const CouplingSpec& spec, const Decomposition& dec, const Field& u) {
  (void)dec;
  const Grid& g = *u.grid;
  Field out(g, spec.d);
  for (int i = 0; i < spec.d; ++i) {
    out.comp[i] = neg_laplacian(u.comp[i]);
    for (int p = 0; p < g.node_count(); ++p) {
      if (!g.interior[p]) continue;
      double coupling = 0.0;
      for (int j = 0; j < spec.d; ++j) {
        double uj = u.comp[j].v[p];
        coupling += spec.beta[i][j] * uj * uj;
      }
      out.comp[i].v[p] += (spec.lambda[i] - coupling) * u.comp[i].v[p];
    }
  }
  return out;
}

Membership membership(const CouplingSpec& spec, const Decomposition& dec, const Field& u,
                      double tol) {
  GroupStats st = group_stats(spec, dec, u);
  const int m = dec.m();
  Membership mem;
  mem.in_nehari = true;
  mem.in_nehari_relaxed = true;
  for (int h = 0; h < m; ++h) {
    bool nonzero = st.group_norms[h] > tol;
    mem.in_nehari = mem.in_nehari && nonzero && std::abs(st.g[h]) <= tol * st.group_norms[h];
    mem.in_nehari_relaxed =
        mem.in_nehari_relaxed && nonzero && st.g[h] >= -tol * st.group_norms[h];
  }
  mem.in_dominant = true;
  for (int h = 0; h < m; ++h) {
    double off = 0.0;
    for (int k = 0; k < m; ++k)
      if (k != h) off += std::abs(st.mb[h][k]);
    if (!(st.mb[h][h] > off)) mem.in_dominant = false;
  }
  return mem;
}

double second_diff(const CouplingSpec& spec, const Decomposition& dec, const Field& u,
                   const Field& v) {
  (void)dec;
  const Grid& g = *u.grid;
  double s = 0.0;
  for (int i = 0; i < spec.d; ++i)
    s += inner_product(v.comp[i], v.comp[i], spec.lambda[i]);
  for (int i = 0; i < spec.d; ++i)
    for (int j = 0; j < spec.d; ++j) {
      double bij = spec.beta[i][j];
      if (bij == 0.0) continue;
      double a = 0.0, b = 0.0;
      for (int p = 0; p < g.node_count(); ++p) {
        double w = g.quad_weight[p];
        a += u.comp[i].v[p] * u.comp[i].v[p] * v.comp[j].v[p] * v.comp[j].v[p] * w;
        b += u.comp[i].v[p] * u.comp[j].v[p] * v.comp[i].v[p] * v.comp[j].v[p] * w;
      }
      s -= bij * (a + 2.0 * b);
    }
  return s;
}

double grad_residual_norm(const CouplingSpec& spec, const Decomposition& dec,
                          const Field& u) {
  Field gr = grad_energy(spec, dec, u);
  double s = 0.0;
  for (const auto& c : gr.comp) s += dot_weighted(c, c);
  return std::sqrt(s);
}

}  // namespace nehari
