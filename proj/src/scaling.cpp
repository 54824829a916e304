#include "nehari/scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace nehari {

double scaling_energy(const GroupStats& st, const std::vector<double>& t) {
  const int m = static_cast<int>(st.group_norms.size());
  if (static_cast<int>(t.size()) != m)
    throw std::invalid_argument("scaling vector has wrong length");
  for (double th : t)
    if (th < 0.0) throw std::invalid_argument("scaling vector must be nonnegative");
  double lin = 0.0, quad = 0.0;
  for (int h = 0; h < m; ++h) {
    lin += st.group_norms[h] * t[h];
    for (int k = 0; k < m; ++k) quad += st.mb[h][k] * t[h] * t[k];
  }
  return 0.5 * lin - 0.25 * quad;
}

double scaling_energy(const CouplingSpec& spec, const Decomposition& dec, const Field& u,
                      const std::vector<double>& t) {
  return scaling_energy(group_stats(spec, dec, u), t);
}

ScalingResult solve_scaling(const CouplingSpec& spec, const Decomposition& dec,
                            const Field& u) {
  GroupStats st = group_stats(spec, dec, u);
  const int m = dec.m();
  for (double gn : st.group_norms)
    if (!(gn > 0.0)) throw std::runtime_error("scaling requires every group nonzero");

  ScalingResult res;
  res.conditioning = st.mb[0][0];
  for (int h = 0; h < m; ++h) {
    double off = 0.0;
    for (int k = 0; k < m; ++k)
      if (k != h) off += std::abs(st.mb[h][k]);
    double margin = st.mb[h][h] - off;
    if (h == 0 || margin < res.conditioning) res.conditioning = margin;
  }

  res.solvable = solve_dense(st.mb, st.group_norms, res.t);
  if (!res.solvable) {
    res.t.assign(m, 0.0);
    return res;
  }
  res.all_positive = true;
  for (double th : res.t)
    if (!(th > 0.0)) res.all_positive = false;
  return res;
}

std::optional<Field> try_project(const CouplingSpec& spec, const Decomposition& dec,
                                 const Field& u) {
  ScalingResult sr = solve_scaling(spec, dec, u);
  if (!sr.solvable || !sr.all_positive) return std::nullopt;
  Field out = u;
  for (int h = 0; h < dec.m(); ++h) out.scale_group(dec, h, std::sqrt(sr.t[h]));
  return out;
}

Field project_to_nehari(const CouplingSpec& spec, const Decomposition& dec,
                        const Field& u) {
  auto out = try_project(spec, dec, u);
  if (!out) throw std::runtime_error("projection leaves positive orthant");
  return *std::move(out);
}

double natural_constraint_residual(const CouplingSpec& spec, const Decomposition& dec,
                                   const Field& u) {
  return grad_residual_norm(spec, dec, u);
}

}  // namespace nehari
