#include "nehari/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nehari {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Least-squares slope of log(values) against r over points with value above
// the floor. Returns false if fewer than two usable points remain.
bool fit_log_slope(const std::vector<double>& r, const std::vector<double>& val,
                   double& slope, int& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t k = 0; k < r.size(); ++k) {
    if (val[k] < 1e-14) continue;
    double y = std::log(val[k]);
    sx += r[k];
    sy += y;
    sxx += r[k] * r[k];
    sxy += r[k] * y;
    ++n;
  }
  if (n < 2) return false;
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) return false;
  slope = (n * sxy - sx * sy) / denom;
  points = n;
  return true;
}

}  // namespace

double default_r_max(const CouplingSpec& spec) {
  double lmin = *std::min_element(spec.lambda.begin(), spec.lambda.end());
  if (!(lmin > 0.0)) throw std::invalid_argument("default_r_max: lambda > 0 required");
  return 12.0 / std::sqrt(lmin);
}

SubsystemLevel subsystem_level(const CouplingSpec& spec, const Decomposition& dec, int h,
                               const Grid& radial_grid, const SolverConfig& cfg) {
  if (radial_grid.kind != GridKind::RadialLine)
    throw std::invalid_argument("subsystem_level: radial grid required");
  if (h < 0 || h >= dec.m()) throw std::invalid_argument("subsystem_level: bad group");
  const int b = dec.group_begin(h), e = dec.group_end(h);
  for (int i = b; i < e; ++i) {
    if (!(spec.lambda[i] > 0.0))
      throw std::invalid_argument("subsystem_level: lambda > 0 required");
    for (int j = b; j < e; ++j)
      if (!(spec.beta[i][j] > 0.0))
        throw std::invalid_argument("subsystem_level: beta > 0 within the group required");
  }

  CouplingSpec sub = spec.restricted(b, e);
  Decomposition dsub = Decomposition::make({0, e - b});
  SolveResult r = minimize(radial_grid, dsub, sub, cfg);

  SubsystemLevel lev;
  lev.h = h;
  lev.level = r.energy;
  lev.profile = std::move(r.field);
  lev.lambda_min = *std::min_element(sub.lambda.begin(), sub.lambda.end());
  lev.converged = r.converged;

  // Tail slope of the total profile, informational.
  const Grid& g = radial_grid;
  std::vector<double> rs, vs;
  for (int i = 0; i < g.n; ++i) {
    double rr = i * g.h;
    if (rr < 0.5 * g.r_max || rr > 0.9 * g.r_max) continue;
    double s = 0.0;
    for (const auto& c : lev.profile.comp) s += c.v[i];
    rs.push_back(rr);
    vs.push_back(s);
  }
  int pts = 0;
  fit_log_slope(rs, vs, lev.decay_rate, pts);
  return lev;
}

DecayFit decay_audit(const SubsystemLevel& lev, double beta_fraction) {
  if (!(beta_fraction > 0.0 && beta_fraction < 1.0))
    throw std::invalid_argument("decay_audit: beta fraction must be in (0, 1)");
  const Grid& g = *lev.profile.grid;
  if (g.kind != GridKind::RadialLine)
    throw std::invalid_argument("decay_audit: radial profile required");

  DecayFit fit;
  fit.required = -std::sqrt(beta_fraction * lev.lambda_min) * 0.95;
  fit.r_lo = 0.5 * g.r_max;
  fit.r_hi = 0.9 * g.r_max;

  bool any = false;
  for (const auto& comp : lev.profile.comp) {
    for (int attempt = 0; attempt < 2; ++attempt) {
      double lo = attempt == 0 ? fit.r_lo : 0.25 * g.r_max;
      std::vector<double> rs, vs;
      for (int i = 0; i < g.n; ++i) {
        double rr = i * g.h;
        if (rr < lo || rr > fit.r_hi) continue;
        rs.push_back(rr);
        vs.push_back(comp.v[i]);
      }
      double slope;
      int pts;
      if (fit_log_slope(rs, vs, slope, pts)) {
        fit.component_slopes.push_back(slope);
        fit.points = std::max(fit.points, pts);
        if (attempt == 1) fit.r_lo = lo;
        any = true;
        break;
      }
      if (attempt == 1)
        throw std::runtime_error("decay_audit: profile below floor on the whole window");
    }
  }
  if (!any) throw std::runtime_error("decay_audit: no component to fit");
  fit.slope = *std::max_element(fit.component_slopes.begin(), fit.component_slopes.end());
  fit.pass = fit.slope <= fit.required;
  return fit;
}

namespace {

// Linear interpolation of a radial sample vector at radius r.
double interp_radial(const ScalarField& v, double r) {
  const Grid& g = *v.grid;
  double s = r / g.h;
  int i = static_cast<int>(s);
  if (i >= g.n - 1) return 0.0;
  double f = s - i;
  return (1.0 - f) * v.v[i] + f * v.v[i + 1];
}

}  // namespace

SplittingTable splitting_experiment(const CouplingSpec& spec, const Decomposition& dec,
                                    const std::vector<double>& radii,
                                    const Grid& planar_grid, const Grid& radial_grid,
                                    const SolverConfig& cfg) {
  if (dec.m() < 2) throw std::invalid_argument("splitting_experiment: m >= 2 required");
  RegimeVerdict rv = validate_regime(dec, spec, ConstantsReport{}, Theorem::NonexistenceRN);
  if (!rv.ok)
    throw std::runtime_error("splitting_experiment: competitive regime hypotheses fail");
  if (!planar_grid.planar() || !planar_grid.centered_symmetric())
    throw std::invalid_argument("splitting_experiment: centered planar grid required");

  SplittingTable table;
  for (int h = 0; h < dec.m(); ++h) {
    table.levels.push_back(subsystem_level(spec, dec, h, radial_grid, cfg));
    table.sum_levels += table.levels.back().level;
  }

  const Grid& g = planar_grid;
  const double cx = g.x0 + 0.5 * (g.n - 1) * g.h;
  const double cy = g.y0 + 0.5 * (g.n - 1) * g.h;
  const double half = 0.5 * (g.n - 1) * g.h;

  for (double R : radii) {
    if (R + radial_grid.r_max > half + 1e-9)
      throw std::runtime_error("splitting_experiment: profile overlaps the outer boundary");

    Field u(g, spec.d);
    for (int h = 0; h < dec.m(); ++h) {
      double ang = 2.0 * kPi * h / dec.m();
      double ox = cx + R * std::cos(ang), oy = cy + R * std::sin(ang);
      for (int i = dec.group_begin(h); i < dec.group_end(h); ++i) {
        const ScalarField& prof = table.levels[h].profile.comp[i - dec.group_begin(h)];
        for (int iy = 0; iy < g.n; ++iy)
          for (int ix = 0; ix < g.n; ++ix) {
            int q = g.idx(ix, iy);
            if (!g.interior[q]) continue;
            double dx = g.x(ix) - ox, dy = g.y(iy) - oy;
            u.comp[i].v[q] = interp_radial(prof, std::hypot(dx, dy));
          }
      }
      // Re-scale the group onto its own sub-system constraint: the radial
      // profile satisfies it on the radial grid, not on this one, and the
      // decoupled limit t -> 1 should reflect only cross-group coupling.
      CouplingSpec sub = spec.restricted(dec.group_begin(h), dec.group_end(h));
      Decomposition dsub = Decomposition::make({0, dec.group_size(h)});
      Field gh(g, dec.group_size(h));
      for (int i = 0; i < dec.group_size(h); ++i)
        gh.comp[i] = u.comp[dec.group_begin(h) + i];
      ScalingResult sr = solve_scaling(sub, dsub, gh);
      if (!sr.solvable || !sr.all_positive)
        throw std::runtime_error("splitting_experiment: group projection failed");
      for (int i = dec.group_begin(h); i < dec.group_end(h); ++i)
        for (double& v : u.comp[i].v) v *= std::sqrt(sr.t[0]);
    }

    SplitPoint pt;
    pt.R = R;
    for (int h = 0; h < dec.m(); ++h) {
      CouplingSpec sub = spec.restricted(dec.group_begin(h), dec.group_end(h));
      Decomposition dsub = Decomposition::make({0, dec.group_size(h)});
      Field gh(g, dec.group_size(h));
      for (int i = 0; i < dec.group_size(h); ++i)
        gh.comp[i] = u.comp[dec.group_begin(h) + i];
      pt.decoupled_energy += eval_energy(sub, dsub, gh);
    }
    pt.offdiag_mass = group_stats(spec, dec, u).offdiag_mass();
    ScalingResult full = solve_scaling(spec, dec, u);
    if (!full.solvable || !full.all_positive)
      throw std::runtime_error("splitting_experiment: coupled scaling failed");
    pt.t = full.t;
    for (int h = 0; h < dec.m(); ++h) u.scale_group(dec, h, std::sqrt(full.t[h]));
    pt.energy = eval_energy(spec, dec, u);
    pt.in_nehari = membership(spec, dec, u).in_nehari;
    table.points.push_back(pt);
  }
  return table;
}

}  // namespace nehari
