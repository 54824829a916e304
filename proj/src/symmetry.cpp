#include "nehari/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nehari {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Unnormalized integer normals per octant.
constexpr int kNx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kNy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

// Signed side of H for lattice offsets (u, w) from the center node.
inline int side(HalfSpace H, int u, int w) { return u * kNx[H.octant] + w * kNy[H.octant]; }

// Reflected lattice offsets; depends only on the reflection axis.
inline void reflect(HalfSpace H, int u, int w, int& ru, int& rw) {
  switch (H.octant % 4) {
    case 0: ru = -u; rw = w; break;   // normal (+-1, 0)
    case 1: ru = -w; rw = -u; break;  // normal +-(1, 1)/sqrt(2)
    case 2: ru = u; rw = -w; break;   // normal (0, +-1)
    default: ru = w; rw = u; break;   // normal +-(-1, 1)/sqrt(2)
  }
}

int center_of(const Grid& g) {
  if (!g.planar() || !g.centered_symmetric())
    throw std::runtime_error("half-space reflection needs a centered symmetric grid");
  return (g.n - 1) / 2;
}

}  // namespace

double HalfSpace::angle() const { return octant * kPi / 4.0; }
double HalfSpace::nx() const { return std::cos(angle()); }
double HalfSpace::ny() const { return std::sin(angle()); }

std::vector<HalfSpace> HalfSpace::all() {
  std::vector<HalfSpace> v;
  for (int k = 0; k < 8; ++k) v.push_back({k});
  return v;
}

std::vector<int> reflection_permutation(const Grid& g, HalfSpace H) {
  const int c = center_of(g);
  std::vector<int> perm(g.node_count());
  for (int iy = 0; iy < g.n; ++iy)
    for (int ix = 0; ix < g.n; ++ix) {
      int ru, rw;
      reflect(H, ix - c, iy - c, ru, rw);
      int j = g.idx(ru + c, rw + c);
      perm[g.idx(ix, iy)] = j;
      if (g.interior[g.idx(ix, iy)] != g.interior[j])
        throw std::runtime_error("grid mask not symmetric under the reflection");
    }
  return perm;
}

ScalarField polarize(const ScalarField& u, HalfSpace H) {
  const Grid& g = *u.grid;
  const int c = center_of(g);
  std::vector<int> perm = reflection_permutation(g, H);
  ScalarField out = u;
  for (int iy = 0; iy < g.n; ++iy)
    for (int ix = 0; ix < g.n; ++ix) {
      if (side(H, ix - c, iy - c) <= 0) continue;  // handle pairs from the H side
      int i = g.idx(ix, iy);
      int j = perm[i];
      out.v[i] = std::max(u.v[i], u.v[j]);
      out.v[j] = std::min(u.v[i], u.v[j]);
    }
  return out;
}

PolarizationChecks polarization_invariants(const ScalarField& u, const ScalarField& v,
                                           HalfSpace H) {
  PolarizationChecks c;
  ScalarField uh = polarize(u, H);
  ScalarField vh = polarize(v, H);
  ScalarField vhc = polarize(v, H.complement());

  c.lp_preserved = lp_norm(uh, 2.0) == lp_norm(u, 2.0) &&
                   lp_norm(uh, 4.0) == lp_norm(u, 4.0) &&
                   lp_norm(vh, 2.0) == lp_norm(v, 2.0) &&
                   lp_norm(vh, 4.0) == lp_norm(v, 4.0);

  double gu = gradient_form(u, u);
  double guh = gradient_form(uh, uh);
  c.gradient_diff = std::abs(guh - gu) / std::max(1.0, std::abs(gu));

  const Grid& g = *u.grid;
  double before = 0.0, same = 0.0, cross = 0.0;
  for (int i = 0; i < g.node_count(); ++i) {
    double w = g.quad_weight[i];
    before += u.v[i] * u.v[i] * v.v[i] * v.v[i] * w;
    same += uh.v[i] * uh.v[i] * vh.v[i] * vh.v[i] * w;
    cross += uh.v[i] * uh.v[i] * vhc.v[i] * vhc.v[i] * w;
  }
  c.same_side_gain = same - before;
  c.cross_side_drop = before - cross;
  return c;
}

SchwarzResult foliated_schwarz_test(const ScalarField& u,
                                    const std::vector<HalfSpace>& candidates,
                                    double tol) {
  (void)tol;
  const Grid& g = *u.grid;
  if (g.kind != GridKind::Disk2D && g.kind != GridKind::Annulus2D)
    throw std::runtime_error("foliated Schwarz test needs a disk or annulus grid");
  if (candidates.empty()) throw std::invalid_argument("no candidate directions");
  const int c = (g.n - 1) / 2;

  double umax = 0.0;
  for (double x : u.v) umax = std::max(umax, std::abs(x));
  if (umax == 0.0) umax = 1.0;

  // Violation of "u(x) >= u(sigma_H x) on H" for one half-space.
  auto halfspace_violation = [&](HalfSpace H) {
    std::vector<int> perm = reflection_permutation(g, H);
    double worst = 0.0;
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix) {
        int i = g.idx(ix, iy);
        if (!g.interior[i] || side(H, ix - c, iy - c) <= 0) continue;
        worst = std::max(worst, u.v[perm[i]] - u.v[i]);
      }
    return worst / umax;
  };

  SchwarzResult res;
  res.per_candidate.reserve(candidates.size());
  for (size_t k = 0; k < candidates.size(); ++k) {
    const HalfSpace p = candidates[k];
    // Half-spaces with the direction p strictly inside: normals within 45
    // degrees of p among the grid-compatible set.
    double worst = 0.0;
    for (int doct : {-1, 0, 1})
      worst = std::max(worst, halfspace_violation({(p.octant + doct + 8) % 8}));
    res.per_candidate.push_back(worst);
    if (k == 0 || worst < res.violation) {
      res.violation = worst;
      res.best_octant = p.octant;
      res.best_angle = p.angle();
    }
  }
  return res;
}

SymmetryReport antipodal_audit(const SolveResult& res, const Decomposition& dec,
                               int macro_split, double tol) {
  const int d = dec.d();
  if (macro_split < 1 || macro_split > d)
    throw std::invalid_argument("macro split must be in [1, d]");
  std::vector<HalfSpace> cands = HalfSpace::all();

  SymmetryReport rep;
  std::vector<SchwarzResult> per(d);
  for (int i = 0; i < d; ++i) {
    per[i] = foliated_schwarz_test(res.field.comp[i], cands, tol);
    rep.per_component_axis.push_back(per[i].best_angle);
    rep.per_component_violation.push_back(per[i].violation);
  }

  // Joint axis: minimize the worst violation with the first block on octant k
  // and, for a proper split, the second block on the antipodal octant.
  const bool split = macro_split < d;
  double best = 0.0;
  int best_k = 0;
  for (int k = 0; k < 8; ++k) {
    double score = 0.0;
    for (int i = 0; i < d; ++i) {
      int oct = (i < macro_split || !split) ? k : (k + 4) % 8;
      score = std::max(score, per[i].per_candidate[oct]);
    }
    if (k == 0 || score < best) {
      best = score;
      best_k = k;
    }
  }
  rep.pairing_score = best;
  rep.paired_angle = best_k * kPi / 4.0;
  rep.angle_between = split ? kPi : 0.0;
  rep.pairing_ok = best <= tol;
  return rep;
}

}  // namespace nehari
