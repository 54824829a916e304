#pragma once

#include <vector>

#include "nehari/solver.hpp"

namespace nehari {

/// Half-space through the origin with normal at angle octant * 45 degrees.
/// These are exactly the half-spaces whose reflection is a node permutation
/// of a centered symmetric grid; arbitrary normals would need interpolation,
/// which would ruin the exact polarization identities.
struct HalfSpace {
  int octant = 0;  // 0..7

  double angle() const;
  double nx() const;
  double ny() const;
  /// The complementary half-space (same reflection, opposite side).
  HalfSpace complement() const { return {(octant + 4) % 8}; }

  static std::vector<HalfSpace> all();
};

/// Node permutation of the reflection about the hyperplane of H. Involution;
/// throws a geometry error when the grid or its mask is not symmetric under
/// the reflection.
std::vector<int> reflection_permutation(const Grid& g, HalfSpace H);

/// Two-point rearrangement: max(u(x), u(sigma x)) on the open side of H,
/// min on the other side, boundary nodes unchanged.
ScalarField polarize(const ScalarField& u, HalfSpace H);

struct PolarizationChecks {
  bool lp_preserved = false;    // L2 and L4 norms, bitwise equal
  double gradient_diff = 0.0;   // relative Dirichlet-energy change
  double same_side_gain = 0.0;  // int uH^2 vH^2 - int u^2 v^2   (>= 0 expected)
  double cross_side_drop = 0.0; // int u^2 v^2 - int uH^2 v_{H^c}^2 (>= 0 expected)
};

PolarizationChecks polarization_invariants(const ScalarField& u, const ScalarField& v,
                                           HalfSpace H);

struct SchwarzResult {
  double best_angle = 0.0;
  int best_octant = 0;
  double violation = 0.0;              // at the best axis, relative to max|u|
  std::vector<double> per_candidate;   // violation per candidate direction
};

/// Axis test: a field is foliated Schwarz symmetric about direction p iff
/// u(x) >= u(sigma_H x) on H for every half-space containing p. Tested over
/// the grid-compatible half-spaces only, a necessary-condition audit.
SchwarzResult foliated_schwarz_test(const ScalarField& u,
                                    const std::vector<HalfSpace>& candidates,
                                    double tol = 1e-3);

struct SymmetryReport {
  std::vector<double> per_component_axis;       // radians
  std::vector<double> per_component_violation;  // relative
  bool pairing_ok = false;
  double pairing_score = 0.0;  // worst violation under the best joint pairing
  double paired_angle = 0.0;   // axis of the first block under that pairing
  double angle_between = 0.0;  // pi for a proper antipodal split, 0 for l = d
};

/// Joint audit: components 0..l-1 should share one axis and components l..d-1
/// the antipodal axis (l = d tests a single shared axis). The joint axis is
/// chosen to minimize the worst per-component violation.
SymmetryReport antipodal_audit(const SolveResult& res, const Decomposition& dec,
                               int macro_split, double tol = 1e-3);

}  // namespace nehari
