#pragma once

#include <optional>
#include <vector>

#include "nehari/energy.hpp"

namespace nehari {

/// Solution of the group-scaling system MB * t = groupNorms.
struct ScalingResult {
  std::vector<double> t;
  bool solvable = false;
  bool all_positive = false;
  /// Diagonal-dominance margin min_h (MB_hh - sum_{k!=h} |MB_hk|); positive
  /// iff the field lies in the dominant set.
  double conditioning = 0.0;
};

/// Psi(t) = 1/2 sum ||u_h||^2 t_h - 1/4 MB t . t, i.e. the energy of the
/// field with group h multiplied by sqrt(t_h). Throws for negative t.
double scaling_energy(const CouplingSpec& spec, const Decomposition& dec, const Field& u,
                      const std::vector<double>& t);

/// Same, reusing precomputed group stats of u.
double scaling_energy(const GroupStats& st, const std::vector<double>& t);

/// Maximizer candidate of Psi: the solution of MB t = groupNorms by dense
/// partial-pivot elimination. Throws if some group vanishes.
ScalingResult solve_scaling(const CouplingSpec& spec, const Decomposition& dec,
                            const Field& u);

/// Projection onto the constraint set: group h scaled by sqrt(t_h). Returns
/// nullopt when the system is singular or some t_h <= 0.
std::optional<Field> try_project(const CouplingSpec& spec, const Decomposition& dec,
                                 const Field& u);

/// Throwing variant; the error "projection leaves positive orthant" signals
/// the degenerate case the caller must handle (restart, never clamp).
Field project_to_nehari(const CouplingSpec& spec, const Decomposition& dec, const Field& u);

/// PDE-residual certificate ||grad J(u)||; small iff u is a free critical
/// point. Meaningful for constrained minimizers since the constraint is
/// natural.
double natural_constraint_residual(const CouplingSpec& spec, const Decomposition& dec,
                                   const Field& u);

}  // namespace nehari
