#pragma once

#include <vector>

#include "nehari/solver.hpp"

namespace nehari {

/// Ground level of the cooperative sub-system of one group on a radial grid.
struct SubsystemLevel {
  int h = 0;
  double level = 0.0;
  Field profile;      // group components on the radial grid
  double decay_rate = 0.0;  // fitted tail slope of log(sum of components)
  double lambda_min = 0.0;  // smallest lambda in the group, sets the decay scale
  bool converged = false;
};

/// Solves the group-h sub-system (single-group decomposition) on a radial
/// line. Requires beta > 0 within the group and lambda > 0.
SubsystemLevel subsystem_level(const CouplingSpec& spec, const Decomposition& dec, int h,
                               const Grid& radial_grid, const SolverConfig& cfg);

struct DecayFit {
  double slope = 0.0;     // worst (largest) fitted slope over the components
  double required = 0.0;  // -sqrt(beta_fraction * min lambda) * 0.95
  bool pass = false;
  double r_lo = 0.0, r_hi = 0.0;
  int points = 0;
  std::vector<double> component_slopes;
};

/// Least-squares fit of log u_i(r) on the tail window [0.5, 0.9] * r_max;
/// the profile decays at least like exp(-sqrt(beta) r) when every slope is
/// below the required value. beta_fraction must lie in (0, 1).
DecayFit decay_audit(const SubsystemLevel& lev, double beta_fraction);

struct SplitPoint {
  double R = 0.0;
  double energy = 0.0;        // J of the fully projected separated field
  double decoupled_energy = 0.0;  // sum of the groups' own sub-system energies
                                  // on this grid; same-discretization baseline
  double offdiag_mass = 0.0;  // off-diagonal interaction mass before scaling
  std::vector<double> t;      // full scaling system solution
  bool in_nehari = false;
};

struct SplittingTable {
  std::vector<SplitPoint> points;
  double sum_levels = 0.0;
  std::vector<SubsystemLevel> levels;
};

/// Separated-translate experiment: each group's radial profile is embedded at
/// center R * e_h (directions at angles 2 pi h / m) on the planar grid,
/// re-scaled onto its own sub-system constraint to absorb the change of
/// discretization, and the coupled scaling system is solved per R. Requires a
/// competitive cross-group configuration and m >= 2.
SplittingTable splitting_experiment(const CouplingSpec& spec, const Decomposition& dec,
                                    const std::vector<double>& radii,
                                    const Grid& planar_grid, const Grid& radial_grid,
                                    const SolverConfig& cfg);

/// Default truncation radius 12 / sqrt(min lambda).
double default_r_max(const CouplingSpec& spec);

}  // namespace nehari
