#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nehari/scaling.hpp"

namespace nehari {

enum class InitKind { Bumps, GroupSeparatedBumps, FromField };

struct SolverConfig {
  int max_iter = 20000;
  double tol_grad = 1e-5;  // absolute, in the weighted quadrature norm
  double tol_energy = 1e-10;
  double step = 0.0;  // <= 0 selects the automatic spectral-bound step
  bool precondition = false;
  std::uint64_t seed = 1;
  InitKind init = InitKind::GroupSeparatedBumps;
  const Field* init_field = nullptr;  // required for InitKind::FromField

  void validate() const;
};

struct SolveResult {
  Field field;
  double energy = 0.0;
  double grad_residual = 0.0;
  std::vector<double> nehari_residual;  // G_h per group
  int iterations = 0;
  std::vector<double> energy_trace;
  std::vector<double> component_l4;
  bool semi_trivial = false;
  int group_restarts = 0;
  bool converged = false;
  ConstantsReport constants;
  bool regime_ok = true;  // existence hypotheses held; false = exploration mode
};

/// Constrained gradient descent: preconditioned gradient step, clamp to the
/// nonnegative cone, re-project onto the constraint set, backtrack on energy
/// increase. Deterministic given cfg.seed.
SolveResult minimize(const Grid& g, const Decomposition& dec, const CouplingSpec& spec,
                     const SolverConfig& cfg);

/// Variant reusing a precomputed constants report (sweeps share one).
SolveResult minimize(const Grid& g, const Decomposition& dec, const CouplingSpec& spec,
                     const SolverConfig& cfg, const ConstantsReport& constants);

struct ComponentAudit {
  double interior_min = 0.0;
  double l4 = 0.0;
  bool positive = false;
};

struct GroupAudit {
  double scaled_mass = 0.0;  // max beta within group * sum of squared L4 norms
  bool meets_lower_bound = false;
};

struct AuditVerdict {
  std::vector<ComponentAudit> components;
  std::vector<GroupAudit> groups;
  bool all_positive = false;
  bool all_groups_bounded = false;
};

/// Positivity audit of a converged result: strict interior positivity per
/// component and the per-group quartic mass lower bound
/// max_{i,j in I_h} beta_ij * sum_{i in I_h} |u_i|_{L4}^2 >= delta.
AuditVerdict positivity_audit(const SolveResult& res, const Decomposition& dec,
                              const CouplingSpec& spec, const ConstantsReport& report);

struct SweepEntry {
  enum class Target { Beta, Lambda };
  Target target = Target::Beta;
  int i = 0, j = 0;  // j ignored for Lambda
  std::vector<double> values;

  std::string name() const;
};

struct SweepRow {
  int row = 0;
  std::vector<double> params;
  bool failed = false;
  std::string error;
  SolveResult result;
  RegimeVerdict regime;
};

/// Cartesian product of the entry value lists, one minimize per point with a
/// seed derived from cfg.seed and the row index. Rows may run concurrently
/// (cap via the NEHARI_THREADS environment variable); output is ordered by
/// row index. Individual failures are recorded per row, never thrown.
std::vector<SweepRow> sweep(const Grid& g, const Decomposition& dec,
                            const CouplingSpec& spec_template,
                            const std::vector<SweepEntry>& parameter_grid,
                            const SolverConfig& cfg);

}  // namespace nehari
