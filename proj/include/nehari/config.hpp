#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nehari/radial.hpp"
#include "nehari/solver.hpp"

namespace nehari {

/// Parsed run configuration. Format: line-oriented `section.key = value` with
/// `#` comments; lists are comma-separated; matrix rows appear as
/// system.beta.row_1 ... system.beta.row_d. Indices in the file are 1-based.
/// Unknown keys are rejected.
struct RunConfig {
  // domain
  GridKind kind = GridKind::Rectangle2D;
  int n = 0;
  double side = 0.0;
  bool centered = false;
  double radius = 0.0;
  double r_in = 0.0, r_out = 0.0;
  int space_dim = 2;
  double r_max = 0.0;  // 0 selects 12/sqrt(min lambda)

  // system + decomposition
  CouplingSpec spec;
  Decomposition dec;

  // solver
  SolverConfig solver;
  std::string init_file;  // when solver.init = fromFile

  // task options
  std::string theorem;  // empty = existence
  double alpha = 2.0;
  int macro_split = 0;  // 0 = d (same-direction audit)
  std::vector<double> radii;
  double beta_fraction = 0.81;
  int planar_n = 489;
  double planar_side = 48.8;
  int radial_n = 601;

  // sweep
  std::vector<SweepEntry> sweep_entries;

  Grid make_grid() const;
  Grid make_radial_grid() const;  // for the radial command
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

}  // namespace nehari
