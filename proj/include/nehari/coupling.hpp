#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nehari/grid.hpp"
#include "nehari/linalg.hpp"

namespace nehari {

/// Partition of the d components into m consecutive groups via the index
/// vector a = (a_0,...,a_m), 0 = a_0 < ... < a_m = d. Components and groups
/// are 0-based internally; a keeps the conventional values.
struct Decomposition {
  std::vector<int> a;
  std::vector<int> group_of;  // size d

  static Decomposition make(std::vector<int> a);

  int d() const { return a.back(); }
  int m() const { return static_cast<int>(a.size()) - 1; }
  // Component range [begin, end) of group h (0-based h).
  int group_begin(int h) const { return a[h]; }
  int group_end(int h) const { return a[h + 1]; }
  int group_size(int h) const { return a[h + 1] - a[h]; }
};

enum class PairClass { SameGroupCoop, CrossGroup };

PairClass classify_pair(const Decomposition& dec, int i, int j);
std::map<std::pair<int, int>, PairClass> classify_pairs(const Decomposition& dec);

/// Coupling matrix beta (symmetric, beta_ii > 0) and the linear potentials.
struct CouplingSpec {
  int d = 0;
  Matrix beta;                 // d x d
  std::vector<double> lambda;  // size d

  void validate() const;  // shape, symmetry, beta_ii > 0
  /// Checks lambda against the grid: lambda_i > -mu_1 on bounded domains,
  /// lambda_i > 0 on radial lines. Throws a "norm not equivalent" error.
  void validate_lambda(const Grid& g) const;

  /// Spec for the sub-system of a component range [begin, end).
  CouplingSpec restricted(int begin, int end) const;
};

struct ConstantsReport {
  double S = 0.0;
  std::vector<double> S_i;
  double Cbar = 0.0;
  double K = 0.0;       // S^2 / (16 Cbar)
  double delta = 0.0;   // S / (2d)
  std::optional<double> Kcoop;  // only for fully cooperative configurations
};

/// Best constant of the embedding into L^4 for the lambda-weighted norm:
/// inf ||u||_lambda^2 / |u|_{L4}^2, by projected gradient descent with L4
/// renormalization from a centered positive bump.
double sobolev_constant(const Grid& g, double lambda, double tol = 1e-9);

/// min_i of the per-component constants S_i.
double sobolev_constant_min(const Grid& g, const CouplingSpec& spec, double tol = 1e-9);

/// Upper bound for inf_N J: equal vertical slabs of the bounding box serve as
/// the canonical disjoint-subdomain partition; any such partition gives a
/// valid bound.
double cbar_upper_bound(const Grid& g, const Decomposition& dec, const CouplingSpec& spec);

ConstantsReport constants_report(const Grid& g, const Decomposition& dec,
                                 const CouplingSpec& spec);

enum class Theorem { Existence, CoopWeak, StrongCoop1, StrongCoop2, NonexistenceRN };

Theorem theorem_from_string(const std::string& s);
std::string to_string(Theorem t);

struct Hypothesis {
  std::string name;
  bool holds = false;
};

struct RegimeVerdict {
  Theorem theorem = Theorem::Existence;
  bool ok = false;
  std::vector<Hypothesis> hypotheses;
};

RegimeVerdict validate_regime(const Decomposition& dec, const CouplingSpec& spec,
                              const ConstantsReport& report, Theorem theorem,
                              double alpha = 2.0);

/// Flat key=value serialization consumed by the CLI report command.
std::string format_constants(const ConstantsReport& r);

}  // namespace nehari
