#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "nehari/coupling.hpp"
#include "nehari/rng.hpp"

using namespace nehari;

namespace {

CouplingSpec simple_spec(int d, double lambda, double diag) {
  CouplingSpec s;
  s.d = d;
  s.lambda.assign(d, lambda);
  s.beta.assign(d, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i) s.beta[i][i] = diag;
  return s;
}

}  // namespace

TEST_CASE("pair classification") {
  auto dec = Decomposition::make({0, 2, 3});
  auto cls = classify_pairs(dec);
  CHECK(cls.at({0, 1}) == PairClass::SameGroupCoop);
  CHECK(cls.at({0, 2}) == PairClass::CrossGroup);
  CHECK(cls.at({1, 2}) == PairClass::CrossGroup);
  for (const auto& [pair, label] : cls) CHECK(cls.at({pair.second, pair.first}) == label);

  auto full = Decomposition::make({0, 1, 2});
  CHECK(classify_pairs(full).at({0, 1}) == PairClass::CrossGroup);
  auto single = Decomposition::make({0, 2});
  CHECK(classify_pairs(single).at({0, 1}) == PairClass::SameGroupCoop);
}

TEST_CASE("decomposition validation") {
  CHECK_THROWS(Decomposition::make({0, 2, 1}));
  CHECK_THROWS(Decomposition::make({1, 2}));
  auto dec = Decomposition::make({0, 2, 5});
  CHECK(dec.d() == 5);
  CHECK(dec.m() == 2);
  CHECK(dec.group_of[4] == 1);
}

TEST_CASE("coupling validation") {
  CouplingSpec s = simple_spec(2, 1.0, 1.0);
  CHECK_NOTHROW(s.validate());
  s.beta[0][1] = 0.3;
  CHECK_THROWS(s.validate());  // asymmetric
  s.beta[1][0] = 0.3;
  CHECK_NOTHROW(s.validate());
  s.beta[0][0] = -1.0;
  CHECK_THROWS(s.validate());

  Grid g = Grid::square(1.0, 25);
  CouplingSpec bad = simple_spec(1, -30.0, 1.0);  // below -mu_1
  CHECK_THROWS_WITH_AS(bad.validate_lambda(g), doctest::Contains("norm not equivalent"),
                       std::exception);
}

TEST_CASE("sobolev constant is monotone in lambda and dimension-consistent") {
  Grid g = Grid::square(1.0, 33);
  double s0 = sobolev_constant(g, 0.0);
  double s1 = sobolev_constant(g, 1.0);
  CHECK(s0 < s1);

  CouplingSpec two = simple_spec(2, 1.0, 1.0);
  CHECK(sobolev_constant_min(g, two) == doctest::Approx(s1).epsilon(1e-9));
}

TEST_CASE("sobolev constant refinement self-consistency") {
  double s65 = sobolev_constant(Grid::square(1.0, 65), 1.0);
  double s129 = sobolev_constant(Grid::square(1.0, 129), 1.0);
  CHECK(std::abs(s65 - s129) / s129 < 0.01);
}

TEST_CASE("upper bound closed form for a single group") {
  Grid g = Grid::square(1.0, 33);
  auto dec = Decomposition::make({0, 2});
  CouplingSpec spec = simple_spec(2, 2.0, 4.0);
  double s1 = sobolev_constant(g, 1.0);
  double expect = 0.25 * (1.0 + 2.0) * (1.0 + 2.0) / 4.0 * s1 * s1;
  CHECK(cbar_upper_bound(g, dec, spec) == doctest::Approx(expect).epsilon(1e-9));

  CouplingSpec doubled = spec;
  for (int i = 0; i < 2; ++i) doubled.beta[i][i] *= 2.0;
  CHECK(cbar_upper_bound(g, dec, doubled) ==
        doctest::Approx(0.5 * cbar_upper_bound(g, dec, spec)).epsilon(1e-9));
}

TEST_CASE("slab partition beats strictly finer trial partitions") {
  // Shrinking a subdomain raises its embedding constant, so any partition
  // into slabs strictly inside the canonical halves yields a larger bound.
  Grid g = Grid::square(1.0, 33);
  auto dec = Decomposition::make({0, 1, 2});
  CouplingSpec spec = simple_spec(2, 1.0, 1.0);
  double canonical = cbar_upper_bound(g, dec, spec);
  Rng rng(17);
  for (int rep = 0; rep < 3; ++rep) {
    double in0 = rng.uniform(0.05, 0.2), in1 = rng.uniform(0.05, 0.2);
    Grid a = g.restricted_to_slab(in0, 0.5);
    Grid b = g.restricted_to_slab(0.5, 1.0 - in1);
    double sa = sobolev_constant(a, 1.0), sb = sobolev_constant(b, 1.0);
    double trial = 0.25 * 4.0 / 1.0 * (sa * sa + sb * sb);
    CHECK(canonical <= trial * (1.0 + 1e-9));
  }
}

TEST_CASE("constants report identities") {
  Grid g = Grid::square(1.0, 33);

  auto dec1 = Decomposition::make({0, 1});
  CouplingSpec s1 = simple_spec(1, 1.0, 3.0);
  ConstantsReport r1 = constants_report(g, dec1, s1);
  CHECK(std::abs(r1.K * 16.0 * r1.Cbar - r1.S * r1.S) < 1e-12 * r1.S * r1.S);
  CHECK(r1.delta == doctest::Approx(r1.S / 2.0).epsilon(1e-12));
  REQUIRE(r1.Kcoop.has_value());
  CHECK(*r1.Kcoop == doctest::Approx(3.0 / 2.0).epsilon(1e-9));

  auto dec2 = Decomposition::make({0, 2});
  CouplingSpec s2 = simple_spec(2, 1.0, 2.0);
  s2.beta[0][1] = s2.beta[1][0] = 0.5;  // fully cooperative
  ConstantsReport r2 = constants_report(g, dec2, s2);
  CHECK(r2.delta == doctest::Approx(r2.S / 4.0).epsilon(1e-12));
  REQUIRE(r2.Kcoop.has_value());
  CHECK(*r2.Kcoop == doctest::Approx(2.0 / 4.0).epsilon(1e-9));

  CouplingSpec comp = s2;
  comp.beta[0][1] = comp.beta[1][0] = -0.5;
  CHECK_FALSE(constants_report(g, dec2, comp).Kcoop.has_value());
}

TEST_CASE("K self-consistency under refinement") {
  auto dec = Decomposition::make({0, 1, 2});
  CouplingSpec spec = simple_spec(2, 1.0, 1.0);
  ConstantsReport coarse = constants_report(Grid::square(1.0, 33), dec, spec);
  ConstantsReport fine = constants_report(Grid::square(1.0, 65), dec, spec);
  CHECK(std::abs(coarse.S - fine.S) / fine.S < 0.01);
  // K involves the slab constants, which converge slower than S itself
  CHECK(std::abs(coarse.K - fine.K) / fine.K < 0.05);
}

TEST_CASE("regime verdicts") {
  Grid g = Grid::square(1.0, 33);
  auto dec = Decomposition::make({0, 1, 2});
  CouplingSpec spec = simple_spec(2, 1.0, 1.0);
  ConstantsReport rep = constants_report(g, dec, spec);

  CHECK(validate_regime(dec, spec, rep, Theorem::Existence).ok);

  CouplingSpec over = spec;
  over.beta[0][1] = over.beta[1][0] = 2.0 * rep.K;
  RegimeVerdict v = validate_regime(dec, over, rep, Theorem::Existence);
  CHECK_FALSE(v.ok);
  bool named = false;
  for (const auto& hyp : v.hypotheses)
    if (!hyp.holds && hyp.name.find("K2") != std::string::npos) named = true;
  CHECK(named);

  auto dec3 = Decomposition::make({0, 2, 3});
  CouplingSpec s3 = simple_spec(3, 1.0, 1.0);
  s3.beta[0][1] = s3.beta[1][0] = 2.0;  // > max beta_ii within the group
  ConstantsReport rep3 = constants_report(g, dec3, s3);
  s3.beta[0][2] = s3.beta[2][0] = s3.beta[1][2] = s3.beta[2][1] = 0.5 * rep3.K;
  CHECK(validate_regime(dec3, s3, rep3, Theorem::StrongCoop1).ok);

  // strongCoop2 implies existence on random admissible samples
  Rng rng(23);
  for (int rep_i = 0; rep_i < 25; ++rep_i) {
    CouplingSpec s = simple_spec(3, 1.0, 1.0);
    double alpha = 2.0;
    s.beta[0][1] = s.beta[1][0] = alpha / (alpha - 1.0) + rng.uniform(0.1, 3.0);
    double cap = rep3.K / (alpha * 9.0);
    s.beta[0][2] = s.beta[2][0] = rng.uniform(-cap, cap);
    s.beta[1][2] = s.beta[2][1] = rng.uniform(-cap, cap);
    if (validate_regime(dec3, s, rep3, Theorem::StrongCoop2, alpha).ok)
      CHECK(validate_regime(dec3, s, rep3, Theorem::Existence).ok);
  }
}

TEST_CASE("constants serialize as key=value text") {
  Grid g = Grid::square(1.0, 25);
  auto dec = Decomposition::make({0, 1});
  ConstantsReport r = constants_report(g, dec, simple_spec(1, 1.0, 1.0));
  std::string text = format_constants(r);
  CHECK(text.find("S = ") != std::string::npos);
  CHECK(text.find("K = ") != std::string::npos);
  CHECK(text.find("delta = ") != std::string::npos);
}
