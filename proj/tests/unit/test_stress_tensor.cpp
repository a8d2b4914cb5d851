#include <gtest/gtest.h>

#include <sstream>

#include "catstress/error.hpp"
#include "test_support.hpp"

namespace catstress {
namespace {

const PointLabel X{0};

FieldFactor f(DerivativeIndex d) { return {X, d}; }

TEST(BuildStressTensor, EnergyDensityMonomials) {
  auto b = testing::line_basis({{0}, {1}}, 2.0, 0.0);
  const auto t = build_stress_tensor({b, {0, 0}}, X);
  OperatorPolynomial want;
  want.add_term(0.5, {f(DerivativeIndex::first(0)), f(DerivativeIndex::first(0))});
  want.add_term(0.5, {f(DerivativeIndex::first(1)), f(DerivativeIndex::first(1))});
  want.add_term(2.0, {f({}), f({})});
  EXPECT_EQ(t, want);
}

TEST(BuildStressTensor, OffDiagonalAndPlacement) {
  auto b = testing::line_basis({{1}}, 1.0, 0.0);
  const auto lower = build_stress_tensor({b, {0, 1}, IndexPlacement::lower}, X);
  OperatorPolynomial want;
  want.add_term(1.0, {f(DerivativeIndex::first(0)), f(DerivativeIndex::first(1))});
  EXPECT_EQ(lower, want);
  EXPECT_EQ(build_stress_tensor({b, {0, 1}, IndexPlacement::upper}, X), lower.scaled(-1.0));
  EXPECT_EQ(build_stress_tensor({b, {1, 1}, IndexPlacement::upper}, X),
            build_stress_tensor({b, {1, 1}, IndexPlacement::lower}, X));
  EXPECT_EQ(build_stress_tensor({b, {1, 0}}, X), lower);
}

TEST(BuildStressTensor, ImprovementTerms) {
  auto b = testing::line_basis({{1}}, 1.0, 0.25);
  const auto t = build_stress_tensor({b, {0, 0}}, X);
  const auto t0 = build_stress_tensor({testing::line_basis({{1}}, 1.0, 0.0), {0, 0}}, X);
  const auto extra = t - t0;
  // zeta(-g_00 box + d_t d_t) phi^2 with g_00 = -1:
  //   2 zeta ((-(d_t phi)^2 + (d_x phi)^2) + phi box phi) + 2 zeta ((d_t phi)^2 + phi d_t d_t phi)
  OperatorPolynomial want;
  want.add_term(0.5, {f(DerivativeIndex::first(1)), f(DerivativeIndex::first(1))});
  want.add_term(0.5, {f({}), f(DerivativeIndex::box())});
  want.add_term(0.5, {f({}), f(DerivativeIndex::second(0, 0))});
  EXPECT_EQ(extra, want);
  EXPECT_EQ(einstein_tensor(b->geometry(), {0, 0}), 0.0);
}

TEST(BuildStressTensor, ComponentChecked) {
  auto b = testing::line_basis({{1}});
  EXPECT_THROW(build_stress_tensor({b, {0, 2}}, X), InvalidArgument);
  EXPECT_THROW(build_stress_tensor({nullptr, {0, 0}}, X), InvalidArgument);
}

TEST(StressBilinear, DualPathAgreement) {
  std::mt19937_64 rng(21);
  for (double zeta : {0.0, 0.3}) {
    auto b = std::make_shared<const ModeBasis>(BoxGeometry::make(2, 3.0), 0.8, zeta,
                                               std::vector<std::vector<int>>{{0, 1}, {1, -1}, {0, 0}});
    for (int k = 0; k < 30; ++k) {
      const auto alpha = testing::random_amplitude(rng, b, 1.5);
      const auto beta = testing::random_amplitude(rng, b, 1.5);
      const auto p = testing::random_point(rng, b);
      const auto c = testing::random_component(rng, 2);
      for (auto placement : {IndexPlacement::lower, IndexPlacement::upper}) {
        const auto r = stress_bilinear(alpha, beta, c, p, placement);
        EXPECT_FALSE(r.engine_skipped);
        EXPECT_LT(r.path_deviation, 1e-12);
      }
    }
  }
}

TEST(StressBilinear, EngineSkippedWhenOverlapUnderflows) {
  auto b = testing::line_basis({{0}});
  const CoherentAmplitude a(b, {30.0}), c(b, {-30.0});
  const auto r = stress_bilinear(a, c, {0, 0}, {0.0, {0.0}});
  EXPECT_TRUE(r.engine_skipped);
  EXPECT_EQ(r.engine_value, r.value);
}

TEST(StressExpectation, CoherentEnergyDensityIsClassical) {
  auto b = testing::line_basis({{-1}, {0}, {2}}, 1.0);
  std::mt19937_64 rng(22);
  for (int k = 0; k < 10; ++k) {
    const auto alpha = testing::random_amplitude(rng, b, 2.0);
    const auto p = testing::random_point(rng, b);
    const double phi = 2.0 * classical_profile(alpha, ProfileBranch::beta, {}, p).real();
    const double dt = 2.0 * classical_profile(alpha, ProfileBranch::beta, DerivativeIndex::first(0), p).real();
    const double dx = 2.0 * classical_profile(alpha, ProfileBranch::beta, DerivativeIndex::first(1), p).real();
    const Complex e = stress_expectation(alpha, {0, 0}, p);
    EXPECT_NEAR(e.real(), 0.5 * (dt * dt + dx * dx + phi * phi), 1e-13);
    EXPECT_NEAR(e.imag(), 0.0, 1e-15);
    EXPECT_NEAR(source_term(alpha, {0, 0}, p), 8.0 * std::numbers::pi * e.real(), 1e-12);
  }
}

TEST(StressExpectation, MasslessTwoDimensionalTraceVanishes) {
  auto b = testing::line_basis({{-2}, {-1}, {1}, {3}}, 0.0);
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    const auto alpha = testing::random_amplitude(rng, b, 1.5);
    const auto p = testing::random_point(rng, b);
    const Complex trace = -stress_expectation(alpha, {0, 0}, p) + stress_expectation(alpha, {1, 1}, p);
    EXPECT_LT(std::abs(trace), 1e-13);
  }
}

TEST(StressExpectation, VacuumIsZero) {
  auto b = testing::line_basis({{0}, {1}}, 1.0, 0.2);
  const auto vac = CoherentAmplitude::zero(b);
  for (int mu = 0; mu <= 1; ++mu) {
    for (int nu = 0; nu <= 1; ++nu) EXPECT_EQ(stress_expectation(vac, {mu, nu}, {0.3, {0.1}}), Complex(0.0));
  }
}

TEST(WriteStressCsv, Format) {
  std::vector<StressSample> rows{{{0.5, {0.25}}, {0, 1}, Complex(0.1, -0.0)}};
  std::ostringstream os;
  write_stress_csv(os, rows);
  EXPECT_EQ(os.str(), "t,x1,mu,nu,re,im\n0.5,0.25,0,1,0.10000000000000001,0\n");
}

}  // namespace
}  // namespace catstress
