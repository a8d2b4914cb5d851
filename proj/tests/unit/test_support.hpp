#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "catstress/moments.hpp"

namespace catstress::testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline BasisPtr line_basis(std::vector<std::vector<int>> indices, double mass = 1.0, double zeta = 0.0,
                           double length = kTwoPi) {
  return std::make_shared<const ModeBasis>(BoxGeometry::make(1, length), mass, zeta, std::move(indices));
}

inline Complex random_complex(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng)};
}

/// Amplitude with |alpha| <= radius, uniform in the complex ball.
inline CoherentAmplitude random_amplitude(std::mt19937_64& rng, const BasisPtr& basis, double radius) {
  std::vector<Complex> v(basis->size());
  do {
    for (auto& c : v) c = random_complex(rng, radius);
  } while (std::sqrt([&] {
             double s = 0;
             for (auto& c : v) s += std::norm(c);
             return s;
           }()) > radius);
  return CoherentAmplitude(basis, v);
}

inline SpacetimePoint random_point(std::mt19937_64& rng, const BasisPtr& basis) {
  std::uniform_real_distribution<double> t(-1.0, 1.0), x(0.0, basis->geometry().length);
  SpacetimePoint p{t(rng), {}};
  for (int j = 0; j < basis->dimension(); ++j) p.x.push_back(x(rng));
  return p;
}

inline Component random_component(std::mt19937_64& rng, int dimension) {
  std::uniform_int_distribution<int> c(0, dimension);
  return {c(rng), c(rng)};
}

/// Amplitude rescaled so that |alpha|^2 = target.
inline CoherentAmplitude with_norm_squared(const CoherentAmplitude& alpha, double target) {
  return alpha.scaled(std::sqrt(target / alpha.norm_squared()));
}

}  // namespace catstress::testing
