#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "catstress/polynomial.hpp"
#include "catstress/states.hpp"

namespace catstress {

/// Tensor component (mu, nu); 0 is time, 1..d are spatial axes.
struct Component {
  int mu = 0;
  int nu = 0;
  auto operator<=>(const Component&) const = default;
};

/// Contravariant (as T^{mu nu} in the action variation) or covariant
/// components. Lowering uses the flat metric: T_{mu nu} = eta_mu eta_nu T^{mu nu}.
enum class IndexPlacement { upper, lower };

struct StressTensorSpec {
  BasisPtr basis;
  Component component;
  IndexPlacement placement = IndexPlacement::lower;
};

/// Einstein tensor of the background. The box is flat, so this is zero; the
/// builder still routes the zeta G^{mu nu} phi^2 term through it.
double einstein_tensor(const BoxGeometry& geometry, Component c);

/// Flat-metric factor relating the two placements of a component.
double lowering_factor(Component c);

/// Quadratic stress tensor polynomial at `label`:
///   d^mu phi d^nu phi - 1/2 g^{mu nu} (d^rho phi d_rho phi + m^2 phi^2)
///   + zeta (G^{mu nu} - g^{mu nu} box + d^mu d^nu) phi^2,
/// with derivatives of phi^2 expanded by the Leibniz rule.
OperatorPolynomial build_stress_tensor(const StressTensorSpec& spec, PointLabel label,
                                       int degree_cap = kDefaultDegreeCap);

struct TBilinear {
  /// T_{mu nu}[alpha, beta] from the closed-form substituted expression.
  Complex value;
  /// Same quantity via the polynomial engine, coherent_matrix_element divided
  /// by the overlap. Not computed when the overlap underflows.
  Complex engine_value;
  bool engine_skipped = false;
  /// |value - engine_value| / max(1, |value|)
  double path_deviation = 0.0;
};

/// <alpha|:T_{mu nu}(p):|beta> / <alpha|beta>, computed twice through
/// independent routes.
TBilinear stress_bilinear(const CoherentAmplitude& alpha, const CoherentAmplitude& beta,
                          Component c, const SpacetimePoint& p,
                          IndexPlacement placement = IndexPlacement::lower);

/// Closed-form route only.
Complex stress_bilinear_direct(const CoherentAmplitude& alpha, const CoherentAmplitude& beta,
                               Component c, const SpacetimePoint& p,
                               IndexPlacement placement = IndexPlacement::lower);

/// Normal-ordered expectation <psi|:T_{mu nu}(p):|psi>.
Complex stress_expectation(const State& state, Component c, const SpacetimePoint& p,
                           IndexPlacement placement = IndexPlacement::lower);

/// 8 pi <:T_{mu nu}:> with G_N = 1. Throws ConsistencyError if the
/// expectation has an imaginary part above 1e-10 * max(1, |value|).
double source_term(const State& state, Component c, const SpacetimePoint& p);

struct StressSample {
  SpacetimePoint point;
  Component component;
  Complex value;
};

/// CSV rows t,x1..xd,mu,nu,re,im with a header line.
void write_stress_csv(std::ostream& os, std::span<const StressSample> samples);

}  // namespace catstress
