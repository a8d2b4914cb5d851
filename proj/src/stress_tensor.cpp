#include "catstress/stress_tensor.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "catstress/error.hpp"
#include "catstress/serialization.hpp"

namespace catstress {

namespace {

void check_component(const ModeBasis& basis, Component c) {
  const int d = basis.dimension();
  if (c.mu < 0 || c.nu < 0 || c.mu > d || c.nu > d) {
    throw InvalidArgument("tensor component index outside spacetime dimension");
  }
}

double eta(int direction) { return BoxGeometry::metric_sign(direction); }

}  // namespace

double einstein_tensor(const BoxGeometry&, Component) { return 0.0; }

double lowering_factor(Component c) { return eta(c.mu) * eta(c.nu); }

OperatorPolynomial build_stress_tensor(const StressTensorSpec& spec, PointLabel label,
                                       int degree_cap) {
  if (!spec.basis) throw InvalidArgument("stress tensor spec needs a basis");
  const auto& basis = *spec.basis;
  check_component(basis, spec.component);
  const int d = basis.dimension();
  const int mu = spec.component.mu, nu = spec.component.nu;
  const double m2 = basis.mass() * basis.mass();
  const double zeta = basis.coupling();
  // Assemble the covariant component; raise at the end if requested.
  const double metric = mu == nu ? eta(mu) : 0.0;

  auto factor = [label](DerivativeIndex deriv) { return FieldFactor{label, deriv}; };
  const auto phi = factor(DerivativeIndex::none());
  const auto d_mu = factor(DerivativeIndex::first(mu));
  const auto d_nu = factor(DerivativeIndex::first(nu));

  OperatorPolynomial t(degree_cap);
  t.add_term(1.0, {d_mu, d_nu});
  if (metric != 0.0) {
    for (int rho = 0; rho <= d; ++rho) {
      const auto d_rho = factor(DerivativeIndex::first(rho));
      t.add_term(-0.5 * metric * eta(rho), {d_rho, d_rho});
    }
    t.add_term(-0.5 * metric * m2, {phi, phi});
  }
  if (zeta != 0.0) {
    // zeta G_{mu nu} phi^2
    t.add_term(zeta * einstein_tensor(basis.geometry(), spec.component), {phi, phi});
    // -zeta g_{mu nu} box(phi^2) = -2 zeta g_{mu nu} (d^rho phi d_rho phi + phi box phi)
    if (metric != 0.0) {
      for (int rho = 0; rho <= d; ++rho) {
        const auto d_rho = factor(DerivativeIndex::first(rho));
        t.add_term(-2.0 * zeta * metric * eta(rho), {d_rho, d_rho});
      }
      t.add_term(-2.0 * zeta * metric, {phi, factor(DerivativeIndex::box())});
    }
    // zeta d_mu d_nu (phi^2) = 2 zeta (d_mu phi d_nu phi + phi d_mu d_nu phi)
    t.add_term(2.0 * zeta, {d_mu, d_nu});
    t.add_term(2.0 * zeta, {phi, factor(DerivativeIndex::second(mu, nu))});
  }
  if (spec.placement == IndexPlacement::upper) t = t.scaled(lowering_factor(spec.component));
  return t;
}

Complex stress_bilinear_direct(const CoherentAmplitude& alpha, const CoherentAmplitude& beta,
                               Component c, const SpacetimePoint& p, IndexPlacement placement) {
  require_same_basis(alpha, beta);
  const auto& basis = *alpha.basis();
  check_component(basis, c);
  const int d = basis.dimension();

  // Classical substitute f = beta(x) + alpha-bar(x) and its derivatives.
  auto f_of = [&](const DerivativeIndex& deriv) {
    return classical_profile(beta, ProfileBranch::beta, deriv, p) +
           classical_profile(alpha, ProfileBranch::alpha_bar, deriv, p);
  };
  const Complex f = f_of(DerivativeIndex::none());
  std::vector<Complex> grad(static_cast<std::size_t>(d + 1));
  Complex grad_sq = 0.0;  // d^rho f d_rho f
  for (int rho = 0; rho <= d; ++rho) {
    grad[static_cast<std::size_t>(rho)] = f_of(DerivativeIndex::first(rho));
    grad_sq += eta(rho) * grad[static_cast<std::size_t>(rho)] * grad[static_cast<std::size_t>(rho)];
  }
  const Complex gm = grad[static_cast<std::size_t>(c.mu)];
  const Complex gn = grad[static_cast<std::size_t>(c.nu)];
  const double g_mn = c.mu == c.nu ? eta(c.mu) : 0.0;
  const double m2 = basis.mass() * basis.mass();
  const double zeta = basis.coupling();

  Complex value = gm * gn - 0.5 * g_mn * (grad_sq + m2 * f * f);
  if (zeta != 0.0) {
    const Complex box_f = f_of(DerivativeIndex::box());
    const Complex hess = f_of(DerivativeIndex::second(c.mu, c.nu));
    const Complex box_f2 = 2.0 * (grad_sq + f * box_f);
    const Complex hess_f2 = 2.0 * (gm * gn + f * hess);
    value += zeta * (einstein_tensor(basis.geometry(), c) * f * f - g_mn * box_f2 + hess_f2);
  }
  if (placement == IndexPlacement::upper) value *= lowering_factor(c);
  return value;
}

TBilinear stress_bilinear(const CoherentAmplitude& alpha, const CoherentAmplitude& beta,
                          Component c, const SpacetimePoint& p, IndexPlacement placement) {
  TBilinear out;
  out.value = stress_bilinear_direct(alpha, beta, c, p, placement);
  const Complex overlap = coherent_overlap(alpha, beta);
  if (std::abs(overlap) < 1e-300) {
    out.engine_skipped = true;
    out.engine_value = out.value;
    return out;
  }
  const PointLabel label{0};
  const auto poly = build_stress_tensor({alpha.basis(), c, placement}, label);
  const LabelAssignment assignment{{label, p}};
  out.engine_value = coherent_matrix_element(poly, alpha, beta, assignment) / overlap;
  out.path_deviation = std::abs(out.value - out.engine_value) / std::max(1.0, std::abs(out.value));
  return out;
}

Complex stress_expectation(const State& state, Component c, const SpacetimePoint& p,
                           IndexPlacement placement) {
  const PointLabel label{0};
  const auto poly = build_stress_tensor({state_amplitude(state).basis(), c, placement}, label);
  return expectation(poly, state, {{label, p}});
}

double source_term(const State& state, Component c, const SpacetimePoint& p) {
  const Complex v = stress_expectation(state, c, p, IndexPlacement::lower);
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v))) {
    throw ConsistencyError("stress tensor expectation has a non-negligible imaginary part");
  }
  return 8.0 * std::numbers::pi * v.real();
}

void write_stress_csv(std::ostream& os, std::span<const StressSample> samples) {
  const std::size_t d = samples.empty() ? 1 : samples.front().point.x.size();
  os << "t";
  for (std::size_t j = 1; j <= d; ++j) os << ",x" << j;
  os << ",mu,nu,re,im\n";
  for (const auto& s : samples) {
    os << format_real(s.point.t);
    for (double x : s.point.x) os << ',' << format_real(x);
    os << ',' << s.component.mu << ',' << s.component.nu << ',' << format_real(s.value.real())
       << ',' << format_real(s.value.imag()) << '\n';
  }
}

}  // namespace catstress
