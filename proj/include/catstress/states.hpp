#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "catstress/modes.hpp"

namespace catstress {

/// Coherent amplitude alpha_i = <alpha, phi_i^+> over a mode basis. Defines the
/// coherent state |alpha> = D(alpha)|0>.
class CoherentAmplitude {
 public:
  CoherentAmplitude(BasisPtr basis, std::vector<Complex> amplitudes);

  static CoherentAmplitude zero(BasisPtr basis);

  const BasisPtr& basis() const { return basis_; }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return amplitudes_.size(); }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  /// |alpha|^2 = sum_i |alpha_i|^2
  double norm_squared() const;

  CoherentAmplitude operator-() const;
  CoherentAmplitude operator+(const CoherentAmplitude& other) const;
  CoherentAmplitude operator-(const CoherentAmplitude& other) const;
  CoherentAmplitude scaled(Complex factor) const;

  bool same_basis(const CoherentAmplitude& other) const;

 private:
  BasisPtr basis_;
  std::vector<Complex> amplitudes_;
};

/// Throws InvalidArgument unless both amplitudes live on the same basis.
void require_same_basis(const CoherentAmplitude& a, const CoherentAmplitude& b);

/// <alpha|beta> = exp(i Im sum_i alpha_i^* beta_i) exp(-|beta - alpha|^2 / 2).
Complex coherent_overlap(const CoherentAmplitude& alpha, const CoherentAmplitude& beta);

/// <alpha|-alpha> = exp(-2 |alpha|^2), always real and in (0, 1].
struct OverlapEpsilon {
  double value = 1.0;
};

OverlapEpsilon epsilon(const CoherentAmplitude& alpha);

/// Normalized a|alpha> + b|-alpha>.
class CatState {
 public:
  const CoherentAmplitude& alpha() const { return alpha_; }
  Complex a() const { return a_; }
  Complex b() const { return b_; }
  bool phase_form() const { return theta_.has_value(); }
  std::optional<double> theta() const { return theta_; }
  double overlap() const { return epsilon_; }

  /// |a|^2 + |b|^2 + 2 Re(a^* b) eps
  double norm() const;

  friend CatState cat_normalize(Complex a_raw, Complex b_raw, const CoherentAmplitude& alpha);
  friend CatState phase_form_cat(double theta, const CoherentAmplitude& alpha);

 private:
  CatState(CoherentAmplitude alpha, Complex a, Complex b, std::optional<double> theta);

  CoherentAmplitude alpha_;
  Complex a_;
  Complex b_;
  std::optional<double> theta_;
  double epsilon_;
};

/// Rescales (a_raw, b_raw) by a positive real factor so that the cat state
/// has unit norm. Throws if the superposition vanishes.
CatState cat_normalize(Complex a_raw, Complex b_raw, const CoherentAmplitude& alpha);

/// a = cos(theta), b = i sin(theta). Normalized for every alpha since the
/// cross terms cancel.
CatState phase_form_cat(double theta, const CoherentAmplitude& alpha);

using State = std::variant<CoherentAmplitude, CatState>;

const CoherentAmplitude& state_amplitude(const State& state);

/// beta-type: sum_i alpha_i D phi_i^+(p). alpha-bar-type: sum_i alpha_i^* D phi_i^-(p).
enum class ProfileBranch { beta, alpha_bar };

Complex classical_profile(const CoherentAmplitude& alpha, ProfileBranch branch,
                          const DerivativeIndex& deriv, const SpacetimePoint& p);

}  // namespace catstress
