#include "catstress/states.hpp"

#include <cmath>

#include "catstress/error.hpp"

namespace catstress {

CoherentAmplitude::CoherentAmplitude(BasisPtr basis, std::vector<Complex> amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_) throw InvalidArgument("coherent amplitude needs a mode basis");
  if (amplitudes_.size() != basis_->size()) {
    throw InvalidArgument("amplitude vector length must equal basis size");
  }
  for (const auto& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw InvalidArgument("coherent amplitude must be finite");
    }
  }
}

CoherentAmplitude CoherentAmplitude::zero(BasisPtr basis) {
  const std::size_t n = basis->size();
  return CoherentAmplitude(std::move(basis), std::vector<Complex>(n, 0.0));
}

double CoherentAmplitude::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amplitudes_) acc += std::norm(a);
  return acc;
}

CoherentAmplitude CoherentAmplitude::operator-() const { return scaled(-1.0); }

CoherentAmplitude CoherentAmplitude::scaled(Complex factor) const {
  std::vector<Complex> out(amplitudes_);
  for (auto& a : out) a *= factor;
  return CoherentAmplitude(basis_, std::move(out));
}

CoherentAmplitude CoherentAmplitude::operator+(const CoherentAmplitude& other) const {
  require_same_basis(*this, other);
  std::vector<Complex> out(amplitudes_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.amplitudes_[i];
  return CoherentAmplitude(basis_, std::move(out));
}

CoherentAmplitude CoherentAmplitude::operator-(const CoherentAmplitude& other) const {
  return *this + (-other);
}

bool CoherentAmplitude::same_basis(const CoherentAmplitude& other) const {
  return basis_ == other.basis_ || *basis_ == *other.basis_;
}

void require_same_basis(const CoherentAmplitude& a, const CoherentAmplitude& b) {
  if (!a.same_basis(b)) throw InvalidArgument("coherent amplitudes live on different bases");
}

Complex coherent_overlap(const CoherentAmplitude& alpha, const CoherentAmplitude& beta) {
  require_same_basis(alpha, beta);
  Complex cross = 0.0;
  double dist2 = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    cross += std::conj(alpha[i]) * beta[i];
    dist2 += std::norm(beta[i] - alpha[i]);
  }
  return std::polar(std::exp(-0.5 * dist2), cross.imag());
}

OverlapEpsilon epsilon(const CoherentAmplitude& alpha) {
  return OverlapEpsilon{std::exp(-2.0 * alpha.norm_squared())};
}

// ---------------------------------------------------------------------------

CatState::CatState(CoherentAmplitude alpha, Complex a, Complex b, std::optional<double> theta)
    : alpha_(std::move(alpha)), a_(a), b_(b), theta_(theta), epsilon_(epsilon(alpha_).value) {}

double CatState::norm() const {
  return std::norm(a_) + std::norm(b_) + 2.0 * (std::conj(a_) * b_).real() * epsilon_;
}

CatState cat_normalize(Complex a_raw, Complex b_raw, const CoherentAmplitude& alpha) {
  if (a_raw == 0.0 && b_raw == 0.0) throw InvalidArgument("cat coefficients are both zero");
  const double eps = epsilon(alpha).value;
  const double raw_norm =
      std::norm(a_raw) + std::norm(b_raw) + 2.0 * (std::conj(a_raw) * b_raw).real() * eps;
  const double scale = std::norm(a_raw) + std::norm(b_raw);
  if (!(raw_norm > 1e-14 * scale)) throw InvalidArgument("cat state vanishes");
  // Already-normalized input is kept bit-for-bit.
  const double f = std::abs(raw_norm - 1.0) <= 4e-16 ? 1.0 : 1.0 / std::sqrt(raw_norm);
  return CatState(alpha, f * a_raw, f * b_raw, std::nullopt);
}

CatState phase_form_cat(double theta, const CoherentAmplitude& alpha) {
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
  return CatState(alpha, Complex(std::cos(theta), 0.0), Complex(0.0, std::sin(theta)), theta);
}

const CoherentAmplitude& state_amplitude(const State& state) {
  if (const auto* c = std::get_if<CoherentAmplitude>(&state)) return *c;
  return std::get<CatState>(state).alpha();
}

Complex classical_profile(const CoherentAmplitude& alpha, ProfileBranch branch,
                          const DerivativeIndex& deriv, const SpacetimePoint& p) {
  const auto& basis = *alpha.basis();
  Complex acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    if (branch == ProfileBranch::beta) {
      acc += alpha[i] * basis.value(i, Branch::positive, deriv, p);
    } else {
      acc += std::conj(alpha[i]) * basis.value(i, Branch::negative, deriv, p);
    }
  }
  return acc;
}

}  // namespace catstress
