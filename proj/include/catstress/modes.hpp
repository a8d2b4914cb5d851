#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace catstress {

using Complex = std::complex<double>;

/// Flat periodic box [0, L)^d with mostly-plus Minkowski metric
/// diag(-1, +1, ..., +1). Curvature vanishes identically.
struct BoxGeometry {
  int dimension = 1;
  double length = 1.0;

  /// Validates d >= 1 and L > 0.
  static BoxGeometry make(int dimension, double length);

  /// Flat metric component eta_{mu mu} (= eta^{mu mu}); 0 is the time direction.
  static double metric_sign(int direction) { return direction == 0 ? -1.0 : 1.0; }

  double volume() const;
  bool operator==(const BoxGeometry&) const = default;
};

struct SpacetimePoint {
  double t = 0.0;
  std::vector<double> x;
};

enum class Branch { positive, negative };

/// Derivative applied to a field factor: nothing, one partial derivative,
/// two partial derivatives, or the d'Alembertian. Direction 0 is time,
/// directions 1..d are the spatial axes.
class DerivativeIndex {
 public:
  enum class Kind : std::uint8_t { none, first, second, box };

  DerivativeIndex() = default;

  static DerivativeIndex none() { return {}; }
  static DerivativeIndex first(int direction);
  /// Order of the two directions does not matter; stored sorted.
  static DerivativeIndex second(int a, int b);
  static DerivativeIndex box();

  Kind kind() const { return kind_; }
  int order() const;
  /// Directions of a first/second derivative (unused slots are -1).
  const std::array<std::int8_t, 2>& directions() const { return dirs_; }

  /// Largest direction referenced, or 0.
  int max_direction() const;

  /// e.g. "", "∂t", "∂x", "∂t∂x", "∂x1∂x2", "□".
  std::string to_string(int dimension = 1) const;

  auto operator<=>(const DerivativeIndex&) const = default;

 private:
  Kind kind_ = Kind::none;
  std::array<std::int8_t, 2> dirs_{-1, -1};
};

struct Mode {
  std::vector<int> index;            // integer lattice label n
  std::vector<double> wave_vector;   // k = 2 pi n / L
  double frequency = 0.0;            // omega = sqrt(|k|^2 + m^2)
};

/// Discrete Klein-Gordon plane-wave basis on a periodic box.
///
/// Positive-norm modes are phi_k^+(t, x) = exp(-i (w t - k.x)) / sqrt(2 w L^d);
/// the negative-norm mode is the complex conjugate. Mode order is the
/// lexicographic order of the integer labels.
class ModeBasis {
 public:
  ModeBasis(BoxGeometry geometry, double mass, double coupling,
            std::vector<std::vector<int>> indices);

  const BoxGeometry& geometry() const { return geometry_; }
  int dimension() const { return geometry_.dimension; }
  double mass() const { return mass_; }
  double coupling() const { return coupling_; }
  std::size_t size() const { return modes_.size(); }
  const Mode& mode(std::size_t i) const { return modes_.at(i); }
  const std::vector<Mode>& modes() const { return modes_; }

  /// Largest |n_j| over all modes and axes.
  int max_index() const;

  /// Factor multiplying the undifferentiated mode function when `deriv`
  /// is applied: each d/dt gives -+i w, each d/dx_j gives +-i k_j.
  Complex derivative_factor(std::size_t mode, Branch branch, const DerivativeIndex& deriv) const;

  Complex value(std::size_t mode, Branch branch, const DerivativeIndex& deriv,
                const SpacetimePoint& p) const;

  /// Copy whose mode functions oscillate with w + offset instead of w.
  /// Only meant as a negative control for the equation-of-motion checks.
  ModeBasis with_frequency_offset(double offset) const;
  double frequency_offset() const { return frequency_offset_; }

  bool operator==(const ModeBasis& other) const;

 private:
  double effective_frequency(std::size_t mode) const;

  BoxGeometry geometry_;
  double mass_;
  double coupling_;
  double frequency_offset_ = 0.0;
  std::vector<Mode> modes_;
};

using BasisPtr = std::shared_ptr<const ModeBasis>;

/// All wave-vectors with |n_j| <= max_index on every axis; the k = 0 mode is
/// dropped for a massless field.
BasisPtr build_box_modes(const BoxGeometry& geometry, double mass, double coupling,
                         int max_index);

Complex mode_value(const ModeBasis& basis, std::size_t mode, Branch branch,
                   const DerivativeIndex& deriv, const SpacetimePoint& p);

/// (-box + m^2) applied to a mode, from the closed-form second derivatives.
Complex kg_residual(const ModeBasis& basis, std::size_t mode, const SpacetimePoint& p,
                    Branch branch = Branch::positive);

// ---------------------------------------------------------------------------
// Klein-Gordon inner product

/// What the inner product needs from a solution on a constant-time slice.
struct SolutionSlice {
  std::function<Complex(const SpacetimePoint&)> value;
  std::function<Complex(const SpacetimePoint&)> time_derivative;
};

SolutionSlice mode_solution(const BasisPtr& basis, std::size_t mode, Branch branch);

/// phi = sum_i a+_i phi_i^+ + a-_i phi_i^-.
struct ModeExpansion {
  std::vector<Complex> positive;
  std::vector<Complex> negative;

  SolutionSlice as_solution(const BasisPtr& basis) const;
};

/// Default number of grid points per axis for a basis: 4 * max_index + 1.
int default_quadrature_points(const ModeBasis& basis);

/// Field samples on a uniform Q^d grid of a constant-time slice. Grid point
/// q = (q_1, ..., q_d) sits at x_j = L q_j / Q and is stored at flat index
/// q_1 + Q q_2 + Q^2 q_3 + ...
struct SliceSamples {
  double t = 0.0;
  int points_per_axis = 0;
  std::vector<Complex> values;
};

SliceSamples sample_slice(const std::function<Complex(const SpacetimePoint&)>& field,
                          const BoxGeometry& geometry, double t, int points_per_axis);

/// i * integral over the slice of (g* d_t f - (d_t g*) f), periodic trapezoid
/// rule. Throws if the grid cannot resolve products of basis modes.
Complex kg_inner_product(const SolutionSlice& f, const SolutionSlice& g, const ModeBasis& basis,
                         double t_slice, int quadrature_points = 0);

/// Same product from pre-sampled values and time derivatives on one slice.
Complex kg_inner_product(const SliceSamples& f, const SliceSamples& f_dt, const SliceSamples& g,
                         const SliceSamples& g_dt, const BoxGeometry& geometry);

struct Decomposition {
  ModeExpansion coefficients;
  /// max |reconstruction - samples| / max |samples| over both slices.
  double reconstruction_residual = 0.0;
  /// False when the residual exceeds 1e-10: the input was not band-limited
  /// to the basis.
  bool band_limited = true;
};

/// Recovers a+_i = <phi, phi_i^+> and a-_i = -<phi, phi_i^->  from samples of a
/// solution on two slices. The second slice fixes the time derivative on the
/// first one, mode by mode.
Decomposition decompose_classical(const SliceSamples& first, const SliceSamples& second,
                                  const BasisPtr& basis);

}  // namespace catstress
