#include "catstress/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "catstress/error.hpp"

namespace catstress {

namespace {

constexpr Complex kI{0.0, 1.0};

// Calls fn(flat_index, q) for every point of a Q^d grid, first axis fastest.
template <typename Fn>
void for_each_grid_point(int dimension, int points_per_axis, Fn&& fn) {
  std::vector<int> q(static_cast<std::size_t>(dimension), 0);
  std::size_t total = 1;
  for (int j = 0; j < dimension; ++j) total *= static_cast<std::size_t>(points_per_axis);
  for (std::size_t flat = 0; flat < total; ++flat) {
    fn(flat, q);
    for (int j = 0; j < dimension; ++j) {
      if (++q[static_cast<std::size_t>(j)] < points_per_axis) break;
      q[static_cast<std::size_t>(j)] = 0;
    }
  }
}

SpacetimePoint grid_point(const BoxGeometry& geometry, double t, int points_per_axis,
                          const std::vector<int>& q) {
  SpacetimePoint p{t, std::vector<double>(q.size())};
  for (std::size_t j = 0; j < q.size(); ++j) {
    p.x[j] = geometry.length * q[j] / points_per_axis;
  }
  return p;
}

}  // namespace

BoxGeometry BoxGeometry::make(int dimension, double length) {
  if (dimension < 1) throw InvalidArgument("box dimension must be >= 1");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidArgument("box length must be positive and finite");
  }
  return BoxGeometry{dimension, length};
}

double BoxGeometry::volume() const { return std::pow(length, dimension); }

// ---------------------------------------------------------------------------

DerivativeIndex DerivativeIndex::first(int direction) {
  if (direction < 0 || direction > 127) throw InvalidArgument("invalid derivative direction");
  DerivativeIndex d;
  d.kind_ = Kind::first;
  d.dirs_ = {static_cast<std::int8_t>(direction), -1};
  return d;
}

DerivativeIndex DerivativeIndex::second(int a, int b) {
  if (a < 0 || b < 0 || a > 127 || b > 127) throw InvalidArgument("invalid derivative direction");
  DerivativeIndex d;
  d.kind_ = Kind::second;
  d.dirs_ = {static_cast<std::int8_t>(std::min(a, b)), static_cast<std::int8_t>(std::max(a, b))};
  return d;
}

DerivativeIndex DerivativeIndex::box() {
  DerivativeIndex d;
  d.kind_ = Kind::box;
  return d;
}

int DerivativeIndex::order() const {
  switch (kind_) {
    case Kind::none:
      return 0;
    case Kind::first:
      return 1;
    case Kind::second:
    case Kind::box:
      return 2;
  }
  return 0;
}

int DerivativeIndex::max_direction() const { return std::max<int>({0, dirs_[0], dirs_[1]}); }

std::string DerivativeIndex::to_string(int dimension) const {
  auto axis = [dimension](int dir) -> std::string {
    if (dir == 0) return "∂t";
    if (dimension == 1) return "∂x";
    return "∂x" + std::to_string(dir);
  };
  switch (kind_) {
    case Kind::none:
      return "";
    case Kind::first:
      return axis(dirs_[0]);
    case Kind::second:
      return axis(dirs_[0]) + axis(dirs_[1]);
    case Kind::box:
      return "□";
  }
  return "";
}

// ---------------------------------------------------------------------------

ModeBasis::ModeBasis(BoxGeometry geometry, double mass, double coupling,
                     std::vector<std::vector<int>> indices)
    : geometry_(BoxGeometry::make(geometry.dimension, geometry.length)),
      mass_(mass),
      coupling_(coupling) {
  if (!(mass >= 0.0) || !std::isfinite(mass)) throw InvalidArgument("mass must be non-negative");
  if (!std::isfinite(coupling)) throw InvalidArgument("curvature coupling must be finite");
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw InvalidArgument("duplicate wave-vector in mode list");
  }
  const double dk = 2.0 * std::numbers::pi / geometry_.length;
  modes_.reserve(indices.size());
  for (auto& n : indices) {
    if (static_cast<int>(n.size()) != geometry_.dimension) {
      throw InvalidArgument("mode index has wrong dimension");
    }
    Mode m;
    m.wave_vector.resize(n.size());
    double k2 = 0.0;
    for (std::size_t j = 0; j < n.size(); ++j) {
      m.wave_vector[j] = dk * n[j];
      k2 += m.wave_vector[j] * m.wave_vector[j];
    }
    m.frequency = std::sqrt(k2 + mass * mass);
    if (!(m.frequency > 0.0)) throw InvalidArgument("massless zero mode excluded");
    m.index = std::move(n);
    modes_.push_back(std::move(m));
  }
}

int ModeBasis::max_index() const {
  int result = 0;
  for (const auto& m : modes_) {
    for (int n : m.index) result = std::max(result, std::abs(n));
  }
  return result;
}

double ModeBasis::effective_frequency(std::size_t mode) const {
  return modes_.at(mode).frequency + frequency_offset_;
}

Complex ModeBasis::derivative_factor(std::size_t mode, Branch branch,
                                     const DerivativeIndex& deriv) const {
  const Mode& m = modes_.at(mode);
  if (deriv.max_direction() > geometry_.dimension) {
    throw InvalidArgument("derivative direction exceeds spacetime dimension");
  }
  const double omega = effective_frequency(mode);
  const double sign = branch == Branch::positive ? 1.0 : -1.0;
  auto single = [&](int dir) -> Complex {
    if (dir == 0) return -sign * kI * omega;
    return sign * kI * m.wave_vector[static_cast<std::size_t>(dir - 1)];
  };
  switch (deriv.kind()) {
    case DerivativeIndex::Kind::none:
      return 1.0;
    case DerivativeIndex::Kind::first:
      return single(deriv.directions()[0]);
    case DerivativeIndex::Kind::second:
      return single(deriv.directions()[0]) * single(deriv.directions()[1]);
    case DerivativeIndex::Kind::box: {
      // -d_t^2 + sum_j d_j^2
      Complex acc = -single(0) * single(0);
      for (int j = 1; j <= geometry_.dimension; ++j) acc += single(j) * single(j);
      return acc;
    }
  }
  return 1.0;
}

Complex ModeBasis::value(std::size_t mode, Branch branch, const DerivativeIndex& deriv,
                         const SpacetimePoint& p) const {
  const Mode& m = modes_.at(mode);
  if (static_cast<int>(p.x.size()) != geometry_.dimension) {
    throw InvalidArgument("spacetime point has wrong spatial dimension");
  }
  const double omega = effective_frequency(mode);
  double phase = -omega * p.t;
  for (std::size_t j = 0; j < p.x.size(); ++j) phase += m.wave_vector[j] * p.x[j];
  const double norm = 1.0 / std::sqrt(2.0 * omega * geometry_.volume());
  Complex plane = std::polar(norm, phase);
  if (branch == Branch::negative) plane = std::conj(plane);
  return derivative_factor(mode, branch, deriv) * plane;
}

ModeBasis ModeBasis::with_frequency_offset(double offset) const {
  ModeBasis copy = *this;
  copy.frequency_offset_ = offset;
  return copy;
}

bool ModeBasis::operator==(const ModeBasis& other) const {
  if (!(geometry_ == other.geometry_) || mass_ != other.mass_ || coupling_ != other.coupling_ ||
      frequency_offset_ != other.frequency_offset_ || modes_.size() != other.modes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].index != other.modes_[i].index) return false;
  }
  return true;
}

BasisPtr build_box_modes(const BoxGeometry& geometry, double mass, double coupling,
                         int max_index) {
  if (max_index < 0) throw InvalidArgument("max_index must be non-negative");
  if (mass == 0.0 && max_index == 0) throw InvalidArgument("massless zero mode excluded");
  const auto g = BoxGeometry::make(geometry.dimension, geometry.length);
  std::vector<std::vector<int>> indices;
  for_each_grid_point(g.dimension, 2 * max_index + 1, [&](std::size_t, const std::vector<int>& q) {
    std::vector<int> n(q.size());
    bool zero = true;
    for (std::size_t j = 0; j < q.size(); ++j) {
      n[j] = q[j] - max_index;
      zero = zero && n[j] == 0;
    }
    if (zero && mass == 0.0) return;
    indices.push_back(std::move(n));
  });
  return std::make_shared<const ModeBasis>(g, mass, coupling, std::move(indices));
}

Complex mode_value(const ModeBasis& basis, std::size_t mode, Branch branch,
                   const DerivativeIndex& deriv, const SpacetimePoint& p) {
  return basis.value(mode, branch, deriv, p);
}

Complex kg_residual(const ModeBasis& basis, std::size_t mode, const SpacetimePoint& p,
                    Branch branch) {
  // Built from the individual second partials rather than the box tag so the
  // check exercises the derivative rules themselves.
  Complex box = -basis.value(mode, branch, DerivativeIndex::second(0, 0), p);
  for (int j = 1; j <= basis.dimension(); ++j) {
    box += basis.value(mode, branch, DerivativeIndex::second(j, j), p);
  }
  const double m2 = basis.mass() * basis.mass();
  return -box + m2 * basis.value(mode, branch, DerivativeIndex::none(), p);
}

// ---------------------------------------------------------------------------

SolutionSlice mode_solution(const BasisPtr& basis, std::size_t mode, Branch branch) {
  if (mode >= basis->size()) throw InvalidArgument("mode index out of range");
  return SolutionSlice{
      [basis, mode, branch](const SpacetimePoint& p) {
        return basis->value(mode, branch, DerivativeIndex::none(), p);
      },
      [basis, mode, branch](const SpacetimePoint& p) {
        return basis->value(mode, branch, DerivativeIndex::first(0), p);
      }};
}

SolutionSlice ModeExpansion::as_solution(const BasisPtr& basis) const {
  if (positive.size() != basis->size() || negative.size() != basis->size()) {
    throw InvalidArgument("expansion length does not match basis size");
  }
  auto eval = [basis, pos = positive, neg = negative](const DerivativeIndex& d) {
    return [basis, pos, neg, d](const SpacetimePoint& p) {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < basis->size(); ++i) {
        if (pos[i] != 0.0) acc += pos[i] * basis->value(i, Branch::positive, d, p);
        if (neg[i] != 0.0) acc += neg[i] * basis->value(i, Branch::negative, d, p);
      }
      return acc;
    };
  };
  return SolutionSlice{eval(DerivativeIndex::none()), eval(DerivativeIndex::first(0))};
}

int default_quadrature_points(const ModeBasis& basis) { return 4 * basis.max_index() + 1; }

SliceSamples sample_slice(const std::function<Complex(const SpacetimePoint&)>& field,
                          const BoxGeometry& geometry, double t, int points_per_axis) {
  if (points_per_axis < 1) throw InvalidArgument("need at least one grid point per axis");
  SliceSamples s{t, points_per_axis, {}};
  for_each_grid_point(geometry.dimension, points_per_axis,
                      [&](std::size_t, const std::vector<int>& q) {
                        s.values.push_back(field(grid_point(geometry, t, points_per_axis, q)));
                      });
  return s;
}

Complex kg_inner_product(const SliceSamples& f, const SliceSamples& f_dt, const SliceSamples& g,
                         const SliceSamples& g_dt, const BoxGeometry& geometry) {
  const std::size_t n = f.values.size();
  if (f_dt.values.size() != n || g.values.size() != n || g_dt.values.size() != n) {
    throw InvalidArgument("slice samples have mismatched sizes");
  }
  Complex acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::conj(g.values[i]) * f_dt.values[i] - std::conj(g_dt.values[i]) * f.values[i];
  }
  const double weight = geometry.volume() / static_cast<double>(n);
  return kI * acc * weight;
}

Complex kg_inner_product(const SolutionSlice& f, const SolutionSlice& g, const ModeBasis& basis,
                         double t_slice, int quadrature_points) {
  if (quadrature_points == 0) quadrature_points = default_quadrature_points(basis);
  if (quadrature_points < 2 * basis.max_index() + 1) {
    throw InvalidArgument("insufficient quadrature points: products of basis modes would alias");
  }
  const auto& geo = basis.geometry();
  return kg_inner_product(sample_slice(f.value, geo, t_slice, quadrature_points),
                          sample_slice(f.time_derivative, geo, t_slice, quadrature_points),
                          sample_slice(g.value, geo, t_slice, quadrature_points),
                          sample_slice(g.time_derivative, geo, t_slice, quadrature_points), geo);
}

Decomposition decompose_classical(const SliceSamples& first, const SliceSamples& second,
                                  const BasisPtr& basis) {
  const auto& geo = basis->geometry();
  const int q_axis = first.points_per_axis;
  if (second.points_per_axis != q_axis || first.values.size() != second.values.size()) {
    throw InvalidArgument("slices sampled on different grids");
  }
  if (q_axis < 2 * basis->max_index() + 1) {
    throw InvalidArgument("insufficient quadrature points: products of basis modes would alias");
  }
  const double dt = second.t - first.t;
  if (dt == 0.0) throw InvalidArgument("the two slices must be at different times");

  // Fourier-decompose both slices. For wave-vector k the spatial component
  // evolves as P e^{-i w t} + Q e^{+i w t}; two slices pin P and Q, which
  // gives the time derivative on the first slice.
  const std::size_t total = first.values.size();
  const int half = (q_axis - 1) / 2;
  const double two_pi = 2.0 * std::numbers::pi;
  const double m2 = basis->mass() * basis->mass();
  std::vector<Complex> dt_values(total, 0.0);

  for_each_grid_point(geo.dimension, q_axis, [&](std::size_t, const std::vector<int>& shifted) {
    std::vector<int> n(shifted.size());
    double k2 = 0.0;
    for (std::size_t j = 0; j < n.size(); ++j) {
      n[j] = shifted[j] - half;
      const double k = two_pi * n[j] / geo.length;
      k2 += k * k;
    }
    // Forward transform of both slices at this wave-vector.
    Complex c1 = 0.0, c2 = 0.0;
    std::vector<Complex> phases(total);
    for_each_grid_point(geo.dimension, q_axis, [&](std::size_t flat, const std::vector<int>& q) {
      double arg = 0.0;
      for (std::size_t j = 0; j < q.size(); ++j) arg += two_pi * n[j] * q[j] / q_axis;
      phases[flat] = std::polar(1.0, arg);
      c1 += first.values[flat] * std::conj(phases[flat]);
      c2 += second.values[flat] * std::conj(phases[flat]);
    });
    c1 /= static_cast<double>(total);
    c2 /= static_cast<double>(total);
    if (c1 == 0.0 && c2 == 0.0) return;

    const double omega = std::sqrt(k2 + m2);
    Complex c1_dt;
    if (omega == 0.0) {
      c1_dt = (c2 - c1) / dt;
    } else {
      const double s = std::sin(omega * dt);
      if (std::abs(s) < 1e-6) {
        throw InvalidArgument("slice separation is a multiple of a half-period");
      }
      const Complex e1m = std::polar(1.0, -omega * first.t), e1p = std::polar(1.0, omega * first.t);
      const Complex e2m = std::polar(1.0, -omega * second.t),
                    e2p = std::polar(1.0, omega * second.t);
      const Complex det = e1m * e2p - e1p * e2m;
      const Complex pc = (c1 * e2p - e1p * c2) / det;
      const Complex qc = (e1m * c2 - c1 * e2m) / det;
      c1_dt = -kI * omega * pc * e1m + kI * omega * qc * e1p;
    }
    for (std::size_t flat = 0; flat < total; ++flat) dt_values[flat] += c1_dt * phases[flat];
  });

  SliceSamples field_dt{first.t, q_axis, std::move(dt_values)};

  Decomposition out;
  out.coefficients.positive.resize(basis->size());
  out.coefficients.negative.resize(basis->size());
  for (std::size_t i = 0; i < basis->size(); ++i) {
    for (Branch b : {Branch::positive, Branch::negative}) {
      const auto sol = mode_solution(basis, i, b);
      const auto g = sample_slice(sol.value, geo, first.t, q_axis);
      const auto g_dt = sample_slice(sol.time_derivative, geo, first.t, q_axis);
      const Complex product = kg_inner_product(first, field_dt, g, g_dt, geo);
      if (b == Branch::positive) {
        out.coefficients.positive[i] = product;
      } else {
        out.coefficients.negative[i] = -product;
      }
    }
  }

  const auto rebuilt = out.coefficients.as_solution(basis);
  double worst = 0.0, scale = 0.0;
  for (const SliceSamples* slice : {&first, &second}) {
    const auto r = sample_slice(rebuilt.value, geo, slice->t, q_axis);
    for (std::size_t i = 0; i < total; ++i) {
      worst = std::max(worst, std::abs(r.values[i] - slice->values[i]));
      scale = std::max(scale, std::abs(slice->values[i]));
    }
  }
  out.reconstruction_residual = scale > 0.0 ? worst / scale : worst;
  out.band_limited = out.reconstruction_residual <= 1e-10;
  return out;
}

}  // namespace catstress
