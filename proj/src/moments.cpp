#include "catstress/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

#include "catstress/error.hpp"

namespace catstress {

namespace {

// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(Complex v) {
    add_part(sum_re_, comp_re_, v.real());
    add_part(sum_im_, comp_im_, v.imag());
  }
  Complex value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }

 private:
  static void add_part(double& sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double sum_re_ = 0.0, comp_re_ = 0.0, sum_im_ = 0.0, comp_im_ = 0.0;
};

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

void check_order(std::size_t n, const MomentOptions& options) {
  if (static_cast<int>(n) > options.order_cap) {
    throw InvalidArgument("moment order " + std::to_string(n) + " exceeds order cap " +
                          std::to_string(options.order_cap));
  }
}

// Raw moments keyed by the ordered tuple of slot indices they are evaluated at.
class RawMomentCache {
 public:
  RawMomentCache(const State& state, std::span<const MomentSlot> slots, const MomentOptions& options)
      : state_(state), slots_(slots), options_(options) {}

  Complex operator()(std::span<const int> order) {
    std::vector<int> key(order.begin(), order.end());
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<MomentSlot> picked;
    picked.reserve(key.size());
    for (int i : key) picked.push_back(slots_[static_cast<std::size_t>(i)]);
    const Complex v = raw_moment(state_, picked, options_);
    cache_.emplace(std::move(key), v);
    return v;
  }

 private:
  const State& state_;
  std::span<const MomentSlot> slots_;
  const MomentOptions& options_;
  std::map<std::vector<int>, Complex> cache_;
};

}  // namespace

OperatorPolynomial moment_polynomial(const BasisPtr& basis, std::span<const MomentSlot> slots,
                                     IndexPlacement placement) {
  const int cap = std::max(kDefaultDegreeCap, 2 * static_cast<int>(slots.size()));
  auto product = OperatorPolynomial::constant(1.0, cap);
  for (std::size_t j = 0; j < slots.size(); ++j) {
    product = product * build_stress_tensor({basis, slots[j].component, placement},
                                            PointLabel{static_cast<int>(j)}, cap);
  }
  return product;
}

Complex raw_moment(const State& state, std::span<const MomentSlot> slots,
                   const MomentOptions& options) {
  check_order(slots.size(), options);
  if (slots.empty()) return 1.0;
  const auto& basis = state_amplitude(state).basis();
  const auto poly = moment_polynomial(basis, slots, options.placement);
  LabelAssignment assignment;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    assignment.emplace(PointLabel{static_cast<int>(j)}, slots[j].point);
  }
  return expectation(poly, state, assignment);
}

Complex permutation_symmetrize(int n,
                               const std::function<Complex(std::span<const int>)>& integrand) {
  if (n < 0) throw InvalidArgument("permutation count must be non-negative");
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  CompensatedSum sum;
  do {
    sum.add(integrand(sigma));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return sum.value();
}

MomentResult central_moment(const State& state, std::span<const MomentSlot> slots,
                            const MomentOptions& options) {
  const int n = static_cast<int>(slots.size());
  if (n < 1) throw InvalidArgument("central moment needs at least one slot");
  check_order(slots.size(), options);

  RawMomentCache raw(state, slots, options);
  std::vector<Complex> first(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int idx[1] = {j};
    first[static_cast<std::size_t>(j)] = raw(idx);
  }

  MomentResult result;
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  for (int m = 1; m <= n; ++m) {
    result.raw.push_back(raw(std::span<const int>(identity).first(static_cast<std::size_t>(m))));
  }

  const double inv_factorial = 1.0 / static_cast<double>(factorial(n));
  CompensatedSum total;
  for (int m = 0; m <= n; ++m) {
    const Complex symmetrized = permutation_symmetrize(n, [&](std::span<const int> sigma) {
      Complex term = m == 0 ? Complex(1.0) : raw(sigma.first(static_cast<std::size_t>(m)));
      for (int j = m; j < n; ++j) term *= first[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])];
      return term;
    });
    const double sign = (n - m) % 2 == 0 ? 1.0 : -1.0;
    total.add(sign * static_cast<double>(binomial(n, m)) * inv_factorial * symmetrized);
  }
  result.central = total.value();
  if (const auto* cat = std::get_if<CatState>(&state)) result.epsilon_bound = cat->overlap();
  return result;
}

Complex symmetrized_covariance(const State& state, const MomentSlot& a, const MomentSlot& b,
                               const MomentOptions& options) {
  const MomentSlot ab[2] = {a, b};
  const MomentSlot ba[2] = {b, a};
  const MomentSlot only_a[1] = {a};
  const MomentSlot only_b[1] = {b};
  return 0.5 * (raw_moment(state, ab, options) + raw_moment(state, ba, options)) -
         raw_moment(state, only_a, options) * raw_moment(state, only_b, options);
}

bool coincident_points(const SpacetimePoint& p, const SpacetimePoint& q, double length) {
  if (p.t != q.t || p.x.size() != q.x.size()) return false;
  for (std::size_t j = 0; j < p.x.size(); ++j) {
    if (std::abs(std::remainder(p.x[j] - q.x[j], length)) > 1e-12 * length) return false;
  }
  return true;
}

KuoFordResult kuo_ford_delta(const State& state, const MomentSlot& a, const MomentSlot& b,
                             const KuoFordOptions& options) {
  const MomentOptions moment_options{kDefaultMomentCap, options.placement};
  const MomentSlot ab[2] = {a, b};
  const MomentSlot only_a[1] = {a};
  const MomentSlot only_b[1] = {b};

  KuoFordResult result;
  Complex second = raw_moment(state, ab, moment_options);
  if (options.symmetrized) {
    const MomentSlot ba[2] = {b, a};
    second = 0.5 * (second + raw_moment(state, ba, moment_options));
  }
  result.denominator = second;
  result.numerator =
      second - raw_moment(state, only_a, moment_options) * raw_moment(state, only_b, moment_options);

  const auto& alpha = state_amplitude(state);
  result.coincident = coincident_points(a.point, b.point, alpha.basis()->geometry().length);

  const auto poly = moment_polynomial(alpha.basis(), ab, options.placement);
  const double scale =
      substituted_magnitude(poly, alpha, alpha, {{PointLabel{0}, a.point}, {PointLabel{1}, b.point}});
  if (scale > 0.0 && std::abs(second) >= 1e-12 * scale) {
    result.delta = std::abs(result.numerator / second);
  }
  return result;
}

}  // namespace catstress
