#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "catstress/stress_tensor.hpp"

namespace catstress {

/// One stress tensor insertion T_{mu nu}(x) of a moment.
struct MomentSlot {
  SpacetimePoint point;
  Component component;
};

inline constexpr int kDefaultMomentCap = 4;

struct MomentOptions {
  /// Largest moment order accepted. The symmetrizer enumerates n!
  /// permutations and the product polynomial has degree 2n.
  int order_cap = kDefaultMomentCap;
  IndexPlacement placement = IndexPlacement::lower;
};

/// T(slot_0) T(slot_1) ... with slot j bound to PointLabel{j}.
OperatorPolynomial moment_polynomial(const BasisPtr& basis, std::span<const MomentSlot> slots,
                                     IndexPlacement placement = IndexPlacement::lower);

/// <psi| :T(slot_0) ... T(slot_{n-1}): |psi>; 1 for n = 0.
Complex raw_moment(const State& state, std::span<const MomentSlot> slots,
                   const MomentOptions& options = {});

/// Sum of integrand(sigma) over all n! permutations sigma of {0, ..., n-1}.
/// sigma[j] is the coordinate placed in slot j.
Complex permutation_symmetrize(int n, const std::function<Complex(std::span<const int>)>& integrand);

struct MomentResult {
  /// raw[m - 1] = mu~_m(slot_0, ..., slot_{m-1}) for m = 1..n.
  std::vector<Complex> raw;
  Complex central;
  /// <alpha|-alpha> for cat states (the O(eps) scale), 0 for coherent states.
  double epsilon_bound = 0.0;
};

/// Symmetrized central moment
///   mu_n = sum_m (-1)^{n-m} C(n, m) (1/n!) P[ mu~_m(x..x^(m)) mu~(x^(m+1)) ... mu~(x^(n)) ]
/// where P sums over all assignments of the n slots to the n positions.
MomentResult central_moment(const State& state, std::span<const MomentSlot> slots,
                            const MomentOptions& options = {});

/// Direct covariance 1/2 (mu~_2(a, b) + mu~_2(b, a)) - mu~(a) mu~(b).
Complex symmetrized_covariance(const State& state, const MomentSlot& a, const MomentSlot& b,
                               const MomentOptions& options = {});

struct KuoFordOptions {
  /// Replace <:T T':> by the average over both slot orders.
  bool symmetrized = false;
  IndexPlacement placement = IndexPlacement::lower;
};

struct KuoFordResult {
  /// Empty when the raw second moment vanishes (to 1e-12 of its natural
  /// magnitude) and the ratio is undefined.
  std::optional<double> delta;
  Complex numerator;    // <:T T':> - <:T:><:T':>
  Complex denominator;  // <:T T':>
  /// Both slots sit at the same spacetime point; the continuum expression is
  /// distributional there.
  bool coincident = false;

  bool indeterminate() const { return !delta.has_value(); }
};

KuoFordResult kuo_ford_delta(const State& state, const MomentSlot& a, const MomentSlot& b,
                             const KuoFordOptions& options = {});

/// Same time and same spatial position modulo the box length (to 1e-12 L).
bool coincident_points(const SpacetimePoint& p, const SpacetimePoint& q, double length);

}  // namespace catstress
