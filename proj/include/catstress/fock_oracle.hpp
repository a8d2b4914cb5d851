#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "catstress/matrix_exponential.hpp"
#include "catstress/polynomial.hpp"
#include "catstress/states.hpp"

namespace catstress {

/// Default limit on the number of complex entries of a dense operator.
inline constexpr std::size_t kDenseBudget = 65536;

/// Multimode Fock space with occupations 0..N per mode. Basis states are
/// ordered colexicographically: mode 0 varies fastest, so the flat index of
/// (n_0, ..., n_{M-1}) is sum_i n_i (N+1)^i.
class TruncatedFock {
 public:
  TruncatedFock(int modes, int cutoff);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  Eigen::Index dimension() const { return dimension_; }

  std::vector<int> occupation(Eigen::Index index) const;
  Eigen::Index index_of(const std::vector<int>& occupation) const;

  /// Whether a dense dimension x dimension operator stays within `budget` entries.
  bool fits_dense(std::size_t budget = kDenseBudget) const;

  /// Basis states whose every occupation is <= `max_occupation`.
  std::vector<Eigen::Index> low_block(int max_occupation) const;

 private:
  int modes_;
  int cutoff_;
  Eigen::Index dimension_;
};

struct LadderPair {
  SparseMatrix annihilation;
  SparseMatrix creation;
};

/// a_i and a_i^dagger: sqrt(n) off-diagonals in mode i, identity elsewhere.
LadderPair ladder_matrices(const TruncatedFock& space, int mode);

/// sum_{n > N} e^{-mean} mean^n / n!, the Poisson weight lost by truncation.
double poisson_tail(double mean, int cutoff);

/// Sum of the per-mode tails for the coherent amplitude `alpha`.
double truncation_bound(const CoherentAmplitude& alpha, int cutoff);

/// sum_i (alpha_i a_i^dagger - alpha_i^* a_i), the anti-Hermitian generator of D(alpha).
SparseMatrix displacement_generator(const CoherentAmplitude& alpha, const TruncatedFock& space);

/// Dense D(alpha) = exp(generator). Throws when the truncation bound reaches
/// `max_tail` or the space exceeds the dense budget.
DenseMatrix displacement_matrix(const CoherentAmplitude& alpha, const TruncatedFock& space,
                                double max_tail = 1e-8);

/// Normalized state vector with the truncation bound it was built under.
struct OracleState {
  Vector vector;
  double truncation_bound = 0.0;
  int cutoff = 0;
};

/// D(alpha)|0>, dense exponential when within budget and a Krylov action otherwise.
OracleState oracle_coherent(const CoherentAmplitude& alpha, const TruncatedFock& space,
                            double max_tail = 1e-8);

/// a|alpha> + b|beta>, normalized numerically. Accepts any two amplitudes.
OracleState oracle_superposition(Complex a, const CoherentAmplitude& alpha, Complex b,
                                 const CoherentAmplitude& beta, const TruncatedFock& space,
                                 double max_tail = 1e-8);

OracleState oracle_cat(const CatState& cat, const TruncatedFock& space, double max_tail = 1e-8);

/// sum_i (D phi_i^+(p)) a_i + (D phi_i^-(p)) a_i^dagger
SparseMatrix field_operator(const TruncatedFock& space, const ModeBasis& basis,
                            const DerivativeIndex& deriv, const SpacetimePoint& p);

/// :P: with every field factor split into creation and annihilation parts
/// and all creation parts placed to the left.
SparseMatrix normal_ordered_matrix(const OperatorPolynomial& p, const TruncatedFock& space,
                                   const ModeBasis& basis, const LabelAssignment& assignment);

/// <u| :P: |v> without forming :P:. Each split of a monomial contributes
/// <C^dagger u | A v> with C the creation and A the annihilation product.
Complex normal_ordered_element(const OperatorPolynomial& p, const TruncatedFock& space,
                               const ModeBasis& basis, const LabelAssignment& assignment,
                               const Vector& u, const Vector& v);

struct OracleResult {
  Complex value;
  double truncation_bound = 0.0;
  int cutoff = 0;
};

/// <v|M|v>. Throws ConsistencyError if |v| deviates from 1 by more than 1e-10.
OracleResult oracle_expectation(const OracleState& state, const SparseMatrix& op);
OracleResult oracle_expectation(const OracleState& state, const DenseMatrix& op);

/// <psi| :P: |psi> through `normal_ordered_element`.
OracleResult oracle_polynomial_expectation(const OperatorPolynomial& p, const OracleState& state,
                                           const TruncatedFock& space, const ModeBasis& basis,
                                           const LabelAssignment& assignment);

/// max_i || [a_i, D(alpha)] - alpha_i D(alpha) ||_F on occupations <= N/2.
double commutator_defect(const CoherentAmplitude& alpha, const TruncatedFock& space);

/// || D^dagger D - 1 ||_F on occupations <= N/2.
double unitarity_defect(const DenseMatrix& d, const TruncatedFock& space);

/// max |[a_i, a_j^dagger] - delta_ij| over all entries except the (N, N) corners.
double ccr_defect(const TruncatedFock& space);

/// Little-endian uint64 rows, uint64 cols, then row-major (re, im) doubles.
void write_matrix_binary(std::ostream& os, const DenseMatrix& m);
DenseMatrix read_matrix_binary(std::istream& is);

}  // namespace catstress
