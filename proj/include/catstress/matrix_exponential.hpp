#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "catstress/modes.hpp"

namespace catstress {

using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;
using Vector = Eigen::VectorXcd;

/// exp(A) by scaling and squaring with a [m/m] Pade approximant,
/// m in {3, 5, 7, 9, 13} chosen from the 1-norm (Higham 2005).
DenseMatrix expm(const DenseMatrix& a);

double norm1(const DenseMatrix& a);
double norm1(const SparseMatrix& a);

struct ExpvOptions {
  int krylov_dimension = 30;
  /// Each substep satisfies tau * ||A||_1 <= step_norm.
  double step_norm = 4.0;
};

/// exp(t A) v through Arnoldi projections onto Krylov subspaces, without
/// forming exp(A). Time is split into substeps so the projected exponential
/// converges quickly.
Vector expv(const SparseMatrix& a, const Vector& v, double t = 1.0, const ExpvOptions& options = {});

}  // namespace catstress
