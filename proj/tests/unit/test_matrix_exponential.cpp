#include <gtest/gtest.h>

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "catstress/error.hpp"
#include "catstress/matrix_exponential.hpp"

namespace catstress {
namespace {

DenseMatrix random_matrix(std::mt19937_64& rng, int n, double norm) {
  std::normal_distribution<double> g;
  DenseMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = {g(rng), g(rng)};
  }
  return m * (norm / norm1(m));
}

DenseMatrix taylor(const DenseMatrix& a) {
  DenseMatrix sum = DenseMatrix::Identity(a.rows(), a.cols());
  DenseMatrix term = sum;
  for (int k = 1; k < 80; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

double rel_diff(const DenseMatrix& a, const DenseMatrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

TEST(Expm, MatchesTaylorAcrossPadeDegrees) {
  std::mt19937_64 rng(41);
  // Norms chosen to land in each approximant's range and in the scaled range.
  for (double norm : {1e-3, 0.1, 0.8, 1.9, 4.0, 7.5}) {
    const auto a = random_matrix(rng, 6, norm);
    EXPECT_LT(rel_diff(expm(a), taylor(a)), 1e-13) << "norm " << norm;
  }
}

TEST(Expm, MatchesEigenReference) {
  std::mt19937_64 rng(42);
  for (double norm : {0.5, 3.0, 20.0, 60.0}) {
    const auto a = random_matrix(rng, 10, norm);
    const DenseMatrix ref = a.exp();
    EXPECT_LT(rel_diff(expm(a), ref), 1e-11) << "norm " << norm;
  }
}

TEST(Expm, DiagonalAndInverse) {
  DenseMatrix d = DenseMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = Complex(0, 2.0);
  d(2, 2) = -5.0;
  const DenseMatrix e = expm(d);
  EXPECT_LT(std::abs(e(0, 0) - std::exp(1.0)), 1e-14);
  EXPECT_LT(std::abs(e(1, 1) - std::exp(Complex(0, 2.0))), 1e-15);
  EXPECT_LT(std::abs(e(2, 2) - std::exp(-5.0)), 1e-16);

  std::mt19937_64 rng(43);
  const auto a = random_matrix(rng, 8, 10.0);
  EXPECT_LT((expm(a) * expm(-a) - DenseMatrix::Identity(8, 8)).norm(), 1e-11);
  EXPECT_EQ(expm(DenseMatrix::Zero(4, 4)), DenseMatrix::Identity(4, 4));
}

TEST(Expm, AntiHermitianGivesUnitary) {
  std::mt19937_64 rng(44);
  const auto m = random_matrix(rng, 12, 15.0);
  const DenseMatrix a = m - m.adjoint();
  const DenseMatrix u = expm(a);
  EXPECT_LT((u.adjoint() * u - DenseMatrix::Identity(12, 12)).norm(), 1e-12);
}

TEST(Expm, RejectsBadInput) {
  EXPECT_THROW(expm(DenseMatrix::Zero(2, 3)), InvalidArgument);
  DenseMatrix bad = DenseMatrix::Zero(2, 2);
  bad(0, 0) = NAN;
  EXPECT_THROW(expm(bad), InvalidArgument);
}

TEST(Expv, MatchesDenseExponential) {
  std::mt19937_64 rng(45);
  const int n = 60;
  const auto m = random_matrix(rng, n, 1.0);
  // Sparse banded anti-Hermitian generator.
  SparseMatrix a(n, n);
  std::vector<Eigen::Triplet<Complex>> t;
  for (int k = 0; k + 1 < n; ++k) {
    const Complex c = m(k, k + 1) * 3.0;
    t.emplace_back(k, k + 1, c);
    t.emplace_back(k + 1, k, -std::conj(c));
  }
  a.setFromTriplets(t.begin(), t.end());
  Vector v = Vector::Zero(n);
  v(0) = 1.0;
  v(5) = Complex(0, 0.5);
  const Vector want = expm(DenseMatrix(a)) * v;
  EXPECT_LT((expv(a, v) - want).norm(), 1e-12);
  EXPECT_LT((expv(a, v, 2.0, {10, 1.0}) - expm(DenseMatrix(2.0 * a)) * v).norm(), 1e-12);
}

TEST(Expv, HappyBreakdown) {
  SparseMatrix a(4, 4);
  a.insert(0, 1) = 1.0;
  Vector v = Vector::Zero(4);
  v(1) = 1.0;
  const Vector w = expv(a, v);
  EXPECT_LT(std::abs(w(0) - 1.0), 1e-15);
  EXPECT_LT(std::abs(w(1) - 1.0), 1e-15);
  EXPECT_THROW(expv(a, Vector::Zero(3)), InvalidArgument);
}

}  // namespace
}  // namespace catstress
