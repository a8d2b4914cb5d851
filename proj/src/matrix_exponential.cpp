#include "catstress/matrix_exponential.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "catstress/error.hpp"

namespace catstress {

namespace {

constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                           30270240.0,    2162160.0,    110880.0,     3960.0,
                                           90.0,          1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// Largest 1-norm for which the degree-m approximant meets unit roundoff.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

// Low-degree approximant from even powers A^2, A^4, ...; U odd part, V even part.
template <std::size_t N>
DenseMatrix pade_low(const DenseMatrix& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  const DenseMatrix a2 = a * a;
  DenseMatrix power = id;
  DenseMatrix u_inner = DenseMatrix::Zero(n, n);
  DenseMatrix v = DenseMatrix::Zero(n, n);
  for (std::size_t k = 0; k < N; k += 2) {
    v += b[k] * power;
    u_inner += b[k + 1] * power;
    if (k + 2 < N) power = power * a2;
  }
  const DenseMatrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

DenseMatrix pade13(const DenseMatrix& a) {
  const auto& b = kPade13;
  const auto n = a.rows();
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  const DenseMatrix a2 = a * a;
  const DenseMatrix a4 = a2 * a2;
  const DenseMatrix a6 = a4 * a2;
  const DenseMatrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const DenseMatrix v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

double norm1(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

double norm1(const SparseMatrix& a) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

DenseMatrix expm(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("expm needs a square matrix");
  if (!a.allFinite()) throw InvalidArgument("expm input is not finite");
  const double norm = norm1(a);
  if (norm <= kTheta3) return pade_low(a, kPade3);
  if (norm <= kTheta5) return pade_low(a, kPade5);
  if (norm <= kTheta7) return pade_low(a, kPade7);
  if (norm <= kTheta9) return pade_low(a, kPade9);
  const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  DenseMatrix r = pade13(a / std::ldexp(1.0, s));
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

Vector expv(const SparseMatrix& a, const Vector& v, double t, const ExpvOptions& options) {
  if (a.rows() != a.cols() || a.cols() != v.size()) throw InvalidArgument("expv dimension mismatch");
  if (options.krylov_dimension < 1 || options.step_norm <= 0.0) {
    throw InvalidArgument("expv options out of range");
  }
  const Eigen::Index n = v.size();
  const double anorm = norm1(a) * std::abs(t);
  if (anorm == 0.0 || n == 0) return v;
  const int steps = std::max(1, static_cast<int>(std::ceil(anorm / options.step_norm)));
  const double tau = t / steps;
  const Eigen::Index m = std::min<Eigen::Index>(options.krylov_dimension, n);
  const double breakdown = 1e-14 * norm1(a);

  Vector w = v;
  for (int step = 0; step < steps; ++step) {
    const double beta = w.norm();
    if (beta == 0.0) return w;
    DenseMatrix basis = DenseMatrix::Zero(n, m + 1);
    DenseMatrix h = DenseMatrix::Zero(m + 1, m + 1);
    basis.col(0) = w / beta;
    Eigen::Index dim = m;
    for (Eigen::Index j = 0; j < m; ++j) {
      Vector p = a * basis.col(j);
      // Modified Gram-Schmidt, applied twice for orthogonality.
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i <= j; ++i) {
          const Complex c = basis.col(i).dot(p);
          h(i, j) += c;
          p -= c * basis.col(i);
        }
      }
      const double next = p.norm();
      if (next <= breakdown) {
        dim = j + 1;
        break;
      }
      h(j + 1, j) = next;
      basis.col(j + 1) = p / next;
    }
    const DenseMatrix small = expm(tau * h.topLeftCorner(dim, dim));
    w = beta * (basis.leftCols(dim) * small.col(0));
  }
  return w;
}

}  // namespace catstress
