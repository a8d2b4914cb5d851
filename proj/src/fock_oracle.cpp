#include "catstress/fock_oracle.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "catstress/error.hpp"

namespace catstress {

TruncatedFock::TruncatedFock(int modes, int cutoff) : modes_(modes), cutoff_(cutoff), dimension_(1) {
  if (modes < 1) throw InvalidArgument("Fock space needs at least one mode");
  if (cutoff < 1) throw InvalidArgument("Fock cutoff must be at least 1");
  for (int i = 0; i < modes; ++i) {
    if (dimension_ > (Eigen::Index{1} << 40) / (cutoff + 1)) {
      throw InvalidArgument("Fock space dimension overflows");
    }
    dimension_ *= cutoff + 1;
  }
}

std::vector<int> TruncatedFock::occupation(Eigen::Index index) const {
  if (index < 0 || index >= dimension_) throw InvalidArgument("Fock index out of range");
  std::vector<int> occ(static_cast<std::size_t>(modes_));
  for (auto& n : occ) {
    n = static_cast<int>(index % (cutoff_ + 1));
    index /= cutoff_ + 1;
  }
  return occ;
}

Eigen::Index TruncatedFock::index_of(const std::vector<int>& occupation) const {
  if (occupation.size() != static_cast<std::size_t>(modes_)) {
    throw InvalidArgument("occupation tuple has the wrong length");
  }
  Eigen::Index index = 0, stride = 1;
  for (int n : occupation) {
    if (n < 0 || n > cutoff_) throw InvalidArgument("occupation outside cutoff");
    index += n * stride;
    stride *= cutoff_ + 1;
  }
  return index;
}

bool TruncatedFock::fits_dense(std::size_t budget) const {
  const auto d = static_cast<std::size_t>(dimension_);
  return d * d <= budget;
}

std::vector<Eigen::Index> TruncatedFock::low_block(int max_occupation) const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index k = 0; k < dimension_; ++k) {
    const auto occ = occupation(k);
    bool low = true;
    for (int n : occ) low = low && n <= max_occupation;
    if (low) out.push_back(k);
  }
  return out;
}

LadderPair ladder_matrices(const TruncatedFock& space, int mode) {
  if (mode < 0 || mode >= space.modes()) throw InvalidArgument("ladder mode index out of range");
  Eigen::Index stride = 1;
  for (int i = 0; i < mode; ++i) stride *= space.cutoff() + 1;
  std::vector<Eigen::Triplet<Complex>> entries;
  for (Eigen::Index k = 0; k < space.dimension(); ++k) {
    const int n = static_cast<int>((k / stride) % (space.cutoff() + 1));
    // a |n> = sqrt(n) |n - 1>
    if (n > 0) entries.emplace_back(k - stride, k, std::sqrt(static_cast<double>(n)));
  }
  LadderPair out;
  out.annihilation.resize(space.dimension(), space.dimension());
  out.annihilation.setFromTriplets(entries.begin(), entries.end());
  out.creation = out.annihilation.adjoint();
  return out;
}

double poisson_tail(double mean, int cutoff) {
  if (mean < 0.0 || !std::isfinite(mean)) throw InvalidArgument("Poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0.0;
  const int first = cutoff + 1;
  double term = std::exp(-mean + first * std::log(mean) - std::lgamma(first + 1.0));
  double sum = 0.0;
  for (int n = first; term > 0.0; ++n) {
    sum += term;
    if (n > mean && term < 1e-18 * sum) break;
    term *= mean / (n + 1);
  }
  return sum;
}

double truncation_bound(const CoherentAmplitude& alpha, int cutoff) {
  double bound = 0.0;
  for (const auto& a : alpha.amplitudes()) bound += poisson_tail(std::norm(a), cutoff);
  return bound;
}

namespace {

void check_space(const CoherentAmplitude& alpha, const TruncatedFock& space) {
  if (alpha.size() != static_cast<std::size_t>(space.modes())) {
    throw InvalidArgument("amplitude and Fock space have different mode counts");
  }
}

void check_tail(const CoherentAmplitude& alpha, int cutoff, double max_tail) {
  const double bound = truncation_bound(alpha, cutoff);
  if (bound >= max_tail) {
    throw InvalidArgument("Fock cutoff " + std::to_string(cutoff) +
                          " too small for this amplitude (tail bound " + std::to_string(bound) +
                          "); increase the cutoff");
  }
}

}  // namespace

SparseMatrix displacement_generator(const CoherentAmplitude& alpha, const TruncatedFock& space) {
  check_space(alpha, space);
  SparseMatrix g(space.dimension(), space.dimension());
  for (int i = 0; i < space.modes(); ++i) {
    const auto ladder = ladder_matrices(space, i);
    const Complex ai = alpha[static_cast<std::size_t>(i)];
    g += ai * ladder.creation - std::conj(ai) * ladder.annihilation;
  }
  return g;
}

DenseMatrix displacement_matrix(const CoherentAmplitude& alpha, const TruncatedFock& space,
                                double max_tail) {
  check_space(alpha, space);
  check_tail(alpha, space.cutoff(), max_tail);
  if (!space.fits_dense()) throw InvalidArgument("Fock space exceeds the dense operator budget");
  return expm(DenseMatrix(displacement_generator(alpha, space)));
}

OracleState oracle_coherent(const CoherentAmplitude& alpha, const TruncatedFock& space,
                            double max_tail) {
  check_space(alpha, space);
  check_tail(alpha, space.cutoff(), max_tail);
  Vector vacuum = Vector::Zero(space.dimension());
  vacuum(0) = 1.0;
  OracleState out;
  out.cutoff = space.cutoff();
  out.truncation_bound = truncation_bound(alpha, space.cutoff());
  if (space.fits_dense()) {
    out.vector = displacement_matrix(alpha, space, max_tail).col(0);
  } else {
    out.vector = expv(displacement_generator(alpha, space), vacuum);
  }
  return out;
}

OracleState oracle_superposition(Complex a, const CoherentAmplitude& alpha, Complex b,
                                 const CoherentAmplitude& beta, const TruncatedFock& space,
                                 double max_tail) {
  require_same_basis(alpha, beta);
  const auto left = oracle_coherent(alpha, space, max_tail);
  const auto right = oracle_coherent(beta, space, max_tail);
  OracleState out;
  out.cutoff = space.cutoff();
  out.truncation_bound = left.truncation_bound + right.truncation_bound;
  out.vector = a * left.vector + b * right.vector;
  const double norm = out.vector.norm();
  if (norm < 1e-7 * (std::abs(a) + std::abs(b))) throw InvalidArgument("superposition vanishes");
  out.vector /= norm;
  return out;
}

OracleState oracle_cat(const CatState& cat, const TruncatedFock& space, double max_tail) {
  return oracle_superposition(cat.a(), cat.alpha(), cat.b(), -cat.alpha(), space, max_tail);
}

namespace {

// Creation part sum_i (D phi_i^-(p)) a_i^dagger and annihilation part
// sum_i (D phi_i^+(p)) a_i of one field factor.
struct SplitField {
  SparseMatrix creation;
  SparseMatrix annihilation;
};

class FieldCache {
 public:
  FieldCache(const TruncatedFock& space, const ModeBasis& basis, const LabelAssignment& assignment)
      : space_(space), basis_(basis), assignment_(assignment) {
    if (basis.size() != static_cast<std::size_t>(space.modes())) {
      throw InvalidArgument("basis and Fock space have different mode counts");
    }
    for (int i = 0; i < space.modes(); ++i) ladders_.push_back(ladder_matrices(space, i));
  }

  const SplitField& operator()(const FieldFactor& f) {
    if (auto it = cache_.find(f); it != cache_.end()) return it->second;
    const auto point = assignment_.find(f.label);
    if (point == assignment_.end()) {
      throw InvalidArgument("no spacetime point assigned to label " + f.label.to_string());
    }
    SplitField s;
    s.creation.resize(space_.dimension(), space_.dimension());
    s.annihilation.resize(space_.dimension(), space_.dimension());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      s.annihilation += basis_.value(i, Branch::positive, f.deriv, point->second) * ladders_[i].annihilation;
      s.creation += basis_.value(i, Branch::negative, f.deriv, point->second) * ladders_[i].creation;
    }
    return cache_.emplace(f, std::move(s)).first->second;
  }

 private:
  const TruncatedFock& space_;
  const ModeBasis& basis_;
  const LabelAssignment& assignment_;
  std::vector<LadderPair> ladders_;
  std::map<FieldFactor, SplitField> cache_;
};

}  // namespace

SparseMatrix field_operator(const TruncatedFock& space, const ModeBasis& basis,
                            const DerivativeIndex& deriv, const SpacetimePoint& p) {
  const PointLabel label{0};
  const LabelAssignment assignment{{label, p}};
  FieldCache cache(space, basis, assignment);
  const auto& s = cache(FieldFactor{label, deriv});
  return s.annihilation + s.creation;
}

SparseMatrix normal_ordered_matrix(const OperatorPolynomial& p, const TruncatedFock& space,
                                   const ModeBasis& basis, const LabelAssignment& assignment) {
  FieldCache cache(space, basis, assignment);
  const auto dim = space.dimension();
  SparseMatrix identity(dim, dim);
  identity.setIdentity();
  SparseMatrix total(dim, dim);
  for (const auto& [factors, coeff] : p.terms()) {
    const std::size_t k = factors.size();
    for (std::uint32_t subset = 0; subset < (1u << k); ++subset) {
      SparseMatrix left = identity, right = identity;
      for (std::size_t f = 0; f < k; ++f) {
        const auto& s = cache(factors[f]);
        if (subset & (1u << f)) {
          left = SparseMatrix(left * s.creation);
        } else {
          right = SparseMatrix(right * s.annihilation);
        }
      }
      total += coeff * SparseMatrix(left * right);
    }
  }
  total.prune(Complex(0.0));
  return total;
}

Complex normal_ordered_element(const OperatorPolynomial& p, const TruncatedFock& space,
                               const ModeBasis& basis, const LabelAssignment& assignment,
                               const Vector& u, const Vector& v) {
  if (u.size() != space.dimension() || v.size() != space.dimension()) {
    throw InvalidArgument("vector dimension does not match the Fock space");
  }
  FieldCache cache(space, basis, assignment);
  Complex total = 0.0;
  for (const auto& [factors, coeff] : p.terms()) {
    const std::size_t k = factors.size();
    Complex monomial = 0.0;
    for (std::uint32_t subset = 0; subset < (1u << k); ++subset) {
      Vector bra = u, ket = v;
      for (std::size_t f = 0; f < k; ++f) {
        const auto& s = cache(factors[f]);
        if (subset & (1u << f)) {
          bra = s.creation.adjoint() * bra;
        } else {
          ket = s.annihilation * ket;
        }
      }
      monomial += bra.dot(ket);
    }
    total += coeff * monomial;
  }
  return total;
}

namespace {

void check_normalized(const OracleState& state) {
  const double deviation = std::abs(state.vector.norm() - 1.0);
  if (deviation > 1e-10) {
    throw ConsistencyError("oracle state is not normalized (deviation " + std::to_string(deviation) + ")");
  }
}

}  // namespace

OracleResult oracle_expectation(const OracleState& state, const SparseMatrix& op) {
  if (op.rows() != state.vector.size() || op.cols() != state.vector.size()) {
    throw InvalidArgument("operator and state dimensions differ");
  }
  check_normalized(state);
  return {state.vector.dot(op * state.vector), state.truncation_bound, state.cutoff};
}

OracleResult oracle_expectation(const OracleState& state, const DenseMatrix& op) {
  if (op.rows() != state.vector.size() || op.cols() != state.vector.size()) {
    throw InvalidArgument("operator and state dimensions differ");
  }
  check_normalized(state);
  return {state.vector.dot(op * state.vector), state.truncation_bound, state.cutoff};
}

OracleResult oracle_polynomial_expectation(const OperatorPolynomial& p, const OracleState& state,
                                           const TruncatedFock& space, const ModeBasis& basis,
                                           const LabelAssignment& assignment) {
  check_normalized(state);
  return {normal_ordered_element(p, space, basis, assignment, state.vector, state.vector),
          state.truncation_bound, state.cutoff};
}

namespace {

double block_frobenius(const DenseMatrix& m, const std::vector<Eigen::Index>& block) {
  double sum = 0.0;
  for (auto r : block) {
    for (auto c : block) sum += std::norm(m(r, c));
  }
  return std::sqrt(sum);
}

}  // namespace

double commutator_defect(const CoherentAmplitude& alpha, const TruncatedFock& space) {
  const DenseMatrix d = displacement_matrix(alpha, space);
  const auto block = space.low_block(space.cutoff() / 2);
  double worst = 0.0;
  for (int i = 0; i < space.modes(); ++i) {
    const DenseMatrix a = DenseMatrix(ladder_matrices(space, i).annihilation);
    const DenseMatrix defect = a * d - d * a - alpha[static_cast<std::size_t>(i)] * d;
    worst = std::max(worst, block_frobenius(defect, block));
  }
  return worst;
}

double unitarity_defect(const DenseMatrix& d, const TruncatedFock& space) {
  if (d.rows() != space.dimension() || d.cols() != space.dimension()) {
    throw InvalidArgument("matrix does not match the Fock space");
  }
  const DenseMatrix defect = d.adjoint() * d - DenseMatrix::Identity(d.rows(), d.cols());
  return block_frobenius(defect, space.low_block(space.cutoff() / 2));
}

double ccr_defect(const TruncatedFock& space) {
  double worst = 0.0;
  for (int i = 0; i < space.modes(); ++i) {
    const auto li = ladder_matrices(space, i);
    for (int j = 0; j < space.modes(); ++j) {
      const auto lj = ladder_matrices(space, j);
      const DenseMatrix c = DenseMatrix(SparseMatrix(li.annihilation * lj.creation)) -
                            DenseMatrix(SparseMatrix(lj.creation * li.annihilation));
      for (Eigen::Index r = 0; r < c.rows(); ++r) {
        const bool corner = i == j && space.occupation(r)[static_cast<std::size_t>(i)] == space.cutoff();
        for (Eigen::Index col = 0; col < c.cols(); ++col) {
          if (corner && col == r) continue;
          const double expected = (i == j && r == col) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(c(r, col) - expected));
        }
      }
    }
  }
  return worst;
}

namespace {

template <typename T>
void write_le(std::ostream& os, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char bytes[8];
  std::memcpy(bytes, &bits, 8);
  os.write(bytes, 8);
}

template <typename T>
T read_le(std::istream& is) {
  char bytes[8];
  if (!is.read(bytes, 8)) throw InvalidArgument("truncated matrix dump");
  std::uint64_t bits;
  std::memcpy(&bits, bytes, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

}  // namespace

void write_matrix_binary(std::ostream& os, const DenseMatrix& m) {
  write_le<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
  write_le<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      write_le<double>(os, m(r, c).real());
      write_le<double>(os, m(r, c).imag());
    }
  }
  if (!os) throw Error("failed to write matrix dump");
}

DenseMatrix read_matrix_binary(std::istream& is) {
  const auto rows = read_le<std::uint64_t>(is);
  const auto cols = read_le<std::uint64_t>(is);
  if (rows > (1u << 20) || cols > (1u << 20)) throw InvalidArgument("implausible matrix dump header");
  DenseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double re = read_le<double>(is);
      const double im = read_le<double>(is);
      m(r, c) = {re, im};
    }
  }
  return m;
}

}  // namespace catstress
