#pragma once

#include <compare>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "catstress/modes.hpp"
#include "catstress/states.hpp"

namespace catstress {

/// Symbolic spacetime point label; bound to coordinates only at evaluation.
/// Label 0 prints as x, label 1 as x', label 2 as x'', ...
struct PointLabel {
  int id = 0;
  auto operator<=>(const PointLabel&) const = default;
  std::string to_string() const;
};

/// One occurrence of the field (possibly differentiated) at a labeled point.
struct FieldFactor {
  PointLabel label;
  DerivativeIndex deriv;
  auto operator<=>(const FieldFactor&) const = default;
};

struct FieldMonomial {
  Complex coefficient;
  std::vector<FieldFactor> factors;  // sorted
};

inline constexpr int kDefaultDegreeCap = 8;

/// Polynomial in field factors, held in canonical form: factor multisets
/// are sorted, equal multisets merged, exact zero coefficients dropped.
/// Factors are commuting placeholders here; normal ordering is applied when
/// the polynomial is evaluated.
class OperatorPolynomial {
 public:
  using Key = std::vector<FieldFactor>;

  explicit OperatorPolynomial(int degree_cap = kDefaultDegreeCap);

  static OperatorPolynomial constant(Complex c, int degree_cap = kDefaultDegreeCap);
  static OperatorPolynomial field(PointLabel label, DerivativeIndex deriv = {},
                                  int degree_cap = kDefaultDegreeCap);

  /// Adds c * (product of factors); factors need not be sorted.
  void add_term(Complex c, std::vector<FieldFactor> factors);

  const std::map<Key, Complex>& terms() const { return terms_; }
  std::vector<FieldMonomial> monomials() const;
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  int degree() const;
  int degree_cap() const { return degree_cap_; }
  std::set<PointLabel> labels() const;

  /// Degrees of all monomials; used to classify parity.
  std::set<int> degrees() const;

  /// Same polynomial with every coefficient conjugated.
  OperatorPolynomial conjugated() const;
  OperatorPolynomial scaled(Complex c) const;
  /// Labels remapped through `mapping`; labels not in it are kept.
  OperatorPolynomial relabeled(const std::map<PointLabel, PointLabel>& mapping) const;

  OperatorPolynomial operator+(const OperatorPolynomial& other) const;
  OperatorPolynomial operator-(const OperatorPolynomial& other) const;
  OperatorPolynomial operator*(const OperatorPolynomial& other) const;

  /// Exact structural equality (keys and coefficients).
  bool operator==(const OperatorPolynomial& other) const { return terms_ == other.terms_; }

  /// Monomials as "c · ∂t φ(x) · φ(x′)" joined by " + ".
  std::string to_string(int dimension = 1) const;

 private:
  void check_degree(std::size_t degree) const;

  int degree_cap_;
  std::map<Key, Complex> terms_;
};

OperatorPolynomial poly_add(const OperatorPolynomial& p, const OperatorPolynomial& q);
OperatorPolynomial poly_mul(const OperatorPolynomial& p, const OperatorPolynomial& q);

using LabelAssignment = std::map<PointLabel, SpacetimePoint>;

/// Value of beta-profile(beta) + alpha-bar-profile(alpha) for each distinct
/// factor of a polynomial; the c-number that replaces the field operator.
class SubstitutionTable {
 public:
  SubstitutionTable(const CoherentAmplitude& bra, const CoherentAmplitude& ket,
                    const LabelAssignment& assignment);

  Complex operator()(const FieldFactor& f);

 private:
  const CoherentAmplitude& bra_;
  const CoherentAmplitude& ket_;
  const LabelAssignment& assignment_;
  std::map<FieldFactor, Complex> cache_;
};

/// P evaluated with every field factor replaced by its classical substitute,
/// without the overlap prefactor: <alpha|:P:|beta> / <alpha|beta>.
Complex substituted_value(const OperatorPolynomial& p, const CoherentAmplitude& alpha,
                          const CoherentAmplitude& beta, const LabelAssignment& assignment);

/// sum over monomials of |c| prod |substitute|: the natural magnitude against
/// which rounding in `substituted_value` should be judged.
double substituted_magnitude(const OperatorPolynomial& p, const CoherentAmplitude& alpha,
                             const CoherentAmplitude& beta, const LabelAssignment& assignment);

/// <alpha| :P: |beta> via the coherent-state substitution rule.
Complex coherent_matrix_element(const OperatorPolynomial& p, const CoherentAmplitude& alpha,
                                const CoherentAmplitude& beta, const LabelAssignment& assignment);

/// The four coherent matrix elements entering a cat-state expectation.
struct CatTerms {
  Complex plus_plus;    // <alpha|:P:|alpha>
  Complex minus_minus;  // <-alpha|:P:|-alpha>
  Complex plus_minus;   // <alpha|:P:|-alpha>
  Complex minus_plus;   // <-alpha|:P:|alpha>
};

CatTerms cat_terms(const OperatorPolynomial& p, const CatState& cat,
                   const LabelAssignment& assignment);

/// |a|^2 M(a,a) + |b|^2 M(-a,-a) + a^* b M(a,-a) + a b^* M(-a,a).
Complex cat_expectation(const OperatorPolynomial& p, const CatState& cat,
                        const LabelAssignment& assignment);

/// Normal-ordered expectation in a coherent or cat state.
Complex expectation(const OperatorPolynomial& p, const State& state,
                    const LabelAssignment& assignment);

enum class Parity { even, odd, mixed };

struct SymmetryReport {
  Parity parity = Parity::even;
  /// max over the sign-flip identities of |lhs - s rhs| / max(1, |lhs|),
  /// with s = +1 for even and -1 for odd polynomials. Mixed polynomials are
  /// split into even and odd parts and checked separately.
  double max_deviation = 0.0;
  /// Deviation of <-a|:P:|-a> = <a|:P:|a> taken literally (no parity sign);
  /// non-zero for odd polynomials.
  double unsigned_diagonal_deviation = 0.0;
};

SymmetryReport even_odd_split_check(const OperatorPolynomial& p, const CoherentAmplitude& alpha,
                                    const LabelAssignment& assignment);

}  // namespace catstress
