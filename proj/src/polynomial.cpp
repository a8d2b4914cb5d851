#include "catstress/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "catstress/error.hpp"

namespace catstress {

std::string PointLabel::to_string() const {
  std::string s = "x";
  for (int i = 0; i < id; ++i) s += "′";
  return s;
}

OperatorPolynomial::OperatorPolynomial(int degree_cap) : degree_cap_(degree_cap) {
  if (degree_cap < 0) throw InvalidArgument("degree cap must be non-negative");
}

OperatorPolynomial OperatorPolynomial::constant(Complex c, int degree_cap) {
  OperatorPolynomial p(degree_cap);
  p.add_term(c, {});
  return p;
}

OperatorPolynomial OperatorPolynomial::field(PointLabel label, DerivativeIndex deriv,
                                             int degree_cap) {
  OperatorPolynomial p(degree_cap);
  p.add_term(1.0, {FieldFactor{label, deriv}});
  return p;
}

void OperatorPolynomial::check_degree(std::size_t degree) const {
  if (degree > static_cast<std::size_t>(degree_cap_)) {
    throw InvalidArgument("polynomial degree " + std::to_string(degree) + " exceeds degree cap " +
                          std::to_string(degree_cap_));
  }
}

void OperatorPolynomial::add_term(Complex c, std::vector<FieldFactor> factors) {
  check_degree(factors.size());
  if (c == 0.0) return;
  std::sort(factors.begin(), factors.end());
  auto [it, inserted] = terms_.try_emplace(std::move(factors), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

std::vector<FieldMonomial> OperatorPolynomial::monomials() const {
  std::vector<FieldMonomial> out;
  out.reserve(terms_.size());
  for (const auto& [key, c] : terms_) out.push_back({c, key});
  return out;
}

int OperatorPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, key.size());
  return static_cast<int>(d);
}

std::set<int> OperatorPolynomial::degrees() const {
  std::set<int> out;
  for (const auto& [key, c] : terms_) out.insert(static_cast<int>(key.size()));
  return out;
}

std::set<PointLabel> OperatorPolynomial::labels() const {
  std::set<PointLabel> out;
  for (const auto& [key, c] : terms_) {
    for (const auto& f : key) out.insert(f.label);
  }
  return out;
}

OperatorPolynomial OperatorPolynomial::conjugated() const {
  OperatorPolynomial out(degree_cap_);
  for (const auto& [key, c] : terms_) out.terms_.emplace(key, std::conj(c));
  return out;
}

OperatorPolynomial OperatorPolynomial::scaled(Complex s) const {
  OperatorPolynomial out(degree_cap_);
  for (const auto& [key, c] : terms_) out.add_term(s * c, key);
  return out;
}

OperatorPolynomial OperatorPolynomial::relabeled(
    const std::map<PointLabel, PointLabel>& mapping) const {
  OperatorPolynomial out(degree_cap_);
  for (const auto& [key, c] : terms_) {
    auto factors = key;
    for (auto& f : factors) {
      if (auto it = mapping.find(f.label); it != mapping.end()) f.label = it->second;
    }
    out.add_term(c, std::move(factors));
  }
  return out;
}

OperatorPolynomial OperatorPolynomial::operator+(const OperatorPolynomial& other) const {
  OperatorPolynomial out(std::min(degree_cap_, other.degree_cap_));
  for (const auto& [key, c] : terms_) out.add_term(c, key);
  for (const auto& [key, c] : other.terms_) out.add_term(c, key);
  return out;
}

OperatorPolynomial OperatorPolynomial::operator-(const OperatorPolynomial& other) const {
  return *this + other.scaled(-1.0);
}

OperatorPolynomial OperatorPolynomial::operator*(const OperatorPolynomial& other) const {
  OperatorPolynomial out(std::min(degree_cap_, other.degree_cap_));
  if (!terms_.empty() && !other.terms_.empty()) {
    out.check_degree(static_cast<std::size_t>(degree() + other.degree()));
  }
  for (const auto& [k1, c1] : terms_) {
    for (const auto& [k2, c2] : other.terms_) {
      Key key;
      key.reserve(k1.size() + k2.size());
      std::merge(k1.begin(), k1.end(), k2.begin(), k2.end(), std::back_inserter(key));
      out.add_term(c1 * c2, std::move(key));
    }
  }
  return out;
}

std::string OperatorPolynomial::to_string(int dimension) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (c.imag() == 0.0) {
      os << c.real();
    } else {
      os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    }
    for (const auto& f : key) {
      os << " · ";
      const auto d = f.deriv.to_string(dimension);
      if (!d.empty()) os << d << " ";
      os << "φ(" << f.label.to_string() << ")";
    }
  }
  return os.str();
}

OperatorPolynomial poly_add(const OperatorPolynomial& p, const OperatorPolynomial& q) {
  return p + q;
}

OperatorPolynomial poly_mul(const OperatorPolynomial& p, const OperatorPolynomial& q) {
  return p * q;
}

// ---------------------------------------------------------------------------

SubstitutionTable::SubstitutionTable(const CoherentAmplitude& bra, const CoherentAmplitude& ket,
                                     const LabelAssignment& assignment)
    : bra_(bra), ket_(ket), assignment_(assignment) {
  require_same_basis(bra, ket);
}

Complex SubstitutionTable::operator()(const FieldFactor& f) {
  if (auto it = cache_.find(f); it != cache_.end()) return it->second;
  const auto point = assignment_.find(f.label);
  if (point == assignment_.end()) {
    throw InvalidArgument("point label " + f.label.to_string() + " is not assigned");
  }
  const Complex v = classical_profile(ket_, ProfileBranch::beta, f.deriv, point->second) +
                    classical_profile(bra_, ProfileBranch::alpha_bar, f.deriv, point->second);
  cache_.emplace(f, v);
  return v;
}

Complex substituted_value(const OperatorPolynomial& p, const CoherentAmplitude& alpha,
                          const CoherentAmplitude& beta, const LabelAssignment& assignment) {
  SubstitutionTable table(alpha, beta, assignment);
  Complex acc = 0.0;
  for (const auto& [key, c] : p.terms()) {
    Complex term = c;
    for (const auto& f : key) term *= table(f);
    acc += term;
  }
  return acc;
}

double substituted_magnitude(const OperatorPolynomial& p, const CoherentAmplitude& alpha,
                             const CoherentAmplitude& beta, const LabelAssignment& assignment) {
  SubstitutionTable table(alpha, beta, assignment);
  double acc = 0.0;
  for (const auto& [key, c] : p.terms()) {
    double term = std::abs(c);
    for (const auto& f : key) term *= std::abs(table(f));
    acc += term;
  }
  return acc;
}

Complex coherent_matrix_element(const OperatorPolynomial& p, const CoherentAmplitude& alpha,
                                const CoherentAmplitude& beta, const LabelAssignment& assignment) {
  return coherent_overlap(alpha, beta) * substituted_value(p, alpha, beta, assignment);
}

CatTerms cat_terms(const OperatorPolynomial& p, const CatState& cat,
                   const LabelAssignment& assignment) {
  const auto& plus = cat.alpha();
  const auto minus = -plus;
  return CatTerms{coherent_matrix_element(p, plus, plus, assignment),
                  coherent_matrix_element(p, minus, minus, assignment),
                  coherent_matrix_element(p, plus, minus, assignment),
                  coherent_matrix_element(p, minus, plus, assignment)};
}

Complex cat_expectation(const OperatorPolynomial& p, const CatState& cat,
                        const LabelAssignment& assignment) {
  const CatTerms m = cat_terms(p, cat, assignment);
  const Complex a = cat.a(), b = cat.b();
  return std::norm(a) * m.plus_plus + std::norm(b) * m.minus_minus +
         std::conj(a) * b * m.plus_minus + a * std::conj(b) * m.minus_plus;
}

Complex expectation(const OperatorPolynomial& p, const State& state,
                    const LabelAssignment& assignment) {
  if (const auto* c = std::get_if<CoherentAmplitude>(&state)) {
    return coherent_matrix_element(p, *c, *c, assignment);
  }
  return cat_expectation(p, std::get<CatState>(state), assignment);
}

namespace {

// Sub-polynomial keeping only monomials of even (odd == false) or odd degree.
OperatorPolynomial parity_part(const OperatorPolynomial& p, bool odd) {
  OperatorPolynomial out(p.degree_cap());
  for (const auto& [key, c] : p.terms()) {
    if ((key.size() % 2 == 1) == odd) out.add_term(c, key);
  }
  return out;
}

double identity_deviation(Complex lhs, Complex rhs) {
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

}  // namespace

SymmetryReport even_odd_split_check(const OperatorPolynomial& p, const CoherentAmplitude& alpha,
                                    const LabelAssignment& assignment) {
  SymmetryReport report;
  const auto degrees = p.degrees();
  const bool has_even = std::any_of(degrees.begin(), degrees.end(), [](int d) { return d % 2 == 0; });
  const bool has_odd = std::any_of(degrees.begin(), degrees.end(), [](int d) { return d % 2 == 1; });
  report.parity = has_odd ? (has_even ? Parity::mixed : Parity::odd) : Parity::even;

  const auto minus = -alpha;
  for (bool odd : {false, true}) {
    const auto part = parity_part(p, odd);
    if (part.empty()) continue;
    const double sign = odd ? -1.0 : 1.0;
    const Complex pp = coherent_matrix_element(part, alpha, alpha, assignment);
    const Complex mm = coherent_matrix_element(part, minus, minus, assignment);
    const Complex pm = coherent_matrix_element(part, alpha, minus, assignment);
    const Complex mp = coherent_matrix_element(part, minus, alpha, assignment);
    report.max_deviation = std::max({report.max_deviation, identity_deviation(mm, sign * pp),
                                     identity_deviation(mp, sign * pm)});
  }
  report.unsigned_diagonal_deviation =
      identity_deviation(coherent_matrix_element(p, minus, minus, assignment),
                         coherent_matrix_element(p, alpha, alpha, assignment));
  return report;
}

}  // namespace catstress
