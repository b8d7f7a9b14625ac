#include "cremona/polynomial.hpp"

#include "term_parser.hpp"

namespace cremona {

Polynomial Polynomial::rational(std::vector<mpq_class> coeffs) {
  for (auto& c : coeffs) c.canonicalize();
  Rationals k;
  up::trim(k, coeffs);
  Polynomial p;
  p.field_ = FieldSpec::rationals();
  p.coeffs_ = std::move(coeffs);
  return p;
}

Polynomial Polynomial::finite(const FieldSpec& field, FPoly coeffs) {
  if (!field.is_finite()) fail("UnsupportedField", "finite coefficients need a finite field");
  auto k = field.finite_field();
  for (auto c : coeffs) {
    if (!k->contains(c)) fail("InvalidElement", "coefficient outside the field");
  }
  up::trim(*k, coeffs);
  Polynomial p;
  p.field_ = field;
  p.coeffs_ = std::move(coeffs);
  return p;
}

int Polynomial::degree() const {
  return std::visit([](const auto& c) { return static_cast<int>(c.size()) - 1; }, coeffs_);
}

const QPoly& Polynomial::q_coeffs() const {
  if (field_.is_finite()) fail("UnsupportedField", "polynomial is over a finite field");
  return std::get<QPoly>(coeffs_);
}

const FPoly& Polynomial::f_coeffs() const {
  if (!field_.is_finite()) fail("UnsupportedField", "polynomial is over Q");
  return std::get<FPoly>(coeffs_);
}

std::vector<std::string> Polynomial::coeff_strings() const {
  std::vector<std::string> out;
  if (field_.is_finite()) {
    auto k = field_.finite_field();
    for (auto c : f_coeffs()) out.push_back(k->to_string(c));
  } else {
    for (const auto& c : q_coeffs()) out.push_back(c.get_str());
  }
  return out;
}

std::string Polynomial::to_string(char var) const {
  if (is_zero()) return "0";
  auto strs = coeff_strings();
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    std::string c = strs[i];
    if (c == "0") continue;
    bool negative = c[0] == '-';
    if (negative) c = c.substr(1);
    if (c.find('+') != std::string::npos) c = "(" + c + ")";
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? "-" : "+";
    }
    if (i == 0) {
      out += c;
      continue;
    }
    if (c != "1") out += c + "*";
    out += var;
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  if (field_.is_finite()) return finite(field_, up::monic(*field_.finite_field(), f_coeffs()));
  return rational(up::monic(Rationals{}, q_coeffs()));
}

int Polynomial::compare(const Polynomial& other) const {
  if (degree() != other.degree()) return degree() < other.degree() ? -1 : 1;
  if (field_.is_finite() && other.field_.is_finite()) {
    return up::compare(*field_.finite_field(), f_coeffs(), other.f_coeffs());
  }
  if (!field_.is_finite() && !other.field_.is_finite()) return up::compare(Rationals{}, q_coeffs(), other.q_coeffs());
  return field_.is_finite() ? 1 : -1;
}

Polynomial parse_polynomial(const FieldSpec& field, const std::string& text) {
  char var = 0;
  auto terms = detail::parse_terms(text, &var);
  auto dense = detail::dense_coefficients(terms);
  if (!field.is_finite()) return Polynomial::rational(dense);
  if (var == 'a' && field.kind == FieldSpec::Kind::FiniteExtension) {
    fail("ParseError", "the letter a is reserved for the field generator; use another variable");
  }
  auto k = field.finite_field();
  FPoly coeffs;
  for (const auto& c : dense) coeffs.push_back(k->parse(c.get_str()));
  return Polynomial::finite(field, coeffs);
}

Polynomial polynomial_from_strings(const FieldSpec& field, const std::vector<std::string>& coeffs) {
  if (!field.is_finite()) {
    QPoly q;
    for (const auto& s : coeffs) {
      mpq_class v;
      if (v.set_str(s, 10) != 0) fail("ParseError", "bad rational coefficient \"" + s + "\"");
      v.canonicalize();
      q.push_back(v);
    }
    return Polynomial::rational(q);
  }
  auto k = field.finite_field();
  FPoly f;
  for (const auto& s : coeffs) f.push_back(k->parse(s));
  return Polynomial::finite(field, f);
}

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  if (!(a.field() == b.field())) fail("IncompatibleFields", "gcd of polynomials over different fields");
  if (a.field().is_finite()) {
    auto k = a.field().finite_field();
    return Polynomial::finite(a.field(), up::gcd(*k, a.f_coeffs(), b.f_coeffs()));
  }
  return Polynomial::rational(up::gcd(Rationals{}, a.q_coeffs(), b.q_coeffs()));
}

bool coprime(const Polynomial& a, const Polynomial& b) { return poly_gcd(a, b).degree() == 0; }

}  // namespace cremona
