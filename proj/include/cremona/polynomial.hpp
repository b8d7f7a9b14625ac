#pragma once

#include <gmpxx.h>

#include <string>
#include <variant>
#include <vector>

#include "cremona/field.hpp"
#include "cremona/upoly.hpp"

namespace cremona {

using QPoly = up::Poly<Rationals>;
using FPoly = up::Poly<FiniteField>;

// Exact univariate polynomial tagged with its coefficient field. Finite-field
// coefficients are packed FiniteField elements; rational ones are in lowest
// terms. Leading coefficient is never zero.
class Polynomial {
 public:
  Polynomial() = default;  // zero over Q

  static Polynomial rational(std::vector<mpq_class> coeffs);
  static Polynomial finite(const FieldSpec& field, FPoly coeffs);

  const FieldSpec& field() const { return field_; }
  bool is_rational() const { return !field_.is_finite(); }
  int degree() const;
  bool is_zero() const { return degree() < 0; }

  const QPoly& q_coeffs() const;
  const FPoly& f_coeffs() const;

  std::vector<std::string> coeff_strings() const;
  std::string to_string(char var = 'x') const;

  // Scaled to leading coefficient 1 (zero stays zero).
  Polynomial monic() const;
  // Canonical order (degree first, then coefficients from the top).
  int compare(const Polynomial& other) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator<(const Polynomial& a, const Polynomial& b) { return a.compare(b) < 0; }

 private:
  FieldSpec field_;
  std::variant<QPoly, FPoly> coeffs_;
};

Polynomial parse_polynomial(const FieldSpec& field, const std::string& text);
Polynomial polynomial_from_strings(const FieldSpec& field, const std::vector<std::string>& coeffs);

// gcd(a, b) == 1 for polynomials over the same field.
bool coprime(const Polynomial& a, const Polynomial& b);
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

}  // namespace cremona
