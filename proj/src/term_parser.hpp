#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace cremona::detail {

struct Term {
  mpq_class coefficient;
  unsigned exponent = 0;
};

// Parses sums like "3/2*x^4 - x + 7" in a single variable. The variable
// letter found is stored in *variable (0 when the text is a constant).
// Throws Error("ParseError") on malformed input or mixed variables.
std::vector<Term> parse_terms(const std::string& text, char* variable);

// Dense ascending coefficients from a term list (like terms are summed).
std::vector<mpq_class> dense_coefficients(const std::vector<Term>& terms);

}  // namespace cremona::detail
