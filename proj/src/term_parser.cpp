#include "term_parser.hpp"

#include <cctype>

#include "cremona/error.hpp"

namespace cremona::detail {
namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool at_end() {
    skip();
    return i >= s.size();
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  std::string digits() {
    skip();
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(start, i - start);
  }
  [[noreturn]] void error(const std::string& what) {
    fail("ParseError", what + " at offset " + std::to_string(i) + " in \"" + s + "\"");
  }
};

}  // namespace

std::vector<Term> parse_terms(const std::string& text, char* variable) {
  Cursor c{text};
  std::vector<Term> out;
  char var = 0;
  if (c.at_end()) c.error("empty polynomial");
  bool first = true;
  while (!c.at_end()) {
    int sign = 1;
    char ch = c.peek();
    if (ch == '+' || ch == '-') {
      sign = ch == '-' ? -1 : 1;
      ++c.i;
    } else if (!first) {
      c.error("expected '+' or '-'");
    }
    first = false;

    Term term;
    term.coefficient = 1;
    bool have_coefficient = false;
    std::string num = c.digits();
    if (!num.empty()) {
      mpz_class n(num);
      mpz_class d(1);
      if (c.peek() == '/') {
        ++c.i;
        std::string den = c.digits();
        if (den.empty()) c.error("missing denominator");
        d = mpz_class(den);
        if (d == 0) c.error("zero denominator");
      }
      term.coefficient = mpq_class(n, d);
      term.coefficient.canonicalize();
      have_coefficient = true;
      if (c.peek() == '*') ++c.i;
    }
    ch = c.peek();
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      if (var != 0 && var != ch) c.error("more than one variable");
      var = ch;
      ++c.i;
      term.exponent = 1;
      if (c.peek() == '^') {
        ++c.i;
        std::string e = c.digits();
        if (e.empty() || e.size() > 6) c.error("bad exponent");
        term.exponent = static_cast<unsigned>(std::stoul(e));
      }
    } else if (!have_coefficient) {
      c.error("expected a term");
    }
    term.coefficient *= sign;
    out.push_back(term);
  }
  if (variable != nullptr) *variable = var;
  return out;
}

std::vector<mpq_class> dense_coefficients(const std::vector<Term>& terms) {
  unsigned top = 0;
  for (const auto& t : terms) top = std::max(top, t.exponent);
  std::vector<mpq_class> out(top + 1, mpq_class(0));
  for (const auto& t : terms) out[t.exponent] += t.coefficient;
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

}  // namespace cremona::detail
