#include "cremona/factor.hpp"

#include <algorithm>
#include <random>

namespace cremona {
namespace {

mpz_class to_mpz(u128 v) {
  return mpz_class(std::to_string(static_cast<u64>(v >> 64))) * mpz_class("18446744073709551616") +
         mpz_class(std::to_string(static_cast<u64>(v)));
}

FPoly x_minus(const FiniteField& k, const FPoly& h) { return up::sub(k, h, up::x_poly(k)); }

FPoly frobenius_power(const FiniteField& k, const FPoly& h, const FPoly& f) {
  return up::powmod(k, h, to_mpz(k.order()), f);
}

// Coefficient-wise p-th root of a polynomial whose exponents are all multiples of p.
FPoly pth_root(const FiniteField& k, const FPoly& f) {
  const u64 p = k.characteristic();
  u128 root_exp = 1;
  for (unsigned i = 1; i < k.degree(); ++i) root_exp *= p;
  FPoly g;
  for (size_t i = 0; i < f.size(); i += p) g.push_back(k.pow(f[i], root_exp));
  up::trim(k, g);
  return g;
}

std::vector<std::pair<FPoly, unsigned>> squarefree_parts(const FiniteField& k, const FPoly& f) {
  std::vector<std::pair<FPoly, unsigned>> out;
  FPoly c = up::gcd(k, f, up::derivative(k, f));
  FPoly w = up::quo(k, f, c);
  unsigned i = 1;
  while (up::deg<FiniteField>(w) > 0) {
    FPoly y = up::gcd(k, w, c);
    FPoly z = up::quo(k, w, y);
    if (up::deg<FiniteField>(z) > 0) out.emplace_back(z, i);
    ++i;
    w = y;
    c = up::quo(k, c, y);
  }
  if (up::deg<FiniteField>(c) > 0) {
    const auto p = static_cast<unsigned>(k.characteristic());
    for (auto& [g, m] : squarefree_parts(k, up::monic(k, pth_root(k, c)))) out.emplace_back(g, m * p);
  }
  return out;
}

std::vector<std::pair<FPoly, unsigned>> distinct_degree(const FiniteField& k, FPoly f) {
  std::vector<std::pair<FPoly, unsigned>> out;
  FPoly h = up::mod(k, up::x_poly(k), f);
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(up::deg<FiniteField>(f)); ++d) {
    h = frobenius_power(k, h, f);
    FPoly g = up::gcd(k, f, x_minus(k, h));
    if (up::deg<FiniteField>(g) > 0) {
      out.emplace_back(g, d);
      f = up::quo(k, f, g);
      h = up::mod(k, h, f);
    }
  }
  if (up::deg<FiniteField>(f) > 0) out.emplace_back(f, static_cast<unsigned>(up::deg<FiniteField>(f)));
  return out;
}

FPoly random_poly(const FiniteField& k, int below_degree, std::mt19937_64& rng) {
  FPoly r(below_degree, 0);
  for (auto& c : r) {
    u64 v = rng();
    c = k.order() > static_cast<u128>(UINT64_MAX) ? v : static_cast<u64>(v % static_cast<u64>(k.order()));
  }
  up::trim(k, r);
  return r;
}

void equal_degree(const FiniteField& k, const FPoly& g, unsigned d, std::mt19937_64& rng, std::vector<FPoly>& out) {
  const int n = up::deg<FiniteField>(g);
  if (n <= static_cast<int>(d)) {
    out.push_back(g);
    return;
  }
  const bool even = k.characteristic() == 2;
  mpz_class e;
  if (!even) {
    mpz_class qd = 1;
    mpz_class q = to_mpz(k.order());
    for (unsigned i = 0; i < d; ++i) qd *= q;
    e = (qd - 1) / 2;
  }
  for (;;) {
    FPoly a = random_poly(k, n, rng);
    if (up::deg<FiniteField>(a) < 1) continue;
    FPoly b;
    if (even) {
      FPoly cur = a;
      b = a;
      const unsigned steps = k.degree() * d;
      for (unsigned j = 1; j < steps; ++j) {
        cur = up::mulmod(k, cur, cur, g);
        b = up::add(k, b, cur);
      }
    } else {
      b = up::sub(k, up::powmod(k, a, e, g), up::constant(k, k.one()));
    }
    FPoly h = up::gcd(k, g, b);
    int dh = up::deg<FiniteField>(h);
    if (dh > 0 && dh < n) {
      equal_degree(k, h, d, rng, out);
      equal_degree(k, up::monic(k, up::quo(k, g, h)), d, rng, out);
      return;
    }
  }
}

bool canonical_less(const FiniteField& k, const std::pair<FPoly, unsigned>& a, const std::pair<FPoly, unsigned>& b) {
  int c = up::compare(k, a.first, b.first);
  if (c != 0) return c < 0;
  return a.second < b.second;
}

// Increments a monic candidate in canonical order; false on wrap-around.
bool increment(const FiniteField& k, FPoly& f) {
  const u128 q = k.order();
  for (size_t i = 0; i + 1 < f.size(); ++i) {
    if (static_cast<u128>(f[i]) + 1 < q) {
      ++f[i];
      return true;
    }
    f[i] = 0;
  }
  return false;
}

// ---- Rational helpers

std::vector<mpz_class> primitive_integer(const QPoly& f) {
  mpz_class l = 1;
  for (const auto& c : f) l = lcm(l, mpz_class(c.get_den()));
  std::vector<mpz_class> z;
  for (const auto& c : f) z.push_back(mpz_class(c * l));
  mpz_class g = 0;
  for (const auto& c : z) g = gcd(g, c);
  if (g != 0) {
    for (auto& c : z) c /= g;
  }
  if (!z.empty() && z.back() < 0) {
    for (auto& c : z) c = -c;
  }
  return z;
}

// Positive divisors of |n| ascending; nullopt when |n| is too large to factor by trial division.
std::optional<std::vector<mpz_class>> divisors(const mpz_class& n) {
  mpz_class m = abs(n);
  if (m == 0) return std::vector<mpz_class>{};
  if (m > mpz_class("1000000000000")) return std::nullopt;
  u64 v = m.get_ui();
  std::vector<u64> ds;
  for (u64 d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      ds.push_back(d);
      if (d * d != v) ds.push_back(v / d);
    }
  }
  std::sort(ds.begin(), ds.end());
  std::vector<mpz_class> out;
  for (u64 d : ds) out.push_back(mpz_class(std::to_string(d)));
  return out;
}

mpq_class eval_q(const QPoly& f, const mpq_class& x) { return up::eval(Rationals{}, f, x); }

bool divides_q(const QPoly& g, const QPoly& f) { return up::mod(Rationals{}, f, g).empty(); }

bool is_small_prime(u64 p) { return is_prime_u64(p); }

IrreducibilityCertificate reducible(const QPoly& factor, IrreducibilityCertificate::Method method) {
  IrreducibilityCertificate c;
  c.verdict = IrreducibilityCertificate::Verdict::Reducible;
  c.method = method;
  c.witness = Polynomial::rational(up::monic(Rationals{}, factor));
  return c;
}

IrreducibilityCertificate irreducible(IrreducibilityCertificate::Method method, u64 prime = 0) {
  IrreducibilityCertificate c;
  c.verdict = IrreducibilityCertificate::Verdict::Irreducible;
  c.method = method;
  c.prime = prime;
  return c;
}

IrreducibilityCertificate check_rational(const QPoly& f) {
  using Method = IrreducibilityCertificate::Method;
  Rationals q;
  const int n = up::deg<Rationals>(f);
  if (n == 1) return irreducible(Method::TrialFactorization);

  // Repeated factors are an immediate witness.
  QPoly g = up::gcd(q, f, up::derivative(q, f));
  if (up::deg<Rationals>(g) > 0) return reducible(g, Method::TrialFactorization);

  auto z = primitive_integer(f);

  // Eisenstein at primes up to 100.
  for (u64 p = 2; p <= 100; ++p) {
    if (!is_small_prime(p)) continue;
    mpz_class pz(static_cast<unsigned long>(p));
    if (z[n] % pz == 0) continue;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = z[i] % pz == 0;
    if (ok && z[0] % (pz * pz) != 0) return irreducible(Method::Eisenstein, p);
  }

  // Rational roots.
  bool roots_searched = false;
  if (z[0] == 0) return reducible(up::x_poly(q), Method::RootSearch);
  auto num = divisors(z[0]);
  auto den = divisors(z[n]);
  if (num && den) {
    roots_searched = true;
    for (const auto& d : *num) {
      for (const auto& e : *den) {
        if (gcd(d, e) != 1) continue;
        for (int sign : {1, -1}) {
          mpq_class r(d * sign, e);
          r.canonicalize();
          if (eval_q(f, r) == 0) return reducible(QPoly{-r, mpq_class(1)}, Method::RootSearch);
        }
      }
    }
  }

  // Irreducible reduction modulo a small prime not dividing the leading coefficient.
  for (u64 p = 2; p <= 100; ++p) {
    if (!is_small_prime(p)) continue;
    mpz_class pz(static_cast<unsigned long>(p));
    if (z[n] % pz == 0) continue;
    FiniteField fp(p);
    FPoly red;
    for (const auto& c : z) {
      mpz_class r = ((c % pz) + pz) % pz;
      red.push_back(r.get_ui());
    }
    up::trim(fp, red);
    if (is_irreducible(fp, red)) return irreducible(Method::ModPReduction, p);
  }

  if (n <= 3 && roots_searched) return irreducible(Method::TrialFactorization);
  if (n == 4 && roots_searched) {
    // Kronecker: a quadratic factor u x^2 + v x + w has w | f(0), (u+v+w) | f(1), (u-v+w) | f(-1).
    mpz_class f0 = z[0];
    mpz_class f1 = 0, fm1 = 0;
    for (int i = 0; i <= n; ++i) {
      f1 += z[i];
      fm1 += (i % 2 == 0) ? z[i] : mpz_class(-z[i]);
    }
    auto d0 = divisors(f0);
    auto d1 = divisors(f1);
    auto d2 = divisors(fm1);
    if (d0 && d1 && d2) {
      for (const auto& w : *d0) {
        for (const auto& a1 : *d1) {
          for (int s1 : {1, -1}) {
            for (const auto& a2 : *d2) {
              for (int s2 : {1, -1}) {
                mpz_class g1 = a1 * s1, g2 = a2 * s2;
                mpz_class sum = g1 + g2;
                mpz_class diff = g1 - g2;
                if (sum % 2 != 0 || diff % 2 != 0) continue;
                mpz_class u = sum / 2 - w;
                mpz_class v = diff / 2;
                if (u == 0) continue;
                QPoly cand{mpq_class(w), mpq_class(v), mpq_class(u)};
                if (divides_q(cand, f)) return reducible(cand, Method::TrialFactorization);
              }
            }
          }
        }
      }
      return irreducible(Method::TrialFactorization);
    }
  }
  return IrreducibilityCertificate{};
}

}  // namespace

std::vector<std::pair<FPoly, unsigned>> factor_finite(const FiniteField& k, const FPoly& input) {
  FPoly f = input;
  up::trim(k, f);
  if (f.empty()) fail("ZeroPolynomial", "cannot factor the zero polynomial");
  f = up::monic(k, f);
  std::vector<std::pair<FPoly, unsigned>> out;
  if (up::deg<FiniteField>(f) == 0) return out;
  std::mt19937_64 rng(0x5eedf00dULL);
  for (auto& [part, mult] : squarefree_parts(k, f)) {
    for (auto& [block, d] : distinct_degree(k, part)) {
      std::vector<FPoly> pieces;
      equal_degree(k, up::monic(k, block), d, rng, pieces);
      for (auto& piece : pieces) out.emplace_back(up::monic(k, piece), mult);
    }
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return canonical_less(k, a, b); });
  return out;
}

bool is_irreducible(const FiniteField& k, const FPoly& input) {
  FPoly f = input;
  up::trim(k, f);
  const int n = up::deg<FiniteField>(f);
  if (n < 1) return false;
  if (n == 1) return true;
  f = up::monic(k, f);
  FPoly h = up::mod(k, up::x_poly(k), f);
  for (int i = 1; 2 * i <= n; ++i) {
    h = frobenius_power(k, h, f);
    if (up::deg<FiniteField>(up::gcd(k, f, x_minus(k, h))) > 0) return false;
  }
  return true;
}

FPoly smallest_irreducible(const FiniteField& k, unsigned degree) {
  if (degree == 0) fail("InvalidArgument", "degree must be positive");
  FPoly f(degree + 1, 0);
  f[degree] = 1;
  do {
    if (is_irreducible(k, f)) return f;
  } while (increment(k, f));
  fail("NotFound", "no irreducible polynomial of degree " + std::to_string(degree));
}

std::optional<FPoly> next_irreducible(const FiniteField& k, const FPoly& after) {
  FPoly f = after;
  while (increment(k, f)) {
    if (is_irreducible(k, f)) return f;
  }
  return std::nullopt;
}

std::vector<u64> roots_in(const FiniteField& k, const FPoly& input) {
  FPoly f = input;
  up::trim(k, f);
  if (f.empty()) fail("ZeroPolynomial", "roots of the zero polynomial");
  f = up::monic(k, f);
  if (up::deg<FiniteField>(f) < 1) return {};
  FPoly xq = frobenius_power(k, up::mod(k, up::x_poly(k), f), f);
  FPoly g = up::gcd(k, f, x_minus(k, xq));
  if (up::deg<FiniteField>(g) < 1) return {};
  std::mt19937_64 rng(0x900dULL);
  std::vector<FPoly> linear;
  equal_degree(k, g, 1, rng, linear);
  std::vector<u64> out;
  for (auto& l : linear) {
    auto m = up::monic(k, l);
    out.push_back(m.size() == 1 ? 0 : k.neg(m[0]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Factor> factor_over_prime_field(const Polynomial& f) {
  if (!f.field().is_finite()) fail("UnsupportedField", "factorization is implemented over finite fields only");
  if (f.is_zero()) fail("ZeroPolynomial", "cannot factor the zero polynomial");
  auto k = f.field().finite_field();
  std::vector<Factor> out;
  for (auto& [g, m] : factor_finite(*k, f.f_coeffs())) out.push_back({Polynomial::finite(f.field(), g), m});
  return out;
}

IrreducibilityCertificate irreducible_check(const Polynomial& f) {
  if (f.degree() < 1) fail("ConstantPolynomial", "irreducibility of a constant is undefined");
  if (f.field().is_finite()) {
    auto factors = factor_over_prime_field(f);
    if (factors.size() == 1 && factors[0].multiplicity == 1) {
      return irreducible(IrreducibilityCertificate::Method::TrialFactorization);
    }
    IrreducibilityCertificate c;
    c.verdict = IrreducibilityCertificate::Verdict::Reducible;
    c.method = IrreducibilityCertificate::Method::TrialFactorization;
    c.witness = factors.front().factor;
    return c;
  }
  return check_rational(f.q_coeffs());
}

std::string verdict_name(IrreducibilityCertificate::Verdict v) {
  switch (v) {
    case IrreducibilityCertificate::Verdict::Irreducible:
      return "Irreducible";
    case IrreducibilityCertificate::Verdict::Reducible:
      return "Reducible";
    case IrreducibilityCertificate::Verdict::Unverified:
      return "Unverified";
  }
  return "?";
}

std::string method_name(IrreducibilityCertificate::Method m) {
  switch (m) {
    case IrreducibilityCertificate::Method::TrialFactorization:
      return "TrialFactorization";
    case IrreducibilityCertificate::Method::Eisenstein:
      return "Eisenstein";
    case IrreducibilityCertificate::Method::ModPReduction:
      return "ModPReduction";
    case IrreducibilityCertificate::Method::RootSearch:
      return "RootSearch";
    case IrreducibilityCertificate::Method::None:
      return "None";
  }
  return "?";
}

FrobeniusOrbit frobenius_orbit(const Polynomial& f, u64 q) {
  if (f.field().kind != FieldSpec::Kind::FinitePrime) {
    fail("UnsupportedField", "frobenius_orbit expects a polynomial over a prime field");
  }
  const u64 p = f.field().p;
  auto pk = prime_power(q);
  if (!pk || pk->first != p) fail("BaseMismatch", std::to_string(q) + " is not a power of " + std::to_string(p));
  auto k = f.field().finite_field();
  if (!is_irreducible(*k, f.f_coeffs())) fail("NotIrreducible", f.to_string('t') + " is reducible over F_" + std::to_string(p));
  FPoly m = up::monic(*k, f.f_coeffs());
  FPoly t = up::mod(*k, up::x_poly(*k), m);
  FrobeniusOrbit orbit;
  FPoly cur = t;
  mpz_class qz(std::to_string(q));
  do {
    orbit.conjugates.push_back(Polynomial::finite(f.field(), cur));
    cur = up::powmod(*k, cur, qz, m);
  } while (!up::equal(*k, cur, t));
  orbit.size = static_cast<unsigned>(orbit.conjugates.size());
  return orbit;
}

}  // namespace cremona
