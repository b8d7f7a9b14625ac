#pragma once

// Dense univariate polynomials over a field context F (Rationals or
// FiniteField). Coefficients are ascending; the zero polynomial is empty.

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "cremona/error.hpp"

namespace cremona::up {

template <class F>
using Poly = std::vector<typename F::Elem>;

template <class F>
void trim(const F& k, Poly<F>& a) {
  while (!a.empty() && k.is_zero(a.back())) a.pop_back();
}

template <class F>
int deg(const Poly<F>& a) {
  return static_cast<int>(a.size()) - 1;
}

template <class F>
Poly<F> constant(const F& k, const typename F::Elem& c) {
  Poly<F> r;
  if (!k.is_zero(c)) r.push_back(c);
  return r;
}

template <class F>
Poly<F> monomial(const F& k, const typename F::Elem& c, unsigned e) {
  if (k.is_zero(c)) return {};
  Poly<F> r(e + 1, k.zero());
  r[e] = c;
  return r;
}

template <class F>
Poly<F> x_poly(const F& k) {
  return monomial(k, k.one(), 1);
}

template <class F>
Poly<F> add(const F& k, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r(std::max(a.size(), b.size()), k.zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = k.add(r[i], b[i]);
  trim(k, r);
  return r;
}

template <class F>
Poly<F> neg(const F& k, const Poly<F>& a) {
  Poly<F> r(a.size(), k.zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = k.neg(a[i]);
  return r;
}

template <class F>
Poly<F> sub(const F& k, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r(std::max(a.size(), b.size()), k.zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = k.sub(r[i], b[i]);
  trim(k, r);
  return r;
}

template <class F>
Poly<F> scale(const F& k, const Poly<F>& a, const typename F::Elem& c) {
  if (k.is_zero(c)) return {};
  Poly<F> r(a.size(), k.zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = k.mul(a[i], c);
  trim(k, r);
  return r;
}

template <class F>
Poly<F> mul(const F& k, const Poly<F>& a, const Poly<F>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<F> r(a.size() + b.size() - 1, k.zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (k.is_zero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
  }
  trim(k, r);
  return r;
}

// a = q*b + r with deg r < deg b.
template <class F>
std::pair<Poly<F>, Poly<F>> divmod(const F& k, const Poly<F>& a, const Poly<F>& b) {
  if (b.empty()) fail("DivisionByZero", "polynomial division by zero");
  Poly<F> r = a;
  trim(k, r);
  if (r.size() < b.size()) return {{}, r};
  Poly<F> q(r.size() - b.size() + 1, k.zero());
  const auto lead_inv = k.inv(b.back());
  for (int i = deg<F>(r); i >= deg<F>(b); --i) {
    if (k.is_zero(r[i])) continue;
    auto c = k.mul(r[i], lead_inv);
    q[i - deg<F>(b)] = c;
    for (size_t j = 0; j < b.size(); ++j) {
      size_t idx = i - deg<F>(b) + j;
      r[idx] = k.sub(r[idx], k.mul(c, b[j]));
    }
  }
  trim(k, r);
  trim(k, q);
  return {q, r};
}

template <class F>
Poly<F> mod(const F& k, const Poly<F>& a, const Poly<F>& b) {
  return divmod(k, a, b).second;
}

template <class F>
Poly<F> quo(const F& k, const Poly<F>& a, const Poly<F>& b) {
  return divmod(k, a, b).first;
}

template <class F>
Poly<F> monic(const F& k, const Poly<F>& a) {
  if (a.empty()) return a;
  return scale(k, a, k.inv(a.back()));
}

template <class F>
Poly<F> gcd(const F& k, Poly<F> a, Poly<F> b) {
  trim(k, a);
  trim(k, b);
  while (!b.empty()) {
    auto r = mod(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(k, a);
}

// Inverse of a modulo m (requires gcd 1).
template <class F>
Poly<F> inv_mod(const F& k, const Poly<F>& a, const Poly<F>& m) {
  Poly<F> r0 = m, r1 = mod(k, a, m);
  Poly<F> s0, s1 = constant(k, k.one());
  while (!r1.empty()) {
    auto [q, r] = divmod(k, r0, r1);
    auto s = sub(k, s0, mul(k, q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.size() != 1) fail("NotInvertible", "element is not a unit modulo the polynomial");
  return mod(k, scale(k, s0, k.inv(r0[0])), m);
}

template <class F>
Poly<F> derivative(const F& k, const Poly<F>& a) {
  if (a.size() <= 1) return {};
  Poly<F> r(a.size() - 1, k.zero());
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = k.mul(k.from_int(static_cast<long long>(i)), a[i]);
  trim(k, r);
  return r;
}

template <class F>
typename F::Elem eval(const F& k, const Poly<F>& a, const typename F::Elem& x) {
  auto acc = k.zero();
  for (size_t i = a.size(); i-- > 0;) acc = k.add(k.mul(acc, x), a[i]);
  return acc;
}

template <class F>
Poly<F> mulmod(const F& k, const Poly<F>& a, const Poly<F>& b, const Poly<F>& m) {
  return mod(k, mul(k, a, b), m);
}

template <class F>
Poly<F> powmod(const F& k, Poly<F> base, const mpz_class& e, const Poly<F>& m) {
  Poly<F> r = mod(k, constant(k, k.one()), m);
  base = mod(k, base, m);
  size_t bits = sgn(e) == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = mulmod(k, r, r, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(k, r, base, m);
  }
  return r;
}

// a(b(x)) mod m.
template <class F>
Poly<F> compose_mod(const F& k, const Poly<F>& a, const Poly<F>& b, const Poly<F>& m) {
  Poly<F> acc;
  for (size_t i = a.size(); i-- > 0;) acc = add(k, mulmod(k, acc, b, m), constant(k, a[i]));
  return mod(k, acc, m);
}

template <class F>
bool equal(const F& k, const Poly<F>& a, const Poly<F>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!k.eq(a[i], b[i])) return false;
  }
  return true;
}

// Canonical order: lower degree first; equal degrees compare coefficients
// from the leading term down (so over F_p this is numeric order of the
// coefficient string read as a base-p number).
template <class F>
int compare(const F& k, const Poly<F>& a, const Poly<F>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    int c = k.compare(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

}  // namespace cremona::up
