#include "cremona/field.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "cremona/factor.hpp"
#include "term_parser.hpp"

namespace cremona {
namespace {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Largest r with r^k <= n.
u64 integer_root(u64 n, unsigned k) {
  if (k == 1) return n;
  auto r = static_cast<u64>(std::pow(static_cast<long double>(n), 1.0L / k));
  auto fits = [&](u64 x) {
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
      acc *= x;
      if (acc > n) return false;
    }
    return true;
  };
  while (r > 0 && !fits(r)) --r;
  while (fits(r + 1)) ++r;
  return r;
}

std::vector<u64> small_prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::optional<std::pair<u64, unsigned>> prime_power(u64 q) {
  if (q < 2) return std::nullopt;
  if (is_prime_u64(q)) return std::make_pair(q, 1U);
  for (unsigned k = 2; k < 64; ++k) {
    u64 r = integer_root(q, k);
    if (r < 2) break;
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) acc *= r;
    if (acc == q && is_prime_u64(r)) return std::make_pair(r, k);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- FiniteField

FiniteField::FiniteField(u64 p) : p_(p), k_(1), order_(p), pw_{1} {
  if (!is_prime_u64(p)) fail("InvalidField", "characteristic " + std::to_string(p) + " is not prime");
}

FiniteField::FiniteField(u64 p, std::vector<u64> modulus) : p_(p) {
  if (!is_prime_u64(p)) fail("InvalidField", "characteristic " + std::to_string(p) + " is not prime");
  if (modulus.size() < 2 || modulus.back() != 1) fail("InvalidField", "modulus must be monic of degree >= 1");
  for (u64 c : modulus) {
    if (c >= p) fail("InvalidField", "modulus coefficient not reduced mod p");
  }
  k_ = static_cast<unsigned>(modulus.size() - 1);
  if (k_ > 64) fail("ScaleExceeded", "extension degree above 64");
  order_ = 1;
  for (unsigned i = 0; i < k_; ++i) {
    order_ *= p;
    if (order_ > (static_cast<u128>(1) << 64)) fail("ScaleExceeded", "field order above 2^64");
  }
  pw_.resize(k_);
  u64 acc = 1;
  for (unsigned i = 0; i < k_; ++i) {
    pw_[i] = acc;
    acc *= p;
  }
  if (k_ > 1) {
    modulus_ = std::move(modulus);
    if (order_ <= (1U << 20)) build_tables();
  }
}

void FiniteField::build_tables() {
  const u64 q = static_cast<u64>(order_);
  const u64 n = q - 1;
  auto primes = small_prime_factors(n);
  u64 g = 0;
  for (u64 cand = 2; cand < q; ++cand) {
    bool primitive = true;
    for (u64 l : primes) {
      if (pow(cand, static_cast<u128>(n / l)) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      g = cand;
      break;
    }
  }
  if (g == 0) g = 1;  // only possible for q = 2, never tabulated
  exp_.assign(2 * n, 0);
  log_.assign(q, 0);
  u64 x = 1;
  for (u64 i = 0; i < n; ++i) {
    exp_[i] = static_cast<std::uint32_t>(x);
    exp_[i + n] = static_cast<std::uint32_t>(x);
    log_[x] = static_cast<std::uint32_t>(i);
    x = mul_slow(x, g);
  }
  tables_ = true;
}

FiniteField::Elem FiniteField::add(Elem a, Elem b) const {
  if (k_ == 1) {
    u128 s = static_cast<u128>(a) + b;
    if (s >= p_) s -= p_;
    return static_cast<u64>(s);
  }
  if (p_ == 2) return a ^ b;
  u64 r = 0;
  for (unsigned i = 0; i < k_; ++i) {
    u64 s = a % p_ + b % p_;
    a /= p_;
    b /= p_;
    if (s >= p_) s -= p_;
    r += s * pw_[i];
  }
  return r;
}

FiniteField::Elem FiniteField::neg(Elem a) const {
  if (k_ == 1) return a == 0 ? 0 : p_ - a;
  if (p_ == 2) return a;
  u64 r = 0;
  for (unsigned i = 0; i < k_; ++i) {
    u64 d = a % p_;
    a /= p_;
    r += (d == 0 ? 0 : p_ - d) * pw_[i];
  }
  return r;
}

FiniteField::Elem FiniteField::sub(Elem a, Elem b) const { return add(a, neg(b)); }

FiniteField::Elem FiniteField::mul_slow(Elem a, Elem b) const {
  if (k_ == 1) return mulmod(a, b, p_);
  if (p_ == 2) {
    u128 prod = 0;
    for (unsigned i = 0; i < k_; ++i) {
      if ((b >> i) & 1) prod ^= static_cast<u128>(a) << i;
    }
    u128 m = 0;
    for (unsigned i = 0; i <= k_; ++i) {
      if (modulus_[i]) m |= static_cast<u128>(1) << i;
    }
    for (int i = 2 * static_cast<int>(k_) - 2; i >= static_cast<int>(k_); --i) {
      if ((prod >> i) & 1) prod ^= m << (i - k_);
    }
    return static_cast<u64>(prod);
  }
  auto da = digits(a);
  auto db = digits(b);
  std::vector<u64> r(2 * k_ - 1, 0);
  for (unsigned i = 0; i < k_; ++i) {
    if (da[i] == 0) continue;
    for (unsigned j = 0; j < k_; ++j) {
      r[i + j] = static_cast<u64>((static_cast<u128>(da[i]) * db[j] + r[i + j]) % p_);
    }
  }
  for (int i = static_cast<int>(r.size()) - 1; i >= static_cast<int>(k_); --i) {
    u64 c = r[i];
    if (c == 0) continue;
    u64 negc = p_ - c;
    for (unsigned j = 0; j <= k_; ++j) {
      size_t idx = i - k_ + j;
      r[idx] = static_cast<u64>((static_cast<u128>(negc) * modulus_[j] + r[idx]) % p_);
    }
  }
  r.resize(k_);
  return from_digits(r);
}

FiniteField::Elem FiniteField::mul(Elem a, Elem b) const {
  if (k_ == 1) return mulmod(a, b, p_);
  if (a == 0 || b == 0) return 0;
  if (tables_) return exp_[log_[a] + log_[b]];
  return mul_slow(a, b);
}

FiniteField::Elem FiniteField::inv(Elem a) const {
  if (a == 0) fail("DivisionByZero", "inverse of 0 in " + std::to_string(p_) + "^" + std::to_string(k_));
  if (k_ == 1) return powmod(a, p_ - 2, p_);
  if (tables_) {
    const u64 n = static_cast<u64>(order_) - 1;
    return exp_[(n - log_[a]) % n];
  }
  return pow(a, order_ - 2);
}

FiniteField::Elem FiniteField::pow(Elem a, u128 e) const {
  Elem r = 1;
  while (e != 0) {
    if (e & 1) r = mul(r, a);
    e >>= 1;
    if (e != 0) a = mul(a, a);
  }
  return r;
}

FiniteField::Elem FiniteField::pow(Elem a, const mpz_class& e) const {
  if (sgn(e) < 0) return pow(inv(a), mpz_class(-e));
  if (a == 0) return sgn(e) == 0 ? 1 : 0;
  // Reduce the exponent modulo the multiplicative group order.
  const u128 grp = order_ - 1;
  mpz_class n = mpz_class(std::to_string(static_cast<u64>(grp >> 64))) * mpz_class("18446744073709551616") +
                mpz_class(std::to_string(static_cast<u64>(grp)));
  mpz_class r = e % n;
  u128 small = 0;
  size_t bits = mpz_sizeinbase(r.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    small = (small << 1) | static_cast<u128>(mpz_tstbit(r.get_mpz_t(), i));
  }
  return pow(a, small);
}

FiniteField::Elem FiniteField::from_int(long long n) const {
  u64 r;
  if (n >= 0) {
    r = static_cast<u64>(n) % p_;
  } else {
    u64 m = static_cast<u64>(-(n + 1)) % p_;  // -(n) - 1, avoids overflow at LLONG_MIN
    r = (p_ - 1 - m) % p_;
  }
  return r;
}

FiniteField::Elem FiniteField::generator() const {
  if (k_ == 1) fail("InvalidField", "prime field has no adjoined generator");
  return p_;
}

std::vector<u64> FiniteField::digits(Elem a) const {
  std::vector<u64> d(k_, 0);
  if (k_ == 1) {
    d[0] = a;
    return d;
  }
  for (unsigned i = 0; i < k_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

FiniteField::Elem FiniteField::from_digits(const std::vector<u64>& d) const {
  u64 r = 0;
  for (unsigned i = 0; i < k_ && i < d.size(); ++i) r += (d[i] % p_) * pw_[i];
  return r;
}

std::string FiniteField::to_string(Elem a) const {
  if (k_ == 1) return std::to_string(a);
  if (a == 0) return "0";
  auto d = digits(a);
  std::string out;
  for (int i = static_cast<int>(k_) - 1; i >= 0; --i) {
    if (d[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(d[i]);
      continue;
    }
    if (d[i] != 1) out += std::to_string(d[i]) + "*";
    out += "a";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

FiniteField::Elem FiniteField::parse(const std::string& text) const {
  char var = 0;
  auto terms = detail::parse_terms(text, &var);
  if (var != 0 && (k_ == 1 || var != 'a')) {
    fail("ParseError", "field element \"" + text + "\" uses an unexpected variable");
  }
  Elem out = 0;
  for (const auto& t : terms) {
    mpz_class num = t.coefficient.get_num();
    mpz_class den = t.coefficient.get_den();
    mpz_class pm(std::to_string(p_));
    mpz_class nr = ((num % pm) + pm) % pm;
    mpz_class dr = den % pm;
    if (dr == 0) fail("ParseError", "denominator divisible by the characteristic in \"" + text + "\"");
    Elem c = mul(nr.get_ui(), inv(dr.get_ui()));
    Elem power = t.exponent == 0 ? 1 : pow(generator(), static_cast<u128>(t.exponent));
    out = add(out, mul(c, power));
  }
  return out;
}

// ------------------------------------------------------------------ FieldSpec

FieldSpec FieldSpec::rationals() { return FieldSpec{}; }

FieldSpec FieldSpec::prime(u64 p) {
  if (!is_prime_u64(p)) fail("InvalidField", std::to_string(p) + " is not prime");
  FieldSpec f;
  f.kind = Kind::FinitePrime;
  f.p = p;
  return f;
}

FieldSpec FieldSpec::extension(u64 p, std::vector<u64> modulus) {
  if (!is_prime_u64(p)) fail("InvalidField", std::to_string(p) + " is not prime");
  if (modulus.size() < 2 || modulus.back() != 1) fail("InvalidField", "extension modulus must be monic of degree >= 1");
  if (modulus.size() == 2) return prime(p);
  FiniteField base(p);
  for (u64 c : modulus) {
    if (c >= p) fail("InvalidField", "modulus coefficient not reduced mod p");
  }
  if (!is_irreducible(base, modulus)) fail("InvalidField", "extension modulus is not irreducible over F_" + std::to_string(p));
  FieldSpec f;
  f.kind = Kind::FiniteExtension;
  f.p = p;
  f.modulus = std::move(modulus);
  (void)f.order();
  if (f.modulus.size() - 1 > 64) fail("ScaleExceeded", "extension degree above 64");
  return f;
}

FieldSpec FieldSpec::galois(u64 q) {
  auto pk = prime_power(q);
  if (!pk) fail("InvalidField", std::to_string(q) + " is not a prime power");
  if (pk->second == 1) return prime(pk->first);
  return extension(pk->first, smallest_irreducible(FiniteField(pk->first), pk->second));
}

u128 FieldSpec::order() const {
  if (kind == Kind::Rationals) return 0;
  u128 q = 1;
  for (unsigned i = 0; i < degree(); ++i) {
    q *= p;
    if (q > (static_cast<u128>(1) << 64)) fail("ScaleExceeded", "field order above 2^64");
  }
  return q;
}

std::shared_ptr<const FiniteField> FieldSpec::finite_field() const {
  if (kind == Kind::Rationals) fail("UnsupportedField", "Q is not a finite field");
  static std::mutex mu;
  static std::map<std::pair<u64, std::vector<u64>>, std::shared_ptr<const FiniteField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, modulus);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const FiniteField> f =
      kind == Kind::FinitePrime ? std::make_shared<FiniteField>(p) : std::make_shared<FiniteField>(p, modulus);
  cache.emplace(key, f);
  return f;
}

std::string FieldSpec::name() const {
  switch (kind) {
    case Kind::Rationals:
      return "Q";
    case Kind::FinitePrime:
      return "F" + std::to_string(p);
    case Kind::FiniteExtension: {
      auto q = static_cast<u64>(order());
      if (smallest_irreducible(FiniteField(p), degree()) == modulus) return "F" + std::to_string(q);
      std::string poly;
      for (int i = static_cast<int>(modulus.size()) - 1; i >= 0; --i) {
        if (modulus[i] == 0) continue;
        if (!poly.empty()) poly += "+";
        if (i == 0 || modulus[i] != 1) poly += std::to_string(modulus[i]);
        if (i > 0 && modulus[i] != 1) poly += "*";
        if (i > 0) poly += "a";
        if (i > 1) poly += "^" + std::to_string(i);
      }
      return "F" + std::to_string(p) + "[" + poly + "]";
    }
  }
  return "?";
}

FieldSpec parse_field(const std::string& text) {
  if (text == "Q" || text == "QQ") return FieldSpec::rationals();
  std::string body;
  if (text.rfind("GF(", 0) == 0 && text.back() == ')') {
    body = text.substr(3, text.size() - 4);
  } else if (!text.empty() && text[0] == 'F') {
    body = text.substr(1);
  } else {
    fail("ParseError", "unknown field \"" + text + "\"");
  }
  auto bracket = body.find('[');
  if (bracket != std::string::npos) {
    if (body.back() != ']') fail("ParseError", "unterminated modulus in \"" + text + "\"");
    std::string pstr = body.substr(0, bracket);
    std::string poly = body.substr(bracket + 1, body.size() - bracket - 2);
    u64 p = std::stoull(pstr);
    char var = 0;
    auto coeffs = detail::dense_coefficients(detail::parse_terms(poly, &var));
    std::vector<u64> mod;
    FiniteField base(p);
    for (const auto& c : coeffs) {
      mpz_class pm(std::to_string(p));
      if (c.get_den() != 1) fail("ParseError", "modulus must have integer coefficients");
      mpz_class r = ((c.get_num() % pm) + pm) % pm;
      mod.push_back(r.get_ui());
    }
    while (!mod.empty() && mod.back() == 0) mod.pop_back();
    return FieldSpec::extension(p, mod);
  }
  if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos) {
    fail("ParseError", "unknown field \"" + text + "\"");
  }
  return FieldSpec::galois(std::stoull(body));
}

}  // namespace cremona
