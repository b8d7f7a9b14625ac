#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cremona/error.hpp"

namespace cremona {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

bool is_prime_u64(u64 n);

// q = p^k with p prime, or nullopt.
std::optional<std::pair<u64, unsigned>> prime_power(u64 q);

// Arithmetic in F_p or F_p[a]/(modulus). Elements are packed integers in
// [0, p^k): the base-p digits are the coefficients of 1, a, a^2, ...
// Small extensions (order <= 2^20) multiply through log/exp tables.
class FiniteField {
 public:
  using Elem = u64;

  explicit FiniteField(u64 p);
  // The modulus must be monic and irreducible over F_p; that is the caller's
  // responsibility (FieldSpec validates it).
  FiniteField(u64 p, std::vector<u64> modulus);

  u64 characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  u128 order() const { return order_; }
  const std::vector<u64>& modulus() const { return modulus_; }
  bool is_prime_field() const { return k_ == 1; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }
  int compare(Elem a, Elem b) const { return a < b ? -1 : (a > b ? 1 : 0); }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem pow(Elem a, u128 e) const;
  Elem pow(Elem a, const mpz_class& e) const;
  Elem frobenius(Elem a) const { return pow(a, static_cast<u128>(p_)); }
  Elem from_int(long long n) const;

  // The adjoined root a; equals 1's successor only for extensions.
  Elem generator() const;
  bool in_prime_field(Elem a) const { return a < p_; }
  bool contains(Elem a) const { return static_cast<u128>(a) < order_; }

  std::vector<u64> digits(Elem a) const;
  Elem from_digits(const std::vector<u64>& d) const;

  std::string to_string(Elem a) const;
  Elem parse(const std::string& text) const;

 private:
  Elem mul_slow(Elem a, Elem b) const;
  void build_tables();

  u64 p_ = 2;
  unsigned k_ = 1;
  u128 order_ = 2;
  std::vector<u64> modulus_;  // ascending, monic, length k+1 (empty for prime fields)
  std::vector<u64> pw_;       // p^i
  bool tables_ = false;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;
};

struct Rationals {
  using Elem = mpq_class;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  int compare(const Elem& a, const Elem& b) const { return cmp(a, b) < 0 ? -1 : (cmp(a, b) > 0 ? 1 : 0); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const {
    if (sgn(a) == 0) fail("DivisionByZero", "inverse of 0 in Q");
    return Elem(1) / a;
  }
  Elem from_int(long long n) const { return Elem(static_cast<long>(n)); }
  std::string to_string(const Elem& a) const { return a.get_str(); }
};

// Serializable description of a field.
struct FieldSpec {
  enum class Kind { Rationals, FinitePrime, FiniteExtension };

  Kind kind = Kind::Rationals;
  u64 p = 0;
  std::vector<u64> modulus;  // FiniteExtension only: ascending, monic over F_p

  static FieldSpec rationals();
  static FieldSpec prime(u64 p);
  static FieldSpec extension(u64 p, std::vector<u64> modulus);
  // F_q with the smallest monic irreducible modulus (prime field when q is prime).
  static FieldSpec galois(u64 q);

  bool is_finite() const { return kind != Kind::Rationals; }
  unsigned degree() const { return kind == Kind::FiniteExtension ? static_cast<unsigned>(modulus.size() - 1) : 1; }
  u128 order() const;
  std::shared_ptr<const FiniteField> finite_field() const;
  std::string name() const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.kind == b.kind && a.p == b.p && a.modulus == b.modulus;
  }
};

// Accepts "Q", "F<q>", "GF(<q>)".
FieldSpec parse_field(const std::string& text);

}  // namespace cremona
