#pragma once

// Internal helpers shared by the finite-field geometry code.

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "cremona/factor.hpp"

namespace cremona::detail {

// F_{p^degree} with the smallest irreducible modulus; memoized.
inline FieldSpec canonical_field(u64 p, unsigned degree) {
  static std::mutex mu;
  static std::map<std::pair<u64, unsigned>, FieldSpec> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, degree});
    if (it != cache.end()) return it->second;
  }
  FieldSpec f = degree == 1 ? FieldSpec::prime(p) : FieldSpec::extension(p, smallest_irreducible(FiniteField(p), degree));
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(p, degree), f);
  return f;
}

// Field homomorphism from a subfield description into a larger field of the
// same characteristic: the generator goes to the least root of its modulus.
class Embedding {
 public:
  Embedding(const FiniteField& from, const FiniteField& to) : to_(&to), p_(from.characteristic()) {
    if (from.characteristic() != to.characteristic() || to.degree() % from.degree() != 0) {
      fail("IncompatibleFields", "cannot embed F_" + std::to_string(p_) + "^" + std::to_string(from.degree()) +
                                     " into degree " + std::to_string(to.degree()));
    }
    if (from.is_prime_field()) return;
    auto roots = roots_in(to, from.modulus());
    if (roots.empty()) fail("IncompatibleFields", "modulus has no root in the target field");
    u64 g = roots.front();
    u64 acc = 1;
    for (unsigned i = 0; i < from.degree(); ++i) {
      powers_.push_back(acc);
      acc = to.mul(acc, g);
    }
    digits_of_ = [&from](u64 x) { return from.digits(x); };
  }

  u64 operator()(u64 x) const {
    if (powers_.empty()) return x;
    auto d = digits_of_(x);
    u64 r = 0;
    for (size_t i = 0; i < d.size(); ++i) {
      if (d[i] != 0) r = to_->add(r, to_->mul(to_->from_int(static_cast<long long>(d[i])), powers_[i]));
    }
    return r;
  }

 private:
  const FiniteField* to_;
  u64 p_;
  std::vector<u64> powers_;
  std::function<std::vector<u64>(u64)> digits_of_;
};

}  // namespace cremona::detail
