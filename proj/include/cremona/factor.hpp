#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cremona/polynomial.hpp"

namespace cremona {

// ---- Low-level routines on packed coefficient vectors over a FiniteField.

// Monic irreducible factors with multiplicities in canonical order.
std::vector<std::pair<FPoly, unsigned>> factor_finite(const FiniteField& k, const FPoly& f);
bool is_irreducible(const FiniteField& k, const FPoly& f);
// Least monic irreducible of the given degree in canonical order.
FPoly smallest_irreducible(const FiniteField& k, unsigned degree);
// Next monic irreducible of the same degree strictly after `after`, if any.
std::optional<FPoly> next_irreducible(const FiniteField& k, const FPoly& after);
// Distinct roots in k of f (coefficients already in k), ascending.
std::vector<u64> roots_in(const FiniteField& k, const FPoly& f);

// ---- Public operations.

struct Factor {
  Polynomial factor;
  unsigned multiplicity = 1;
};

std::vector<Factor> factor_over_prime_field(const Polynomial& f);

struct IrreducibilityCertificate {
  enum class Verdict { Irreducible, Reducible, Unverified };
  enum class Method { TrialFactorization, Eisenstein, ModPReduction, RootSearch, None };

  Verdict verdict = Verdict::Unverified;
  Method method = Method::None;
  u64 prime = 0;                      // Eisenstein / ModPReduction
  std::optional<Polynomial> witness;  // Reducible only: a proper factor

  bool irreducible() const { return verdict == Verdict::Irreducible; }
};

IrreducibilityCertificate irreducible_check(const Polynomial& f);

std::string verdict_name(IrreducibilityCertificate::Verdict v);
std::string method_name(IrreducibilityCertificate::Method m);

struct FrobeniusOrbit {
  unsigned size = 0;
  // t^(q^i) reduced modulo f, i = 0..size-1, over the prime field.
  std::vector<Polynomial> conjugates;
};

FrobeniusOrbit frobenius_orbit(const Polynomial& f, u64 q);

}  // namespace cremona
