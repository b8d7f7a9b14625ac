#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cremona/mfs.hpp"

namespace cremona {

// Class -lambda K + nu f of a linear system on a conic bundle, with the
// multiplicities of the system at the tracked base orbits (keyed by orbit label).
// lambda and nu live in (1/2)Z and are stored doubled.
struct LinearSystemClass {
  long two_lambda = 0;
  long two_nu = 0;
  std::map<std::string, mpq_class> multiplicities;

  mpq_class lambda() const { return half(two_lambda); }
  mpq_class nu() const { return half(two_nu); }
  mpq_class multiplicity(const std::string& orbit) const;  // absent means 0

 private:
  static mpq_class half(long v) {
    mpq_class r(v, 2);
    r.canonicalize();
    return r;
  }
};

// Validates lambda >= 0, 0 <= m <= 2 lambda, and denominators dividing 2.
LinearSystemClass make_linear_system(long two_lambda, long two_nu,
                                     std::map<std::string, mpq_class> multiplicities = {});

// Closed-form pushforward through a conic-bundle type II link.
LinearSystemClass push_type2(const LinearSystemClass& h, const SarkisovLink& link);
// Same result computed in the Picard lattice of the common blow-up.
LinearSystemClass push_oracle(const LinearSystemClass& h, const SarkisovLink& link);

// Bare type II link between two copies of F_0 with base orbits of the given
// size labelled "w_src" and "w_tgt", for grid sweeps.
SarkisovLink grid_link(unsigned orbit_size);

struct GrowthCertificate {
  mpq_class lambda_in;
  mpq_class beta;
  mpq_class a_lower;
  mpq_class bound;  // a_lower * beta * lambda_in
  bool exceeds_four_lambda = false;
};

struct GrowthResult {
  std::optional<GrowthCertificate> certificate;
  std::string failure;  // violated hypothesis when no certificate
};

struct LargeOrbit {
  unsigned size = 0;
  mpq_class multiplicity;
};

GrowthResult lambda_bound(const mpq_class& lambda, const std::vector<LargeOrbit>& orbits, const mpq_class& a_lower,
                          unsigned big_delta = 16, const mpq_class& small_delta = mpq_class(1, 2));

}  // namespace cremona
