#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cremona/factor.hpp"
#include "cremona/freeprod.hpp"
#include "cremona/rewriting.hpp"

namespace cremona {

// ---- de Jonquieres maps [x0 y1^d : x1 p(y0,y1) ; y0 : y1] of P1 x P1.

struct DeJonquieresMap {
  Polynomial p;  // irreducible, degree d >= 1
  IrreducibilityCertificate certificate;

  unsigned degree() const { return static_cast<unsigned>(p.degree()); }
};

// Validates p (NotIrreducible otherwise).
DeJonquieresMap make_dejonquieres(const Polynomial& p);

struct BasePointGroup {
  std::string location;  // where the points sit on P1 x P1
  unsigned count = 0;
  unsigned multiplicity = 1;
  bool infinitely_near = false;
};

struct DeJonquieresAudit {
  unsigned bidegree_x = 1;
  unsigned bidegree_y = 0;
  int self_intersection = 0;  // of the defining linear system
  std::vector<BasePointGroup> base_points;
  unsigned base_point_total = 0;  // with multiplicity
  unsigned multiplicity_square_sum = 0;
  bool balanced = false;  // self-intersection equals the sum of squared multiplicities
  // Coordinate check (finite fields, degree <= 8): the orbit splits into d
  // distinct roots of p over F_{q^d} and the scheme at ([1:0],[1:0]) is (u, v^d).
  bool coordinates_verified = false;
  std::string verification;
};

struct DeJonquieresDecomposition {
  GroupoidWord word;  // P1xP1 -> F_d -> F_{d-1} -> ... -> F_0
  DeJonquieresAudit audit;
};

DeJonquieresDecomposition dejonquieres_decompose(const DeJonquieresMap& m);

// alpha^-1 w alpha, where alpha: P2 -> P1xP1 blows up two points and contracts
// the line through them. `w` must start and end on F_0 (EndpointMismatch).
GroupoidWord conjugate_to_p2(const GroupoidWord& w);

// ---- Type II links of depth 2n+1 between conic bundles over del Pezzo
// surfaces of degree 5 and 6, centered at the points [0:1:r] for the roots r
// of an odd-degree irreducible.

struct BigLinkReport {
  std::string family;      // c5 | c6
  std::string distinctness;  // computed | symbolic
  unsigned depth = 0;
  unsigned conic_count = 0;
  bool pairwise_distinct = false;
  bool all_irreducible = false;
  bool no_collinear = false;
  std::string collinearity_method;  // coordinates | degree-bound
  unsigned system_rank = 0;  // of the 5 x 6 system for one point q
  // Finite fields: basis of the pencil through the base points, monomials
  // (x^2, y^2, z^2, xy, xz, yz), and the conic through [0:1:r] with
  // coefficients in k[r]/(r_poly).
  std::vector<std::vector<std::string>> pencil;
  std::vector<std::string> conic_through_q;
  std::optional<Polynomial> pencil_parameter;  // minimal polynomial of the conic's pencil parameter
};

struct BigLink {
  SarkisovLink link;
  BigLinkReport report;
};

BigLink c5_big_link(const PointOrbit& orbit4, const Polynomial& r_poly);
// Either one SplitLinePair orbit or two orbits of size 2.
BigLink c6_big_link(const std::vector<PointOrbit>& orbit_pair, const Polynomial& r_poly);

// ---- Lower-bound report for the refined target group.

struct OddDegreeWitness {
  unsigned degree = 0;  // 2n+1
  unsigned index = 0;   // n
  Polynomial poly;
  std::string certificate;  // method name
};

struct OrbitClassCount {
  unsigned size = 0;
  size_t orbits = 0;
  size_t classes_all = 0;
  size_t classes_general = 0;
};

struct WitnessImage {
  std::string name;  // dejonquieres | c5 | c6
  GroupoidWord word;
  FreeProductElement image;
};

struct RefinedTargetReport {
  FieldSpec field;
  unsigned bound = 0;
  std::vector<unsigned> i0_depths;         // depths >= 16 realized by irreducibles
  std::vector<OddDegreeWitness> i_indices;  // odd degrees 17..bound
  std::vector<OrbitClassCount> class_counts;  // sizes 2 and 4, finite fields
  std::vector<WitnessImage> witnesses;
  std::vector<size_t> pairwise_product_lengths;  // (0,1), (0,2), (1,2)
  bool separated = false;  // three distinct factors, all products of length 2
};

RefinedTargetReport refined_target_report(const FieldSpec& field, unsigned search_bound);

}  // namespace cremona
