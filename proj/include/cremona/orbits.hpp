#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cremona/factor.hpp"
#include "cremona/polynomial.hpp"

namespace cremona {

enum class OrbitTemplate { ConicForm, SplitLinePair, LineAtInfinity, Explicit };
enum class Tri { Yes, No, Unknown };

std::string template_name(OrbitTemplate t);  // conic | split | line | explicit
OrbitTemplate parse_template(const std::string& name);
std::string tri_name(Tri t);  // yes | no | unknown

// Projective point with packed FiniteField coordinates, normalized so the
// first nonzero coordinate is 1.
using ProjPoint = std::array<u64, 3>;

// A Galois-stable set of points of P^2 over the closure of `field`.
//  ConicForm       [1 : a : a^2] for the roots a of min_poly
//  LineAtInfinity  [0 : 1 : a]
//  SplitLinePair   [1 : a : 0] for roots of min_poly, [1 : 0 : b] for roots of second_poly
//  Explicit        listed points over coord_field (finite fields only)
struct PointOrbit {
  FieldSpec field;
  OrbitTemplate kind = OrbitTemplate::ConicForm;
  Polynomial min_poly;
  std::optional<Polynomial> second_poly;
  FieldSpec coord_field;
  std::vector<ProjPoint> points;
  unsigned size = 0;
  Tri general_position = Tri::Unknown;

  // (size, template, canonical polynomial data); stable across runs.
  std::string key() const;
};

PointOrbit orbit_from_poly(const FieldSpec& field, const Polynomial& f, OrbitTemplate kind,
                           bool allow_unverified = false);
PointOrbit split_orbit(const FieldSpec& field, const Polynomial& f1, const Polynomial& f2,
                       bool allow_unverified = false);
// [1 : a_i : 0] and [1 : 0 : a_i] from a single quadratic.
PointOrbit mirror_pair(const FieldSpec& field, const Polynomial& f, bool allow_unverified = false);
// Points must be stable under the q-power Frobenius of the base field.
PointOrbit explicit_orbit(const FieldSpec& base, const FieldSpec& coord_field, std::vector<ProjPoint> points);

// Concrete coordinates of a union of orbits in the smallest common extension
// of a finite base field (canonical modulus).
struct RealizedPoints {
  FieldSpec field;
  std::shared_ptr<const FiniteField> ext;
  u64 base_order = 0;
  std::vector<ProjPoint> points;
  std::vector<std::pair<size_t, size_t>> origin;  // (orbit index, index within orbit)
};

RealizedPoints realize(const std::vector<PointOrbit>& orbits);

ProjPoint normalize_point(const FiniteField& k, ProjPoint p);
std::string point_string(const FiniteField& k, const ProjPoint& p);

struct PositionVerdict {
  bool general = true;
  std::array<size_t, 3> witness{};         // indices into the realized point list
  std::vector<std::string> witness_points;  // printable coordinates
};

PositionVerdict general_position_check(const std::vector<PointOrbit>& orbits);

// Does some point of `other` lie on a line through two points of `base`?
// Empty when the coordinates are out of reach (Q, or too large a compositum).
std::optional<bool> collinear_with_base_pair(const std::vector<PointOrbit>& base, const PointOrbit& other);

std::vector<PointOrbit> enumerate_point_orbits(u64 q, unsigned n);

enum class ClassFilter { All, GeneralPositionOnly };

struct OrbitClass {
  PointOrbit representative;
  size_t members = 0;
  std::vector<size_t> member_indices;  // into the filtered input order
  std::string key;
};

std::vector<OrbitClass> pgl3_classify(const std::vector<PointOrbit>& orbits, u64 q, ClassFilter filter);

// Elements of PGL_3(F_q), first nonzero entry 1, row-major, base-field packed.
using Mat3 = std::array<u64, 9>;
const std::vector<Mat3>& pgl3_elements(const FieldSpec& base);

PointOrbit apply_matrix(const PointOrbit& orbit, const Mat3& a);

struct Transform {
  FieldSpec field;
  std::array<std::string, 9> entries;  // row-major, printable base-field elements
  Mat3 packed{};                        // finite fields only
  std::array<unsigned, 4> labeling{};   // A p_i = q_labeling[i]
};

// Frobenius cycle type of a realized 4-point set, e.g. {4} or {2,2}.
std::vector<unsigned> frobenius_cycle_type(const std::vector<PointOrbit>& set);

std::optional<Transform> match_transform(const std::vector<PointOrbit>& p, const std::vector<PointOrbit>& q);
// Every labeling that yields a rational transform (one per labeling).
std::vector<Transform> match_all_transforms(const std::vector<PointOrbit>& p, const std::vector<PointOrbit>& q);

// Key of the PGL_3(k)-class of a point set (used for conic-bundle classes).
std::string orbit_set_class_key(const std::vector<PointOrbit>& set);

enum class DegreeConstraint { None, Odd };
PointOrbit large_orbit(const FieldSpec& field, unsigned delta, DegreeConstraint constraint = DegreeConstraint::None);

// ---- Transitive subgroups of Sym_4.

using Perm4 = std::array<unsigned, 4>;  // 0-based images
std::string cycle_string(const Perm4& p);

struct Sym4Class {
  std::string name;  // Sym4, A4, D8, V4, Z4
  unsigned order = 0;
  std::vector<Perm4> elements;
  bool contains_double_transposition = false;  // (13)(24)
  // Witness for {1,2}<->{3,4}, {1,3}<->{2,4}, {1,4}<->{2,3}.
  std::array<std::optional<Perm4>, 3> witnesses;
};

std::vector<Sym4Class> transitive_sym4_audit();

}  // namespace cremona
