#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cremona/orbits.hpp"

namespace cremona {

enum class MfsKind { ProjectivePlane, Hirzebruch, ConicBundle5, ConicBundle6, DelPezzo, NonRationalCB };

// A rational Mori fiber space up to the data the catalog tracks. `label`
// tells apart distinct surfaces that share kind and parameters, e.g. the
// intermediate surfaces of a relation word.
struct MfsModel {
  MfsKind kind = MfsKind::ProjectivePlane;
  unsigned n = 0;                  // Hirzebruch index or del Pezzo degree
  // Hirzebruch only: orientation of the bookkeeping index. Surfaces created
  // while rewriting carry a signed index so that commuting transformations add
  // up; F_n itself depends only on n.
  bool negative = false;
  std::vector<PointOrbit> orbits;  // defining orbit data of ConicBundle5/6
  std::string label;

  unsigned base_dim() const;
  int signed_index() const { return negative ? -static_cast<int>(n) : static_cast<int>(n); }
  std::string key() const;
  std::string name() const;  // short human form: P2, F3, CB5, CB6, DP4, NRCB
};

MfsModel projective_plane(std::string label = "");
MfsModel hirzebruch(unsigned n, std::string label = "");
MfsModel hirzebruch_signed(int signed_index, std::string label = "");
// One general-position orbit of size 4.
MfsModel conic_bundle5(const PointOrbit& orbit, std::string label = "");
// Two size-2 orbits, or one split-form orbit carrying both.
MfsModel conic_bundle6(std::vector<PointOrbit> orbits, std::string label = "");
MfsModel del_pezzo(unsigned degree, std::string label = "");
MfsModel non_rational_cb(std::string label = "");

std::string mfs_kind_name(MfsKind k);  // P2 | hirzebruch | cb5 | cb6 | dp | nrcb
MfsKind parse_mfs_kind(const std::string& name);

struct MfsInvariants {
  bool rational = true;
  std::optional<int> k_squared;
  std::optional<int> singular_fibers;  // conic bundles only
  std::optional<int> picard_rank;
};

MfsInvariants mfs_invariants(const MfsModel& x);

// Point of the base P^1 over which a type II conic-bundle link is centered.
struct FiberCenter {
  enum class Kind { Polynomial, Infinity, Symbolic };
  Kind kind = Kind::Symbolic;
  std::optional<Polynomial> poly;  // monic minimal polynomial of the base point orbit
  std::string id;                  // Symbolic only

  static FiberCenter polynomial(const Polynomial& f);
  static FiberCenter infinity();
  static FiberCenter symbolic(std::string id);

  unsigned degree() const;  // orbit size on the base (symbolic: 0 = unknown)
  std::string key() const;
};

enum class CenterRelation { Same, Distinct, Undecidable };
CenterRelation compare_centers(const FiberCenter& a, const FiberCenter& b);

// Base orbit of a link. `label` names the orbit as a point of the surface so
// that a link and its inverse can be recognized; the coordinates are optional.
struct BaseOrbit {
  unsigned size = 0;
  std::string label;
  std::optional<PointOrbit> orbit;
};

enum class LinkType { I, II, III, IV };
std::string link_type_name(LinkType t);
LinkType parse_link_type(const std::string& s);

struct SarkisovLink {
  LinkType type = LinkType::II;
  MfsModel source;
  MfsModel target;
  std::optional<BaseOrbit> orbit_src;  // blown up on the source
  std::optional<BaseOrbit> orbit_tgt;  // blown up on the target by the inverse
  std::optional<FiberCenter> fiber_center;
  unsigned depth = 0;
  bool singular_fiber_free = true;  // declared: no base point on a singular fiber

  SarkisovLink inverse() const;
  bool is_conic_bundle_type2() const;
};

unsigned galois_depth(const SarkisovLink& l);
unsigned galois_depth(const std::vector<SarkisovLink>& w);

struct LinkVerdict {
  bool ok = true;
  std::string rule;    // empty when ok
  std::string detail;
  bool necessary_conditions_only = false;  // del Pezzo edges
};

LinkVerdict link_validate(const SarkisovLink& l);

enum class CbFamily { Hirzebruch, DP5, DP6 };

struct ConicBundleClassKey {
  CbFamily family = CbFamily::Hirzebruch;
  std::string id;  // orbit class key (empty for Hirzebruch)
  std::string str() const;
  friend bool operator==(const ConicBundleClassKey& a, const ConicBundleClassKey& b) { return a.str() == b.str(); }
};

ConicBundleClassKey cb_class_key(const MfsModel& x);
ConicBundleClassKey parse_class_key(const std::string& s);

struct TenCurveIncidence {
  char config = 'a';
  std::vector<std::string> curves;  // E1..E4, E12, E13, E14, E23, E24, E34
  std::vector<std::vector<bool>> meets;
  std::array<std::pair<std::string, std::string>, 3> vertical_pairs;

  size_t index(const std::string& curve) const;
  bool intersects(const std::string& a, const std::string& b) const;
  std::vector<std::string> neighbours(const std::string& curve) const;
};

TenCurveIncidence dp5_incidence(char config);

}  // namespace cremona
