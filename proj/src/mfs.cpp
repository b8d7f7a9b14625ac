#include "cremona/mfs.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace cremona {
namespace {

Tri position_of(const std::vector<PointOrbit>& orbits) {
  const FieldSpec& k = orbits.front().field;
  if (k.is_finite()) return general_position_check(orbits).general ? Tri::Yes : Tri::No;
  if (orbits.size() == 1) {
    const auto& o = orbits.front();
    return o.general_position;
  }
  // Several orbits over Q: all on the conic y^2 = xz with distinct parameters.
  for (const auto& o : orbits) {
    if (o.kind != OrbitTemplate::ConicForm) return Tri::Unknown;
  }
  for (size_t i = 0; i < orbits.size(); ++i)
    for (size_t j = i + 1; j < orbits.size(); ++j) {
      if (!coprime(orbits[i].min_poly, orbits[j].min_poly)) return Tri::No;
    }
  return Tri::Yes;
}

void require_general(const std::vector<PointOrbit>& orbits) {
  for (const auto& o : orbits) {
    if (!(o.field == orbits.front().field)) fail("IncompatibleFields", "defining orbits over different fields");
  }
  Tri t = position_of(orbits);
  if (t == Tri::No) fail("NotGeneralPosition", "defining points have three on a line");
  if (t == Tri::Unknown) fail("NotGeneralPosition", "general position of the defining points cannot be certified");
}

int k_squared(const MfsModel& x) {
  switch (x.kind) {
    case MfsKind::ProjectivePlane:
      return 9;
    case MfsKind::Hirzebruch:
      return 8;
    case MfsKind::ConicBundle5:
      return 5;
    case MfsKind::ConicBundle6:
      return 6;
    case MfsKind::DelPezzo:
      return static_cast<int>(x.n);
    case MfsKind::NonRationalCB:
      return 0;
  }
  return 0;
}

LinkVerdict violation(std::string rule, std::string detail) {
  LinkVerdict v;
  v.ok = false;
  v.rule = std::move(rule);
  v.detail = std::move(detail);
  return v;
}

bool same_family(const MfsModel& a, const MfsModel& b) { return a.kind == b.kind; }

}  // namespace

// ----------------------------------------------------------------- models

unsigned MfsModel::base_dim() const {
  return kind == MfsKind::ProjectivePlane || kind == MfsKind::DelPezzo ? 0 : 1;
}

std::string mfs_kind_name(MfsKind k) {
  switch (k) {
    case MfsKind::ProjectivePlane:
      return "P2";
    case MfsKind::Hirzebruch:
      return "hirzebruch";
    case MfsKind::ConicBundle5:
      return "cb5";
    case MfsKind::ConicBundle6:
      return "cb6";
    case MfsKind::DelPezzo:
      return "dp";
    case MfsKind::NonRationalCB:
      return "nrcb";
  }
  return "?";
}

MfsKind parse_mfs_kind(const std::string& name) {
  for (auto k : {MfsKind::ProjectivePlane, MfsKind::Hirzebruch, MfsKind::ConicBundle5, MfsKind::ConicBundle6,
                 MfsKind::DelPezzo, MfsKind::NonRationalCB}) {
    if (mfs_kind_name(k) == name) return k;
  }
  fail("ParseError", "unknown Mori fiber space kind \"" + name + "\"");
}

std::string MfsModel::name() const {
  switch (kind) {
    case MfsKind::ProjectivePlane:
      return "P2";
    case MfsKind::Hirzebruch:
      return "F" + std::to_string(n);
    case MfsKind::ConicBundle5:
      return "CB5";
    case MfsKind::ConicBundle6:
      return "CB6";
    case MfsKind::DelPezzo:
      return "DP" + std::to_string(n);
    case MfsKind::NonRationalCB:
      return "NRCB";
  }
  return "?";
}

std::string MfsModel::key() const {
  std::string s = mfs_kind_name(kind);
  if (kind == MfsKind::Hirzebruch && negative && n != 0) s += "-";
  if (kind == MfsKind::Hirzebruch || kind == MfsKind::DelPezzo) s += std::to_string(n);
  for (const auto& o : orbits) s += "{" + o.key() + "}";
  if (!label.empty()) s += "#" + label;
  return s;
}

MfsModel projective_plane(std::string label) {
  MfsModel m;
  m.kind = MfsKind::ProjectivePlane;
  m.label = std::move(label);
  return m;
}

MfsModel hirzebruch(unsigned n, std::string label) {
  MfsModel m;
  m.kind = MfsKind::Hirzebruch;
  m.n = n;
  m.label = std::move(label);
  return m;
}

MfsModel hirzebruch_signed(int signed_index, std::string label) {
  MfsModel m = hirzebruch(static_cast<unsigned>(std::abs(signed_index)), std::move(label));
  m.negative = signed_index < 0;
  return m;
}

MfsModel conic_bundle5(const PointOrbit& orbit, std::string label) {
  if (orbit.size != 4 || orbit.kind == OrbitTemplate::SplitLinePair) {
    fail("InvalidOrbit", "a degree-5 conic bundle needs one orbit of size 4");
  }
  if (orbit.field.is_finite() && frobenius_cycle_type({orbit}) != std::vector<unsigned>{4}) {
    fail("InvalidOrbit", "the four points do not form a single Galois orbit");
  }
  require_general({orbit});
  MfsModel m;
  m.kind = MfsKind::ConicBundle5;
  m.orbits = {orbit};
  m.label = std::move(label);
  return m;
}

MfsModel conic_bundle6(std::vector<PointOrbit> orbits, std::string label) {
  bool split = orbits.size() == 1 && orbits.front().kind == OrbitTemplate::SplitLinePair;
  bool pair = orbits.size() == 2 && orbits[0].size == 2 && orbits[1].size == 2;
  if (!split && !pair) fail("InvalidOrbit", "a degree-6 conic bundle needs two orbits of size 2");
  if (orbits.front().field.is_finite() && frobenius_cycle_type(orbits) != std::vector<unsigned>{2, 2}) {
    fail("InvalidOrbit", "the four points do not form two Galois orbits of size 2");
  }
  require_general(orbits);
  MfsModel m;
  m.kind = MfsKind::ConicBundle6;
  m.orbits = std::move(orbits);
  m.label = std::move(label);
  return m;
}

MfsModel del_pezzo(unsigned degree, std::string label) {
  if (degree < 1 || degree > 9) fail("InvalidArgument", "del Pezzo degree must be in 1..9");
  MfsModel m;
  m.kind = MfsKind::DelPezzo;
  m.n = degree;
  m.label = std::move(label);
  return m;
}

MfsModel non_rational_cb(std::string label) {
  MfsModel m;
  m.kind = MfsKind::NonRationalCB;
  m.label = std::move(label);
  return m;
}

MfsInvariants mfs_invariants(const MfsModel& x) {
  MfsInvariants inv;
  if (x.kind == MfsKind::NonRationalCB) {
    inv.rational = false;
    return inv;
  }
  inv.k_squared = k_squared(x);
  if (x.base_dim() == 1) {
    inv.singular_fibers = 8 - *inv.k_squared;
    inv.picard_rank = 2;
  } else {
    inv.picard_rank = 1;
  }
  return inv;
}

// ----------------------------------------------------------------- centers

FiberCenter FiberCenter::polynomial(const Polynomial& f) {
  if (f.degree() < 1) fail("InvalidArgument", "fiber center polynomial must be nonconstant");
  FiberCenter c;
  c.kind = Kind::Polynomial;
  c.poly = f.monic();
  return c;
}

FiberCenter FiberCenter::infinity() {
  FiberCenter c;
  c.kind = Kind::Infinity;
  return c;
}

FiberCenter FiberCenter::symbolic(std::string id) {
  if (id.empty()) fail("InvalidArgument", "symbolic fiber center needs an id");
  FiberCenter c;
  c.kind = Kind::Symbolic;
  c.id = std::move(id);
  return c;
}

unsigned FiberCenter::degree() const {
  switch (kind) {
    case Kind::Polynomial:
      return static_cast<unsigned>(poly->degree());
    case Kind::Infinity:
      return 1;
    case Kind::Symbolic:
      return 0;
  }
  return 0;
}

std::string FiberCenter::key() const {
  switch (kind) {
    case Kind::Polynomial:
      return "poly:" + poly->field().name() + ":" + poly->to_string('t');
    case Kind::Infinity:
      return "inf";
    case Kind::Symbolic:
      return "sym:" + id;
  }
  return "?";
}

CenterRelation compare_centers(const FiberCenter& a, const FiberCenter& b) {
  using K = FiberCenter::Kind;
  if (a.kind == K::Symbolic || b.kind == K::Symbolic) {
    if (a.kind == K::Symbolic && b.kind == K::Symbolic) {
      return a.id == b.id ? CenterRelation::Same : CenterRelation::Distinct;
    }
    return CenterRelation::Undecidable;
  }
  if (a.kind == K::Infinity || b.kind == K::Infinity) {
    return a.kind == b.kind ? CenterRelation::Same : CenterRelation::Distinct;
  }
  if (!(a.poly->field() == b.poly->field())) return CenterRelation::Undecidable;
  if (*a.poly == *b.poly) return CenterRelation::Same;
  return coprime(*a.poly, *b.poly) ? CenterRelation::Distinct : CenterRelation::Undecidable;
}

// ------------------------------------------------------------------- links

std::string link_type_name(LinkType t) {
  switch (t) {
    case LinkType::I:
      return "I";
    case LinkType::II:
      return "II";
    case LinkType::III:
      return "III";
    case LinkType::IV:
      return "IV";
  }
  return "?";
}

LinkType parse_link_type(const std::string& s) {
  if (s == "I") return LinkType::I;
  if (s == "II") return LinkType::II;
  if (s == "III") return LinkType::III;
  if (s == "IV") return LinkType::IV;
  fail("ParseError", "unknown link type \"" + s + "\"");
}

SarkisovLink SarkisovLink::inverse() const {
  SarkisovLink r = *this;
  std::swap(r.source, r.target);
  std::swap(r.orbit_src, r.orbit_tgt);
  if (type == LinkType::I) r.type = LinkType::III;
  if (type == LinkType::III) r.type = LinkType::I;
  return r;
}

bool SarkisovLink::is_conic_bundle_type2() const {
  return type == LinkType::II && source.base_dim() == 1 && target.base_dim() == 1 &&
         source.kind != MfsKind::NonRationalCB && target.kind != MfsKind::NonRationalCB;
}

unsigned galois_depth(const SarkisovLink& l) {
  if (l.type == LinkType::IV) return 0;
  unsigned d = 0;
  if (l.orbit_src) d = std::max(d, l.orbit_src->size);
  if (l.orbit_tgt) d = std::max(d, l.orbit_tgt->size);
  return d;
}

unsigned galois_depth(const std::vector<SarkisovLink>& w) {
  unsigned d = 0;
  for (const auto& l : w) d = std::max(d, galois_depth(l));
  return d;
}

LinkVerdict link_validate(const SarkisovLink& l) {
  const MfsModel& s = l.source;
  const MfsModel& t = l.target;
  const bool nonrational = s.kind == MfsKind::NonRationalCB || t.kind == MfsKind::NonRationalCB;
  if (nonrational) {
    if (l.type != LinkType::II || s.kind != t.kind) {
      return violation("nonrational", "non-rational conic bundles only admit type II links among themselves");
    }
    return {};
  }
  for (const auto* o : {&l.orbit_src, &l.orbit_tgt}) {
    if (*o && (*o)->orbit && (*o)->orbit->size != (*o)->size) {
      return violation("orbit-size", "declared orbit size differs from the orbit data");
    }
  }
  if (l.depth != galois_depth(l)) {
    return violation("depth-mismatch", "depth " + std::to_string(l.depth) + " but base orbits give " +
                                           std::to_string(galois_depth(l)));
  }
  const int ks = k_squared(s);
  const int kt = k_squared(t);
  const int src = l.orbit_src ? static_cast<int>(l.orbit_src->size) : 0;
  const int tgt = l.orbit_tgt ? static_cast<int>(l.orbit_tgt->size) : 0;

  switch (l.type) {
    case LinkType::I:
    case LinkType::III: {
      const bool forward = l.type == LinkType::I;
      const MfsModel& point_side = forward ? s : t;
      const MfsModel& curve_side = forward ? t : s;
      const int blown = forward ? src : tgt;
      const bool other_side = forward ? l.orbit_tgt.has_value() : l.orbit_src.has_value();
      if (point_side.base_dim() != 0 || curve_side.base_dim() != 1) {
        return violation("base-dim", "type I goes from a surface over a point to a conic bundle");
      }
      if (blown < 1 || other_side) return violation("orbit-shape", "type I/III has exactly one blown-up orbit");
      if (blown > 8) return violation("orbit-bound", "a type I/III base orbit has at most 8 points");
      if (k_squared(curve_side) != k_squared(point_side) - blown) {
        return violation("k2-balance", "K^2 must drop by the orbit size");
      }
      if (point_side.kind == MfsKind::ProjectivePlane && curve_side.kind == MfsKind::Hirzebruch && curve_side.n != 1) {
        return violation("hirzebruch-index", "blowing up a point of P2 gives F1");
      }
      LinkVerdict v;
      v.necessary_conditions_only = point_side.kind == MfsKind::DelPezzo;
      return v;
    }
    case LinkType::II: {
      if (s.base_dim() != t.base_dim()) return violation("base-dim", "type II keeps the base dimension");
      if (s.base_dim() == 0) {
        if (src < 1 || tgt < 1) return violation("orbit-shape", "type II blows up an orbit on each side");
        if (src > 8 || tgt > 8) return violation("DP-orbit-bound", "del Pezzo type II orbits have at most 8 points");
        if (kt != ks - src + tgt) return violation("k2-balance", "K^2 changes by the difference of orbit sizes");
        LinkVerdict v;
        v.necessary_conditions_only = true;
        return v;
      }
      if (src < 1 || tgt < 1 || src != tgt) {
        return violation("cb-orbit-sizes", "conic-bundle type II links blow up equal-size orbits on both sides");
      }
      if (!same_family(s, t) || ks != kt) return violation("cb-family", "type II preserves the conic-bundle family");
      if (!l.singular_fiber_free) return violation("singular-fiber", "a base point lies on a singular fiber");
      if (l.fiber_center && l.fiber_center->degree() != 0 && l.fiber_center->degree() != static_cast<unsigned>(src)) {
        return violation("center-degree", "the fiber center has degree " + std::to_string(l.fiber_center->degree()) +
                                              " but the orbit has " + std::to_string(src) + " points");
      }
      if (s.kind == MfsKind::Hirzebruch) {
        int m = static_cast<int>(t.n), n = static_cast<int>(s.n);
        if (std::abs(m - n) > src || (m - n - src) % 2 != 0) {
          return violation("hirzebruch-index", "F" + std::to_string(n) + " cannot reach F" + std::to_string(m) +
                                                   " with " + std::to_string(src) + " elementary transformations");
        }
      }
      // Check the declared attribute against coordinates when they exist.
      if ((s.kind == MfsKind::ConicBundle5 || s.kind == MfsKind::ConicBundle6) && l.orbit_src && l.orbit_src->orbit) {
        auto hit = collinear_with_base_pair(s.orbits, *l.orbit_src->orbit);
        if (hit && *hit) return violation("singular-fiber", "a base point lies on a line through two defining points");
      }
      return {};
    }
    case LinkType::IV: {
      if (s.kind != MfsKind::Hirzebruch || t.kind != MfsKind::Hirzebruch || s.n != 0 || t.n != 0) {
        return violation("type-iv", "the only type IV link between rational surfaces swaps the rulings of F0");
      }
      if (src || tgt) return violation("orbit-shape", "type IV links have no base points");
      return {};
    }
  }
  return {};
}

// ---------------------------------------------------------- class keys

std::string ConicBundleClassKey::str() const {
  switch (family) {
    case CbFamily::Hirzebruch:
      return "Hirzebruch";
    case CbFamily::DP5:
      return "DP5:" + id;
    case CbFamily::DP6:
      return "DP6:" + id;
  }
  return "?";
}

ConicBundleClassKey parse_class_key(const std::string& s) {
  ConicBundleClassKey k;
  if (s == "Hirzebruch") return k;
  if (s.rfind("DP5:", 0) == 0) {
    k.family = CbFamily::DP5;
  } else if (s.rfind("DP6:", 0) == 0) {
    k.family = CbFamily::DP6;
  } else {
    fail("ParseError", "unknown conic-bundle class key \"" + s + "\"");
  }
  k.id = s.substr(4);
  return k;
}

ConicBundleClassKey cb_class_key(const MfsModel& x) {
  if (x.kind == MfsKind::NonRationalCB) fail("NonRational", "non-rational conic bundles have no class key");
  if (x.base_dim() != 1) fail("InvalidArgument", x.name() + " is not a conic bundle");
  ConicBundleClassKey k;
  if (x.kind == MfsKind::Hirzebruch) return k;
  k.family = x.kind == MfsKind::ConicBundle5 ? CbFamily::DP5 : CbFamily::DP6;

  static std::mutex mu;
  static std::map<std::string, std::string> cache;
  std::string data;
  for (const auto& o : x.orbits) data += "{" + o.key() + "}";
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(data);
    if (it != cache.end()) {
      k.id = it->second;
      return k;
    }
  }
  k.id = orbit_set_class_key(x.orbits);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(data, k.id);
  return k;
}

// ------------------------------------------------------------ incidence

size_t TenCurveIncidence::index(const std::string& curve) const {
  auto it = std::find(curves.begin(), curves.end(), curve);
  if (it == curves.end()) fail("InvalidArgument", "unknown curve " + curve);
  return static_cast<size_t>(it - curves.begin());
}

bool TenCurveIncidence::intersects(const std::string& a, const std::string& b) const {
  return meets[index(a)][index(b)];
}

std::vector<std::string> TenCurveIncidence::neighbours(const std::string& curve) const {
  std::vector<std::string> out;
  size_t i = index(curve);
  for (size_t j = 0; j < curves.size(); ++j) {
    if (meets[i][j]) out.push_back(curves[j]);
  }
  return out;
}

TenCurveIncidence dp5_incidence(char config) {
  if (config != 'a' && config != 'b') fail("InvalidArgument", "configuration is a or b");
  TenCurveIncidence inc;
  inc.config = config;
  const std::vector<std::pair<int, int>> pairs = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  for (int k = 1; k <= 4; ++k) inc.curves.push_back("E" + std::to_string(k));
  for (auto [i, j] : pairs) inc.curves.push_back("E" + std::to_string(i) + std::to_string(j));
  inc.meets.assign(10, std::vector<bool>(10, false));
  auto link = [&](size_t a, size_t b) { inc.meets[a][b] = inc.meets[b][a] = true; };
  for (int k = 1; k <= 4; ++k) {
    for (size_t v = 0; v < pairs.size(); ++v) {
      bool contains = pairs[v].first == k || pairs[v].second == k;
      if (contains == (config == 'a')) link(static_cast<size_t>(k - 1), 4 + v);
    }
  }
  // Components of one singular fiber meet each other.
  inc.vertical_pairs = {{{"E12", "E34"}, {"E13", "E24"}, {"E14", "E23"}}};
  for (const auto& [a, b] : inc.vertical_pairs) link(inc.index(a), inc.index(b));
  return inc;
}

}  // namespace cremona
