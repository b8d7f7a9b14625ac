#include "cremona/orbits.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "cremona/parallel.hpp"
#include "field_embedding.hpp"

namespace cremona {
namespace {

using detail::canonical_field;
using detail::Embedding;

constexpr u64 kTableLimit = 1ULL << 20;

u128 power_u128(u64 p, unsigned e) {
  u128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    r *= p;
    if (r > (static_cast<u128>(1) << 64)) return r;
  }
  return r;
}

u64 det3(const FiniteField& k, const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) {
  auto m = [&](u64 x, u64 y) { return k.mul(x, y); };
  u64 t1 = m(a[0], k.sub(m(b[1], c[2]), m(b[2], c[1])));
  u64 t2 = m(a[1], k.sub(m(b[0], c[2]), m(b[2], c[0])));
  u64 t3 = m(a[2], k.sub(m(b[0], c[1]), m(b[1], c[0])));
  return k.add(k.sub(t1, t2), t3);
}

u64 det_mat(const FiniteField& k, const Mat3& a) {
  return det3(k, {a[0], a[1], a[2]}, {a[3], a[4], a[5]}, {a[6], a[7], a[8]});
}

Mat3 mat_mul(const FiniteField& k, const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      u64 s = 0;
      for (int l = 0; l < 3; ++l) s = k.add(s, k.mul(a[3 * i + l], b[3 * l + j]));
      r[3 * i + j] = s;
    }
  }
  return r;
}

std::optional<Mat3> mat_inv(const FiniteField& k, const Mat3& a) {
  u64 d = det_mat(k, a);
  if (d == 0) return std::nullopt;
  u64 di = k.inv(d);
  Mat3 r{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // cofactor of (j, i)
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      u64 cof = k.sub(k.mul(a[3 * r0 + c0], a[3 * r1 + c1]), k.mul(a[3 * r0 + c1], a[3 * r1 + c0]));
      r[3 * i + j] = k.mul(cof, di);
    }
  }
  return r;
}

ProjPoint mat_vec(const FiniteField& k, const Mat3& a, const ProjPoint& v) {
  ProjPoint r{};
  for (int i = 0; i < 3; ++i) {
    u64 s = 0;
    for (int l = 0; l < 3; ++l) s = k.add(s, k.mul(a[3 * i + l], v[l]));
    r[i] = s;
  }
  return r;
}

Mat3 normalize_matrix(const FiniteField& k, Mat3 a) {
  for (u64 x : a) {
    if (x != 0) {
      u64 inv = k.inv(x);
      for (auto& y : a) y = k.mul(y, inv);
      break;
    }
  }
  return a;
}

ProjPoint frobenius_point(const FiniteField& k, const ProjPoint& p, u64 q) {
  return {k.pow(p[0], static_cast<u128>(q)), k.pow(p[1], static_cast<u128>(q)), k.pow(p[2], static_cast<u128>(q))};
}

// Matrix sending e1, e2, e3, (1,1,1) to the four given points (up to scalars).
std::optional<Mat3> frame_matrix(const FiniteField& k, const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                                 const ProjPoint& d) {
  Mat3 cols{a[0], b[0], c[0], a[1], b[1], c[1], a[2], b[2], c[2]};
  auto inv = mat_inv(k, cols);
  if (!inv) return std::nullopt;
  ProjPoint lam = mat_vec(k, *inv, d);
  if (lam[0] == 0 || lam[1] == 0 || lam[2] == 0) return std::nullopt;
  Mat3 m{};
  for (int i = 0; i < 3; ++i) {
    m[3 * i + 0] = k.mul(cols[3 * i + 0], lam[0]);
    m[3 * i + 1] = k.mul(cols[3 * i + 1], lam[1]);
    m[3 * i + 2] = k.mul(cols[3 * i + 2], lam[2]);
  }
  return m;
}

bool frobenius_fixed(const FiniteField& k, const Mat3& a, u64 q) {
  for (u64 x : a) {
    if (k.pow(x, static_cast<u128>(q)) != x) return false;
  }
  return true;
}

std::vector<ProjPoint> image_set(const FiniteField& k, const Mat3& a, const std::vector<ProjPoint>& pts) {
  std::vector<ProjPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(normalize_point(k, mat_vec(k, a, p)));
  std::sort(out.begin(), out.end());
  return out;
}

std::string points_string(const FiniteField& k, const std::vector<ProjPoint>& pts) {
  std::string s;
  for (const auto& p : pts) s += point_string(k, p);
  return s;
}

void require_irreducible(const Polynomial& f, bool allow_unverified) {
  auto cert = irreducible_check(f);
  if (cert.verdict == IrreducibilityCertificate::Verdict::Reducible) {
    fail("NotIrreducible", f.to_string() + " has the factor " + cert.witness->to_string());
  }
  if (cert.verdict == IrreducibilityCertificate::Verdict::Unverified && !allow_unverified) {
    fail("NotIrreducible", "irreducibility of " + f.to_string() + " is unverified; pass the override to accept it");
  }
}

// Maps a base-field element set into the realization field and back.
struct BaseMap {
  std::vector<u64> forward;                // base element -> ext element
  std::unordered_map<u64, u64> backward;  // ext element -> base element
};

BaseMap base_map(const FiniteField& base, const FiniteField& ext) {
  if (base.order() > kTableLimit) fail("ScaleExceeded", "base field too large for element tables");
  Embedding e(base, ext);
  BaseMap m;
  const auto q = static_cast<u64>(base.order());
  m.forward.resize(q);
  for (u64 x = 0; x < q; ++x) {
    m.forward[x] = e(x);
    m.backward.emplace(m.forward[x], x);
  }
  return m;
}

unsigned splitting_degree(const PointOrbit& o) {
  switch (o.kind) {
    case OrbitTemplate::ConicForm:
    case OrbitTemplate::LineAtInfinity:
      return static_cast<unsigned>(o.min_poly.degree()) * o.field.degree();
    case OrbitTemplate::SplitLinePair:
      return std::lcm(static_cast<unsigned>(o.min_poly.degree()), static_cast<unsigned>(o.second_poly->degree())) *
             o.field.degree();
    case OrbitTemplate::Explicit:
      return o.coord_field.degree();
  }
  return 1;
}

std::vector<ProjPoint> realize_one(const PointOrbit& o, const FiniteField& ext, const Embedding& from_base) {
  auto roots_of = [&](const Polynomial& f) {
    FPoly mapped;
    for (u64 c : f.f_coeffs()) mapped.push_back(from_base(c));
    return roots_in(ext, mapped);
  };
  std::vector<ProjPoint> pts;
  switch (o.kind) {
    case OrbitTemplate::ConicForm:
      for (u64 a : roots_of(o.min_poly)) pts.push_back({1, a, ext.mul(a, a)});
      break;
    case OrbitTemplate::LineAtInfinity:
      for (u64 a : roots_of(o.min_poly)) pts.push_back({0, 1, a});
      break;
    case OrbitTemplate::SplitLinePair:
      for (u64 a : roots_of(o.min_poly)) pts.push_back({1, a, 0});
      for (u64 b : roots_of(*o.second_poly)) pts.push_back({1, 0, b});
      break;
    case OrbitTemplate::Explicit: {
      auto cf = o.coord_field.finite_field();
      Embedding e(*cf, ext);
      for (const auto& p : o.points) pts.push_back(normalize_point(ext, {e(p[0]), e(p[1]), e(p[2])}));
      break;
    }
  }
  return pts;
}

Tri compute_position(const PointOrbit& o) {
  if (o.size < 3) return Tri::Yes;
  if (!o.field.is_finite()) {
    switch (o.kind) {
      case OrbitTemplate::ConicForm:
      case OrbitTemplate::SplitLinePair:
        return Tri::Yes;
      case OrbitTemplate::LineAtInfinity:
        return Tri::No;
      case OrbitTemplate::Explicit:
        return Tri::Unknown;
    }
  }
  if (o.kind == OrbitTemplate::LineAtInfinity) return Tri::No;
  if (power_u128(o.field.p, splitting_degree(o)) > kTableLimit) {
    // Too large to realize; the normal forms settle it.
    return o.kind == OrbitTemplate::Explicit ? Tri::Unknown : Tri::Yes;
  }
  return general_position_check({o}).general ? Tri::Yes : Tri::No;
}

// Ordered general-position frame test: is there an F_q-rational A with A S = T?
bool frames_equivalent(const FiniteField& k, u64 q, const std::vector<ProjPoint>& s, const std::vector<ProjPoint>& t) {
  if (s.size() != t.size()) return false;
  const size_t n = s.size();
  if (n < 4) fail("ScaleExceeded", "frame normalization needs at least four points");
  std::optional<Mat3> ms_inv;
  for (size_t a = 0; a < n && !ms_inv; ++a)
    for (size_t b = a + 1; b < n && !ms_inv; ++b)
      for (size_t c = b + 1; c < n && !ms_inv; ++c)
        for (size_t d = c + 1; d < n && !ms_inv; ++d) {
          auto m = frame_matrix(k, s[a], s[b], s[c], s[d]);
          if (m) ms_inv = mat_inv(k, *m);
        }
  if (!ms_inv) fail("ScaleExceeded", "frame normalization needs four points in general position");
  // Every ordered frame of T is a candidate image of the fixed frame of S.
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (size_t c = 0; c < n; ++c)
        for (size_t d = 0; d < n; ++d) {
          if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
          auto mt = frame_matrix(k, t[a], t[b], t[c], t[d]);
          if (!mt) continue;
          Mat3 m = normalize_matrix(k, mat_mul(k, *mt, *ms_inv));
          if (!frobenius_fixed(k, m, q)) continue;
          if (image_set(k, m, s) == t) return true;
        }
  return false;
}

}  // namespace

// ------------------------------------------------------------------ names

std::string template_name(OrbitTemplate t) {
  switch (t) {
    case OrbitTemplate::ConicForm:
      return "conic";
    case OrbitTemplate::SplitLinePair:
      return "split";
    case OrbitTemplate::LineAtInfinity:
      return "line";
    case OrbitTemplate::Explicit:
      return "explicit";
  }
  return "?";
}

OrbitTemplate parse_template(const std::string& name) {
  if (name == "conic") return OrbitTemplate::ConicForm;
  if (name == "split") return OrbitTemplate::SplitLinePair;
  if (name == "line") return OrbitTemplate::LineAtInfinity;
  if (name == "explicit") return OrbitTemplate::Explicit;
  fail("ParseError", "unknown orbit template \"" + name + "\"");
}

std::string tri_name(Tri t) {
  switch (t) {
    case Tri::Yes:
      return "yes";
    case Tri::No:
      return "no";
    case Tri::Unknown:
      return "unknown";
  }
  return "?";
}

ProjPoint normalize_point(const FiniteField& k, ProjPoint p) {
  for (int i = 0; i < 3; ++i) {
    if (p[i] != 0) {
      u64 inv = k.inv(p[i]);
      for (int j = i; j < 3; ++j) p[j] = k.mul(p[j], inv);
      return p;
    }
  }
  fail("InvalidPoint", "the zero vector is not a projective point");
}

std::string point_string(const FiniteField& k, const ProjPoint& p) {
  return "[" + k.to_string(p[0]) + ":" + k.to_string(p[1]) + ":" + k.to_string(p[2]) + "]";
}

std::string PointOrbit::key() const {
  std::string s = std::to_string(size) + "|" + template_name(kind) + "|" + field.name() + "|";
  if (kind == OrbitTemplate::Explicit) {
    auto cf = coord_field.finite_field();
    return s + coord_field.name() + "|" + points_string(*cf, points);
  }
  s += min_poly.monic().to_string();
  if (second_poly) s += "|" + second_poly->monic().to_string();
  return s;
}

// ------------------------------------------------------------ construction

PointOrbit orbit_from_poly(const FieldSpec& field, const Polynomial& f, OrbitTemplate kind, bool allow_unverified) {
  if (!(f.field() == field)) fail("IncompatibleFields", "polynomial is over " + f.field().name() + ", not " + field.name());
  if (kind == OrbitTemplate::SplitLinePair) fail("DegreeMismatch", "the split form needs two quadratic polynomials");
  if (kind == OrbitTemplate::Explicit) fail("InvalidArgument", "explicit orbits are built from coordinates");
  if (f.degree() < 1) fail("DegreeMismatch", "orbit polynomial must be nonconstant");
  require_irreducible(f, allow_unverified);
  PointOrbit o;
  o.field = field;
  o.kind = kind;
  o.min_poly = f.monic();
  o.size = static_cast<unsigned>(f.degree());
  o.general_position = compute_position(o);
  return o;
}

PointOrbit split_orbit(const FieldSpec& field, const Polynomial& f1, const Polynomial& f2, bool allow_unverified) {
  if (!(f1.field() == field) || !(f2.field() == field)) fail("IncompatibleFields", "polynomials must be over " + field.name());
  if (f1.degree() != 2 || f2.degree() != 2) fail("DegreeMismatch", "the split form needs two quadratic polynomials");
  require_irreducible(f1, allow_unverified);
  require_irreducible(f2, allow_unverified);
  PointOrbit o;
  o.field = field;
  o.kind = OrbitTemplate::SplitLinePair;
  o.min_poly = f1.monic();
  o.second_poly = f2.monic();
  o.size = 4;
  o.general_position = compute_position(o);
  return o;
}

PointOrbit mirror_pair(const FieldSpec& field, const Polynomial& f, bool allow_unverified) {
  return split_orbit(field, f, f, allow_unverified);
}

PointOrbit explicit_orbit(const FieldSpec& base, const FieldSpec& coord_field, std::vector<ProjPoint> points) {
  if (!base.is_finite() || !coord_field.is_finite()) fail("UncomputableOverQ", "explicit coordinates need finite fields");
  if (base.p != coord_field.p || coord_field.degree() % base.degree() != 0) {
    fail("IncompatibleFields", coord_field.name() + " does not contain " + base.name());
  }
  auto k = coord_field.finite_field();
  for (auto& p : points) {
    for (u64 c : p) {
      if (!k->contains(c)) fail("InvalidPoint", "coordinate outside " + coord_field.name());
    }
    p = normalize_point(*k, p);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty()) fail("InvalidArgument", "an orbit needs at least one point");
  const auto q = static_cast<u64>(base.order());
  for (const auto& p : points) {
    auto img = normalize_point(*k, frobenius_point(*k, p, q));
    if (!std::binary_search(points.begin(), points.end(), img)) {
      fail("NotGaloisStable", "Frobenius image of " + point_string(*k, p) + " is missing");
    }
  }
  PointOrbit o;
  o.field = base;
  o.kind = OrbitTemplate::Explicit;
  o.coord_field = coord_field;
  FieldSpec prime = FieldSpec::prime(coord_field.p);
  if (coord_field.kind == FieldSpec::Kind::FiniteExtension) {
    o.min_poly = Polynomial::finite(prime, coord_field.modulus);
  } else {
    o.min_poly = Polynomial::finite(prime, {0, 1});
  }
  o.points = std::move(points);
  o.size = static_cast<unsigned>(o.points.size());
  o.general_position = compute_position(o);
  return o;
}

// ------------------------------------------------------------- realization

RealizedPoints realize(const std::vector<PointOrbit>& orbits) {
  if (orbits.empty()) fail("InvalidArgument", "no orbits given");
  const FieldSpec& base = orbits.front().field;
  for (const auto& o : orbits) {
    if (!(o.field == base)) fail("IncompatibleFields", "orbits over " + o.field.name() + " and " + base.name());
  }
  if (!base.is_finite()) fail("UncomputableOverQ", "explicit coordinates over Q are not computed");
  const u64 p = base.p;
  unsigned degree = base.degree();
  for (const auto& o : orbits) degree = std::lcm(degree, splitting_degree(o));
  if (power_u128(p, degree) > (static_cast<u128>(1) << 62)) fail("ScaleExceeded", "common extension too large");
  FieldSpec big = canonical_field(p, degree);
  auto ext = big.finite_field();
  auto base_ff = base.finite_field();
  Embedding from_base(*base_ff, *ext);

  RealizedPoints r;
  r.base_order = static_cast<u64>(base.order());
  for (size_t i = 0; i < orbits.size(); ++i) {
    auto pts = realize_one(orbits[i], *ext, from_base);
    for (size_t j = 0; j < pts.size(); ++j) {
      r.points.push_back(pts[j]);
      r.origin.emplace_back(i, j);
    }
  }

  // Shrink to the smallest field of definition so coordinates are canonical.
  unsigned need = base.degree();
  for (const auto& pt : r.points) {
    unsigned len = 0;
    ProjPoint cur = pt;
    do {
      cur = normalize_point(*ext, frobenius_point(*ext, cur, r.base_order));
      ++len;
    } while (cur != pt);
    need = std::lcm(need, len * base.degree());
  }
  if (need < degree && power_u128(p, need) <= kTableLimit) {
    FieldSpec small = canonical_field(p, need);
    auto sk = small.finite_field();
    Embedding down(*sk, *ext);
    std::unordered_map<u64, u64> back;
    for (u64 x = 0; x < static_cast<u64>(sk->order()); ++x) back.emplace(down(x), x);
    for (auto& pt : r.points) {
      for (auto& c : pt) c = back.at(c);
    }
    r.field = small;
    r.ext = sk;
  } else {
    r.field = big;
    r.ext = ext;
  }
  return r;
}

PositionVerdict general_position_check(const std::vector<PointOrbit>& orbits) {
  PositionVerdict v;
  if (orbits.empty()) return v;
  if (!orbits.front().field.is_finite()) {
    if (orbits.size() != 1) fail("UncomputableOverQ", "over Q only a single normal-form orbit can be checked");
    const auto& o = orbits.front();
    if (o.kind == OrbitTemplate::Explicit) fail("UncomputableOverQ", "explicit coordinates over Q are rejected");
    if (o.kind == OrbitTemplate::LineAtInfinity && o.size >= 3) {
      v.general = false;
      v.witness = {0, 1, 2};
      for (int i = 1; i <= 3; ++i) v.witness_points.push_back("[0:1:r" + std::to_string(i) + "]");
    }
    return v;
  }
  auto r = realize(orbits);
  const auto& k = *r.ext;
  const size_t n = r.points.size();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b)
      for (size_t c = b + 1; c < n; ++c) {
        if (det3(k, r.points[a], r.points[b], r.points[c]) == 0) {
          v.general = false;
          v.witness = {a, b, c};
          v.witness_points = {point_string(k, r.points[a]), point_string(k, r.points[b]), point_string(k, r.points[c])};
          return v;
        }
      }
  return v;
}

std::optional<bool> collinear_with_base_pair(const std::vector<PointOrbit>& base, const PointOrbit& other) {
  if (base.empty() || !base.front().field.is_finite()) return std::nullopt;
  if (!(other.field == base.front().field)) fail("IncompatibleFields", "orbits over different fields");
  if (other.kind == OrbitTemplate::LineAtInfinity) {
    // The line through p_j, p_k meets x = 0 in one point; test it against the orbit polynomial.
    auto r = realize(base);
    const auto& k = *r.ext;
    auto base_ff = other.field.finite_field();
    Embedding e(*base_ff, k);
    FPoly g;
    for (u64 c : other.min_poly.f_coeffs()) g.push_back(e(c));
    const auto& pts = r.points;
    for (size_t a = 0; a < pts.size(); ++a)
      for (size_t b = a + 1; b < pts.size(); ++b) {
        const auto& u = pts[a];
        const auto& v = pts[b];
        u64 l1 = k.sub(k.mul(u[2], v[0]), k.mul(u[0], v[2]));
        u64 l2 = k.sub(k.mul(u[0], v[1]), k.mul(u[1], v[0]));
        if (l2 == 0) {
          if (l1 == 0) return true;  // the line is x = 0 itself
          continue;
        }
        u64 root = k.neg(k.mul(l1, k.inv(l2)));
        if (up::eval(k, g, root) == 0) return true;
      }
    return false;
  }
  std::vector<PointOrbit> all = base;
  all.push_back(other);
  RealizedPoints r;
  try {
    r = realize(all);
  } catch (const Error& err) {
    if (err.kind() == "ScaleExceeded") return std::nullopt;
    throw;
  }
  const auto& k = *r.ext;
  size_t n_base = 0;
  for (const auto& o : base) n_base += o.size;
  for (size_t c = n_base; c < r.points.size(); ++c)
    for (size_t a = 0; a < n_base; ++a)
      for (size_t b = a + 1; b < n_base; ++b) {
        if (det3(k, r.points[a], r.points[b], r.points[c]) == 0) return true;
      }
  return false;
}

// ------------------------------------------------------------- enumeration

std::vector<PointOrbit> enumerate_point_orbits(u64 q, unsigned n) {
  if (n == 0) fail("InvalidArgument", "orbit size must be positive");
  FieldSpec base = FieldSpec::galois(q);
  const u128 big_q = power_u128(q, n);
  if (big_q > 4096) fail("ScaleExceeded", "q^n above 4096 (the plane over F_{q^n} would exceed 2^24 points)");
  const u64 Q = static_cast<u64>(big_q);
  FieldSpec coord = canonical_field(base.p, base.degree() * n);
  auto k = coord.finite_field();

  auto index_of = [Q](const ProjPoint& p) -> u64 {
    if (p[0] == 1) return p[1] * Q + p[2];
    if (p[1] == 1) return Q * Q + p[2];
    return Q * Q + Q;
  };
  const u64 total = Q * Q + Q + 1;
  std::vector<bool> seen(total, false);
  std::vector<PointOrbit> out;

  auto visit = [&](const ProjPoint& start) {
    u64 idx = index_of(start);
    if (seen[idx]) return;
    std::vector<ProjPoint> orbit;
    ProjPoint cur = start;
    do {
      seen[index_of(cur)] = true;
      orbit.push_back(cur);
      cur = normalize_point(*k, frobenius_point(*k, cur, q));
    } while (cur != start);
    if (orbit.size() != n) return;
    std::sort(orbit.begin(), orbit.end());
    PointOrbit o;
    o.field = base;
    o.kind = OrbitTemplate::Explicit;
    o.coord_field = coord;
    o.min_poly = coord.kind == FieldSpec::Kind::FiniteExtension
                     ? Polynomial::finite(FieldSpec::prime(coord.p), coord.modulus)
                     : Polynomial::finite(FieldSpec::prime(coord.p), {0, 1});
    o.points = std::move(orbit);
    o.size = n;
    out.push_back(std::move(o));
  };
  visit({0, 0, 1});
  for (u64 z = 0; z < Q; ++z) visit({0, 1, z});
  for (u64 y = 0; y < Q; ++y)
    for (u64 z = 0; z < Q; ++z) visit({1, y, z});

  std::sort(out.begin(), out.end(), [](const PointOrbit& a, const PointOrbit& b) { return a.points < b.points; });
  parallel_for(out.size(), [&](size_t i) { out[i].general_position = compute_position(out[i]); });
  return out;
}

// ---------------------------------------------------------- classification

const std::vector<Mat3>& pgl3_elements(const FieldSpec& base) {
  static std::mutex mu;
  static std::map<std::string, std::vector<Mat3>> cache;
  if (!base.is_finite()) fail("UnsupportedField", "PGL_3 enumeration needs a finite field");
  if (base.order() > 5) fail("ScaleExceeded", "exhaustive PGL_3 enumeration is limited to q <= 5");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(base.name());
  if (it != cache.end()) return it->second;
  auto k = base.finite_field();
  const auto q = static_cast<u64>(base.order());
  std::vector<Mat3> out;
  Mat3 m{};
  u64 total = 1;
  for (int i = 0; i < 9; ++i) total *= q;
  for (u64 code = 0; code < total; ++code) {
    u64 c = code;
    for (int i = 8; i >= 0; --i) {
      m[i] = c % q;
      c /= q;
    }
    int first = 0;
    while (first < 9 && m[first] == 0) ++first;
    if (first == 9 || m[first] != 1) continue;
    if (det_mat(*k, m) == 0) continue;
    out.push_back(m);
  }
  return cache.emplace(base.name(), std::move(out)).first->second;
}

PointOrbit apply_matrix(const PointOrbit& orbit, const Mat3& a) {
  auto r = realize({orbit});
  auto base_ff = orbit.field.finite_field();
  Embedding e(*base_ff, *r.ext);
  Mat3 m{};
  for (int i = 0; i < 9; ++i) m[i] = e(a[i]);
  if (det_mat(*r.ext, m) == 0) fail("InvalidArgument", "matrix is singular");
  return explicit_orbit(orbit.field, r.field, image_set(*r.ext, m, r.points));
}

std::vector<OrbitClass> pgl3_classify(const std::vector<PointOrbit>& orbits, u64 q, ClassFilter filter) {
  FieldSpec base = FieldSpec::galois(q);
  std::vector<PointOrbit> input;
  for (const auto& o : orbits) {
    if (!(o.field == base)) fail("IncompatibleFields", "orbit over " + o.field.name() + ", expected " + base.name());
    if (filter == ClassFilter::GeneralPositionOnly) {
      Tri gp = o.general_position == Tri::Unknown ? compute_position(o) : o.general_position;
      if (gp != Tri::Yes) continue;
    }
    input.push_back(o);
  }
  const size_t n = input.size();
  std::vector<RealizedPoints> real(n);
  parallel_for(n, [&](size_t i) {
    real[i] = realize({input[i]});
    std::sort(real[i].points.begin(), real[i].points.end());
  });
  auto set_key = [&](size_t i) { return real[i].field.name() + "|" + points_string(*real[i].ext, real[i].points); };
  auto less_member = [&](size_t a, size_t b) {
    if (real[a].points.size() != real[b].points.size()) return real[a].points.size() < real[b].points.size();
    return real[a].points < real[b].points;
  };

  std::vector<std::vector<size_t>> classes;
  std::vector<std::string> class_keys;
  if (q <= 5) {
    const auto& group = pgl3_elements(base);
    std::map<std::pair<std::string, std::vector<ProjPoint>>, size_t> index;
    for (size_t i = 0; i < n; ++i) index.emplace(std::make_pair(real[i].field.name(), real[i].points), i);
    std::vector<bool> done(n, false);
    std::map<std::string, std::vector<Mat3>> embedded;  // group per realization field
    auto base_ff = base.finite_field();
    for (size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const auto& k = *real[i].ext;
      auto fname = real[i].field.name();
      auto it = embedded.find(fname);
      if (it == embedded.end()) {
        Embedding e(*base_ff, k);
        std::vector<Mat3> g;
        g.reserve(group.size());
        for (const auto& a : group) {
          Mat3 m{};
          for (int j = 0; j < 9; ++j) m[j] = e(a[j]);
          g.push_back(m);
        }
        it = embedded.emplace(fname, std::move(g)).first;
      }
      std::vector<size_t> members;
      std::vector<ProjPoint> canonical = real[i].points;
      for (const auto& a : it->second) {
        auto img = image_set(k, a, real[i].points);
        if (img < canonical) canonical = img;
        auto hit = index.find({fname, img});
        if (hit != index.end() && !done[hit->second]) {
          done[hit->second] = true;
          members.push_back(hit->second);
        }
      }
      std::sort(members.begin(), members.end());
      classes.push_back(members);
      class_keys.push_back(base.name() + "|n" + std::to_string(canonical.size()) + "|" + points_string(k, canonical));
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      bool placed = false;
      for (auto& cls : classes) {
        size_t rep = cls.front();
        if (real[rep].field.name() != real[i].field.name()) continue;
        if (frames_equivalent(*real[i].ext, q, real[rep].points, real[i].points)) {
          cls.push_back(i);
          placed = true;
          break;
        }
      }
      if (!placed) classes.push_back({i});
    }
    for (auto& cls : classes) {
      size_t best = *std::min_element(cls.begin(), cls.end(), less_member);
      class_keys.push_back(base.name() + "|frame|" + set_key(best));
    }
  }

  std::vector<OrbitClass> out;
  for (size_t c = 0; c < classes.size(); ++c) {
    OrbitClass oc;
    size_t best = *std::min_element(classes[c].begin(), classes[c].end(), less_member);
    oc.representative = input[best];
    oc.members = classes[c].size();
    oc.member_indices = classes[c];
    oc.key = class_keys[c];
    out.push_back(std::move(oc));
  }
  std::sort(out.begin(), out.end(), [&](const OrbitClass& a, const OrbitClass& b) {
    return less_member(a.member_indices.empty() ? 0 : *std::min_element(a.member_indices.begin(), a.member_indices.end(), less_member),
                       b.member_indices.empty() ? 0 : *std::min_element(b.member_indices.begin(), b.member_indices.end(), less_member));
  });
  return out;
}

// ----------------------------------------------------------------- matching

std::vector<unsigned> frobenius_cycle_type(const std::vector<PointOrbit>& set) {
  auto r = realize(set);
  const auto& k = *r.ext;
  std::vector<bool> seen(r.points.size(), false);
  std::vector<unsigned> cycles;
  for (size_t i = 0; i < r.points.size(); ++i) {
    if (seen[i]) continue;
    unsigned len = 0;
    ProjPoint cur = r.points[i];
    do {
      auto it = std::find(r.points.begin(), r.points.end(), cur);
      if (it == r.points.end()) fail("NotGaloisStable", "point set is not Frobenius-stable");
      seen[it - r.points.begin()] = true;
      ++len;
      cur = normalize_point(k, frobenius_point(k, cur, r.base_order));
    } while (cur != r.points[i]);
    cycles.push_back(len);
  }
  std::sort(cycles.rbegin(), cycles.rend());
  return cycles;
}

namespace {

std::vector<Transform> match_impl(const std::vector<PointOrbit>& p, const std::vector<PointOrbit>& q, bool first_only) {
  if (p.empty() || q.empty()) fail("InvalidArgument", "both point sets must be nonempty");
  const FieldSpec& base = p.front().field;
  for (const auto& o : q) {
    if (!(o.field == base)) fail("IncompatibleFields", "point sets over different fields");
  }
  unsigned np = 0, nq = 0;
  for (const auto& o : p) np += o.size;
  for (const auto& o : q) nq += o.size;
  if (np != 4 || nq != 4) fail("InvalidArgument", "matching needs two sets of exactly four points");

  if (!base.is_finite()) {
    for (const auto* set : {&p, &q}) {
      if (set->size() != 1 || set->front().kind == OrbitTemplate::Explicit ||
          set->front().kind == OrbitTemplate::LineAtInfinity) {
        fail("UncomputableOverQ", "over Q only the conic and split normal forms are matched");
      }
    }
    if (p.front().key() != q.front().key()) return {};
    Transform t;
    t.field = base;
    t.entries = {"1", "0", "0", "0", "1", "0", "0", "0", "1"};
    t.labeling = {0, 1, 2, 3};
    return {t};
  }

  std::vector<PointOrbit> both = p;
  both.insert(both.end(), q.begin(), q.end());
  auto r = realize(both);
  const auto& k = *r.ext;
  std::vector<ProjPoint> pp(r.points.begin(), r.points.begin() + 4);
  std::vector<ProjPoint> qq(r.points.begin() + 4, r.points.end());
  for (const auto* set : {&pp, &qq}) {
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        for (int c = b + 1; c < 4; ++c) {
          if (det3(k, (*set)[a], (*set)[b], (*set)[c]) == 0) {
            fail("CollinearTriple", point_string(k, (*set)[a]) + " " + point_string(k, (*set)[b]) + " " +
                                        point_string(k, (*set)[c]) + " are collinear");
          }
        }
  }
  if (frobenius_cycle_type(p) != frobenius_cycle_type(q)) {
    fail("FingerprintMismatch", "Frobenius acts with different cycle types on the two sets");
  }
  auto m_p = frame_matrix(k, pp[0], pp[1], pp[2], pp[3]);
  auto m_p_inv = mat_inv(k, *m_p);
  auto base_ff = base.finite_field();
  BaseMap bm = base_map(*base_ff, k);
  std::vector<Transform> found;
  std::array<unsigned, 4> perm{0, 1, 2, 3};
  do {
    auto m_q = frame_matrix(k, qq[perm[0]], qq[perm[1]], qq[perm[2]], qq[perm[3]]);
    if (!m_q) continue;
    Mat3 a = normalize_matrix(k, mat_mul(k, *m_q, *m_p_inv));
    if (!frobenius_fixed(k, a, r.base_order)) continue;
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i) ok = normalize_point(k, mat_vec(k, a, pp[i])) == qq[perm[i]];
    if (!ok) continue;
    Transform t;
    t.field = base;
    for (int i = 0; i < 9; ++i) {
      t.packed[i] = bm.backward.at(a[i]);
      t.entries[i] = base_ff->to_string(t.packed[i]);
    }
    t.labeling = perm;
    found.push_back(t);
    if (first_only) break;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return found;
}

}  // namespace

std::optional<Transform> match_transform(const std::vector<PointOrbit>& p, const std::vector<PointOrbit>& q) {
  auto all = match_impl(p, q, true);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<Transform> match_all_transforms(const std::vector<PointOrbit>& p, const std::vector<PointOrbit>& q) {
  return match_impl(p, q, false);
}

std::string orbit_set_class_key(const std::vector<PointOrbit>& set) {
  if (set.empty()) fail("InvalidArgument", "empty point set");
  const FieldSpec& base = set.front().field;
  if (!base.is_finite()) {
    std::vector<std::string> keys;
    for (const auto& o : set) keys.push_back(o.key());
    std::sort(keys.begin(), keys.end());
    std::string s = "Q";
    for (const auto& x : keys) s += "{" + x + "}";
    return s;
  }
  auto r = realize(set);
  const auto& k = *r.ext;
  std::sort(r.points.begin(), r.points.end());
  const auto q = static_cast<u64>(base.order());
  if (q <= 5) {
    const auto& group = pgl3_elements(base);
    auto base_ff = base.finite_field();
    Embedding e(*base_ff, k);
    std::vector<ProjPoint> best = r.points;
    for (const auto& g : group) {
      Mat3 m{};
      for (int j = 0; j < 9; ++j) m[j] = e(g[j]);
      auto img = image_set(k, m, r.points);
      if (img < best) best = img;
    }
    return base.name() + "|n" + std::to_string(best.size()) + "|" + points_string(k, best);
  }
  // Larger q: match against a reference configuration of the same Frobenius type.
  if (r.points.size() == 4 && general_position_check(set).general) {
    auto type = frobenius_cycle_type(set);
    std::optional<PointOrbit> ref;
    auto base_ff = base.finite_field();
    if (type == std::vector<unsigned>{4}) {
      ref = orbit_from_poly(base, Polynomial::finite(base, smallest_irreducible(*base_ff, 4)), OrbitTemplate::ConicForm);
    } else if (type == std::vector<unsigned>{2, 2}) {
      ref = mirror_pair(base, Polynomial::finite(base, smallest_irreducible(*base_ff, 2)));
    }
    if (ref && match_transform(set, {*ref})) return base.name() + "|ref|" + ref->key();
  }
  return base.name() + "|set|" + r.field.name() + "|" + points_string(k, r.points);
}

PointOrbit large_orbit(const FieldSpec& field, unsigned delta, DegreeConstraint constraint) {
  if (delta == 0) fail("InvalidArgument", "orbit size bound must be positive");
  unsigned d = delta;
  if (constraint == DegreeConstraint::Odd && d % 2 == 0) ++d;
  if (!field.is_finite()) {
    QPoly f;
    if (d == 1) {
      f = {mpq_class(0), mpq_class(1)};
    } else {
      f.assign(d + 1, mpq_class(0));
      f[0] = -2;
      f[d] = 1;
    }
    return orbit_from_poly(field, Polynomial::rational(f), OrbitTemplate::ConicForm);
  }
  auto k = field.finite_field();
  return orbit_from_poly(field, Polynomial::finite(field, smallest_irreducible(*k, d)), OrbitTemplate::ConicForm);
}

// ------------------------------------------------------------------- Sym_4

std::string cycle_string(const Perm4& p) {
  std::string s;
  std::array<bool, 4> seen{};
  for (unsigned i = 0; i < 4; ++i) {
    if (seen[i] || p[i] == i) continue;
    s += "(";
    unsigned j = i;
    while (!seen[j]) {
      seen[j] = true;
      s += std::to_string(j + 1);
      j = p[j];
    }
    s += ")";
  }
  return s.empty() ? "()" : s;
}

namespace {

Perm4 compose(const Perm4& a, const Perm4& b) {  // a after b
  return {a[b[0]], a[b[1]], a[b[2]], a[b[3]]};
}

Perm4 inverse(const Perm4& a) {
  Perm4 r{};
  for (unsigned i = 0; i < 4; ++i) r[a[i]] = i;
  return r;
}

std::vector<Perm4> all_perms() {
  std::vector<Perm4> out;
  Perm4 p{0, 1, 2, 3};
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

unsigned perm_index(const Perm4& p) {
  static const auto perms = all_perms();
  return static_cast<unsigned>(std::find(perms.begin(), perms.end(), p) - perms.begin());
}

std::uint32_t closure(const std::vector<Perm4>& gens) {
  static const auto perms = all_perms();
  std::uint32_t mask = 1U << perm_index({0, 1, 2, 3});
  bool grew = true;
  while (grew) {
    grew = false;
    for (unsigned i = 0; i < 24; ++i) {
      if (!(mask & (1U << i))) continue;
      for (const auto& g : gens) {
        unsigned j = perm_index(compose(g, perms[i]));
        if (!(mask & (1U << j))) {
          mask |= 1U << j;
          grew = true;
        }
      }
    }
  }
  return mask;
}

Perm4 from_cycles(std::initializer_list<std::vector<unsigned>> cycles) {
  Perm4 p{0, 1, 2, 3};
  for (const auto& c : cycles) {
    for (size_t i = 0; i < c.size(); ++i) p[c[i] - 1] = c[(i + 1) % c.size()] - 1;
  }
  return p;
}

bool exchanges(const Perm4& g, unsigned a, unsigned b, unsigned c, unsigned d) {
  auto maps = [&](unsigned x, unsigned y, unsigned u, unsigned v) {
    return (g[x] == u && g[y] == v) || (g[x] == v && g[y] == u);
  };
  return maps(a, b, c, d) && maps(c, d, a, b);
}

}  // namespace

std::vector<Sym4Class> transitive_sym4_audit() {
  const auto perms = all_perms();
  // Every subgroup of Sym_4 is generated by at most two elements.
  std::vector<std::uint32_t> subgroups;
  for (const auto& a : perms)
    for (const auto& b : perms) {
      std::uint32_t m = closure({a, b});
      if (std::find(subgroups.begin(), subgroups.end(), m) == subgroups.end()) subgroups.push_back(m);
    }
  auto elements_of = [&](std::uint32_t m) {
    std::vector<Perm4> out;
    for (unsigned i = 0; i < 24; ++i) {
      if (m & (1U << i)) out.push_back(perms[i]);
    }
    return out;
  };
  auto transitive = [&](std::uint32_t m) {
    std::array<bool, 4> reach{};
    for (const auto& g : elements_of(m)) reach[g[0]] = true;
    return reach[0] && reach[1] && reach[2] && reach[3];
  };
  auto conjugacy_key = [&](std::uint32_t m) {
    std::uint32_t best = m;
    for (const auto& g : perms) {
      std::uint32_t c = 0;
      for (const auto& h : elements_of(m)) c |= 1U << perm_index(compose(compose(g, h), inverse(g)));
      best = std::min(best, c);
    }
    return best;
  };

  // Preferred representatives (generators as in the usual presentation).
  const std::vector<std::pair<std::string, std::vector<Perm4>>> preferred = {
      {"Sym4", {from_cycles({{1, 2, 3, 4}}), from_cycles({{1, 2}})}},
      {"A4", {from_cycles({{1, 2, 3}}), from_cycles({{1, 2}, {3, 4}})}},
      {"D8", {from_cycles({{1, 2, 3, 4}}), from_cycles({{1, 3}})}},
      {"V4", {from_cycles({{1, 2}, {3, 4}}), from_cycles({{1, 3}, {2, 4}})}},
      {"Z4", {from_cycles({{1, 2, 3, 4}})}},
  };
  const std::vector<Perm4> witness_preference = {from_cycles({{1, 3}, {2, 4}}), from_cycles({{1, 4}, {2, 3}}),
                                                 from_cycles({{1, 2, 3, 4}})};

  std::vector<std::uint32_t> class_keys;
  std::vector<std::uint32_t> reps;
  for (auto m : subgroups) {
    if (!transitive(m)) continue;
    auto key = conjugacy_key(m);
    if (std::find(class_keys.begin(), class_keys.end(), key) != class_keys.end()) continue;
    class_keys.push_back(key);
    reps.push_back(m);
  }

  std::vector<Sym4Class> out;
  const Perm4 double_transposition = from_cycles({{1, 3}, {2, 4}});
  for (size_t c = 0; c < reps.size(); ++c) {
    std::uint32_t rep = reps[c];
    std::string name;
    for (const auto& [nm, gens] : preferred) {
      std::uint32_t m = closure(gens);
      if (conjugacy_key(m) == class_keys[c]) {
        rep = m;
        name = nm;
      }
    }
    Sym4Class sc;
    sc.elements = elements_of(rep);
    sc.order = static_cast<unsigned>(sc.elements.size());
    sc.name = name.empty() ? "order-" + std::to_string(sc.order) : name;
    sc.contains_double_transposition =
        std::find(sc.elements.begin(), sc.elements.end(), double_transposition) != sc.elements.end();
    const std::array<std::array<unsigned, 4>, 3> pairings = {{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    for (size_t w = 0; w < 3; ++w) {
      const auto& pr = pairings[w];
      for (const auto& g : witness_preference) {
        if (std::find(sc.elements.begin(), sc.elements.end(), g) != sc.elements.end() &&
            exchanges(g, pr[0], pr[1], pr[2], pr[3])) {
          sc.witnesses[w] = g;
          break;
        }
      }
      if (!sc.witnesses[w]) {
        for (const auto& g : sc.elements) {
          if (exchanges(g, pr[0], pr[1], pr[2], pr[3])) {
            sc.witnesses[w] = g;
            break;
          }
        }
      }
    }
    out.push_back(std::move(sc));
  }
  std::sort(out.begin(), out.end(), [](const Sym4Class& a, const Sym4Class& b) {
    return a.order != b.order ? a.order > b.order : a.name < b.name;
  });
  return out;
}

}  // namespace cremona
