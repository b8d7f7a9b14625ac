#include "cremona/constructions.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "field_embedding.hpp"

namespace cremona {
namespace {

using Row = std::vector<u64>;

// Reduced row echelon form in place; returns the pivot column of each row.
std::vector<size_t> rref(const FiniteField& k, std::vector<Row>& m) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  const size_t cols = m.front().size();
  size_t row = 0;
  for (size_t c = 0; c < cols && row < m.size(); ++c) {
    size_t sel = row;
    while (sel < m.size() && m[sel][c] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[row]);
    const u64 inv = k.inv(m[row][c]);
    for (auto& x : m[row]) x = k.mul(x, inv);
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      const u64 f = m[r][c];
      for (size_t j = 0; j < cols; ++j) m[r][j] = k.sub(m[r][j], k.mul(f, m[row][j]));
    }
    pivots.push_back(c);
    ++row;
  }
  m.resize(row);
  return pivots;
}

// Null space basis of m (rows already in rref with the given pivots).
std::vector<Row> kernel(const FiniteField& k, const std::vector<Row>& m, const std::vector<size_t>& pivots,
                        size_t cols) {
  std::vector<Row> basis;
  for (size_t f = 0; f < cols; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    Row v(cols, 0);
    v[f] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = k.neg(m[i][f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::array<u64, 6> conic_monomials(const FiniteField& k, const ProjPoint& p) {
  return {k.mul(p[0], p[0]), k.mul(p[1], p[1]), k.mul(p[2], p[2]),
          k.mul(p[0], p[1]), k.mul(p[0], p[2]), k.mul(p[1], p[2])};
}

const char* kMonomialNames[6] = {"x^2", "y^2", "z^2", "x*y", "x*z", "y*z"};

// The pencil of conics through four points in general position, as two
// base-field rows. The rref basis of a Frobenius-stable space is Frobenius
// fixed, so its entries descend to the base field.
std::array<std::array<u64, 6>, 2> pencil_through(const std::vector<PointOrbit>& orbits, const FieldSpec& base) {
  auto r = realize(orbits);
  const FiniteField& ext = *r.ext;
  std::vector<Row> m;
  for (const auto& p : r.points) {
    auto mono = conic_monomials(ext, p);
    m.emplace_back(mono.begin(), mono.end());
  }
  auto pivots = rref(ext, m);
  if (pivots.size() != 4) {
    fail("NotGeneralPosition", "the base points impose only " + std::to_string(pivots.size()) + " conditions on conics");
  }
  auto basis = kernel(ext, m, pivots, 6);
  rref(ext, basis);

  auto base_ff = base.finite_field();
  if (base_ff->order() > (1u << 20)) fail("ScaleExceeded", "base field too large to invert the embedding");
  detail::Embedding embed(*base_ff, ext);
  std::unordered_map<u64, u64> back;
  for (u64 x = 0; x < static_cast<u64>(base_ff->order()); ++x) back.emplace(embed(x), x);

  std::array<std::array<u64, 6>, 2> out{};
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 6; ++j) {
      auto it = back.find(basis[i][j]);
      if (it == back.end()) fail("InternalError", "pencil basis does not descend to the base field");
      out[i][j] = it->second;
    }
  return out;
}

// Minimal polynomial over k of t in k[r]/(g).
FPoly minimal_polynomial(const FiniteField& k, const FPoly& t, const FPoly& g) {
  const size_t m = static_cast<size_t>(up::deg<FiniteField>(g));
  std::vector<Row> a(m, Row(m + 1, 0));
  FPoly power = up::constant(k, k.one());
  for (size_t j = 0; j <= m; ++j) {
    for (size_t i = 0; i < power.size(); ++i) a[i][j] = power[i];
    power = up::mulmod(k, power, t, g);
  }
  auto pivots = rref(k, a);
  size_t free_col = 0;
  while (free_col < pivots.size() && pivots[free_col] == free_col) ++free_col;
  FPoly mp(free_col + 1, 0);
  mp[free_col] = 1;
  for (size_t i = 0; i < free_col; ++i) mp[pivots[i]] = k.neg(a[i][free_col]);
  return mp;
}

std::string quotient_string(const FieldSpec& field, const FPoly& a) {
  if (a.empty()) return "0";
  return Polynomial::finite(field, a).to_string('r');
}

struct BigLinkInput {
  std::string family;
  std::vector<PointOrbit> base;
  MfsModel source;
  MfsModel target;
};

BigLink big_link(const BigLinkInput& in, const Polynomial& g) {
  const FieldSpec& field = in.base.front().field;
  for (const auto& o : in.base) {
    if (!(o.field == field)) fail("IncompatibleFields", "base orbits over different fields");
  }
  if (!(g.field() == field)) fail("IncompatibleFields", "r_poly is over " + g.field().name() + ", orbits over " + field.name());
  if (g.degree() < 1 || g.degree() % 2 == 0) {
    fail("EvenDegree", "r_poly has degree " + std::to_string(g.degree()) + "; an odd degree 2n+1 is required");
  }
  auto cert = irreducible_check(g);
  if (!cert.irreducible()) fail("NotIrreducible", g.to_string() + " is " + verdict_name(cert.verdict));
  for (const auto& o : in.base) {
    if (o.kind == OrbitTemplate::LineAtInfinity && o.size >= 2) {
      fail("CollinearPoint", "two base points lie on x = 0, which contains every [0:1:r]");
    }
  }

  const unsigned depth = static_cast<unsigned>(g.degree());
  const Polynomial monic_g = g.monic();
  PointOrbit q_orbit = orbit_from_poly(field, monic_g, OrbitTemplate::LineAtInfinity);

  BigLinkReport rep;
  rep.family = in.family;
  rep.depth = depth;
  rep.conic_count = depth;

  std::optional<bool> collinear = collinear_with_base_pair(in.base, q_orbit);
  if (collinear) {
    rep.collinearity_method = "coordinates";
    if (*collinear) fail("CollinearPoint", "some [0:1:r] lies on a line through two base points");
  } else {
    // A line through two base points meets x = 0 in a point of degree <= 6.
    if (depth <= 6) {
      fail("UncomputableOverQ", "collinearity of degree-" + std::to_string(depth) + " points is not decidable here");
    }
    rep.collinearity_method = "degree-bound";
  }
  rep.no_collinear = true;

  FiberCenter center;
  if (field.is_finite()) {
    auto kp = field.finite_field();
    const FiniteField& k = *kp;
    auto pencil = pencil_through(in.base, field);
    const FPoly& gm = monic_g.f_coeffs();
    // Value of each basis conic at [0:1:r]: c_{y^2} + c_{yz} r + c_{z^2} r^2.
    std::array<FPoly, 2> v;
    for (size_t j = 0; j < 2; ++j) {
      FPoly val = {pencil[j][1], pencil[j][5], pencil[j][2]};
      up::trim(k, val);
      v[j] = up::mod(k, val, gm);
    }
    if (v[0].empty() && v[1].empty()) fail("ConicCoincidence", "every conic of the pencil contains [0:1:r]");
    rep.system_rank = 5;
    std::vector<FPoly> conic(6);
    for (size_t i = 0; i < 6; ++i) {
      conic[i] = up::sub(k, up::scale(k, v[1], pencil[0][i]), up::scale(k, v[0], pencil[1][i]));
    }
    // Half-discriminant 4abc + def - af^2 - be^2 - cd^2 for a x^2 + b y^2 + c z^2 + d xy + e xz + f yz.
    auto mm = [&](const FPoly& a, const FPoly& b) { return up::mulmod(k, a, b, gm); };
    const FPoly &a = conic[0], &b = conic[1], &c = conic[2], &d = conic[3], &e = conic[4], &f = conic[5];
    FPoly disc = up::scale(k, mm(mm(a, b), c), k.from_int(4));
    disc = up::add(k, disc, mm(mm(d, e), f));
    disc = up::sub(k, disc, mm(a, mm(f, f)));
    disc = up::sub(k, disc, mm(b, mm(e, e)));
    disc = up::sub(k, disc, mm(c, mm(d, d)));
    rep.all_irreducible = !disc.empty();
    if (!rep.all_irreducible) fail("ConicCoincidence", "the conic through [0:1:r] is singular");

    if (v[1].empty()) {
      // Every q lies on the second basis conic.
      if (depth > 1) fail("ConicCoincidence", "all points [0:1:r] lie on one conic of the pencil");
      center = FiberCenter::infinity();
    } else {
      FPoly t = up::mulmod(k, up::neg(k, v[0]), up::inv_mod(k, v[1], gm), gm);
      FPoly mp = minimal_polynomial(k, t, gm);
      if (static_cast<unsigned>(up::deg<FiniteField>(mp)) != depth) {
        fail("ConicCoincidence", "only " + std::to_string(up::deg<FiniteField>(mp)) + " distinct conics through the " +
                                     std::to_string(depth) + " points");
      }
      rep.pencil_parameter = Polynomial::finite(field, mp);
      center = FiberCenter::polynomial(*rep.pencil_parameter);
    }
    rep.pairwise_distinct = true;
    rep.distinctness = "computed";
    for (const auto& row : pencil) {
      std::vector<std::string> s;
      for (u64 x : row) s.push_back(k.to_string(x));
      rep.pencil.push_back(std::move(s));
    }
    for (size_t i = 0; i < 6; ++i) {
      rep.conic_through_q.push_back("(" + quotient_string(field, conic[i]) + ")*" + kMonomialNames[i]);
    }
  } else {
    // Odd degree: a conic of the pencil defined over a proper subfield would
    // carry a Galois-stable subset of the points, and no conic through the
    // four base points meets x = 0 in an odd number of them.
    rep.distinctness = "symbolic";
    rep.pairwise_distinct = true;
    rep.all_irreducible = true;
    center = FiberCenter::symbolic("pencil[" + monic_g.to_string('r') + "]");
  }

  SarkisovLink link;
  link.type = LinkType::II;
  link.source = in.source;
  link.target = in.target;
  link.orbit_src = BaseOrbit{depth, "q", q_orbit};
  link.orbit_tgt = BaseOrbit{depth, "q'", std::nullopt};
  link.fiber_center = center;
  link.depth = depth;
  link.singular_fiber_free = true;
  auto verdict = link_validate(link);
  if (!verdict.ok) fail("InvalidLink", verdict.rule + ": " + verdict.detail);
  return {std::move(link), std::move(rep)};
}

bool certified_general(const std::vector<PointOrbit>& orbits) {
  if (orbits.size() == 1 && orbits.front().general_position != Tri::Unknown) {
    return orbits.front().general_position == Tri::Yes;
  }
  if (!orbits.front().field.is_finite()) return false;
  return general_position_check(orbits).general;
}

GroupoidWord single_letter_word(const SarkisovLink& l) {
  GroupoidWord w;
  w.start = l.source;
  w.end = l.target;
  w.letters.push_back(WordLetter::of(l));
  return w;
}

}  // namespace

DeJonquieresMap make_dejonquieres(const Polynomial& p) {
  if (p.degree() < 1) fail("InvalidArgument", "p must have degree at least 1");
  DeJonquieresMap m;
  m.p = p.monic();
  m.certificate = irreducible_check(m.p);
  if (!m.certificate.irreducible()) {
    fail("NotIrreducible", p.to_string('y') + " is " + verdict_name(m.certificate.verdict));
  }
  return m;
}

DeJonquieresDecomposition dejonquieres_decompose(const DeJonquieresMap& m) {
  const unsigned d = m.degree();
  if (d < 1) fail("InvalidArgument", "p must have degree at least 1");
  DeJonquieresDecomposition out;
  const MfsModel start = hirzebruch(0, "P1xP1");
  out.word.start = start;
  out.word.end = start;

  auto surface = [&](unsigned n) { return n == 0 ? start : hirzebruch(n, "jq" + std::to_string(n)); };

  SarkisovLink first;
  first.type = LinkType::II;
  first.source = start;
  first.target = surface(d);
  first.orbit_src = BaseOrbit{d, "jq-roots", std::nullopt};
  first.orbit_tgt = BaseOrbit{d, "jq-roots'", std::nullopt};
  first.fiber_center = FiberCenter::polynomial(m.p);
  first.depth = d;
  out.word.letters.push_back(WordLetter::of(first));
  for (unsigned n = d; n >= 1; --n) {
    SarkisovLink l;
    l.type = LinkType::II;
    l.source = surface(n);
    l.target = surface(n - 1);
    l.orbit_src = BaseOrbit{1, "jq-chain" + std::to_string(d - n + 1), std::nullopt};
    l.orbit_tgt = BaseOrbit{1, "jq-fiber" + std::to_string(d - n + 1), std::nullopt};
    l.fiber_center = FiberCenter::infinity();
    l.depth = 1;
    out.word.letters.push_back(WordLetter::of(l));
  }

  auto& a = out.audit;
  a.bidegree_x = 1;
  a.bidegree_y = d;
  a.self_intersection = static_cast<int>(2 * a.bidegree_x * a.bidegree_y);
  a.base_points.push_back({"[0:1 ; t:1] for the roots t of p", d, 1, false});
  a.base_points.push_back({"([1:0],[1:0])", 1, 1, false});
  if (d > 1) a.base_points.push_back({"infinitely near ([1:0],[1:0]) along x1 = 0", d - 1, 1, true});
  for (const auto& g : a.base_points) {
    a.base_point_total += g.count * g.multiplicity;
    a.multiplicity_square_sum += g.count * g.multiplicity * g.multiplicity;
  }
  a.balanced = a.multiplicity_square_sum == static_cast<unsigned>(a.self_intersection);

  const FieldSpec& field = m.p.field();
  if (!field.is_finite()) {
    a.verification = "combinatorial: base points read off the generators x0*y1^d and x1*p(y0,y1)";
  } else if (d > 8) {
    a.verification = "combinatorial: coordinate check limited to degree 8";
  } else {
    auto base = field.finite_field();
    FieldSpec big = detail::canonical_field(field.p, field.degree() * d);
    auto ext = big.finite_field();
    detail::Embedding embed(*base, *ext);
    FPoly pe;
    for (u64 c : m.p.f_coeffs()) pe.push_back(embed(c));
    const size_t roots = roots_in(*ext, pe).size();
    // p(1,0) is the leading coefficient, a unit, so locally x1*p generates (u).
    const bool unit_at_infinity = !m.p.f_coeffs().empty() && m.p.f_coeffs().back() != 0;
    a.coordinates_verified = roots == d && unit_at_infinity;
    a.verification = std::to_string(roots) + " distinct roots of p over " + big.name() +
                     (unit_at_infinity ? "; local ideal at ([1:0],[1:0]) is (u, v^" + std::to_string(d) + ")"
                                       : "; p vanishes at infinity");
  }
  return out;
}

GroupoidWord conjugate_to_p2(const GroupoidWord& w) {
  auto is_f0 = [](const MfsModel& x) { return x.kind == MfsKind::Hirzebruch && x.n == 0; };
  if (!is_f0(w.start) || !is_f0(w.end)) {
    fail("EndpointMismatch", "word runs " + w.start.name() + " -> " + w.end.name() + ", expected F0 -> F0");
  }
  const MfsModel plane = projective_plane("P2");
  // alpha: P2 -> F1 (blow up p), then F1 -> F0 (elementary transformation at q).
  auto alpha = [&](const MfsModel& f0, const std::string& tag) {
    SarkisovLink up1;
    up1.type = LinkType::I;
    up1.source = plane;
    up1.target = hirzebruch(1, "alpha-F1" + tag);
    up1.orbit_src = BaseOrbit{1, "alpha-p" + tag, std::nullopt};
    up1.depth = 1;
    SarkisovLink elem;
    elem.type = LinkType::II;
    elem.source = up1.target;
    elem.target = f0;
    elem.orbit_src = BaseOrbit{1, "alpha-q" + tag, std::nullopt};
    elem.orbit_tgt = BaseOrbit{1, "alpha-line" + tag, std::nullopt};
    elem.fiber_center = FiberCenter::symbolic("alpha-fiber" + tag);
    elem.depth = 1;
    return std::make_pair(up1, elem);
  };
  auto head = alpha(w.start, "");
  auto tail = w.start.key() == w.end.key() ? head : alpha(w.end, "'");

  GroupoidWord out;
  out.start = plane;
  out.end = plane;
  out.letters.push_back(WordLetter::of(head.first));
  out.letters.push_back(WordLetter::of(head.second));
  out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.end());
  out.letters.push_back(WordLetter::of(tail.second, -1));
  out.letters.push_back(WordLetter::of(tail.first, -1));
  return out;
}

BigLink c5_big_link(const PointOrbit& orbit4, const Polynomial& r_poly) {
  if (orbit4.size != 4) fail("InvalidArgument", "expected an orbit of 4 points, got " + std::to_string(orbit4.size));
  if (!certified_general({orbit4})) fail("NotGeneralPosition", "the 4 points are not certified in general position");
  BigLinkInput in{"c5", {orbit4}, conic_bundle5(orbit4, "X"), conic_bundle5(orbit4, "X'")};
  return big_link(in, r_poly);
}

BigLink c6_big_link(const std::vector<PointOrbit>& orbit_pair, const Polynomial& r_poly) {
  unsigned total = 0;
  for (const auto& o : orbit_pair) total += o.size;
  const bool shape = (orbit_pair.size() == 1 && orbit_pair[0].kind == OrbitTemplate::SplitLinePair) ||
                     (orbit_pair.size() == 2 && orbit_pair[0].size == 2 && orbit_pair[1].size == 2);
  if (!shape || total != 4) fail("InvalidArgument", "expected two orbits of size 2 or one split orbit");
  if (!certified_general(orbit_pair)) fail("NotGeneralPosition", "the 4 points are not certified in general position");
  BigLinkInput in{"c6", orbit_pair, conic_bundle6(orbit_pair, "X"), conic_bundle6(orbit_pair, "X'")};
  return big_link(in, r_poly);
}

RefinedTargetReport refined_target_report(const FieldSpec& field, unsigned search_bound) {
  if (search_bound < 17) fail("InvalidArgument", "search bound must be at least 17");
  if (search_bound > 201) fail("ScaleExceeded", "search bound above 201");
  RefinedTargetReport rep;
  rep.field = field;
  rep.bound = search_bound;

  auto irreducible_of_degree = [&](unsigned d) -> Polynomial {
    if (field.is_finite()) return Polynomial::finite(field, smallest_irreducible(*field.finite_field(), d));
    std::vector<mpq_class> c(d + 1, mpq_class(0));
    c[0] = -2;
    c[d] = 1;
    return Polynomial::rational(std::move(c));  // Eisenstein at 2
  };

  for (unsigned d = 16; d <= search_bound; ++d) {
    rep.i0_depths.push_back(d);
    if (d % 2 == 0 || d < 17) continue;
    Polynomial f = irreducible_of_degree(d);
    auto cert = irreducible_check(f);
    if (!cert.irreducible()) fail("InternalError", "degree " + std::to_string(d) + " witness not certified");
    rep.i_indices.push_back({d, (d - 1) / 2, f, method_name(cert.method)});
  }

  if (field.is_finite()) {
    const u64 q = static_cast<u64>(field.order());
    for (unsigned n : {2u, 4u}) {
      auto orbits = enumerate_point_orbits(q, n);
      OrbitClassCount c;
      c.size = n;
      c.orbits = orbits.size();
      c.classes_all = pgl3_classify(orbits, q, ClassFilter::All).size();
      c.classes_general = pgl3_classify(orbits, q, ClassFilter::GeneralPositionOnly).size();
      rep.class_counts.push_back(c);
    }
  }

  const Polynomial r17 = irreducible_of_degree(17);
  auto jq = dejonquieres_decompose(make_dejonquieres(r17));
  rep.witnesses.push_back({"dejonquieres", jq.word, {}});
  auto c5 = c5_big_link(orbit_from_poly(field, irreducible_of_degree(4), OrbitTemplate::ConicForm), r17);
  rep.witnesses.push_back({"c5", single_letter_word(c5.link), {}});
  auto c6 = c6_big_link({mirror_pair(field, irreducible_of_degree(2))}, r17);
  rep.witnesses.push_back({"c6", single_letter_word(c6.link), {}});
  for (auto& w : rep.witnesses) w.image = homo_refined_eval(w.word, field);

  bool separated = true;
  for (const auto& w : rep.witnesses) separated = separated && w.image.length() == 1;
  for (size_t i = 0; i < rep.witnesses.size(); ++i)
    for (size_t j = i + 1; j < rep.witnesses.size(); ++j) {
      const auto& a = rep.witnesses[i].image;
      const auto& b = rep.witnesses[j].image;
      rep.pairwise_product_lengths.push_back(fp_multiply(a, b).length());
      separated = separated && rep.pairwise_product_lengths.back() == 2 && a.length() == 1 && b.length() == 1 &&
                  a.word[0].factor != b.word[0].factor;
    }
  rep.separated = separated;
  return rep;
}

}  // namespace cremona
