#include <doctest.h>

#include <set>

#include "cremona/constructions.hpp"

using namespace cremona;

namespace {

using Conic = std::array<u64, 6>;  // x^2, y^2, z^2, xy, xz, yz over F_2

u64 conic_at(const FiniteField& k, const Conic& c, const ProjPoint& p) {
  const u64 mono[6] = {k.mul(p[0], p[0]), k.mul(p[1], p[1]), k.mul(p[2], p[2]),
                       k.mul(p[0], p[1]), k.mul(p[0], p[2]), k.mul(p[1], p[2])};
  u64 s = 0;
  for (size_t i = 0; i < 6; ++i) {
    if (c[i]) s = k.add(s, mono[i]);
  }
  return s;
}

// Independent check of the conic pencil through four points over F_2:
// brute-force the 63 nonzero conics with F_2 coefficients, keep those through
// the points, then locate each q = [0:1:r] (r a root of g) on the pencil.
struct PencilOracle {
  std::vector<Conic> pencil;        // the nonzero F_2-members
  std::vector<u64> parameters;      // t_j with C1 + t_j C2 through q_j, in F_2[r]/(g)
  bool collinear = false;           // some q_j on a line through two base points
  FPoly minimal_polynomial;         // of t_0 over F_2
};

FPoly minpoly_over_f2(const FiniteField& big, u64 t, unsigned degree) {
  FPoly prod = {1};
  u64 c = t;
  for (unsigned j = 0; j < degree; ++j) {
    prod = up::mul(big, prod, FPoly{big.neg(c), 1});
    c = big.frobenius(c);
  }
  return prod;  // coefficients lie in F_2 when t has degree `degree`
}

PencilOracle pencil_oracle(const FiniteField& small, const std::vector<ProjPoint>& base, const Polynomial& g) {
  PencilOracle o;
  for (unsigned mask = 1; mask < 64; ++mask) {
    Conic c{};
    for (size_t i = 0; i < 6; ++i) c[i] = (mask >> i) & 1;
    bool through = true;
    for (const auto& p : base) through = through && conic_at(small, c, p) == 0;
    if (through) o.pencil.push_back(c);
  }
  if (o.pencil.size() != 3) return o;

  // Lines through two base points meet x = 0 at [0 : l2 : -l1].
  const FPoly& gc = g.f_coeffs();
  for (size_t i = 0; i < base.size(); ++i)
    for (size_t j = i + 1; j < base.size(); ++j) {
      const auto& a = base[i];
      const auto& b = base[j];
      u64 l1 = small.sub(small.mul(a[2], b[0]), small.mul(a[0], b[2]));
      u64 l2 = small.sub(small.mul(a[0], b[1]), small.mul(a[1], b[0]));
      if (l2 == 0) continue;  // meets x = 0 at [0:0:1]
      u64 c = small.mul(small.neg(l1), small.inv(l2));
      FPoly lifted;  // g has F_2 coefficients, which are the same packed values in `small`
      for (u64 x : gc) lifted.push_back(x);
      if (up::eval(small, lifted, c) == 0) o.collinear = true;
    }

  if (g.degree() < 2) return o;  // no extension to evaluate in

  FiniteField big(2, gc);
  const u64 r = big.generator();
  const ProjPoint q = {0, 1, r};
  const Conic& c1 = o.pencil[0];
  const Conic& c2 = o.pencil[1];
  u64 v1 = conic_at(big, c1, q), v2 = conic_at(big, c2, q);
  REQUIRE(v2 != 0);
  u64 t = big.mul(v1, big.inv(v2));  // char 2: C1 + t C2 vanishes at q
  for (unsigned j = 0; j < static_cast<unsigned>(g.degree()); ++j) {
    o.parameters.push_back(t);
    t = big.frobenius(t);
  }
  o.minimal_polynomial = minpoly_over_f2(big, o.parameters[0], static_cast<unsigned>(g.degree()));
  return o;
}

// Minimal polynomials of the images of t under PGL_2(F_2).
std::set<FPoly> mobius_minpolys(const Polynomial& g, u64 t) {
  FiniteField big(2, g.f_coeffs());
  std::set<FPoly> out;
  for (u64 a = 0; a < 2; ++a)
    for (u64 b = 0; b < 2; ++b)
      for (u64 c = 0; c < 2; ++c)
        for (u64 d = 0; d < 2; ++d) {
          if (((a * d) ^ (b * c)) == 0) continue;
          u64 num = big.add(big.mul(a, t), b), den = big.add(big.mul(c, t), d);
          out.insert(minpoly_over_f2(big, big.mul(num, big.inv(den)), static_cast<unsigned>(g.degree())));
        }
  return out;
}

const FieldSpec f2 = FieldSpec::prime(2);
const FieldSpec q = FieldSpec::rationals();

Polynomial degree17() {
  // First degree-17 irreducible over F_2 found by trial factorization.
  return Polynomial::finite(f2, smallest_irreducible(FiniteField(2), 17));
}

}  // namespace

TEST_CASE("de Jonquieres decomposition over Q") {
  for (int d : {17, 8, 15, 16}) {
    std::vector<mpq_class> c(static_cast<size_t>(d) + 1, mpq_class(0));
    c[0] = -2;
    c[static_cast<size_t>(d)] = 1;
    auto dec = dejonquieres_decompose(make_dejonquieres(Polynomial::rational(c)));
    CHECK(dec.word.letters.size() == static_cast<size_t>(d) + 1);
    CHECK(word_validate(dec.word).ok);
    std::multiset<unsigned> depths;
    for (const auto& l : dec.word.letters) depths.insert(l.effective().depth);
    CHECK(depths.count(static_cast<unsigned>(d)) == 1);
    CHECK(depths.count(1) == static_cast<size_t>(d));
    CHECK(dec.audit.base_point_total == static_cast<unsigned>(2 * d));
    CHECK(dec.audit.self_intersection == 2 * d);
    CHECK(dec.audit.balanced);
    CHECK(dec.audit.bidegree_y == static_cast<unsigned>(d));
    auto image = homo_eval(dec.word);
    CHECK(image.is_identity() == (d < 16));
    auto conj = conjugate_to_p2(dec.word);
    CHECK(word_validate(conj).ok);
    CHECK(conj.start.kind == MfsKind::ProjectivePlane);
    CHECK(homo_eval(conj) == image);
    if (d == 17) CHECK(fp_to_string(image) == "(Hirzebruch,{17})");
  }
  auto linear = dejonquieres_decompose(make_dejonquieres(parse_polynomial(q, "y")));
  CHECK(linear.word.letters.size() == 2);
  CHECK(homo_eval(linear.word).is_identity());
  CHECK(dejonquieres_decompose(make_dejonquieres(parse_polynomial(q, "x^17-2"))).audit.base_points.size() == 3);

  CHECK_THROWS_WITH_AS(make_dejonquieres(parse_polynomial(q, "y^2-1")), doctest::Contains("NotIrreducible"), Error);
  CHECK_THROWS_WITH_AS(make_dejonquieres(parse_polynomial(q, "3")), doctest::Contains("InvalidArgument"), Error);
  CHECK(make_dejonquieres(parse_polynomial(q, "2y^3-4")).p.to_string() == "x^3-2");
}

TEST_CASE("de Jonquieres coordinates are verified over small finite fields") {
  auto dec = dejonquieres_decompose(make_dejonquieres(parse_polynomial(f2, "x^5+x^2+1")));
  CHECK(dec.audit.coordinates_verified);
  CHECK(dec.audit.base_point_total == 10);
  auto big = dejonquieres_decompose(make_dejonquieres(degree17()));
  CHECK_FALSE(big.audit.coordinates_verified);
  CHECK(homo_eval(big.word).length() == 1);
}

TEST_CASE("conjugate_to_p2") {
  GroupoidWord empty;
  empty.start = empty.end = hirzebruch(0, "P1xP1");
  auto conj = conjugate_to_p2(empty);
  CHECK(word_validate(conj).ok);
  auto red = reduce_relation(conj);
  CHECK_FALSE(red.stuck);
  CHECK(red.residual.link_count() == 0);
  CHECK(galois_depth([&] {
          std::vector<SarkisovLink> ls;
          for (const auto& l : conj.letters) ls.push_back(l.effective());
          return ls;
        }()) <= 2);

  GroupoidWord f2_word;
  f2_word.start = f2_word.end = hirzebruch(2);
  CHECK_THROWS_WITH_AS(conjugate_to_p2(f2_word), doctest::Contains("EndpointMismatch"), Error);
}

TEST_CASE("degree-5 conic-bundle link over F_2 agrees with the brute-force pencil") {
  auto orbit = orbit_from_poly(f2, parse_polynomial(f2, "t^4+t+1"), OrbitTemplate::ConicForm);
  auto g = degree17();
  CHECK(g.to_string() == "x^17+x^3+1");

  FiniteField f16(2, {1, 1, 0, 0, 1});
  std::vector<ProjPoint> base;
  for (u64 a : roots_in(f16, {1, 1, 0, 0, 1})) base.push_back({1, a, f16.mul(a, a)});
  auto oracle = pencil_oracle(f16, base, g);
  REQUIRE(oracle.pencil.size() == 3);
  CHECK_FALSE(oracle.collinear);
  CHECK(std::set<u64>(oracle.parameters.begin(), oracle.parameters.end()).size() == 17);
  CHECK(is_irreducible(FiniteField(2), oracle.minimal_polynomial));

  auto big = c5_big_link(orbit, g);
  CHECK(big.link.depth == 17);
  CHECK(big.link.type == LinkType::II);
  CHECK(link_validate(big.link).ok);
  CHECK(big.report.conic_count == 17);
  CHECK(big.report.pairwise_distinct);
  CHECK(big.report.all_irreducible);
  CHECK(big.report.no_collinear);
  CHECK(big.report.collinearity_method == "coordinates");
  CHECK(big.report.system_rank == 5);
  CHECK(big.report.distinctness == "computed");
  REQUIRE(big.report.pencil_parameter);
  auto candidates = mobius_minpolys(g, oracle.parameters[0]);
  CHECK(candidates.count(big.report.pencil_parameter->f_coeffs()) == 1);
  CHECK(big.link.source.kind == MfsKind::ConicBundle5);
  CHECK(cb_class_key(big.link.source) == cb_class_key(big.link.target));
}

TEST_CASE("degree-6 conic-bundle link over F_2 agrees with the brute-force pencil") {
  auto quad = parse_polynomial(f2, "x^2+x+1");
  auto pair = mirror_pair(f2, quad);
  auto g = degree17();
  FiniteField f4(2, {1, 1, 1});
  std::vector<ProjPoint> base;
  for (u64 a : roots_in(f4, {1, 1, 1})) {
    base.push_back({1, a, 0});
    base.push_back({1, 0, a});
  }
  auto oracle = pencil_oracle(f4, base, g);
  REQUIRE(oracle.pencil.size() == 3);
  CHECK_FALSE(oracle.collinear);
  CHECK(std::set<u64>(oracle.parameters.begin(), oracle.parameters.end()).size() == 17);

  auto big = c6_big_link({pair}, g);
  CHECK(big.link.depth == 17);
  CHECK(link_validate(big.link).ok);
  CHECK(big.report.pairwise_distinct);
  REQUIRE(big.report.pencil_parameter);
  CHECK(mobius_minpolys(g, oracle.parameters[0]).count(big.report.pencil_parameter->f_coeffs()) == 1);

  auto split = c6_big_link({split_orbit(f2, quad, quad)}, g);
  CHECK(split.link.depth == 17);
}

TEST_CASE("a point on a line through two base points is rejected") {
  // [1:a:0] + [1:0:a] = [0:1:1] in characteristic 2.
  auto pair = mirror_pair(f2, parse_polynomial(f2, "x^2+x+1"));
  CHECK_THROWS_WITH_AS(c6_big_link({pair}, parse_polynomial(f2, "x+1")), doctest::Contains("CollinearPoint"), Error);
  FiniteField f4(2, {1, 1, 1});
  std::vector<ProjPoint> base;
  for (u64 a : roots_in(f4, {1, 1, 1})) {
    base.push_back({1, a, 0});
    base.push_back({1, 0, a});
  }
  CHECK(pencil_oracle(f4, base, parse_polynomial(f2, "x+1")).collinear);
}

TEST_CASE("big link preconditions") {
  auto orbit = orbit_from_poly(f2, parse_polynomial(f2, "t^4+t+1"), OrbitTemplate::ConicForm);
  CHECK_THROWS_WITH_AS(c5_big_link(orbit, Polynomial::finite(f2, smallest_irreducible(FiniteField(2), 16))),
                       doctest::Contains("EvenDegree"), Error);
  CHECK_THROWS_WITH_AS(c5_big_link(orbit, parse_polynomial(f2, "x^17+1")), doctest::Contains("NotIrreducible"), Error);
  CHECK_THROWS_WITH_AS(c5_big_link(orbit, parse_polynomial(q, "x^17-2")), doctest::Contains("IncompatibleFields"),
                       Error);
  auto quad = orbit_from_poly(f2, parse_polynomial(f2, "x^2+x+1"), OrbitTemplate::ConicForm);
  CHECK_THROWS_AS(c5_big_link(quad, degree17()), Error);
  CHECK_THROWS_WITH_AS(c6_big_link({orbit}, degree17()), doctest::Contains("InvalidArgument"), Error);
}

TEST_CASE("big links over Q are symbolic") {
  auto orbit = orbit_from_poly(q, parse_polynomial(q, "x^4-2"), OrbitTemplate::ConicForm);
  auto big = c5_big_link(orbit, parse_polynomial(q, "x^17-2"));
  CHECK(big.link.depth == 17);
  CHECK(big.report.distinctness == "symbolic");
  CHECK(big.report.collinearity_method == "degree-bound");
  CHECK(link_validate(big.link).ok);
  CHECK_THROWS_WITH_AS(c5_big_link(orbit, parse_polynomial(q, "x^5-2")), doctest::Contains("UncomputableOverQ"), Error);
  auto c6 = c6_big_link({mirror_pair(q, parse_polynomial(q, "x^2-2"))}, parse_polynomial(q, "x^19-3"));
  CHECK(c6.link.depth == 19);
}

TEST_CASE("refined target report over F_2") {
  auto rep = refined_target_report(f2, 25);
  std::vector<unsigned> indices;
  for (const auto& w : rep.i_indices) {
    indices.push_back(w.index);
    CHECK(w.degree == 2 * w.index + 1);
    CHECK(irreducible_check(w.poly).irreducible());
  }
  CHECK(indices == std::vector<unsigned>{8, 9, 10, 11, 12});
  REQUIRE(rep.class_counts.size() == 2);
  CHECK(rep.class_counts[0].size == 2);
  CHECK(rep.class_counts[0].orbits == 7);
  CHECK(rep.class_counts[0].classes_all == 1);
  CHECK(rep.class_counts[0].classes_general == 1);
  CHECK(rep.class_counts[1].size == 4);
  CHECK(rep.class_counts[1].orbits == 63);
  CHECK(rep.class_counts[1].classes_general == 1);
  CHECK(rep.class_counts[1].classes_all == 2);
  REQUIRE(rep.witnesses.size() == 3);
  CHECK(rep.separated);
  std::set<std::string> factors;
  for (const auto& w : rep.witnesses) {
    REQUIRE(w.image.length() == 1);
    factors.insert(w.image.word[0].factor);
    CHECK(word_validate(w.word).ok);
  }
  CHECK(factors.size() == 3);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = i + 1; j < 3; ++j) CHECK(fp_multiply(rep.witnesses[i].image, rep.witnesses[j].image).length() == 2);
  CHECK(rep.pairwise_product_lengths == std::vector<size_t>{2, 2, 2});
  CHECK(rep.i0_depths.front() == 16);
  CHECK(rep.i0_depths.back() == 25);
}

TEST_CASE("witness factors do not depend on the chosen polynomials") {
  FiniteField k(2);
  auto rep = refined_target_report(f2, 17);
  auto quartic = Polynomial::finite(f2, *next_irreducible(k, smallest_irreducible(k, 4)));
  auto g = Polynomial::finite(f2, *next_irreducible(k, smallest_irreducible(k, 17)));
  auto orbit = orbit_from_poly(f2, quartic, OrbitTemplate::ConicForm);
  REQUIRE(orbit.general_position == Tri::Yes);
  auto other = c5_big_link(orbit, g);
  GroupoidWord w;
  w.start = other.link.source;
  w.end = other.link.target;
  w.letters = {WordLetter::of(other.link)};
  auto image = homo_refined_eval(w, f2);
  REQUIRE(image.length() == 1);
  CHECK(image.word[0] == rep.witnesses[1].image.word[0]);
}

TEST_CASE("refined target report over Q and bounds") {
  auto rep = refined_target_report(q, 21);
  REQUIRE(rep.i_indices.size() == 3);
  CHECK(rep.i_indices[0].poly.to_string() == "x^17-2");
  CHECK(rep.i_indices[2].poly.to_string() == "x^21-2");
  CHECK(rep.i_indices[0].certificate == "Eisenstein");
  CHECK(rep.class_counts.empty());
  CHECK(rep.separated);
  CHECK_THROWS_WITH_AS(refined_target_report(f2, 16), doctest::Contains("InvalidArgument"), Error);
  CHECK_THROWS_WITH_AS(refined_target_report(f2, 500), doctest::Contains("ScaleExceeded"), Error);
}
