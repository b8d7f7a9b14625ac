#include <doctest.h>

#include <algorithm>
#include <set>

#include "cremona/orbits.hpp"

using namespace cremona;

namespace {

u64 ipow(u64 b, unsigned e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

// Closed points of degree n on P^2 over F_q, by Moebius-free recursion on divisors.
u64 closed_point_count(u64 q, unsigned n) {
  u64 total = ipow(q, 2 * n) + ipow(q, n) + 1;
  for (unsigned d = 1; d < n; ++d) {
    if (n % d == 0) total -= d * closed_point_count(q, d);
  }
  return total / n;
}

u64 pgl3_order(u64 q) { return q * q * q * (q * q * q - 1) * (q * q - 1); }

PointOrbit rational_point(const FieldSpec& f, u64 x, u64 y, u64 z) { return explicit_orbit(f, f, {ProjPoint{x, y, z}}); }

std::set<ProjPoint> point_set(const RealizedPoints& r) { return {r.points.begin(), r.points.end()}; }

// Brute-force collinearity over the realized coordinates.
bool any_collinear(const FiniteField& k, const std::vector<ProjPoint>& pts) {
  auto det = [&](const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) {
    auto term = [&](u64 x, u64 y, u64 z) { return k.mul(x, k.mul(y, z)); };
    u64 plus = k.add(k.add(term(a[0], b[1], c[2]), term(a[1], b[2], c[0])), term(a[2], b[0], c[1]));
    u64 minus = k.add(k.add(term(a[2], b[1], c[0]), term(a[0], b[2], c[1])), term(a[1], b[0], c[2]));
    return k.sub(plus, minus);
  };
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      for (size_t l = j + 1; l < pts.size(); ++l)
        if (det(pts[i], pts[j], pts[l]) == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("orbit_from_poly examples") {
  auto f2 = FieldSpec::prime(2);
  auto conic = orbit_from_poly(f2, parse_polynomial(f2, "t^4+t+1"), OrbitTemplate::ConicForm);
  CHECK(conic.size == 4);
  CHECK(conic.general_position == Tri::Yes);
  auto r = realize({conic});
  CHECK(r.points.size() == 4);
  CHECK_FALSE(any_collinear(*r.ext, r.points));

  auto q = FieldSpec::rationals();
  auto line = orbit_from_poly(q, parse_polynomial(q, "x^17-2"), OrbitTemplate::LineAtInfinity);
  CHECK(line.size == 17);
  CHECK(line.kind == OrbitTemplate::LineAtInfinity);

  auto quad = parse_polynomial(f2, "x^2+x+1");
  auto split = split_orbit(f2, quad, quad);
  CHECK(split.size == 4);
  CHECK(split.general_position == Tri::Yes);
  auto rs = realize({split});
  CHECK_FALSE(any_collinear(*rs.ext, rs.points));

  CHECK_THROWS_WITH_AS(orbit_from_poly(f2, parse_polynomial(f2, "t^2+1"), OrbitTemplate::ConicForm),
                       doctest::Contains("NotIrreducible"), Error);
  CHECK_THROWS_WITH_AS(orbit_from_poly(f2, quad, OrbitTemplate::SplitLinePair), doctest::Contains("DegreeMismatch"),
                       Error);
  CHECK_THROWS_WITH_AS(split_orbit(f2, quad, parse_polynomial(f2, "x^3+x+1")), doctest::Contains("DegreeMismatch"),
                       Error);
}

TEST_CASE("orbit size equals the degree of the minimal polynomial") {
  auto f3 = FieldSpec::prime(3);
  FiniteField k(3);
  for (unsigned d = 1; d <= 6; ++d) {
    auto f = Polynomial::finite(f3, smallest_irreducible(k, d));
    for (auto t : {OrbitTemplate::ConicForm, OrbitTemplate::LineAtInfinity}) {
      auto o = orbit_from_poly(f3, f, t);
      CHECK(o.size == d);
      CHECK(realize({o}).points.size() == d);
    }
  }
}

TEST_CASE("general position checks") {
  auto f2 = FieldSpec::prime(2);
  std::vector<PointOrbit> frame = {rational_point(f2, 1, 0, 0), rational_point(f2, 0, 1, 0),
                                   rational_point(f2, 0, 0, 1), rational_point(f2, 1, 1, 1)};
  CHECK(general_position_check(frame).general);

  std::vector<PointOrbit> on_line = {rational_point(f2, 1, 0, 0), rational_point(f2, 0, 1, 0),
                                     rational_point(f2, 1, 1, 0)};
  auto v = general_position_check(on_line);
  CHECK_FALSE(v.general);
  CHECK(v.witness_points.size() == 3);

  // Invariance under PGL_3: every image of the frame stays in general position.
  const auto& group = pgl3_elements(f2);
  for (size_t i = 0; i < group.size(); i += 7) {
    std::vector<PointOrbit> image;
    for (const auto& o : frame) image.push_back(apply_matrix(o, group[i]));
    CHECK(general_position_check(image).general);
    std::vector<PointOrbit> bad;
    for (const auto& o : on_line) bad.push_back(apply_matrix(o, group[i]));
    CHECK_FALSE(general_position_check(bad).general);
  }

  auto q = FieldSpec::rationals();
  auto qa = orbit_from_poly(q, parse_polynomial(q, "x^4-2"), OrbitTemplate::ConicForm);
  CHECK(qa.general_position == Tri::Yes);
}

TEST_CASE("point orbit census matches the closed-point formula") {
  CHECK(closed_point_count(2, 1) == 7);
  CHECK(closed_point_count(2, 2) == 7);
  CHECK(closed_point_count(2, 4) == 63);
  for (auto [q, n] : std::vector<std::pair<u64, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 1}, {3, 2},
                                                           {3, 3}, {4, 2}, {5, 2}, {7, 2}}) {
    auto orbits = enumerate_point_orbits(q, n);
    CHECK(orbits.size() == closed_point_count(q, n));
    std::set<std::string> keys;
    for (const auto& o : orbits) {
      CHECK(o.size == n);
      keys.insert(o.key());
    }
    CHECK(keys.size() == orbits.size());
  }
  CHECK_THROWS_WITH_AS(enumerate_point_orbits(2, 13), doctest::Contains("ScaleExceeded"), Error);
}

TEST_CASE("PGL_3 element counts") {
  CHECK(pgl3_elements(FieldSpec::prime(2)).size() == pgl3_order(2));
  CHECK(pgl3_elements(FieldSpec::prime(2)).size() == 168);
  CHECK(pgl3_elements(FieldSpec::prime(3)).size() == pgl3_order(3));
  CHECK_THROWS_WITH_AS(pgl3_elements(FieldSpec::prime(7)), doctest::Contains("ScaleExceeded"), Error);
}

TEST_CASE("PGL_3(F_2) classes of small orbits") {
  auto ones = enumerate_point_orbits(2, 1);
  CHECK(pgl3_classify(ones, 2, ClassFilter::All).size() == 1);
  auto twos = enumerate_point_orbits(2, 2);
  CHECK(pgl3_classify(twos, 2, ClassFilter::All).size() == 1);
  CHECK(pgl3_classify(twos, 2, ClassFilter::GeneralPositionOnly).size() == 1);
  auto fours = enumerate_point_orbits(2, 4);
  auto gp = pgl3_classify(fours, 2, ClassFilter::GeneralPositionOnly);
  CHECK(gp.size() == 1);
  auto all = pgl3_classify(fours, 2, ClassFilter::All);
  size_t members = 0;
  for (const auto& c : all) members += c.members;
  CHECK(members == fours.size());

  // Class count does not depend on the input order.
  std::vector<PointOrbit> reversed(fours.rbegin(), fours.rend());
  CHECK(pgl3_classify(reversed, 2, ClassFilter::All).size() == all.size());
}

TEST_CASE("class representatives are pairwise inequivalent under exhaustive search (q = 2, 3)") {
  for (auto [q, n] : std::vector<std::pair<u64, unsigned>>{{2, 3}, {2, 4}, {3, 3}}) {
    auto field = FieldSpec::prime(q);
    auto orbits = enumerate_point_orbits(q, n);
    auto classes = pgl3_classify(orbits, q, ClassFilter::All);
    CHECK(classes.size() >= 2);
    const auto& group = pgl3_elements(field);
    for (size_t i = 0; i < classes.size(); ++i)
      for (size_t j = i + 1; j < classes.size(); ++j) {
        auto target = realize({classes[j].representative});
        auto target_set = point_set(target);
        bool found = false;
        for (const auto& a : group) {
          if (point_set(realize({apply_matrix(classes[i].representative, a)})) == target_set) {
            found = true;
            break;
          }
        }
        CHECK_FALSE(found);
      }
  }
}

TEST_CASE("match_transform recovers a known matrix") {
  auto f2 = FieldSpec::prime(2);
  auto p = orbit_from_poly(f2, parse_polynomial(f2, "t^4+t+1"), OrbitTemplate::ConicForm);
  auto self = match_transform({p}, {p});
  REQUIRE(self);

  const auto& group = pgl3_elements(f2);
  for (size_t idx : {1UL, 57UL, 100UL, 167UL}) {
    auto image = apply_matrix(p, group[idx]);
    auto all = match_all_transforms({p}, {image});
    bool recovered = std::any_of(all.begin(), all.end(), [&](const Transform& t) { return t.packed == group[idx]; });
    CHECK(recovered);
    auto one = match_transform({p}, {image});
    REQUIRE(one);
    // Applying the returned matrix reproduces the target set.
    auto lhs = realize({apply_matrix(p, one->packed)});
    auto rhs = realize({image});
    CHECK(point_set(lhs) == point_set(rhs));
    CHECK(orbit_set_class_key({p}) == orbit_set_class_key({image}));
  }
}

TEST_CASE("match_transform rejects collinear or mismatched sets") {
  auto f2 = FieldSpec::prime(2);
  auto p = orbit_from_poly(f2, parse_polynomial(f2, "t^4+t+1"), OrbitTemplate::ConicForm);
  // Find a size-4 orbit with three collinear points.
  PointOrbit bad;
  bool found = false;
  for (const auto& o : enumerate_point_orbits(2, 4)) {
    if (o.general_position == Tri::No) {
      bad = o;
      found = true;
      break;
    }
  }
  REQUIRE(found);
  CHECK_THROWS_WITH_AS(match_transform({p}, {bad}), doctest::Contains("CollinearTriple"), Error);

  auto pair = mirror_pair(f2, parse_polynomial(f2, "x^2+x+1"));
  CHECK(frobenius_cycle_type({pair}) == std::vector<unsigned>{2, 2});
  CHECK(frobenius_cycle_type({p}) == std::vector<unsigned>{4});
  CHECK_THROWS_WITH_AS(match_transform({p}, {pair}), doctest::Contains("FingerprintMismatch"), Error);
}

TEST_CASE("collinearity with a base pair") {
  auto f2 = FieldSpec::prime(2);
  auto base = orbit_from_poly(f2, parse_polynomial(f2, "t^4+t+1"), OrbitTemplate::ConicForm);
  // A rational point off every line through two conjugate points, or on one: compare with brute force.
  for (const auto& other : enumerate_point_orbits(2, 1)) {
    auto r = realize({base, other});
    bool brute = false;
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = i + 1; j < 4; ++j)
        if (any_collinear(*r.ext, {r.points[i], r.points[j], r.points[4]})) brute = true;
    auto lib = collinear_with_base_pair({base}, other);
    REQUIRE(lib);
    CHECK(*lib == brute);
  }
  auto q = FieldSpec::rationals();
  auto qb = orbit_from_poly(q, parse_polynomial(q, "x^4-2"), OrbitTemplate::ConicForm);
  auto ql = orbit_from_poly(q, parse_polynomial(q, "x^17-2"), OrbitTemplate::LineAtInfinity);
  CHECK_FALSE(collinear_with_base_pair({qb}, ql).has_value());
}

TEST_CASE("large_orbit") {
  auto q = FieldSpec::rationals();
  auto o = large_orbit(q, 17);
  CHECK(o.size == 17);
  CHECK(o.min_poly.to_string() == "x^17-2");
  CHECK(large_orbit(q, 1).size == 1);
  CHECK(large_orbit(q, 16, DegreeConstraint::Odd).size == 17);
  auto f2 = FieldSpec::prime(2);
  auto o4 = large_orbit(f2, 4);
  CHECK(o4.size == 4);
  CHECK(o4.min_poly.to_string() == "x^4+x+1");
}

TEST_CASE("transitive subgroups of Sym_4") {
  auto classes = transitive_sym4_audit();
  REQUIRE(classes.size() == 5);
  std::set<std::string> names;
  std::set<unsigned> orders;
  for (const auto& c : classes) {
    names.insert(c.name);
    orders.insert(c.order);
    CHECK(c.elements.size() == c.order);
    CHECK(c.contains_double_transposition);
    for (const auto& w : c.witnesses) CHECK(w.has_value());
  }
  CHECK(names == std::set<std::string>{"Sym4", "A4", "D8", "V4", "Z4"});
  CHECK(orders == std::set<unsigned>{24, 12, 8, 4});
  auto v4 = std::find_if(classes.begin(), classes.end(), [](const Sym4Class& c) { return c.name == "V4"; });
  REQUIRE(v4 != classes.end());
  REQUIRE(v4->witnesses[1]);
  CHECK(cycle_string(*v4->witnesses[1]) == "(14)(23)");
  // Each witness really exchanges its pairing.
  const std::array<std::array<unsigned, 4>, 3> pairings = {{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
  for (const auto& c : classes)
    for (size_t i = 0; i < 3; ++i) {
      const auto& w = *c.witnesses[i];
      const auto& pr = pairings[i];
      std::set<unsigned> first = {pr[0], pr[1]}, second = {pr[2], pr[3]};
      CHECK(std::set<unsigned>{w[pr[0]], w[pr[1]]} == second);
      CHECK(std::set<unsigned>{w[pr[2]], w[pr[3]]} == first);
    }
}
