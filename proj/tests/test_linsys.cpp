#include <doctest.h>

#include <random>

#include "cremona/linsys.hpp"

using namespace cremona;

namespace {

LinearSystemClass push_grid(long two_lambda, long two_nu, long two_mult, unsigned size) {
  auto h = make_linear_system(two_lambda, two_nu, {{"w_src", mpq_class(two_mult, 2)}});
  return push_type2(h, grid_link(size));
}

// Self-intersection of the strict transform on the common blow-up:
// (-lambda K + nu f)^2 - |w| m^2 with K^2 = 8, -K.f = 2, f^2 = 0.
mpq_class strict_square(const mpq_class& lambda, const mpq_class& nu, const mpq_class& m, unsigned size) {
  return lambda * lambda * 8 + 4 * lambda * nu - size * m * m;
}

}  // namespace

TEST_CASE("pushforward examples") {
  auto a = push_grid(2, 0, 0, 17);
  CHECK(a.lambda() == 1);
  CHECK(a.nu() == 17);
  CHECK(a.multiplicity("w_tgt") == 2);
  CHECK(a.multiplicities.count("w_src") == 0);

  auto b = push_grid(4, 6, 4, 5);
  CHECK(b.lambda() == 2);
  CHECK(b.nu() == 3);
  CHECK(b.multiplicity("w_tgt") == 2);

  auto c = push_grid(6, 2, 2, 16);
  CHECK(c.lambda() == 3);
  CHECK(c.nu() == 33);
  CHECK(c.multiplicity("w_tgt") == 5);

  auto half = push_grid(1, 0, 0, 1);
  CHECK(half.lambda() == mpq_class(1, 2));
  CHECK(half.nu() == mpq_class(1, 2));
  CHECK(half.multiplicity("w_tgt") == 1);

  auto zero = push_grid(0, 0, 0, 7);
  CHECK(zero.two_lambda == 0);
  CHECK(zero.two_nu == 0);
  CHECK(zero.multiplicity("w_tgt") == 0);
}

TEST_CASE("pushforward agrees with the lattice oracle and preserves the strict self-intersection") {
  long cases = 0;
  for (unsigned size = 1; size <= 20; ++size) {
    auto link = grid_link(size);
    for (long tl = 0; tl <= 10; ++tl)
      for (long tn = -10; tn <= 10; ++tn)
        for (long tm = 0; tm <= 2 * tl; ++tm) {
          auto h = make_linear_system(tl, tn, {{"w_src", mpq_class(tm, 2)}});
          auto a = push_type2(h, link);
          auto b = push_oracle(h, link);
          REQUIRE(a.two_lambda == b.two_lambda);
          REQUIRE(a.two_nu == b.two_nu);
          REQUIRE(a.multiplicities == b.multiplicities);
          REQUIRE(a.two_lambda == h.two_lambda);
          REQUIRE(strict_square(h.lambda(), h.nu(), h.multiplicity("w_src"), size) ==
                  strict_square(a.lambda(), a.nu(), a.multiplicity("w_tgt"), size));
          auto back = push_type2(a, link.inverse());
          REQUIRE(back.two_nu == h.two_nu);
          REQUIRE(back.multiplicities == h.multiplicities);
          ++cases;
        }
  }
  CHECK(cases == 50820);
}

TEST_CASE("unrelated multiplicities pass through") {
  auto h = make_linear_system(4, 0, {{"w_src", 1}, {"other", mpq_class(3, 2)}});
  auto a = push_type2(h, grid_link(3));
  CHECK(a.multiplicity("other") == mpq_class(3, 2));
  CHECK(a.multiplicity("w_tgt") == 3);
}

TEST_CASE("linear system validation") {
  CHECK_THROWS_WITH_AS(make_linear_system(-1, 0), doctest::Contains("InvalidArgument"), Error);
  CHECK_THROWS_WITH_AS(make_linear_system(2, 0, {{"w", 3}}), doctest::Contains("MultiplicityOutOfRange"), Error);
  CHECK_THROWS_WITH_AS(make_linear_system(2, 0, {{"w", mpq_class(1, 3)}}), doctest::Contains("InvalidArgument"), Error);
  CHECK(make_linear_system(2, 0).lambda().get_str() == "1");

  SarkisovLink iv;
  iv.type = LinkType::IV;
  iv.source = hirzebruch(0);
  iv.target = hirzebruch(0);
  CHECK_THROWS_WITH_AS(push_type2(make_linear_system(2, 0), iv), doctest::Contains("InvalidLink"), Error);
  CHECK_THROWS_WITH_AS(push_oracle(make_linear_system(2, 0), iv), doctest::Contains("InvalidLink"), Error);
}

TEST_CASE("lambda_bound examples") {
  auto a = lambda_bound(1, {{16, 0}}, mpq_class(1, 2));
  REQUIRE(a.certificate);
  CHECK(a.certificate->beta == 16);
  CHECK(a.certificate->bound == 8);
  CHECK(a.certificate->exceeds_four_lambda);

  auto b = lambda_bound(2, {{17, 0}}, mpq_class(1, 2));
  REQUIRE(b.certificate);
  CHECK(b.certificate->beta == 17);
  CHECK(b.certificate->bound == 17);

  auto c = lambda_bound(1, {{16, mpq_class(1, 2)}}, mpq_class(1, 2));
  CHECK_FALSE(c.certificate);
  CHECK(c.failure == "m_omega >= delta*lambda");

  CHECK_FALSE(lambda_bound(1, {{15, 0}}, mpq_class(1, 2)).certificate);
  CHECK_FALSE(lambda_bound(1, {{16, 0}}, mpq_class(1, 4)).certificate);
  CHECK_THROWS_WITH_AS(lambda_bound(0, {{16, 0}}, 1), doctest::Contains("NonpositiveLambda"), Error);
}

TEST_CASE("random certificates always exceed four lambda") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    long two_lambda = static_cast<long>(1 + rng() % 40);
    mpq_class lambda(two_lambda, 2);
    lambda.canonicalize();
    std::vector<LargeOrbit> orbits;
    size_t count = 1 + rng() % 3;
    for (size_t j = 0; j < count; ++j) {
      // m < lambda / 2 means 2 * (2m) < 2 lambda.
      long two_m = static_cast<long>(rng() % static_cast<u64>((two_lambda - 1) / 2 + 1));
      mpq_class m(two_m, 2);
      m.canonicalize();
      orbits.push_back({static_cast<unsigned>(16 + rng() % 30), m});
    }
    mpq_class a(static_cast<long>(1 + rng() % 6), 2);
    auto r = lambda_bound(lambda, orbits, a);
    REQUIRE(r.certificate);
    mpq_class beta = 0;
    for (const auto& o : orbits) beta += o.size * (1 - o.multiplicity / lambda);
    CHECK(r.certificate->beta == beta);
    CHECK(r.certificate->bound == a * beta * lambda);
    CHECK(r.certificate->bound > 4 * lambda);
  }
}
