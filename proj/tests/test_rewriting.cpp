#include <doctest.h>

#include <map>

#include "cremona/freeprod.hpp"

using namespace cremona;

namespace {

Polynomial eisenstein(unsigned degree, long prime) {
  QPoly f(degree + 1, mpq_class(0));
  f[0] = -prime;
  f[degree] = 1;
  return Polynomial::rational(f);
}

SarkisovLink hlink(const MfsModel& from, int to_index, const std::string& to_label, unsigned depth, long prime,
                   const std::string& tag) {
  SarkisovLink l;
  l.type = LinkType::II;
  l.source = from;
  l.target = hirzebruch_signed(to_index, to_label);
  l.orbit_src = BaseOrbit{depth, tag, std::nullopt};
  l.orbit_tgt = BaseOrbit{depth, tag + "'", std::nullopt};
  l.fiber_center = FiberCenter::polynomial(eisenstein(depth, prime));
  l.depth = depth;
  return l;
}

GroupoidWord word_of(const MfsModel& start, const MfsModel& end, std::vector<WordLetter> letters) {
  GroupoidWord w;
  w.start = start;
  w.end = end;
  w.letters = std::move(letters);
  return w;
}

std::vector<unsigned> depths(const GroupoidWord& w) {
  std::vector<unsigned> out;
  for (const auto& l : w.letters) {
    if (!l.is_marker()) out.push_back(l.effective().depth);
  }
  return out;
}

const MfsModel x1 = hirzebruch(0, "x1");

}  // namespace

TEST_CASE("word validation") {
  auto chi = hlink(x1, 1, "x2", 3, 2, "p");
  CHECK(word_validate(word_of(x1, x1, {WordLetter::of(chi), WordLetter::of(chi, -1)})).ok);
  CHECK(word_validate(word_of(x1, x1, {})).ok);

  auto far = hlink(hirzebruch(5, "y"), 4, "z", 1, 2, "q");
  auto v = word_validate(word_of(x1, far.target, {WordLetter::of(chi), WordLetter::of(far)}));
  CHECK_FALSE(v.ok);
  CHECK(v.problem == "ChainBreak");
  CHECK(v.position == 1);

  auto bad = chi;
  bad.depth = 4;
  auto vb = word_validate(word_of(x1, chi.target, {WordLetter::of(bad)}));
  CHECK_FALSE(vb.ok);
  CHECK(vb.problem == "InvalidLink");

  // Markers chain like letters.
  CHECK(word_validate(word_of(x1, x1, {WordLetter::marker(x1, x1)})).ok);
  CHECK(word_validate(word_of(x1, chi.target, {WordLetter::marker(x1, x1), WordLetter::of(chi)})).ok);
}

TEST_CASE("letters and inverses") {
  auto chi = hlink(x1, 1, "x2", 3, 2, "p");
  auto letter = WordLetter::of(chi, -1);
  CHECK(letter.from().key() == chi.target.key());
  CHECK(letter.to().key() == chi.source.key());
  CHECK(letter.effective().orbit_src->label == "p'");
  auto twice = chi.inverse().inverse();
  CHECK(twice.source.key() == chi.source.key());
  CHECK(twice.orbit_src->label == chi.orbit_src->label);
}

TEST_CASE("commute_move") {
  auto chi1 = hlink(x1, 1, "x2", 3, 2, "p");
  auto chi2 = hlink(chi1.target, 0, "x3", 17, 3, "q");
  auto [chi3, chi4] = commute_move(chi1, chi2, "x4");
  CHECK(chi3.depth == 3);
  CHECK(chi4.depth == 17);
  CHECK(chi3.source.key() == chi2.target.key());
  CHECK(chi4.target.key() == chi1.source.key());
  CHECK(chi3.target.key() == chi4.source.key());
  CHECK(link_validate(chi3).ok);
  CHECK(link_validate(chi4).ok);
  CHECK(compare_centers(*chi3.fiber_center, *chi1.fiber_center) == CenterRelation::Same);
  for (const auto& l : {chi1, chi2, chi3, chi4}) CHECK(cb_class_key(l.source) == cb_class_key(x1));

  // The four letters form a relator, in every rotation.
  std::vector<WordLetter> ring = {WordLetter::of(chi1), WordLetter::of(chi2), WordLetter::of(chi3),
                                  WordLetter::of(chi4)};
  for (size_t r = 0; r < 4; ++r) {
    std::vector<WordLetter> rotated(ring.begin() + static_cast<long>(r), ring.end());
    rotated.insert(rotated.end(), ring.begin(), ring.begin() + static_cast<long>(r));
    auto start = rotated.front().from();
    auto w = word_of(start, start, rotated);
    REQUIRE(word_validate(w).ok);
    auto red = reduce_relation(w);
    CHECK_FALSE(red.stuck);
    CHECK(red.residual.link_count() == 0);
  }

  auto same = hlink(chi1.target, 0, "x3", 3, 2, "q");
  CHECK_THROWS_WITH_AS(commute_move(chi1, same, "x4"), doctest::Contains("SharedFiber"), Error);

  SarkisovLink iv;
  iv.type = LinkType::IV;
  iv.source = hirzebruch(0);
  iv.target = x1;
  CHECK_THROWS_WITH_AS(commute_move(iv, chi1, "x4"), doctest::Contains("NotTypeIICB"), Error);
}

TEST_CASE("reduce_relation examples") {
  auto chi = hlink(x1, 1, "x2", 3, 2, "p");
  auto pair = reduce_relation(word_of(x1, x1, {WordLetter::of(chi), WordLetter::of(chi, -1)}));
  CHECK(pair.residual.link_count() == 0);
  REQUIRE(pair.log.size() == 1);
  CHECK(pair.log[0].kind == "cancel");
  REQUIRE_FALSE(pair.traces.empty());
  CHECK(pair.traces[0].levels == std::vector<int>{0, 1, 0});

  // A conjugated four-link relator, concatenated with a second one.
  auto chi1 = hlink(x1, 1, "x2", 3, 2, "p");
  auto chi2 = hlink(chi1.target, 0, "x3", 17, 3, "q");
  auto [chi3, chi4] = commute_move(chi1, chi2, "x4");
  auto g = hlink(x1, -1, "g", 1, 5, "r");
  std::vector<WordLetter> letters = {WordLetter::of(g, -1), WordLetter::of(chi1), WordLetter::of(chi2),
                                     WordLetter::of(chi3), WordLetter::of(chi4), WordLetter::of(chi),
                                     WordLetter::of(chi, -1), WordLetter::of(g)};
  auto w = word_of(g.target, g.target, letters);
  REQUIRE(word_validate(w).ok);
  auto red = reduce_relation(w, true);
  CHECK_FALSE(red.stuck);
  CHECK(red.residual.link_count() == 0);
  for (const auto& t : red.traces) {
    CHECK(t.levels.front() == 0);
    CHECK(t.levels.back() == 0);
  }
  for (const auto& m : red.log) {
    REQUIRE(m.after);
    CHECK(word_validate(*m.after).ok);
  }

  CHECK_THROWS_WITH_AS(reduce_relation(word_of(x1, chi.target, {WordLetter::of(chi)})),
                       doctest::Contains("NotARelator"), Error);
}

TEST_CASE("a nontrivial loop is reported as stuck, not thrown") {
  auto chi = hlink(x1, 1, "x2", 3, 2, "p");
  auto back = hlink(chi.target, 0, "x1", 3, 3, "q");  // different center back to x1
  auto red = reduce_relation(word_of(x1, x1, {WordLetter::of(chi), WordLetter::of(back)}));
  CHECK((red.stuck || red.residual.link_count() != 0));
}

TEST_CASE("reorder_by_depth") {
  auto chi1 = hlink(x1, 1, "x2", 3, 2, "p");
  auto chi2 = hlink(chi1.target, 0, "x3", 17, 3, "q");
  auto w = word_of(x1, chi2.target, {WordLetter::of(chi1), WordLetter::of(chi2)});
  auto r = reorder_by_depth(w, 16);
  CHECK(depths(r.word) == std::vector<unsigned>{17, 3});
  CHECK(r.fully_ordered);
  CHECK(word_validate(r.word).ok);
  CHECK(r.word.start.key() == w.start.key());
  CHECK(r.word.end.key() == w.end.key());
  CHECK(homo_eval(r.word) == homo_eval(w));
  REQUIRE(r.log.size() == 1);
  CHECK(r.log[0].kind == "commute");

  auto low = word_of(x1, chi1.target, {WordLetter::of(chi1)});
  auto unchanged = reorder_by_depth(low, 16);
  CHECK(depths(unchanged.word) == std::vector<unsigned>{3});
  CHECK(unchanged.log.empty());

  auto big = hlink(x1, 1, "y2", 17, 3, "q");
  auto small = hlink(big.target, 0, "y3", 3, 2, "p");
  auto ordered = word_of(x1, small.target, {WordLetter::of(big), WordLetter::of(small)});
  auto kept = reorder_by_depth(ordered, 16);
  CHECK(depths(kept.word) == std::vector<unsigned>{17, 3});
  CHECK(kept.log.empty());

  // A shared center blocks the swap.
  auto low_sym = chi1;
  low_sym.fiber_center = FiberCenter::symbolic("shared");
  auto high_sym = chi2;
  high_sym.fiber_center = FiberCenter::symbolic("shared");
  auto blocked = reorder_by_depth(word_of(x1, chi2.target, {WordLetter::of(low_sym), WordLetter::of(high_sym)}), 16);
  CHECK(blocked.log.empty());
  CHECK_FALSE(blocked.fully_ordered);
  CHECK(depths(blocked.word) == std::vector<unsigned>{3, 17});
}

TEST_CASE("random relators reduce to the empty word and keep their image") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto w = random_relator(seed, 40);
    REQUIRE(word_validate(w).ok);
    CHECK(w.letters.size() <= 40);
    auto before = homo_eval(w);
    CHECK(before.is_identity());
    auto red = reduce_relation(w, true);
    CHECK_FALSE(red.stuck);
    CHECK(red.residual.link_count() == 0);
    for (const auto& m : red.log) CHECK(homo_eval(*m.after) == before);
    // Deterministic in the seed.
    auto again = random_relator(seed, 40);
    CHECK(again.letters.size() == w.letters.size());
  }
}
