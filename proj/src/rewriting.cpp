#include "cremona/rewriting.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cremona {

// ------------------------------------------------------------------ letters

WordLetter WordLetter::of(SarkisovLink l, int exp) {
  if (exp != 1 && exp != -1) fail("InvalidArgument", "link exponent must be 1 or -1");
  WordLetter w;
  w.link = std::move(l);
  w.exp = exp;
  return w;
}

WordLetter WordLetter::marker(MfsModel from, MfsModel to) {
  WordLetter w;
  w.iso = IsoMarker{std::move(from), std::move(to)};
  return w;
}

SarkisovLink WordLetter::effective() const {
  if (!link) fail("InvalidArgument", "isomorphism marker has no link");
  return exp == 1 ? *link : link->inverse();
}

MfsModel WordLetter::from() const {
  if (iso) return iso->from;
  return exp == 1 ? link->source : link->target;
}

MfsModel WordLetter::to() const {
  if (iso) return iso->to;
  return exp == 1 ? link->target : link->source;
}

size_t GroupoidWord::link_count() const {
  return static_cast<size_t>(std::count_if(letters.begin(), letters.end(), [](const WordLetter& l) { return !l.is_marker(); }));
}

WordVerdict word_validate(const GroupoidWord& w) {
  WordVerdict v;
  std::string expected = w.start.key();
  for (size_t i = 0; i < w.letters.size(); ++i) {
    const auto& l = w.letters[i];
    if (l.from().key() != expected) {
      v.ok = false;
      v.problem = "ChainBreak";
      v.position = i;
      v.detail = "letter starts at " + l.from().name() + ", previous ends at " + expected;
      return v;
    }
    if (!l.is_marker()) {
      auto lv = link_validate(*l.link);
      if (!lv.ok) {
        v.ok = false;
        v.problem = "InvalidLink";
        v.position = i;
        v.detail = lv.rule + ": " + lv.detail;
        return v;
      }
    }
    expected = l.to().key();
  }
  if (expected != w.end.key()) {
    v.ok = false;
    v.problem = "ChainBreak";
    v.position = w.letters.size();
    v.detail = "word ends at " + expected + ", declared end " + w.end.key();
  }
  return v;
}

// ------------------------------------------------------------ commutation

std::pair<SarkisovLink, SarkisovLink> commute_move(const SarkisovLink& chi1, const SarkisovLink& chi2,
                                                   const std::string& fresh_label) {
  for (const auto* l : {&chi1, &chi2}) {
    if (!l->is_conic_bundle_type2()) fail("NotTypeIICB", "commutation needs type II conic-bundle links");
  }
  if (chi1.target.key() != chi2.source.key()) fail("ChainBreak", "second link does not start where the first ends");
  if (!chi1.fiber_center || !chi2.fiber_center) fail("UndecidableCenters", "links without fiber centers");
  switch (compare_centers(*chi1.fiber_center, *chi2.fiber_center)) {
    case CenterRelation::Same:
      fail("SharedFiber", "both links are centered at " + chi1.fiber_center->key());
    case CenterRelation::Undecidable:
      fail("UndecidableCenters", chi1.fiber_center->key() + " vs " + chi2.fiber_center->key());
    case CenterRelation::Distinct:
      break;
  }
  const MfsModel& x1 = chi1.source;
  const MfsModel& x3 = chi2.target;
  MfsModel x4 = x1;
  x4.label = fresh_label;
  if (x1.kind == MfsKind::Hirzebruch) {
    // Index changes of transformations at distinct fibers add up.
    int twist = x1.signed_index() + x3.signed_index() - chi2.source.signed_index();
    x4 = hirzebruch_signed(twist, fresh_label);
  }

  SarkisovLink chi3 = chi1.inverse();  // undo chi1's transformation, now starting from X3
  chi3.source = x3;
  chi3.target = x4;
  SarkisovLink chi4 = chi2.inverse();
  chi4.source = x4;
  chi4.target = x1;
  for (const auto* l : {&chi3, &chi4}) {
    auto v = link_validate(*l);
    if (!v.ok) fail("InvalidLink", "transported link fails " + v.rule);
  }
  return {chi3, chi4};
}

// ------------------------------------------------------------ fiber levels

namespace {

std::string center_key(const SarkisovLink& l) { return l.fiber_center ? l.fiber_center->key() : "?"; }

std::string link_signature(const SarkisovLink& l) {
  auto orbit = [](const std::optional<BaseOrbit>& o) { return o ? std::to_string(o->size) + ":" + o->label : "-"; };
  return link_type_name(l.type) + "|" + l.source.key() + "|" + l.target.key() + "|" + orbit(l.orbit_src) + "|" +
         orbit(l.orbit_tgt) + "|" + center_key(l) + "|" + std::to_string(l.depth);
}

struct Levels {
  std::map<std::string, std::vector<int>> by_fiber;  // level after each prefix
};

Levels compute_levels(const std::vector<WordLetter>& letters) {
  Levels lv;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> stacks;
  std::vector<std::string> fibers;
  for (const auto& l : letters) {
    if (!l.is_marker()) fibers.push_back(center_key(l.effective()));
  }
  std::sort(fibers.begin(), fibers.end());
  fibers.erase(std::unique(fibers.begin(), fibers.end()), fibers.end());
  for (const auto& f : fibers) lv.by_fiber[f] = {0};
  for (const auto& l : letters) {
    std::string touched;
    if (!l.is_marker()) {
      auto e = l.effective();
      touched = center_key(e);
      auto& st = stacks[touched];
      const std::string& from = e.orbit_src->label;
      if (!st.empty() && st.back().second == from) {
        st.pop_back();
      } else {
        st.emplace_back(from, e.orbit_tgt->label);
      }
    }
    for (auto& [f, seq] : lv.by_fiber) seq.push_back(f == touched ? static_cast<int>(stacks[f].size()) : seq.back());
  }
  return lv;
}

class Rewriter {
 public:
  Rewriter(GroupoidWord w, bool snapshots) : w_(std::move(w)), snapshots_(snapshots) {
    auto collect = [&](const MfsModel& m) { used_.insert(m.label); };
    collect(w_.start);
    collect(w_.end);
    for (const auto& l : w_.letters) {
      collect(l.from());
      collect(l.to());
    }
  }

  GroupoidWord& word() { return w_; }
  std::vector<Move>& log() { return log_; }

  void record(std::string kind, size_t pos, std::string detail) {
    Move m;
    m.kind = std::move(kind);
    m.position = pos;
    m.detail = std::move(detail);
    if (snapshots_) m.after = w_;
    log_.push_back(std::move(m));
  }

  std::string fresh() {
    for (;;) {
      std::string s = "x" + std::to_string(++counter_);
      if (used_.insert(s).second) return s;
    }
  }

  // Replace inverse letters by the inverted links.
  void orient() {
    for (auto& l : w_.letters) {
      if (!l.is_marker() && l.exp == -1) l = WordLetter::of(l.effective());
    }
  }

  // Cancel adjacent letters that are literally inverse links (any type).
  void free_cancel() {
    auto& ls = w_.letters;
    size_t i = 0;
    while (i + 1 < ls.size()) {
      if (!ls[i].is_marker() && !ls[i + 1].is_marker() &&
          link_signature(ls[i].effective().inverse()) == link_signature(ls[i + 1].effective())) {
        ls.erase(ls.begin() + static_cast<long>(i), ls.begin() + static_cast<long>(i) + 2);
        record("cancel", i, "adjacent inverse links");
        if (i > 0) --i;
      } else {
        ++i;
      }
    }
  }

  // Fold every marker into a neighbouring link; drop trivial leftovers.
  void absorb_markers() {
    auto& ls = w_.letters;
    for (;;) {
      auto it = std::find_if(ls.begin(), ls.end(), [](const WordLetter& l) { return l.is_marker(); });
      if (it == ls.end()) return;
      size_t i = static_cast<size_t>(it - ls.begin());
      IsoMarker mk = *ls[i].iso;
      if (i + 1 < ls.size() && !ls[i + 1].is_marker()) {
        SarkisovLink l = ls[i + 1].effective();
        l.source = mk.from;
        ls[i + 1] = WordLetter::of(l);
        ls.erase(ls.begin() + static_cast<long>(i));
        record("absorb", i, "marker folded into the following link");
      } else if (i + 1 < ls.size()) {
        ls[i] = WordLetter::marker(mk.from, ls[i + 1].iso->to);
        ls.erase(ls.begin() + static_cast<long>(i) + 1);
        record("fuse", i, "adjacent markers fused");
      } else if (i > 0) {
        SarkisovLink l = ls[i - 1].effective();
        l.target = mk.to;
        ls[i - 1] = WordLetter::of(l);
        ls.erase(ls.begin() + static_cast<long>(i));
        record("absorb", i - 1, "trailing marker folded into the preceding link");
      } else {
        if (mk.from.key() == mk.to.key()) {
          ls.clear();
          record("drop", 0, "identity marker removed");
        }
        return;
      }
    }
  }

  // Swap letters i, i+1 through a commutation square.
  void commute_at(size_t i) {
    auto& ls = w_.letters;
    SarkisovLink a = ls[i].effective(), b = ls[i + 1].effective();
    auto [chi3, chi4] = commute_move(a, b, fresh());
    ls[i] = WordLetter::of(chi4.inverse());
    ls[i + 1] = WordLetter::of(chi3.inverse());
    record("commute", i, center_key(a) + " <-> " + center_key(b));
  }

 private:
  GroupoidWord w_;
  bool snapshots_;
  std::vector<Move> log_;
  std::set<std::string> used_;
  unsigned counter_ = 0;
};

void require_chain(const GroupoidWord& w) {
  auto v = word_validate(w);
  if (!v.ok) fail(v.problem, "letter " + std::to_string(v.position) + ": " + v.detail);
}

void require_type2_letters(const GroupoidWord& w) {
  for (const auto& l : w.letters) {
    if (!l.is_marker() && !l.link->is_conic_bundle_type2()) {
      fail("NotTypeIICB", "word contains a " + link_type_name(l.link->type) + " link");
    }
  }
}

void require_type2(const GroupoidWord& w) {
  require_chain(w);
  require_type2_letters(w);
}

}  // namespace

std::vector<FiberTrace> fiber_traces(const GroupoidWord& w) {
  std::vector<FiberTrace> out;
  for (auto& [f, seq] : compute_levels(w.letters).by_fiber) out.push_back({f, seq});
  return out;
}

ReductionResult reduce_relation(const GroupoidWord& w, bool keep_snapshots) {
  if (w.start.key() != w.end.key()) fail("NotARelator", "word starts at " + w.start.name() + " and ends elsewhere");
  require_chain(w);
  ReductionResult res;
  Rewriter rw(w, keep_snapshots);
  rw.orient();
  rw.absorb_markers();
  rw.free_cancel();
  require_type2_letters(rw.word());
  res.traces = fiber_traces(w);
  auto& ls = rw.word().letters;
  for (;;) {
    Levels lv = compute_levels(ls);
    const std::vector<int>* seq = nullptr;
    std::string fiber;
    for (const auto& [f, s] : lv.by_fiber) {
      if (*std::max_element(s.begin(), s.end()) > 0) {
        seq = &s;
        fiber = f;
        break;
      }
    }
    if (!seq) break;
    const int top = *std::max_element(seq->begin(), seq->end());
    // Leftmost letter reaching the top level, and the next letter on the same fiber.
    size_t j = 0;
    while ((*seq)[j + 1] != top) ++j;
    size_t k = j + 1;
    while (k < ls.size() && (ls[k].is_marker() || center_key(ls[k].effective()) != fiber)) ++k;
    if (k == ls.size()) {
      res.stuck = true;
      res.stuck_reason = "fiber " + fiber + " does not return to level 0";
      break;
    }
    try {
      for (; j + 1 < k; ++j) rw.commute_at(j);
    } catch (const Error& e) {
      if (e.kind() != "UndecidableCenters" && e.kind() != "SharedFiber") throw;
      res.stuck = true;
      res.stuck_reason = e.kind() + ": " + e.detail();
      break;
    }
    MfsModel a = ls[j].from(), c = ls[k].to();
    if (a.kind != c.kind || a.signed_index() != c.signed_index()) {
      res.stuck = true;
      res.stuck_reason = "cancelling pair joins " + a.name() + " and " + c.name();
      break;
    }
    ls.erase(ls.begin() + static_cast<long>(j), ls.begin() + static_cast<long>(k) + 1);
    if (a.key() != c.key()) ls.insert(ls.begin() + static_cast<long>(j), WordLetter::marker(a, c));
    rw.record("cancel", j, "fiber " + fiber + " at level " + std::to_string(top));
    rw.absorb_markers();
  }
  res.residual = rw.word();
  res.log = std::move(rw.log());
  return res;
}

ReorderResult reorder_by_depth(const GroupoidWord& w, unsigned threshold, bool keep_snapshots) {
  require_type2(w);
  Rewriter rw(w, keep_snapshots);
  rw.orient();
  rw.absorb_markers();
  auto& ls = rw.word().letters;
  ReorderResult res;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < ls.size(); ++i) {
      SarkisovLink a = ls[i].effective(), b = ls[i + 1].effective();
      if (!(a.depth < threshold && b.depth >= threshold)) continue;
      if (!a.fiber_center || !b.fiber_center) fail("UndecidableCenters", "links without fiber centers");
      auto rel = compare_centers(*a.fiber_center, *b.fiber_center);
      if (rel == CenterRelation::Undecidable) {
        fail("UndecidableCenters", a.fiber_center->key() + " vs " + b.fiber_center->key());
      }
      if (rel == CenterRelation::Same) {
        res.fully_ordered = false;
        continue;
      }
      rw.commute_at(i);
      changed = true;
    }
  }
  res.word = rw.word();
  res.log = std::move(rw.log());
  return res;
}

// ------------------------------------------------------------------ fuzzer

namespace {

class RelatorFactory {
 public:
  explicit RelatorFactory(std::uint64_t seed) : rng_(seed) {
    symbolic_ = coin(0.3);
    FieldSpec q = FieldSpec::rationals();
    switch (pick(4)) {
      case 0:
        base_ = hirzebruch(0, "s0");
        break;
      case 1:
        base_ = hirzebruch(1, "s0");
        break;
      case 2:
        base_ = conic_bundle5(orbit_from_poly(q, parse_polynomial(q, "x^4-2"), OrbitTemplate::ConicForm), "s0");
        break;
      default:
        base_ = conic_bundle6({split_orbit(q, parse_polynomial(q, "x^2-2"), parse_polynomial(q, "x^2-3"))}, "s0");
        break;
    }
  }

  const MfsModel& base() const { return base_; }

  std::vector<WordLetter> relator(const MfsModel& x, unsigned budget) {
    if (budget < 2) return {};
    unsigned choice = pick(budget >= 8 ? 5 : (budget >= 4 ? 2 : 1));
    switch (choice) {
      case 0:
        return trivial_pair(x);
      case 1:
        return four_link(x);
      case 2: {  // conjugation
        unsigned glen = 1 + pick(std::min(3u, (budget - 2) / 2));
        auto g = path(x, glen);
        auto inner = relator(g.empty() ? x : g.back().to(), budget - 2 * static_cast<unsigned>(g.size()));
        std::vector<WordLetter> out = g;
        out.insert(out.end(), inner.begin(), inner.end());
        for (auto it = g.rbegin(); it != g.rend(); ++it) out.push_back(invert(*it));
        return out;
      }
      case 3: {  // concatenation
        auto a = relator(x, budget / 2);
        auto b = relator(x, budget - static_cast<unsigned>(a.size()));
        a.insert(a.end(), b.begin(), b.end());
        return a;
      }
      default: {  // insertion
        auto a = relator(x, budget / 2);
        if (a.empty()) return a;
        size_t pos = pick(static_cast<unsigned>(a.size()) + 1);
        MfsModel at = pos == 0 ? x : a[pos - 1].to();
        auto b = relator(at, budget - static_cast<unsigned>(a.size()));
        a.insert(a.begin() + static_cast<long>(pos), b.begin(), b.end());
        return a;
      }
    }
  }

  // Occasionally splits the word with a trivial marker.
  void sprinkle_markers(std::vector<WordLetter>& w, unsigned max_length) {
    while (w.size() < max_length && coin(0.15)) {
      size_t pos = pick(static_cast<unsigned>(w.size()) + 1);
      MfsModel at = pos == 0 ? base_ : w[pos - 1].to();
      w.insert(w.begin() + static_cast<long>(pos), WordLetter::marker(at, at));
    }
  }

 private:
  unsigned pick(unsigned n) { return n <= 1 ? 0 : static_cast<unsigned>(rng_() % n); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  std::string fresh(const char* prefix) { return prefix + std::to_string(++counter_); }

  FiberCenter center(unsigned depth) {
    static const unsigned primes[] = {2, 3, 5, 7, 11};
    if (symbolic_) return FiberCenter::symbolic("d" + std::to_string(depth) + "c" + std::to_string(pick(4)));
    if (depth == 1 && coin(0.2)) return FiberCenter::infinity();
    // t^d - p is Eisenstein at p, so distinct primes give coprime centers.
    QPoly f(depth + 1, mpq_class(0));
    f[0] = -static_cast<long>(primes[pick(5)]);
    f[depth] = 1;
    return FiberCenter::polynomial(Polynomial::rational(f));
  }

  SarkisovLink random_link(const MfsModel& x, const std::optional<FiberCenter>& avoid = std::nullopt) {
    static const unsigned depths[] = {1, 1, 1, 2, 3, 5, 16, 17, 17, 19};
    SarkisovLink l;
    l.type = LinkType::II;
    l.source = x;
    for (int attempt = 0;; ++attempt) {
      l.depth = depths[pick(10)];
      l.fiber_center = center(l.depth);
      if (!avoid || compare_centers(*avoid, *l.fiber_center) == CenterRelation::Distinct) break;
    }
    l.target = x;
    l.target.label = fresh("s");
    if (x.kind == MfsKind::Hirzebruch) {
      std::vector<int> options;
      int n = x.signed_index(), d = static_cast<int>(l.depth);
      for (int step = -d; step <= d; step += 2) {
        if (std::abs(n + step) <= 6) options.push_back(n + step);
      }
      l.target = hirzebruch_signed(options[pick(static_cast<unsigned>(options.size()))], l.target.label);
    }
    l.orbit_src = BaseOrbit{l.depth, fresh("p"), std::nullopt};
    l.orbit_tgt = BaseOrbit{l.depth, fresh("p"), std::nullopt};
    return l;
  }

  WordLetter invert(const WordLetter& l) {
    if (l.is_marker()) return WordLetter::marker(l.iso->to, l.iso->from);
    return coin(0.5) ? WordLetter::of(*l.link, -l.exp) : WordLetter::of(l.effective().inverse());
  }

  std::vector<WordLetter> trivial_pair(const MfsModel& x) {
    auto chi = random_link(x);
    return {WordLetter::of(chi), invert(WordLetter::of(chi))};
  }

  std::vector<WordLetter> four_link(const MfsModel& x) {
    auto chi1 = random_link(x);
    auto chi2 = random_link(chi1.target, chi1.fiber_center);
    auto [chi3, chi4] = commute_move(chi1, chi2, fresh("s"));
    return {WordLetter::of(chi1), WordLetter::of(chi2), WordLetter::of(chi3), WordLetter::of(chi4)};
  }

  std::vector<WordLetter> path(const MfsModel& x, unsigned len) {
    std::vector<WordLetter> out;
    MfsModel cur = x;
    for (unsigned i = 0; i < len; ++i) {
      auto l = random_link(cur);
      cur = l.target;
      out.push_back(coin(0.3) ? WordLetter::of(l.inverse(), -1) : WordLetter::of(l));
    }
    return out;
  }

  std::mt19937_64 rng_;
  bool symbolic_ = false;
  MfsModel base_;
  unsigned counter_ = 0;
};

}  // namespace

GroupoidWord random_relator(std::uint64_t seed, unsigned max_length) {
  RelatorFactory f(seed);
  GroupoidWord w;
  w.start = w.end = f.base();
  w.letters = f.relator(f.base(), max_length);
  f.sprinkle_markers(w.letters, max_length);
  return w;
}

}  // namespace cremona
