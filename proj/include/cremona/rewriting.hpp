#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cremona/mfs.hpp"

namespace cremona {

struct IsoMarker {
  MfsModel from;
  MfsModel to;
};

// A link with exponent +-1, or an isomorphism marker between two models.
struct WordLetter {
  std::optional<SarkisovLink> link;
  int exp = 1;
  std::optional<IsoMarker> iso;

  static WordLetter of(SarkisovLink l, int exp = 1);
  static WordLetter marker(MfsModel from, MfsModel to);

  bool is_marker() const { return iso.has_value(); }
  SarkisovLink effective() const;  // the link as applied (inverted when exp = -1)
  MfsModel from() const;
  MfsModel to() const;
};

// Letters in application order: letters[0] is applied first.
struct GroupoidWord {
  MfsModel start;
  MfsModel end;
  std::vector<WordLetter> letters;

  size_t link_count() const;
};

struct WordVerdict {
  bool ok = true;
  std::string problem;  // "ChainBreak" or "InvalidLink"
  size_t position = 0;
  std::string detail;
};

WordVerdict word_validate(const GroupoidWord& w);

// Given chi1: X1 -> X2 and chi2: X2 -> X3 at distinct fibers, returns
// chi3: X3 -> X4 and chi4: X4 -> X1 with chi4 chi3 chi2 chi1 = id. X4 is a new
// model carrying `fresh_label`.
std::pair<SarkisovLink, SarkisovLink> commute_move(const SarkisovLink& chi1, const SarkisovLink& chi2,
                                                   const std::string& fresh_label);

struct FiberTrace {
  std::string fiber;    // center key
  std::vector<int> levels;  // N(F, 0..n) over the letters of the word
};

std::vector<FiberTrace> fiber_traces(const GroupoidWord& w);

struct Move {
  std::string kind;  // cancel | commute | absorb | fuse | drop
  size_t position = 0;
  std::string detail;
  std::optional<GroupoidWord> after;  // snapshot, when requested
};

struct ReductionResult {
  GroupoidWord residual;
  bool stuck = false;
  std::string stuck_reason;
  std::vector<Move> log;
  std::vector<FiberTrace> traces;  // of the input word
};

ReductionResult reduce_relation(const GroupoidWord& w, bool keep_snapshots = false);

struct ReorderResult {
  GroupoidWord word;
  std::vector<Move> log;
  bool fully_ordered = true;  // false when a shared center blocked a swap
};

ReorderResult reorder_by_depth(const GroupoidWord& w, unsigned threshold, bool keep_snapshots = false);

// Random relator built from trivial pairs and four-link commutations by
// conjugation, concatenation and insertion. Deterministic in the seed.
GroupoidWord random_relator(std::uint64_t seed, unsigned max_length = 40);

}  // namespace cremona
