#pragma once

#include <set>
#include <string>
#include <vector>

#include "cremona/rewriting.hpp"

namespace cremona {

// Letter of a free product of groups (Z/2Z)^(S): a factor name and the set of
// generator indices it contains. `aux_bits` holds indices outside the main
// index set (even depths in the refined target).
struct FpLetter {
  std::string factor;
  std::set<unsigned> bits;
  std::set<unsigned> aux_bits;

  bool empty() const { return bits.empty() && aux_bits.empty(); }
  friend bool operator==(const FpLetter& a, const FpLetter& b) {
    return a.factor == b.factor && a.bits == b.bits && a.aux_bits == b.aux_bits;
  }
};

struct FreeProductElement {
  std::vector<FpLetter> word;  // alternating normal form

  bool is_identity() const { return word.empty(); }
  size_t length() const { return word.size(); }
  friend bool operator==(const FreeProductElement& a, const FreeProductElement& b) { return a.word == b.word; }
};

FreeProductElement fp_normalize(std::vector<FpLetter> raw);
FreeProductElement fp_multiply(const FreeProductElement& a, const FreeProductElement& b);
std::string fp_to_string(const FreeProductElement& e);

// Type II conic-bundle links of depth >= threshold map to (class key, {depth});
// everything else maps to the identity.
FreeProductElement homo_eval(const GroupoidWord& w, unsigned threshold = 16);

// Refined target: Hirzebruch letters go to factor "I0" indexed by depth; DP5/DP6
// letters to "J5:<class>" / "J6:<class>" with index (d-1)/2 for odd d, or the
// depth itself as an auxiliary index when d is even.
FreeProductElement homo_refined_eval(const GroupoidWord& w, const FieldSpec& field);

}  // namespace cremona
