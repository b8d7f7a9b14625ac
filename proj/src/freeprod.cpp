#include "cremona/freeprod.hpp"

#include <algorithm>
#include <iterator>

namespace cremona {
namespace {

std::set<unsigned> sym_diff(const std::set<unsigned>& a, const std::set<unsigned>& b) {
  std::set<unsigned> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

void require_chain(const GroupoidWord& w) {
  auto v = word_validate(w);
  if (!v.ok) fail(v.problem, "letter " + std::to_string(v.position) + ": " + v.detail);
}

}  // namespace

FreeProductElement fp_normalize(std::vector<FpLetter> raw) {
  // A stack pass reaches the fixpoint: merging can only expose the previous letter.
  FreeProductElement out;
  for (auto& l : raw) {
    if (l.empty()) continue;
    if (!out.word.empty() && out.word.back().factor == l.factor) {
      auto& top = out.word.back();
      top.bits = sym_diff(top.bits, l.bits);
      top.aux_bits = sym_diff(top.aux_bits, l.aux_bits);
      if (top.empty()) out.word.pop_back();
    } else {
      out.word.push_back(std::move(l));
    }
  }
  return out;
}

FreeProductElement fp_multiply(const FreeProductElement& a, const FreeProductElement& b) {
  std::vector<FpLetter> raw = a.word;
  raw.insert(raw.end(), b.word.begin(), b.word.end());
  return fp_normalize(std::move(raw));
}

std::string fp_to_string(const FreeProductElement& e) {
  if (e.word.empty()) return "1";
  std::string s;
  for (const auto& l : e.word) {
    s += "(" + l.factor + ",{";
    bool first = true;
    for (unsigned b : l.bits) {
      s += (first ? "" : ",") + std::to_string(b);
      first = false;
    }
    for (unsigned b : l.aux_bits) {
      s += (first ? "" : ",") + std::string("aux") + std::to_string(b);
      first = false;
    }
    s += "})";
  }
  return s;
}

FreeProductElement homo_eval(const GroupoidWord& w, unsigned threshold) {
  require_chain(w);
  std::vector<FpLetter> raw;
  for (const auto& l : w.letters) {
    if (l.is_marker()) continue;
    const auto& link = *l.link;
    if (!link.is_conic_bundle_type2() || link.depth < threshold) continue;
    raw.push_back({cb_class_key(link.source).str(), {link.depth}, {}});
  }
  return fp_normalize(std::move(raw));
}

FreeProductElement homo_refined_eval(const GroupoidWord& w, const FieldSpec& field) {
  require_chain(w);
  constexpr unsigned kThreshold = 16;
  std::vector<FpLetter> raw;
  for (const auto& l : w.letters) {
    if (l.is_marker()) continue;
    const auto& link = *l.link;
    if (!link.is_conic_bundle_type2() || link.depth < kThreshold) continue;
    for (const auto& o : link.source.orbits) {
      if (!(o.field == field)) fail("IncompatibleFields", "letter defined over " + o.field.name());
    }
    ConicBundleClassKey key;
    try {
      key = cb_class_key(link.source);
    } catch (const Error& e) {
      fail("UnresolvedClass", e.what());
    }
    FpLetter letter;
    if (key.family == CbFamily::Hirzebruch) {
      letter.factor = "I0";
      letter.bits = {link.depth};
    } else {
      letter.factor = (key.family == CbFamily::DP5 ? "J5:" : "J6:") + key.id;
      if (link.depth % 2 == 1) {
        letter.bits = {(link.depth - 1) / 2};
      } else {
        letter.aux_bits = {link.depth};
      }
    }
    raw.push_back(std::move(letter));
  }
  return fp_normalize(std::move(raw));
}

}  // namespace cremona
