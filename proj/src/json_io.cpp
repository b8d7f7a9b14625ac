#include "cremona/json_io.hpp"

namespace cremona::json_io {
namespace {

[[noreturn]] void bad(const std::string& what) { fail("ParseError", what); }

const Json& member(const Json& j, const char* name) {
  if (!j.is_object()) bad(std::string("expected an object with \"") + name + "\"");
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing \"") + name + "\"");
  return *it;
}

std::string str_member(const Json& j, const char* name) {
  const Json& v = member(j, name);
  if (!v.is_string()) bad(std::string("\"") + name + "\" must be a string");
  return v.get<std::string>();
}

unsigned uint_member(const Json& j, const char* name) {
  const Json& v = member(j, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    bad(std::string("\"") + name + "\" must be a non-negative integer");
  }
  return v.get<unsigned>();
}

long long_member(const Json& j, const char* name) {
  const Json& v = member(j, name);
  if (!v.is_number_integer()) bad(std::string("\"") + name + "\" must be an integer");
  return v.get<long>();
}

std::optional<BaseOrbit> base_orbit_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  BaseOrbit b;
  b.size = uint_member(j, "size");
  if (j.contains("label")) b.label = str_member(j, "label");
  if (j.contains("orbit") && !j["orbit"].is_null()) b.orbit = orbit_from_json(j["orbit"]);
  return b;
}

Json base_orbit_to(const std::optional<BaseOrbit>& b) {
  if (!b) return nullptr;
  Json j;
  j["size"] = b->size;
  j["label"] = b->label;
  if (b->orbit) j["orbit"] = orbit_to_json(*b->orbit);
  return j;
}

Json string_list(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

Json perm_to_json(const Perm4& p) { return cycle_string(p); }

}  // namespace

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail("ParseError", e.what());
  }
}

// ---------------------------------------------------------------- fields

Json field_to_json(const FieldSpec& f) {
  Json j;
  switch (f.kind) {
    case FieldSpec::Kind::Rationals:
      j["kind"] = "Q";
      break;
    case FieldSpec::Kind::FinitePrime:
      j["kind"] = "Fp";
      j["p"] = f.p;
      break;
    case FieldSpec::Kind::FiniteExtension:
      j["kind"] = "Fq";
      j["p"] = f.p;
      j["modulus"] = f.modulus;
      break;
  }
  return j;
}

FieldSpec field_from_json(const Json& j) {
  if (j.is_string()) return parse_field(j.get<std::string>());
  const std::string kind = str_member(j, "kind");
  if (kind == "Q") return FieldSpec::rationals();
  const auto p = static_cast<u64>(uint_member(j, "p"));
  if (kind == "Fp") return FieldSpec::prime(p);
  if (kind == "Fq") {
    const Json& m = member(j, "modulus");
    if (!m.is_array()) bad("\"modulus\" must be an array");
    std::vector<u64> mod;
    for (const auto& c : m) {
      if (!c.is_number_unsigned()) bad("modulus coefficients must be non-negative integers");
      mod.push_back(c.get<u64>());
    }
    return FieldSpec::extension(p, std::move(mod));
  }
  bad("unknown field kind \"" + kind + "\"");
}

// ----------------------------------------------------------- polynomials

Json polynomial_to_json(const Polynomial& p) {
  Json j;
  j["field"] = field_to_json(p.field());
  j["coeffs"] = string_list(p.coeff_strings());
  return j;
}

Polynomial polynomial_from_json(const Json& j) {
  if (j.is_string()) bad("a polynomial needs its field: {\"field\": ..., \"coeffs\": [...]}");
  FieldSpec f = field_from_json(member(j, "field"));
  const Json& c = member(j, "coeffs");
  if (!c.is_array()) bad("\"coeffs\" must be an array");
  std::vector<std::string> coeffs;
  for (const auto& x : c) {
    if (x.is_string()) {
      coeffs.push_back(x.get<std::string>());
    } else if (x.is_number_integer()) {
      coeffs.push_back(std::to_string(x.get<long long>()));
    } else {
      bad("coefficients must be strings or integers");
    }
  }
  return polynomial_from_strings(f, coeffs);
}

// ----------------------------------------------------------------- orbits

Json orbit_to_json(const PointOrbit& o) {
  Json j;
  j["field"] = field_to_json(o.field);
  j["template"] = template_name(o.kind);
  if (o.kind == OrbitTemplate::Explicit) {
    auto k = o.coord_field.finite_field();
    j["coord_field"] = field_to_json(o.coord_field);
    Json pts = Json::array();
    for (const auto& p : o.points) pts.push_back({k->to_string(p[0]), k->to_string(p[1]), k->to_string(p[2])});
    j["points"] = pts;
  } else {
    j["min_poly"] = polynomial_to_json(o.min_poly);
    if (o.second_poly) j["second_poly"] = polynomial_to_json(*o.second_poly);
  }
  j["size"] = o.size;
  j["general_position"] = tri_name(o.general_position);
  return j;
}

PointOrbit orbit_from_json(const Json& j) {
  FieldSpec f = field_from_json(member(j, "field"));
  OrbitTemplate t = parse_template(str_member(j, "template"));
  PointOrbit o;
  if (t == OrbitTemplate::Explicit) {
    FieldSpec cf = field_from_json(member(j, "coord_field"));
    auto k = cf.finite_field();
    std::vector<ProjPoint> pts;
    for (const auto& p : member(j, "points")) {
      if (!p.is_array() || p.size() != 3) bad("explicit points have three coordinates");
      pts.push_back({k->parse(p[0].get<std::string>()), k->parse(p[1].get<std::string>()),
                     k->parse(p[2].get<std::string>())});
    }
    o = explicit_orbit(f, cf, std::move(pts));
  } else if (t == OrbitTemplate::SplitLinePair) {
    Polynomial a = polynomial_from_json(member(j, "min_poly"));
    Polynomial b = j.contains("second_poly") ? polynomial_from_json(j["second_poly"]) : a;
    o = split_orbit(f, a, b);
  } else {
    o = orbit_from_poly(f, polynomial_from_json(member(j, "min_poly")), t);
  }
  if (j.contains("size") && uint_member(j, "size") != o.size) {
    fail("DegreeMismatch", "declared size " + std::to_string(uint_member(j, "size")) + " but the orbit has " +
                               std::to_string(o.size) + " points");
  }
  return o;
}

// ----------------------------------------------------------- MFS, links

Json mfs_to_json(const MfsModel& m) {
  Json j;
  j["kind"] = mfs_kind_name(m.kind);
  if (m.kind == MfsKind::Hirzebruch) {
    j["n"] = m.n;
    if (m.negative && m.n != 0) j["signed_index"] = m.signed_index();
  } else if (m.kind == MfsKind::DelPezzo) {
    j["n"] = m.n;
  }
  if (!m.orbits.empty()) {
    Json os = Json::array();
    for (const auto& o : m.orbits) os.push_back(orbit_to_json(o));
    j["orbits"] = os;
  }
  j["label"] = m.label;
  return j;
}

MfsModel mfs_from_json(const Json& j) {
  MfsKind kind = parse_mfs_kind(str_member(j, "kind"));
  std::string label = j.contains("label") ? str_member(j, "label") : "";
  std::vector<PointOrbit> orbits;
  if (j.contains("orbits")) {
    for (const auto& o : j["orbits"]) orbits.push_back(orbit_from_json(o));
  }
  switch (kind) {
    case MfsKind::ProjectivePlane:
      return projective_plane(label);
    case MfsKind::Hirzebruch:
      if (j.contains("signed_index")) {
        int s = static_cast<int>(long_member(j, "signed_index"));
        if (std::abs(s) != static_cast<int>(uint_member(j, "n"))) bad("signed_index disagrees with n");
        return hirzebruch_signed(s, label);
      }
      return hirzebruch(uint_member(j, "n"), label);
    case MfsKind::ConicBundle5:
      if (orbits.size() != 1) bad("cb5 needs exactly one orbit");
      return conic_bundle5(orbits.front(), label);
    case MfsKind::ConicBundle6:
      return conic_bundle6(orbits, label);
    case MfsKind::DelPezzo:
      return del_pezzo(uint_member(j, "n"), label);
    case MfsKind::NonRationalCB:
      return non_rational_cb(label);
  }
  bad("unreachable MFS kind");
}

Json center_to_json(const FiberCenter& c) {
  switch (c.kind) {
    case FiberCenter::Kind::Polynomial:
      return polynomial_to_json(*c.poly);
    case FiberCenter::Kind::Infinity:
      return "infinity";
    case FiberCenter::Kind::Symbolic:
      return Json{{"symbolic", c.id}};
  }
  return nullptr;
}

FiberCenter center_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "infinity") return FiberCenter::infinity();
    bad("unknown fiber center \"" + j.get<std::string>() + "\"");
  }
  if (j.contains("symbolic")) return FiberCenter::symbolic(str_member(j, "symbolic"));
  return FiberCenter::polynomial(polynomial_from_json(j));
}

Json link_to_json(const SarkisovLink& l) {
  Json j;
  j["type"] = link_type_name(l.type);
  j["source"] = mfs_to_json(l.source);
  j["target"] = mfs_to_json(l.target);
  j["orbit_src"] = base_orbit_to(l.orbit_src);
  j["orbit_tgt"] = base_orbit_to(l.orbit_tgt);
  j["fiber_center"] = l.fiber_center ? center_to_json(*l.fiber_center) : Json(nullptr);
  j["depth"] = l.depth;
  if (!l.singular_fiber_free) j["singular_fiber_free"] = false;
  return j;
}

SarkisovLink link_from_json(const Json& j) {
  SarkisovLink l;
  l.type = parse_link_type(str_member(j, "type"));
  l.source = mfs_from_json(member(j, "source"));
  l.target = mfs_from_json(member(j, "target"));
  if (j.contains("orbit_src")) l.orbit_src = base_orbit_from(j["orbit_src"]);
  if (j.contains("orbit_tgt")) l.orbit_tgt = base_orbit_from(j["orbit_tgt"]);
  if (j.contains("fiber_center") && !j["fiber_center"].is_null()) l.fiber_center = center_from_json(j["fiber_center"]);
  l.depth = j.contains("depth") ? uint_member(j, "depth") : galois_depth(l);
  if (j.contains("singular_fiber_free")) l.singular_fiber_free = member(j, "singular_fiber_free").get<bool>();
  return l;
}

// ------------------------------------------------------------------ words

Json word_to_json(const GroupoidWord& w) {
  Json j;
  j["endpoints"] = Json::array({mfs_to_json(w.start), mfs_to_json(w.end)});
  Json letters = Json::array();
  for (const auto& l : w.letters) {
    if (l.is_marker()) {
      letters.push_back({{"iso", {{"from", mfs_to_json(l.iso->from)}, {"to", mfs_to_json(l.iso->to)}}}});
    } else {
      letters.push_back({{"link", link_to_json(*l.link)}, {"exp", l.exp}});
    }
  }
  j["letters"] = letters;
  return j;
}

GroupoidWord word_from_json(const Json& j) {
  const Json& ends = member(j, "endpoints");
  if (!ends.is_array() || ends.size() != 2) bad("\"endpoints\" must hold two models");
  GroupoidWord w;
  w.start = mfs_from_json(ends[0]);
  w.end = mfs_from_json(ends[1]);
  const Json& letters = member(j, "letters");
  if (!letters.is_array()) bad("\"letters\" must be an array");
  for (const auto& l : letters) {
    if (l.contains("iso")) {
      const Json& iso = l["iso"];
      w.letters.push_back(WordLetter::marker(mfs_from_json(member(iso, "from")), mfs_from_json(member(iso, "to"))));
    } else {
      int exp = l.contains("exp") ? static_cast<int>(long_member(l, "exp")) : 1;
      w.letters.push_back(WordLetter::of(link_from_json(member(l, "link")), exp));
    }
  }
  return w;
}

// --------------------------------------------------------------- elements

Json element_to_json(const FreeProductElement& e) {
  Json word = Json::array();
  for (const auto& l : e.word) {
    Json letter;
    letter["factor"] = l.factor;
    letter["bits"] = l.bits;
    if (!l.aux_bits.empty()) letter["aux_bits"] = l.aux_bits;
    word.push_back(letter);
  }
  return Json{{"word", word}};
}

FreeProductElement element_from_json(const Json& j) {
  std::vector<FpLetter> raw;
  for (const auto& l : member(j, "word")) {
    FpLetter f;
    f.factor = str_member(l, "factor");
    for (const auto& b : member(l, "bits")) f.bits.insert(b.get<unsigned>());
    if (l.contains("aux_bits")) {
      for (const auto& b : l["aux_bits"]) f.aux_bits.insert(b.get<unsigned>());
    }
    raw.push_back(std::move(f));
  }
  return fp_normalize(std::move(raw));
}

// ---------------------------------------------------------- linear systems

Json linear_system_to_json(const LinearSystemClass& h) {
  Json j;
  j["two_lambda"] = h.two_lambda;
  j["two_nu"] = h.two_nu;
  j["lambda"] = h.lambda().get_str();
  j["nu"] = h.nu().get_str();
  Json m = Json::object();
  for (const auto& [label, v] : h.multiplicities) m[label] = v.get_str();
  j["multiplicities"] = m;
  return j;
}

LinearSystemClass linear_system_from_json(const Json& j) {
  std::map<std::string, mpq_class> mult;
  if (j.contains("multiplicities")) {
    for (const auto& [label, v] : j["multiplicities"].items()) {
      try {
        mpq_class q(v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>()));
        q.canonicalize();
        mult[label] = q;
      } catch (const std::invalid_argument&) {
        bad("bad multiplicity for " + label);
      }
    }
  }
  return make_linear_system(long_member(j, "two_lambda"), long_member(j, "two_nu"), std::move(mult));
}

// ---------------------------------------------------------------- reports

Json error_to_json(const Error& e) { return Json{{"error", {{"kind", e.kind()}, {"detail", e.detail()}}}}; }

Json certificate_to_json(const IrreducibilityCertificate& c) {
  Json j;
  j["verdict"] = verdict_name(c.verdict);
  j["method"] = method_name(c.method);
  if (c.prime) j["prime"] = c.prime;
  if (c.witness) j["witness"] = polynomial_to_json(*c.witness);
  return j;
}

Json verdict_to_json(const LinkVerdict& v) {
  Json j;
  j["ok"] = v.ok;
  if (!v.ok) {
    j["rule"] = v.rule;
    j["detail"] = v.detail;
  }
  j["necessary_conditions_only"] = v.necessary_conditions_only;
  return j;
}

Json word_verdict_to_json(const WordVerdict& v) {
  Json j;
  j["ok"] = v.ok;
  if (!v.ok) {
    j["problem"] = v.problem;
    j["position"] = v.position;
    j["detail"] = v.detail;
  }
  return j;
}

Json moves_to_json(const std::vector<Move>& log) {
  Json a = Json::array();
  for (const auto& m : log) {
    Json j;
    j["kind"] = m.kind;
    j["position"] = m.position;
    j["detail"] = m.detail;
    if (m.after) j["after"] = word_to_json(*m.after);
    a.push_back(j);
  }
  return a;
}

Json reduction_to_json(const ReductionResult& r) {
  Json j;
  j["residual"] = word_to_json(r.residual);
  j["empty"] = r.residual.letters.empty();
  j["stuck"] = r.stuck;
  if (r.stuck) j["stuck_reason"] = r.stuck_reason;
  j["moves"] = r.log.size();
  Json traces = Json::array();
  for (const auto& t : r.traces) traces.push_back({{"fiber", t.fiber}, {"levels", t.levels}});
  j["traces"] = traces;
  return j;
}

Json transform_to_json(const Transform& t) {
  Json j;
  j["field"] = field_to_json(t.field);
  j["matrix"] = Json::array({Json::array({t.entries[0], t.entries[1], t.entries[2]}),
                             Json::array({t.entries[3], t.entries[4], t.entries[5]}),
                             Json::array({t.entries[6], t.entries[7], t.entries[8]})});
  j["labeling"] = t.labeling;
  return j;
}

Json sym4_to_json(const std::vector<Sym4Class>& classes) {
  static const char* kExchanges[3] = {"{1,2}<->{3,4}", "{1,3}<->{2,4}", "{1,4}<->{2,3}"};
  Json a = Json::array();
  for (const auto& c : classes) {
    Json j;
    j["name"] = c.name;
    j["order"] = c.order;
    Json els = Json::array();
    for (const auto& p : c.elements) els.push_back(perm_to_json(p));
    j["elements"] = els;
    j["contains_(13)(24)"] = c.contains_double_transposition;
    Json w = Json::object();
    for (size_t i = 0; i < 3; ++i) w[kExchanges[i]] = c.witnesses[i] ? Json(perm_to_json(*c.witnesses[i])) : Json(nullptr);
    j["witnesses"] = w;
    a.push_back(j);
  }
  return a;
}

Json dejonquieres_to_json(const DeJonquieresDecomposition& d) {
  Json a;
  a["bidegree"] = {d.audit.bidegree_x, d.audit.bidegree_y};
  a["self_intersection"] = d.audit.self_intersection;
  Json groups = Json::array();
  for (const auto& g : d.audit.base_points) {
    groups.push_back({{"location", g.location},
                      {"count", g.count},
                      {"multiplicity", g.multiplicity},
                      {"infinitely_near", g.infinitely_near}});
  }
  a["base_points"] = groups;
  a["base_point_total"] = d.audit.base_point_total;
  a["multiplicity_square_sum"] = d.audit.multiplicity_square_sum;
  a["balanced"] = d.audit.balanced;
  a["coordinates_verified"] = d.audit.coordinates_verified;
  a["verification"] = d.audit.verification;
  Json depths = Json::array();
  for (const auto& l : d.word.letters) depths.push_back(l.effective().depth);
  return Json{{"word", word_to_json(d.word)}, {"depths", depths}, {"audit", a}};
}

Json big_link_to_json(const BigLink& b) {
  const auto& r = b.report;
  Json rep;
  rep["family"] = r.family;
  rep["depth"] = r.depth;
  rep["conic_count"] = r.conic_count;
  rep["distinctness"] = r.distinctness;
  rep["pairwise_distinct"] = r.pairwise_distinct;
  rep["all_irreducible"] = r.all_irreducible;
  rep["no_collinear"] = r.no_collinear;
  rep["collinearity_method"] = r.collinearity_method;
  if (r.system_rank) rep["system_rank"] = r.system_rank;
  if (!r.pencil.empty()) {
    Json p = Json::array();
    for (const auto& row : r.pencil) p.push_back(string_list(row));
    rep["pencil"] = p;
    rep["conic_through_q"] = string_list(r.conic_through_q);
  }
  if (r.pencil_parameter) rep["pencil_parameter"] = polynomial_to_json(*r.pencil_parameter);
  return Json{{"link", link_to_json(b.link)}, {"report", rep}};
}

Json refined_report_to_json(const RefinedTargetReport& r) {
  Json j;
  j["field"] = field_to_json(r.field);
  j["bound"] = r.bound;
  j["i0_depths"] = r.i0_depths;
  Json idx = Json::array();
  for (const auto& w : r.i_indices) {
    idx.push_back({{"degree", w.degree}, {"index", w.index}, {"poly", polynomial_to_json(w.poly)},
                   {"certificate", w.certificate}});
  }
  j["i_indices"] = idx;
  Json counts = Json::array();
  for (const auto& c : r.class_counts) {
    counts.push_back({{"size", c.size},
                      {"orbits", c.orbits},
                      {"classes_all", c.classes_all},
                      {"classes_general_position", c.classes_general}});
  }
  j["class_counts"] = counts;
  Json ws = Json::array();
  for (const auto& w : r.witnesses) {
    ws.push_back({{"name", w.name}, {"word", word_to_json(w.word)}, {"image", element_to_json(w.image)},
                  {"image_text", fp_to_string(w.image)}});
  }
  j["witnesses"] = ws;
  j["pairwise_product_lengths"] = r.pairwise_product_lengths;
  j["separated"] = r.separated;
  return j;
}

}  // namespace cremona::json_io
