#include "cremona/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cremona/json_io.hpp"

namespace cremona::cli {
namespace {

using json_io::Json;

struct FlagSpec {
  std::string name;
  std::string help;
  bool required = false;
  bool is_switch = false;
  std::string default_value;  // applied by execute when absent
};

struct CommandSpec {
  std::string group;
  std::string name;
  std::string help;
  std::vector<FlagSpec> flags;
};

FlagSpec req(std::string name, std::string help) { return {std::move(name), std::move(help), true, false, ""}; }
FlagSpec opt(std::string name, std::string help, std::string def = "") {
  return {std::move(name), std::move(help), false, false, std::move(def)};
}
FlagSpec sw(std::string name, std::string help) { return {std::move(name), std::move(help), false, true, ""}; }

const std::vector<CommandSpec>& table() {
  static const std::vector<CommandSpec> t = {
      {"orbit", "make", "Build a point orbit from a polynomial and a template",
       {req("field", "base field: Q, F<q> or GF(<q>)"), req("poly", "irreducible polynomial, e.g. t^4+t+1"),
        opt("template", "conic | split | line", "conic"), opt("second", "second quadratic of a split orbit"),
        sw("allow-unverified", "accept polynomials whose irreducibility cannot be certified")}},
      {"orbit", "census", "Count closed points and PGL3 classes (TSV)",
       {opt("field", "finite base field", "F2"), opt("size", "comma-separated orbit sizes", "1,2,4"),
        opt("filter", "all | gp | both", "both")}},
      {"orbit", "classify", "PGL3 classes of orbits of one size",
       {opt("field", "finite base field", "F2"), req("size", "orbit size"), opt("filter", "all | gp", "gp")}},
      {"orbit", "match", "Projective transformation taking one point set to another",
       {req("source", "JSON file: orbit or array of orbits"), req("target", "JSON file: orbit or array of orbits"),
        sw("all", "list every labeling that yields a rational transform")}},
      {"field", "factor", "Factor a polynomial over a prime field",
       {req("field", "prime field F<p>"), req("poly", "polynomial")}},
      {"field", "irreducible", "Irreducibility certificate", {req("field", "field"), req("poly", "polynomial")}},
      {"linsys", "push", "Push a linear system class through a type II conic-bundle link",
       {req("two-lambda", "2*lambda"), req("two-nu", "2*nu"), req("orbit-size", "size of the blown-up orbit"),
        opt("two-mult", "2*multiplicity at the orbit", "0"), sw("inverse", "also push back through the inverse link")}},
      {"word", "validate", "Check chaining and link validity of a word",
       {req("in", "word JSON file ('-' for standard input)")}},
      {"word", "reduce", "Reduce a relation word to the empty word",
       {req("in", "word JSON file"), opt("log", "write the move log to this file"),
        sw("snapshots", "include the word after each move in the log")}},
      {"word", "reorder", "Move links of depth >= threshold to the front",
       {req("in", "word JSON file"), opt("threshold", "depth threshold", "16"), opt("log", "write the move log")}},
      {"word", "fuzz", "Emit seeded random relators",
       {req("seed", "PRNG seed"), opt("count", "number of relators", "1"), opt("max-length", "letter budget", "40"),
        sw("check", "reduce each relator and report the outcome")}},
      {"homo", "eval", "Image of a word in the free product target",
       {req("in", "word JSON file"), sw("refined", "use the refined target"), opt("field", "field (refined target)"),
        opt("threshold", "minimal depth", "16")}},
      {"dejonquieres", "decompose", "Decompose (x,y) -> (x p(y), y) into links",
       {req("field", "field"), req("poly", "irreducible polynomial p"), sw("conjugate", "conjugate to P2"),
        opt("format", "json | table", "json")}},
      {"biglink", "c5", "Depth 2n+1 link between degree-5 del Pezzo conic bundles",
       {req("field", "field"), opt("orbit4", "quartic for the conic-form orbit"),
        opt("orbit-in", "orbit JSON file instead of --orbit4"), req("rpoly", "odd-degree irreducible"),
        opt("format", "json | table", "json")}},
      {"biglink", "c6", "Depth 2n+1 link between degree-6 del Pezzo conic bundles",
       {req("field", "field"), opt("quad", "quadratic; alone it gives the mirror pair"),
        opt("quad2", "second quadratic of a split orbit"), opt("orbits-in", "JSON file with the orbits"),
        req("rpoly", "odd-degree irreducible"), opt("format", "json | table", "json")}},
      {"catalog", "validate", "Validate Sarkisov links", {req("in", "link JSON file (object or array)")}},
      {"report", "refined", "Lower-bound report for the refined target",
       {req("field", "field"), opt("bound", "largest degree searched", "25"), opt("format", "json | table", "json")}},
      {"audit", "sym4", "Transitive subgroups of Sym4 and their exchange witnesses", {}},
  };
  return t;
}

const CommandSpec* find_command(const std::string& group, const std::string& name) {
  for (const auto& c : table()) {
    if (c.group == group && c.name == name) return &c;
  }
  return nullptr;
}

bool is_group(const std::string& g) {
  for (const auto& c : table()) {
    if (c.group == g) return true;
  }
  return false;
}

std::string overview() {
  std::ostringstream s;
  s << "usage: cremona-kit <command> <subcommand> [flags]\n\ncommands:\n";
  for (const auto& c : table()) s << "  " << std::left << std::setw(24) << (c.group + " " + c.name) << c.help << "\n";
  s << "\nEvery command accepts --out FILE and --help.\n";
  return s.str();
}

std::string group_help(const std::string& group) {
  std::ostringstream s;
  s << "usage: cremona-kit " << group << " <subcommand> [flags]\n\nsubcommands:\n";
  for (const auto& c : table()) {
    if (c.group == group) s << "  " << std::left << std::setw(12) << c.name << c.help << "\n";
  }
  return s.str();
}

// ------------------------------------------------------------ helpers

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream f(path);
  if (!f) fail("IoError", "cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) fail("IoError", "cannot write " + path);
  f << text;
}

Json read_json(const std::string& path) { return json_io::parse_text(read_input(path)); }

long to_long(const Invocation& inv, const std::string& flag) {
  const std::string& s = inv.get(flag);
  try {
    size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("BadValue", "--" + flag + " expects an integer, got \"" + s + "\"");
  }
}

unsigned to_unsigned(const Invocation& inv, const std::string& flag) {
  long v = to_long(inv, flag);
  if (v < 0) throw UsageError("BadValue", "--" + flag + " must be non-negative");
  return static_cast<unsigned>(v);
}

FieldSpec field_flag(const Invocation& inv) { return parse_field(inv.get("field")); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<PointOrbit> orbits_from(const Json& j) {
  std::vector<PointOrbit> out;
  if (j.is_array()) {
    for (const auto& o : j) out.push_back(json_io::orbit_from_json(o));
  } else {
    out.push_back(json_io::orbit_from_json(j));
  }
  return out;
}

std::string letter_tag(const SarkisovLink& l) {
  if (l.is_conic_bundle_type2()) {
    if (l.source.kind == MfsKind::Hirzebruch) return "jonquieres-compatible";
    if (l.source.kind == MfsKind::ConicBundle5 || l.source.kind == MfsKind::ConicBundle6) {
      return "conic-pencil-compatible";
    }
  }
  return l.depth <= 8 ? "depth<=8" : "untagged";
}

std::string center_text(const SarkisovLink& l) {
  if (!l.fiber_center) return "-";
  const auto& c = *l.fiber_center;
  switch (c.kind) {
    case FiberCenter::Kind::Polynomial:
      return c.poly->to_string();
    case FiberCenter::Kind::Infinity:
      return "infinity";
    case FiberCenter::Kind::Symbolic:
      return c.id;
  }
  return "-";
}

std::string word_table(const GroupoidWord& w) {
  std::ostringstream s;
  s << std::left << std::setw(6) << "pos" << std::setw(6) << "type" << std::setw(10) << "from" << std::setw(10)
    << "to" << std::setw(7) << "depth" << "center\n";
  for (size_t i = 0; i < w.letters.size(); ++i) {
    const auto& l = w.letters[i];
    s << std::setw(6) << i;
    if (l.is_marker()) {
      s << std::setw(6) << "iso" << std::setw(10) << l.from().name() << std::setw(10) << l.to().name() << "\n";
      continue;
    }
    auto e = l.effective();
    s << std::setw(6) << link_type_name(e.type) << std::setw(10) << e.source.name() << std::setw(10)
      << e.target.name() << std::setw(7) << e.depth << center_text(e) << "\n";
  }
  return s.str();
}

// ------------------------------------------------------------ commands

using Handler = std::function<std::string(const Invocation&)>;

std::string cmd_orbit_make(const Invocation& inv) {
  FieldSpec f = field_flag(inv);
  Polynomial p = parse_polynomial(f, inv.get("poly"));
  const std::string& tpl = inv.get("template");
  PointOrbit o;
  bool loose = inv.has("allow-unverified");
  if (tpl == "split") {
    Polynomial b = inv.has("second") ? parse_polynomial(f, inv.get("second")) : p;
    o = split_orbit(f, p, b, loose);
  } else {
    OrbitTemplate t;
    try {
      t = parse_template(tpl);
    } catch (const Error&) {
      throw UsageError("BadValue", "--template must be conic, split or line");
    }
    if (t == OrbitTemplate::Explicit) throw UsageError("BadValue", "explicit orbits are read from JSON");
    o = orbit_from_poly(f, p, t, loose);
  }
  return dump(json_io::orbit_to_json(o));
}

std::vector<unsigned> size_list(const Invocation& inv) {
  std::vector<unsigned> sizes;
  std::stringstream ss(inv.get("size"));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      long v = std::stol(tok, &used);
      if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
      sizes.push_back(static_cast<unsigned>(v));
    } catch (const std::exception&) {
      throw UsageError("BadValue", "--size expects positive integers, got \"" + tok + "\"");
    }
  }
  if (sizes.empty()) throw UsageError("BadValue", "--size is empty");
  return sizes;
}

std::vector<std::pair<std::string, ClassFilter>> filters(const std::string& f, bool allow_both) {
  if (f == "all") return {{"all", ClassFilter::All}};
  if (f == "gp") return {{"gp", ClassFilter::GeneralPositionOnly}};
  if (f == "both" && allow_both) return {{"all", ClassFilter::All}, {"gp", ClassFilter::GeneralPositionOnly}};
  throw UsageError("BadValue", std::string("--filter must be all, gp") + (allow_both ? " or both" : ""));
}

u64 finite_order(const FieldSpec& f) {
  if (!f.is_finite()) fail("UncomputableOverQ", "enumeration needs a finite field");
  return static_cast<u64>(f.order());
}

std::string cmd_orbit_census(const Invocation& inv) {
  const u64 q = finite_order(field_flag(inv));
  auto fs = filters(inv.get("filter"), true);
  std::ostringstream s;
  s << "q\tn\tfilter\torbit_count\tclass_count\n";
  for (unsigned n : size_list(inv)) {
    auto orbits = enumerate_point_orbits(q, n);
    for (const auto& [name, filter] : fs) {
      auto classes = pgl3_classify(orbits, q, filter);
      size_t counted = orbits.size();
      if (filter == ClassFilter::GeneralPositionOnly) {
        counted = static_cast<size_t>(std::count_if(orbits.begin(), orbits.end(), [](const PointOrbit& o) {
          return o.general_position == Tri::Yes;
        }));
      }
      s << q << "\t" << n << "\t" << name << "\t" << counted << "\t" << classes.size() << "\n";
    }
  }
  return s.str();
}

std::string cmd_orbit_classify(const Invocation& inv) {
  const u64 q = finite_order(field_flag(inv));
  const unsigned n = to_unsigned(inv, "size");
  auto filter = filters(inv.get("filter"), false).front().second;
  auto orbits = enumerate_point_orbits(q, n);
  auto classes = pgl3_classify(orbits, q, filter);
  Json arr = Json::array();
  for (const auto& c : classes) {
    arr.push_back({{"key", c.key},
                   {"members", c.members},
                   {"representative", json_io::orbit_to_json(c.representative)}});
  }
  return dump(Json{{"q", q}, {"size", n}, {"orbit_count", orbits.size()}, {"classes", arr}});
}

std::string cmd_orbit_match(const Invocation& inv) {
  auto p = orbits_from(read_json(inv.get("source")));
  auto q = orbits_from(read_json(inv.get("target")));
  if (inv.has("all")) {
    Json arr = Json::array();
    for (const auto& t : match_all_transforms(p, q)) arr.push_back(json_io::transform_to_json(t));
    return dump(Json{{"transforms", arr}});
  }
  auto t = match_transform(p, q);
  return dump(Json{{"transform", t ? json_io::transform_to_json(*t) : Json(nullptr)}});
}

std::string cmd_field_factor(const Invocation& inv) {
  FieldSpec f = field_flag(inv);
  auto factors = factor_over_prime_field(parse_polynomial(f, inv.get("poly")));
  Json arr = Json::array();
  for (const auto& fa : factors) {
    arr.push_back({{"factor", json_io::polynomial_to_json(fa.factor)},
                   {"text", fa.factor.to_string()},
                   {"multiplicity", fa.multiplicity}});
  }
  return dump(Json{{"factors", arr}});
}

std::string cmd_field_irreducible(const Invocation& inv) {
  FieldSpec f = field_flag(inv);
  Polynomial p = parse_polynomial(f, inv.get("poly"));
  Json j = json_io::certificate_to_json(irreducible_check(p));
  j["poly"] = json_io::polynomial_to_json(p);
  return dump(j);
}

std::string cmd_linsys_push(const Invocation& inv) {
  const long two_mult = to_long(inv, "two-mult");
  SarkisovLink link = grid_link(to_unsigned(inv, "orbit-size"));
  auto h = make_linear_system(to_long(inv, "two-lambda"), to_long(inv, "two-nu"),
                              {{link.orbit_src->label, mpq_class(two_mult, 2)}});
  auto pushed = push_type2(h, link);
  auto oracle = push_oracle(h, link);
  Json j;
  j["input"] = json_io::linear_system_to_json(h);
  j["link"] = json_io::link_to_json(link);
  j["pushed"] = json_io::linear_system_to_json(pushed);
  j["oracle_agrees"] = json_io::linear_system_to_json(oracle) == j["pushed"];
  if (inv.has("inverse")) j["pulled_back"] = json_io::linear_system_to_json(push_type2(pushed, link.inverse()));
  return dump(j);
}

std::string cmd_word_validate(const Invocation& inv) {
  GroupoidWord w = json_io::word_from_json(read_json(inv.get("in")));
  Json j = json_io::word_verdict_to_json(word_validate(w));
  Json tags = Json::array();
  for (size_t i = 0; i < w.letters.size(); ++i) {
    if (w.letters[i].is_marker()) continue;
    auto e = w.letters[i].effective();
    tags.push_back({{"position", i}, {"type", link_type_name(e.type)}, {"depth", e.depth}, {"tag", letter_tag(e)}});
  }
  j["letters"] = tags;
  j["galois_depth"] = [&] {
    unsigned d = 0;
    for (const auto& l : w.letters) {
      if (!l.is_marker()) d = std::max(d, l.link->depth);
    }
    return d;
  }();
  return dump(j);
}

std::string cmd_word_reduce(const Invocation& inv) {
  GroupoidWord w = json_io::word_from_json(read_json(inv.get("in")));
  auto r = reduce_relation(w, inv.has("snapshots"));
  if (inv.has("log")) write_file(inv.get("log"), dump(json_io::moves_to_json(r.log)));
  if (!r.residual.letters.empty()) {
    fail("NotARelator", r.stuck ? "reduction stuck: " + r.stuck_reason
                                : "residual of " + std::to_string(r.residual.letters.size()) + " letters");
  }
  return dump(json_io::reduction_to_json(r));
}

std::string cmd_word_reorder(const Invocation& inv) {
  GroupoidWord w = json_io::word_from_json(read_json(inv.get("in")));
  auto r = reorder_by_depth(w, to_unsigned(inv, "threshold"));
  if (inv.has("log")) write_file(inv.get("log"), dump(json_io::moves_to_json(r.log)));
  return dump(Json{{"word", json_io::word_to_json(r.word)}, {"fully_ordered", r.fully_ordered}, {"moves", r.log.size()}});
}

std::string cmd_word_fuzz(const Invocation& inv) {
  const long seed = to_long(inv, "seed");
  const unsigned count = to_unsigned(inv, "count");
  const unsigned max_len = to_unsigned(inv, "max-length");
  Json arr = Json::array();
  for (unsigned i = 0; i < count; ++i) {
    auto w = random_relator(static_cast<std::uint64_t>(seed) + i, max_len);
    Json item{{"seed", static_cast<std::uint64_t>(seed) + i}, {"word", json_io::word_to_json(w)}};
    if (inv.has("check")) {
      auto r = reduce_relation(w);
      item["reduces_to_empty"] = r.residual.letters.empty();
      item["moves"] = r.log.size();
    }
    arr.push_back(item);
  }
  return dump(Json{{"relators", arr}});
}

std::string cmd_homo_eval(const Invocation& inv) {
  GroupoidWord w = json_io::word_from_json(read_json(inv.get("in")));
  FreeProductElement e;
  if (inv.has("refined")) {
    if (!inv.has("field")) throw UsageError("MissingRequired", "--refined needs --field");
    e = homo_refined_eval(w, field_flag(inv));
  } else {
    e = homo_eval(w, to_unsigned(inv, "threshold"));
  }
  Json j = json_io::element_to_json(e);
  j["text"] = fp_to_string(e);
  return dump(j);
}

void check_format(const Invocation& inv) {
  const auto& f = inv.get("format");
  if (f != "json" && f != "table") throw UsageError("BadValue", "--format must be json or table");
}

std::string cmd_dejonquieres(const Invocation& inv) {
  check_format(inv);
  FieldSpec f = field_flag(inv);
  auto d = dejonquieres_decompose(make_dejonquieres(parse_polynomial(f, inv.get("poly"))));
  GroupoidWord w = inv.has("conjugate") ? conjugate_to_p2(d.word) : d.word;
  auto image = homo_eval(w);
  if (inv.get("format") == "table") {
    std::ostringstream s;
    s << word_table(w);
    s << "bidegree (1," << d.audit.bidegree_y << "), self-intersection " << d.audit.self_intersection
      << ", base points " << d.audit.base_point_total << "\n";
    s << "verification: " << d.audit.verification << "\n";
    s << "image: " << fp_to_string(image) << "\n";
    return s.str();
  }
  Json j = json_io::dejonquieres_to_json(d);
  if (inv.has("conjugate")) j["conjugated"] = json_io::word_to_json(w);
  j["image"] = json_io::element_to_json(image);
  j["image_text"] = fp_to_string(image);
  return dump(j);
}

std::string big_link_output(const Invocation& inv, const BigLink& b) {
  if (inv.get("format") == "table") {
    const auto& r = b.report;
    std::ostringstream s;
    s << "family          " << r.family << "\n"
      << "depth           " << r.depth << "\n"
      << "conics          " << r.conic_count << "\n"
      << "distinct        " << (r.pairwise_distinct ? "yes" : "no") << " (" << r.distinctness << ")\n"
      << "irreducible     " << (r.all_irreducible ? "yes" : "no") << "\n"
      << "no collinear    " << (r.no_collinear ? "yes" : "no") << " (" << r.collinearity_method << ")\n"
      << "fiber center    " << center_text(b.link) << "\n"
      << "link valid      " << (link_validate(b.link).ok ? "yes" : "no") << "\n";
    return s.str();
  }
  return dump(json_io::big_link_to_json(b));
}

std::string cmd_biglink_c5(const Invocation& inv) {
  check_format(inv);
  FieldSpec f = field_flag(inv);
  PointOrbit o;
  if (inv.has("orbit-in")) {
    o = json_io::orbit_from_json(read_json(inv.get("orbit-in")));
  } else if (inv.has("orbit4")) {
    o = orbit_from_poly(f, parse_polynomial(f, inv.get("orbit4")), OrbitTemplate::ConicForm);
  } else {
    throw UsageError("MissingRequired", "give --orbit4 or --orbit-in");
  }
  return big_link_output(inv, c5_big_link(o, parse_polynomial(f, inv.get("rpoly"))));
}

std::string cmd_biglink_c6(const Invocation& inv) {
  check_format(inv);
  FieldSpec f = field_flag(inv);
  std::vector<PointOrbit> orbits;
  if (inv.has("orbits-in")) {
    orbits = orbits_from(read_json(inv.get("orbits-in")));
  } else if (inv.has("quad")) {
    Polynomial a = parse_polynomial(f, inv.get("quad"));
    orbits = {inv.has("quad2") ? split_orbit(f, a, parse_polynomial(f, inv.get("quad2"))) : mirror_pair(f, a)};
  } else {
    throw UsageError("MissingRequired", "give --quad or --orbits-in");
  }
  return big_link_output(inv, c6_big_link(orbits, parse_polynomial(f, inv.get("rpoly"))));
}

std::string cmd_catalog_validate(const Invocation& inv) {
  Json in = read_json(inv.get("in"));
  auto one = [](const Json& j) {
    SarkisovLink l = json_io::link_from_json(j);
    Json v = json_io::verdict_to_json(link_validate(l));
    v["galois_depth"] = galois_depth(l);
    return v;
  };
  if (in.is_array()) {
    Json arr = Json::array();
    for (const auto& j : in) arr.push_back(one(j));
    return dump(arr);
  }
  return dump(one(in));
}

std::string cmd_report_refined(const Invocation& inv) {
  check_format(inv);
  auto r = refined_target_report(field_flag(inv), to_unsigned(inv, "bound"));
  if (inv.get("format") == "table") {
    std::ostringstream s;
    s << "field " << r.field.name() << ", bound " << r.bound << "\n";
    s << "I indices:";
    for (const auto& w : r.i_indices) s << " " << w.index << "(deg " << w.degree << ")";
    s << "\n";
    for (const auto& c : r.class_counts) {
      s << "N" << c.size << ": " << c.orbits << " orbits, " << c.classes_all << " classes (all), "
        << c.classes_general << " (general position)\n";
    }
    for (const auto& w : r.witnesses) s << std::left << std::setw(14) << w.name << fp_to_string(w.image) << "\n";
    s << "separated: " << (r.separated ? "yes" : "no") << "\n";
    return s.str();
  }
  return dump(json_io::refined_report_to_json(r));
}

std::string cmd_audit_sym4(const Invocation&) { return dump(Json{{"classes", json_io::sym4_to_json(transitive_sym4_audit())}}); }

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"orbit make", cmd_orbit_make},
      {"orbit census", cmd_orbit_census},
      {"orbit classify", cmd_orbit_classify},
      {"orbit match", cmd_orbit_match},
      {"field factor", cmd_field_factor},
      {"field irreducible", cmd_field_irreducible},
      {"linsys push", cmd_linsys_push},
      {"word validate", cmd_word_validate},
      {"word reduce", cmd_word_reduce},
      {"word reorder", cmd_word_reorder},
      {"word fuzz", cmd_word_fuzz},
      {"homo eval", cmd_homo_eval},
      {"dejonquieres decompose", cmd_dejonquieres},
      {"biglink c5", cmd_biglink_c5},
      {"biglink c6", cmd_biglink_c6},
      {"catalog validate", cmd_catalog_validate},
      {"report refined", cmd_report_refined},
      {"audit sym4", cmd_audit_sym4},
  };
  return h;
}

}  // namespace

const std::string& Invocation::get(const std::string& flag) const {
  auto it = flags.find(flag);
  if (it == flags.end()) throw UsageError("MissingRequired", "--" + flag + " is required");
  return it->second;
}

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& c : table()) out.push_back(c.group + " " + c.name);
  return out;
}

Invocation parse_invocation(const std::vector<std::string>& args) {
  Invocation inv;
  auto wants_help = [](const std::string& s) { return s == "--help" || s == "-h"; };
  if (args.empty() || wants_help(args[0])) {
    inv.help = true;
    inv.help_text = overview();
    return inv;
  }
  if (!is_group(args[0])) throw UsageError("UnknownCommand", args[0]);
  if (args.size() < 2 || wants_help(args[1])) {
    inv.path = {args[0]};
    inv.help = true;
    inv.help_text = group_help(args[0]);
    return inv;
  }
  const CommandSpec* spec = find_command(args[0], args[1]);
  if (!spec) throw UsageError("UnknownCommand", args[0] + " " + args[1]);
  inv.path = {spec->group, spec->name};

  CLI::App app(spec->help, "cremona-kit " + spec->group + " " + spec->name);
  app.allow_extras(true);
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::vector<FlagSpec> flags = spec->flags;
  flags.push_back(opt("out", "write the output to this file"));
  for (const auto& f : flags) {
    CLI::Option* o = f.is_switch ? app.add_flag("--" + f.name, f.help)
                                 : app.add_option("--" + f.name, values[f.name], f.help);
    if (f.required) o->required();
    if (!f.is_switch && !f.default_value.empty()) o->default_str(f.default_value);
    options.emplace_back(f.name, o);
  }
  std::vector<std::string> rest(args.begin() + 2, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    inv.help = true;
    inv.help_text = app.help();
    return inv;
  } catch (const CLI::RequiredError& e) {
    throw UsageError("MissingRequired", e.what());
  } catch (const CLI::ParseError& e) {
    throw UsageError("BadValue", e.what());
  }
  auto extras = app.remaining();
  if (!extras.empty()) {
    const std::string& tok = extras.front();
    throw UsageError(tok.rfind("-", 0) == 0 ? "UnknownFlag" : "UnexpectedArgument", tok);
  }
  for (const auto& [name, o] : options) {
    const FlagSpec* f = nullptr;
    for (const auto& x : flags) {
      if (x.name == name) f = &x;
    }
    if (o->count() > 0) {
      inv.flags[name] = f->is_switch ? "true" : values[name];
    } else if (!f->is_switch && !f->default_value.empty()) {
      inv.flags[name] = f->default_value;
    }
  }
  return inv;
}

int execute(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (inv.help) {
    out << inv.help_text;
    return 0;
  }
  const std::string name = inv.path.size() == 2 ? inv.path[0] + " " + inv.path[1] : "";
  auto it = handlers().find(name);
  if (it == handlers().end()) {
    err << dump(json_io::error_to_json(Error("UnknownCommand", name)));
    return 2;
  }
  try {
    std::string text = it->second(inv);
    if (inv.has("out")) {
      write_file(inv.get("out"), text);
    } else {
      out << text;
    }
    return 0;
  } catch (const UsageError& e) {
    err << dump(json_io::error_to_json(e));
    return 2;
  } catch (const Error& e) {
    err << dump(json_io::error_to_json(e));
    return 1;
  } catch (const std::exception& e) {
    err << dump(json_io::error_to_json(Error("InternalError", e.what())));
    return 1;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Invocation inv;
  try {
    inv = parse_invocation(args);
  } catch (const UsageError& e) {
    err << dump(json_io::error_to_json(e));
    if (e.kind() == "UnknownCommand") err << overview();
    return 2;
  }
  return execute(inv, out, err);
}

}  // namespace cremona::cli
