#pragma once

// JSON encodings of the library's data. Every `*_to_json` has a parsing
// counterpart where the data can be read back; reports are output only.

#include <json.hpp>

#include "cremona/constructions.hpp"
#include "cremona/linsys.hpp"

namespace cremona::json_io {

using Json = nlohmann::ordered_json;

Json field_to_json(const FieldSpec& f);
FieldSpec field_from_json(const Json& j);

Json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

Json orbit_to_json(const PointOrbit& o);
PointOrbit orbit_from_json(const Json& j);

Json mfs_to_json(const MfsModel& m);
MfsModel mfs_from_json(const Json& j);

Json center_to_json(const FiberCenter& c);
FiberCenter center_from_json(const Json& j);

Json link_to_json(const SarkisovLink& l);
SarkisovLink link_from_json(const Json& j);

Json word_to_json(const GroupoidWord& w);
GroupoidWord word_from_json(const Json& j);

Json element_to_json(const FreeProductElement& e);
FreeProductElement element_from_json(const Json& j);

Json linear_system_to_json(const LinearSystemClass& h);
LinearSystemClass linear_system_from_json(const Json& j);

Json error_to_json(const Error& e);
Json certificate_to_json(const IrreducibilityCertificate& c);
Json verdict_to_json(const LinkVerdict& v);
Json word_verdict_to_json(const WordVerdict& v);
Json moves_to_json(const std::vector<Move>& log);
Json reduction_to_json(const ReductionResult& r);
Json transform_to_json(const Transform& t);
Json sym4_to_json(const std::vector<Sym4Class>& classes);
Json dejonquieres_to_json(const DeJonquieresDecomposition& d);
Json big_link_to_json(const BigLink& b);
Json refined_report_to_json(const RefinedTargetReport& r);

// Parses text, mapping syntax errors to Error("ParseError").
Json parse_text(const std::string& text);

}  // namespace cremona::json_io
