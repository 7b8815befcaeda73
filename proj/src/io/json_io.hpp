#pragma once

#include <json.hpp>
#include <string>

#include "gadgets/witness.hpp"
#include "rigidity/rigidity.hpp"
#include "verify/verify.hpp"

namespace bqw::io {

using json = nlohmann::json;

constexpr const char* kWitnessVersion = "1";

json witness_to_json(const WitnessSet& w);
// ParseError on schema violations or malformed field expressions.
WitnessSet witness_from_json(const json& j);

json report_to_json(const verify::VerifyReport& r);
json rigidity_to_json(const rigidity::RigidityReport& r);
json search_to_json(const rigidity::SearchReport& r);

json framework_to_json(const rigidity::Framework& f);
rigidity::Framework framework_from_json(const json& j);

// Canonical text form: two-space indent, sorted keys, trailing newline.
std::string dump(const json& j);
json parse_json(const std::string& text);

}  // namespace bqw::io
