#pragma once

// JSON (de)serialization for jets plus a number-format-controlled dumper.
// Parsing problems surface as SchemaError with a location, never as raw
// library exceptions.

#include <string>

#include <json.hpp>

#include "cuspedge/jets.hpp"

namespace cuspedge {

using json = nlohmann::ordered_json;

json to_json(const Jet1& a);
json to_json(const Jet2& a);

// Accepts {"vars": 1|2, "order": N, "coeffs": [[i, c], ...] or
// [[i, j, c], ...]}; omitted entries are zero.  Throws SchemaError.
Jet1 jet1_from_json(const json& j);
Jet2 jet2_from_json(const json& j);

// Parse a JSON document; wraps parse errors into SchemaError with the byte
// offset reported by the parser.
json parse_json(const std::string& text);
json parse_json_file(const std::string& path);

// Serialize with every number printed to 17 significant digits, so reports
// are reproducible byte-for-byte across runs.
std::string dump_json(const json& j, int indent = 2);

// The number format used everywhere ("%.17g").
std::string format_real(double x);

}  // namespace cuspedge
