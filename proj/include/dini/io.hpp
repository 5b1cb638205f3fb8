#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "dini/coefficients.hpp"
#include "dini/fields.hpp"
#include "dini/geometry.hpp"

namespace dini {

using json = nlohmann::ordered_json;

// {"kind": "flat"|"power"|"log_power"|"custom", "beta", "delta", "scale", "table"}
DiniModulus modulus_from_json(const json& j);
json modulus_to_json(const DiniModulus& m);

// Modulus keys plus "R0"; or {"kind": "power_graph", "c", "p", "R0"}.
BoundaryChart chart_from_json(const json& j);

// {"kind": "identity"|"diag"|"constant"|"affine_perturbation", ...}
CoefficientField coefficients_from_json(const json& j);
// {"kind": "zero"|"constant", "value"}
Potential potential_from_json(const json& j);

// Grid field file: {"nx","ny","h","origin":[xi0,t0],"values":[...],"chart":{...}}.
// The chart is stored as the JSON that built it.
json grid_to_json(const GridField& g, const json& chart_spec);
std::shared_ptr<GridField> grid_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Typed field access with DomainError on missing or mistyped keys.
double get_number(const json& j, const std::string& key);
double get_number(const json& j, const std::string& key, double fallback);
int get_int(const json& j, const std::string& key, int fallback);
std::string get_string(const json& j, const std::string& key, const std::string& fallback);

}  // namespace dini
