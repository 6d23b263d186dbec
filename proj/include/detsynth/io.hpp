#pragma once

#include <string>

#include <json.hpp>

#include "detsynth/oracle.hpp"
#include "detsynth/sim.hpp"

namespace detsynth::io {

using json = nlohmann::json;

inline constexpr int format_version = 1;

// Parsers validate the schema and referential integrity; diagnostics carry
// the offending field path. Serializers emit sorted keys and sorted arrays,
// so parse -> serialize -> parse is the identity and output bytes are stable.

plant parse_plant(const json& j);
json plant_to_json(const plant& p);

erm parse_erm(const json& j);
json erm_to_json(const erm& table);

local_erm_set parse_local_erms(const json& j);
json local_erms_to_json(const local_erm_set& tables);

si_state parse_si_state(const json& j, const plant& p,
                        int component_cap = default_component_cap);
json si_state_to_json(const plant& p, const si_state& tau);

estimate_set parse_estimates(const json& j, const plant& p);
json estimates_to_json(const plant& p, const estimate_set& est);

json sync_to_json(const plant& p, const synchronizer& s);
std::string sync_to_dot(const plant& p, const synchronizer& s);

json modified_to_json(const modified_plant& m);
std::string modified_to_dot(const modified_plant& m);
json local_modified_to_json(const local_modified& m);
std::string local_modified_to_dot(const local_modified& m);

json report_to_json(const containment_report& report);

enum class file_kind { plant, erm, local_erms, si, estimates, unknown };
file_kind detect_kind(const json& j);

json load_json(const std::string& path);
void store_text(const std::string& path, const std::string& text);

} // namespace detsynth::io
