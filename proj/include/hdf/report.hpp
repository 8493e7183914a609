#pragma once

// Machine-readable run reports: a versioned JSON document with stable key
// order, plus CSV and plain-text renderings.

#include <json.hpp>

#include <string>

namespace hdf {

// Insertion-ordered JSON so that serialization is deterministic.
using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchemaVersion = "1.0";

// Skeleton document: schema version, command echo, empty item list.
Json make_report(const std::string& command, const Json& config);

// Appends one result row; every item should carry a boolean "pass".
void add_item(Json& report, Json item);

// Fills the summary block (total/passed/failed counts and wall time).
void finalize_report(Json& report, double seconds);

bool report_all_passed(const Json& report);

// Pretty-printed JSON, two-space indent, trailing newline.
std::string render_json(const Json& report);

// Flat table of the item rows: header from the first item's keys, arrays
// joined by spaces.  Only meaningful for flat (census-style) items.
std::string render_csv(const Json& report);

// Human-readable rendering.
std::string render_text(const Json& report);

// The document with every timing field removed and re-serialized; two runs
// of the same configuration must agree on these bytes exactly.
std::string canonical_bytes(const Json& report);

} // namespace hdf
