#include "hdf/report.hpp"

#include "hdf/errors.hpp"

#include <sstream>

namespace hdf {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string scalar_to_string(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string joined;
        for (const auto& e : v) {
            if (!joined.empty()) joined += ' ';
            joined += scalar_to_string(e);
        }
        return joined;
    }
    return v.dump();
}

void strip_key(Json& node, const std::string& key) {
    if (node.is_object()) {
        node.erase(key);
        for (auto& [k, v] : node.items()) {
            (void)k;
            strip_key(v, key);
        }
    } else if (node.is_array()) {
        for (auto& v : node) strip_key(v, key);
    }
}

} // namespace

Json make_report(const std::string& command, const Json& config) {
    Json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["command"] = command;
    doc["config"] = config;
    doc["items"] = Json::array();
    return doc;
}

void add_item(Json& report, Json item) {
    report["items"].push_back(std::move(item));
}

void finalize_report(Json& report, double seconds) {
    std::size_t total = 0, passed = 0;
    for (const auto& item : report["items"]) {
        ++total;
        if (item.value("pass", false)) ++passed;
    }
    Json summary;
    summary["total"] = total;
    summary["passed"] = passed;
    summary["failed"] = total - passed;
    summary["seconds"] = seconds;
    report["summary"] = std::move(summary);
}

bool report_all_passed(const Json& report) {
    for (const auto& item : report["items"])
        if (!item.value("pass", false)) return false;
    return true;
}

std::string render_json(const Json& report) {
    return report.dump(2) + "\n";
}

std::string render_csv(const Json& report) {
    const auto& items = report["items"];
    std::ostringstream out;
    if (items.empty()) return "";
    bool first_col = true;
    for (const auto& [key, value] : items[0].items()) {
        (void)value;
        if (!first_col) out << ',';
        first_col = false;
        out << csv_escape(key);
    }
    out << '\n';
    for (const auto& item : items) {
        first_col = true;
        for (const auto& [key, value] : item.items()) {
            (void)key;
            if (!first_col) out << ',';
            first_col = false;
            out << csv_escape(scalar_to_string(value));
        }
        out << '\n';
    }
    return out.str();
}

std::string render_text(const Json& report) {
    std::ostringstream out;
    out << report["command"].get<std::string>() << " report (schema "
        << report["schema_version"].get<std::string>() << ")\n";
    for (const auto& item : report["items"]) {
        bool first = true;
        for (const auto& [key, value] : item.items()) {
            if (!first) out << "  ";
            first = false;
            out << key << "=" << scalar_to_string(value);
        }
        out << '\n';
    }
    if (report.contains("summary")) {
        const auto& s = report["summary"];
        out << "summary: " << s["passed"].dump() << "/" << s["total"].dump() << " passed, "
            << s["failed"].dump() << " failed\n";
    }
    return out.str();
}

std::string canonical_bytes(const Json& report) {
    Json copy = report;
    strip_key(copy, "seconds");
    return copy.dump(2) + "\n";
}

} // namespace hdf
