#include "orbp/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "orbp/error.hpp"

namespace orbp {

namespace {

std::string csv_number(double v) { return std::isfinite(v) ? format_g12(v) : ""; }

std::string csv_count(long long v) { return v < 0 ? "" : std::to_string(v); }

void json_string(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void json_number(std::string& out, double v) {
    out += std::isfinite(v) ? format_g12(v) : "null";
}

void json_count(std::string& out, long long v) {
    if (v < 0)
        out += "null";
    else
        out += std::to_string(v);
}

}  // namespace

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string render_csv(const std::vector<std::pair<std::string, std::string>>& config,
                       const std::vector<ResultRow>& rows) {
    std::string out;
    for (const auto& [key, value] : config) out += "# " + key + "=" + value + "\n";
    out +=
        "schema_version,command,system,potential,measure,kind,q,n,eps,M,seed,method,"
        "value,covered_mass,centers,walltime_ms,status\n";
    for (const ResultRow& r : rows) {
        out += std::to_string(kSchemaVersion);
        out += ',' + csv_escape(r.command);
        out += ',' + csv_escape(r.system);
        out += ',' + csv_escape(r.potential);
        out += ',' + csv_escape(r.measure);
        out += ',' + csv_escape(r.kind);
        out += ',' + csv_count(r.q);
        out += ',' + csv_count(r.n);
        out += ',' + csv_number(r.eps);
        out += ',' + csv_count(r.M);
        out += ',' + (r.has_seed ? std::to_string(r.seed) : std::string());
        out += ',' + csv_escape(r.method);
        out += ',' + csv_number(r.value);
        out += ',' + csv_number(r.covered_mass);
        out += ',' + csv_number(r.centers);
        out += ',' + csv_number(r.walltime_ms);
        out += ',' + csv_escape(r.status);
        out += '\n';
    }
    return out;
}

std::string render_json(const std::string& command,
                        const std::vector<std::pair<std::string, std::string>>& config,
                        const std::vector<ResultRow>& rows) {
    std::string out = "{\n";
    out += "  \"schema_version\": " + std::to_string(kSchemaVersion) + ",\n";
    out += "  \"command\": ";
    json_string(out, command);
    out += ",\n  \"config\": {";
    for (size_t i = 0; i < config.size(); ++i) {
        out += i ? ",\n    " : "\n    ";
        json_string(out, config[i].first);
        out += ": ";
        json_string(out, config[i].second);
    }
    out += config.empty() ? "},\n" : "\n  },\n";
    out += "  \"rows\": [";
    for (size_t i = 0; i < rows.size(); ++i) {
        const ResultRow& r = rows[i];
        out += i ? ",\n    {" : "\n    {";
        auto field = [&out](const char* key, bool first = false) {
            if (!first) out += ", ";
            out += '"';
            out += key;
            out += "\": ";
        };
        field("command", true);
        json_string(out, r.command);
        field("system");
        json_string(out, r.system);
        field("potential");
        json_string(out, r.potential);
        field("measure");
        json_string(out, r.measure);
        field("kind");
        json_string(out, r.kind);
        field("q");
        json_count(out, r.q);
        field("n");
        json_count(out, r.n);
        field("eps");
        json_number(out, r.eps);
        field("M");
        json_count(out, r.M);
        field("seed");
        if (r.has_seed)
            out += std::to_string(r.seed);
        else
            out += "null";
        field("method");
        json_string(out, r.method);
        field("value");
        json_number(out, r.value);
        field("covered_mass");
        json_number(out, r.covered_mass);
        field("centers");
        json_number(out, r.centers);
        field("walltime_ms");
        json_number(out, r.walltime_ms);
        field("status");
        json_string(out, r.status);
        out += '}';
    }
    out += rows.empty() ? "]\n" : "\n  ]\n";
    out += "}\n";
    return out;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::ConfigError, "cannot write " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) fail(ErrorCode::ConfigError, "short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        fail(ErrorCode::ConfigError, "cannot rename " + tmp + " to " + path);
}

}  // namespace orbp
