#include "sdelab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sdelab {

bool Report::all_pass() const {
    for (const auto& a : assertions)
        if (!a.pass()) return false;
    return true;
}

nlohmann::json Report::to_json(bool with_timing) const {
    nlohmann::json j;
    j["config"] = config;
    j["version"] = "1.0";
    j["assertions"] = nlohmann::json::array();
    for (const auto& a : assertions) {
        j["assertions"].push_back({{"name", a.name},
                                   {"measured", a.measured},
                                   {"bound", a.bound},
                                   {"kind", a.lower_bound ? "lower" : "upper"},
                                   {"pass", a.pass()}});
    }
    j["all_pass"] = all_pass();
    if (with_timing) j["seconds"] = seconds;
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << contents;
        if (!out) throw std::runtime_error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " -> " + path);
}

void write_json_atomic(const std::string& path, const nlohmann::json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

void write_csv_atomic(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("csv row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

}  // namespace sdelab
