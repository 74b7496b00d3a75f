#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace sdelab {

/// One checked bound: pass iff measured <= bound (or >= when lower_bound).
struct Assertion {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool lower_bound = false;
    bool pass() const { return lower_bound ? measured >= bound : measured <= bound; }
};

/// Experiment report: config echo + assertion table.  All-pass drives the
/// process exit code.
struct Report {
    nlohmann::json config;
    std::vector<Assertion> assertions;
    double seconds = 0.0;

    bool all_pass() const;
    nlohmann::json to_json(bool with_timing = true) const;
};

/// Serializes a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// write-then-rename: the target never holds a partial file.
void write_file_atomic(const std::string& path, const std::string& contents);
void write_json_atomic(const std::string& path, const nlohmann::json& j);

/// CSV with `,` delimiter, `.` decimal, 17-significant-digit floats.
void write_csv_atomic(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

}  // namespace sdelab
