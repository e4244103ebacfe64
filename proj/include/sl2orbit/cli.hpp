#pragma once

// JSON job front end shared by the sl2orbit executable and its tests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sl2orbit::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Command-line overrides; they take precedence over request "options".
struct Flags {
    std::optional<double> tol;
    std::optional<double> tol_branch;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
};

struct Outcome {
    int exit_code = 0;  ///< 0 ok, 1 invalid input, 2 numerical failure
    std::string report;  ///< JSON text, newline terminated
};

const std::vector<std::string>& commands();

/// Parses, validates and runs one request.
Outcome run(const std::string& command, const std::string& request_text, const Flags& flags = {});

const std::string& request_schema();
const std::string& report_schema();

/// Validates a report against the shipped schema; returns "" or "<path>: <message>".
std::string check_report(const std::string& report_text);

}  // namespace sl2orbit::cli
