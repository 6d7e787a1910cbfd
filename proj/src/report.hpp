#pragma once

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace heatlab {

inline constexpr const char* kToolVersion = "0.1.0";

using CsvCell = std::variant<double, long long, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;
};

struct ExperimentReport {
    std::string experiment;
    /// Experiment-specific label: confirms / refutes / inconclusive,
    /// complete / incomplete, divergent / convergent, pass / fail.
    std::string verdict;
    /// Set when the run succeeded but the verdict is a refutation, a
    /// failure or inconclusive.
    bool flagged = false;
    nlohmann::json body = nlohmann::json::object();
    CsvTable table;
    double wall_seconds = 0.0;
};

/// Shortest decimal form with at most 12 significant digits; non-finite
/// values become "inf", "-inf" or "nan".
std::string format_number(double x);

/// Deterministic JSON text: keys sorted, two-space indent, doubles through
/// format_number (non-finite ones as strings), trailing newline.
std::string stable_json(const nlohmann::json& doc);

/// RFC 4180 text (CRLF line ends, quoting only where required).
std::string to_csv(const CsvTable& table);

/// The report document: verdict, flag, version and the experiment body.
nlohmann::json report_document(const ExperimentReport& r);

/// Wall-clock data kept out of the report so the report stays byte-stable.
nlohmann::json timing_document(const ExperimentReport& r, unsigned threads);

}  // namespace heatlab
