#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace heatlab {

using nlohmann::json;

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (x == 0.0)
        return "0";  // also folds -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

void escape_string(std::ostringstream& os, const std::string& s)
{
    // nlohmann's dump already implements JSON string escaping.
    os << json(s).dump();
}

void emit(std::ostringstream& os, const json& v, int depth)
{
    const std::string pad(2 * depth, ' ');
    const std::string inner(2 * (depth + 1), ' ');
    switch (v.type()) {
    case json::value_t::object: {
        if (v.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [key, value] : v.items()) {  // std::map order: sorted
            if (!first)
                os << ",\n";
            first = false;
            os << inner;
            escape_string(os, key);
            os << ": ";
            emit(os, value, depth + 1);
        }
        os << "\n" << pad << "}";
        return;
    }
    case json::value_t::array: {
        if (v.empty()) {
            os << "[]";
            return;
        }
        // Short arrays of scalars stay on one line.
        bool scalars = v.size() <= 8;
        for (const auto& x : v)
            scalars = scalars && !x.is_structured();
        if (scalars) {
            os << "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i)
                    os << ", ";
                emit(os, v[i], depth + 1);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                os << ",\n";
            os << inner;
            emit(os, v[i], depth + 1);
        }
        os << "\n" << pad << "]";
        return;
    }
    case json::value_t::number_float: {
        const double x = v.get<double>();
        if (std::isfinite(x))
            os << format_number(x);
        else
            os << '"' << format_number(x) << '"';
        return;
    }
    default:
        os << v.dump();
        return;
    }
}

std::string csv_field(const CsvCell& cell)
{
    if (const double* d = std::get_if<double>(&cell))
        return format_number(*d);
    if (const long long* i = std::get_if<long long>(&cell))
        return std::to_string(*i);
    const std::string& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string stable_json(const json& doc)
{
    std::ostringstream os;
    emit(os, doc, 0);
    os << "\n";
    return os.str();
}

std::string to_csv(const CsvTable& table)
{
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i)
            out += ',';
        out += csv_field(table.header[i]);
    }
    out += "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += csv_field(row[i]);
        }
        out += "\r\n";
    }
    return out;
}

json report_document(const ExperimentReport& r)
{
    json doc = r.body;
    doc["experiment"] = r.experiment;
    doc["verdict"] = r.verdict;
    doc["flagged"] = r.flagged;
    doc["tool_version"] = kToolVersion;
    return doc;
}

json timing_document(const ExperimentReport& r, unsigned threads)
{
    return json{{"experiment", r.experiment},
                {"threads", threads},
                {"wall_seconds", r.wall_seconds}};
}

}  // namespace heatlab
