#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "report.hpp"

#include <cmath>
#include <limits>

using namespace heatlab;
using nlohmann::json;

TEST_CASE("number formatting")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(12.566370614359172) == "12.5663706144");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("stable JSON does not depend on insertion order")
{
    json a = json::object();
    a["zeta"] = 1.0 / 3.0;
    a["alpha"] = {{"y", 2}, {"x", 1}};
    a["mid"] = json::array({1.5, 2.5});
    json b = json::object();
    b["mid"] = json::array({1.5, 2.5});
    b["alpha"] = {{"x", 1}, {"y", 2}};
    b["zeta"] = 1.0 / 3.0;
    const std::string sa = stable_json(a);
    CHECK(sa == stable_json(b));
    CHECK(sa.back() == '\n');
    CHECK(sa.find("\"alpha\"") < sa.find("\"mid\""));
    CHECK(sa.find("\"mid\"") < sa.find("\"zeta\""));
    CHECK(sa.find("0.333333333333") != std::string::npos);
    CHECK(sa.find("0.3333333333333") == std::string::npos);
}

TEST_CASE("non-finite values survive as strings")
{
    const json doc = {{"a", std::numeric_limits<double>::infinity()}, {"b", std::nan("")}};
    const std::string s = stable_json(doc);
    CHECK(s.find("\"inf\"") != std::string::npos);
    CHECK(s.find("\"nan\"") != std::string::npos);
    CHECK_NOTHROW(json::parse(s));
}

TEST_CASE("CSV text")
{
    CsvTable t{{"check", "value", "pass"}, {}};
    t.rows.push_back({std::string("plain"), 0.5, 1LL});
    t.rows.push_back({std::string("a,b \"q\""), -2.0, 0LL});
    CHECK(to_csv(t) == "check,value,pass\r\nplain,0.5,1\r\n\"a,b \"\"q\"\"\",-2,0\r\n");
}

TEST_CASE("report document")
{
    ExperimentReport r;
    r.experiment = "tail";
    r.verdict = "confirms";
    r.body = {{"fit", {{"slope", -1.0}}}};
    r.wall_seconds = 3.25;
    const json doc = report_document(r);
    CHECK(doc["experiment"] == "tail");
    CHECK(doc["verdict"] == "confirms");
    CHECK(doc["flagged"] == false);
    CHECK(doc["tool_version"] == kToolVersion);
    CHECK(doc["fit"]["slope"] == -1.0);
    CHECK_FALSE(doc.contains("wall_seconds"));
    const json timing = timing_document(r, 2);
    CHECK(timing["wall_seconds"] == 3.25);
    CHECK(timing["threads"] == 2);
}
