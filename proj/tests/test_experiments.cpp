#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "config.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "oracles.hpp"
#include "report.hpp"

#include <cmath>
#include <string>

using namespace heatlab;
using nlohmann::json;

namespace {

RunConfig config(json doc) { return resolve_config(std::move(doc)); }

double cell(const CsvCell& c) { return std::get<double>(c); }

}  // namespace

TEST_CASE("least-squares line")
{
    const std::vector<double> x = {1, 2, 3, 4};
    const std::vector<double> y = {0.5, -1.5, -3.5, -5.5};
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-14));
    const std::vector<double> one = {1.0};
    CHECK_THROWS_AS(fit_line(one, one), InvalidArgument);
}

TEST_CASE("closed-form comparison Laplacian")
{
    for (double r : {0.1, 0.5, 1.0, 1.3, 2.0, 3.0})
        CHECK(comparison_laplacian(r)
              == doctest::Approx(oracle::comparison_laplacian(r)).epsilon(1e-12));
    CHECK(comparison_laplacian(0.0) == -3.0);
    CHECK(comparison_laplacian(1e-5) == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(comparison_laplacian(50.0) == doctest::Approx(-4.0).epsilon(1e-7));
}

TEST_CASE("comparison data against quadrature of w")
{
    const auto cfg = config({{"experiment", "comparison"},
                             {"manifold", {{"family", "power_exp"}, {"p", 4}, {"sign", 1}}},
                             {"times", {0.1}},
                             {"radii", {2}},
                             {"controls", {{"cells_per_unit", 64}}}});
    const ExperimentReport r = run_experiment(cfg);
    CHECK(r.verdict == "confirms");
    REQUIRE(r.table.rows.size() == 128);
    double worst = 0.0;
    for (const auto& row : r.table.rows) {
        const double rr = cell(row[2]);
        worst = std::max(worst, std::abs(cell(row[4]) - oracle::comparison_w(rr, 2.0)));
        CHECK(cell(row[3]) <= cell(row[4]) + 1e-6);
        CHECK(cell(row[5]) < -1.0);
    }
    CHECK(worst <= 1e-10);
    CHECK(r.body["lap_w_at_1"].get<double>() == doctest::Approx(-4.0 + (std::exp(1.0) - 1.0) / std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("comparison preconditions")
{
    json doc = {{"experiment", "comparison"}, {"times", {0.1}}, {"radii", {2}}};
    CHECK_THROWS_AS(run_experiment(config(doc)), InvalidArgument);  // euclidean
    doc["manifold"] = {{"family", "power_exp"}, {"p", 4}};
    doc["times"] = {2.0};
    CHECK_THROWS_AS(run_experiment(config(doc)), InvalidArgument);
    doc["times"] = {0.1};
    doc["radii"] = {6};
    CHECK_THROWS_AS(run_experiment(config(doc)), RangeError);
}

TEST_CASE("the conical and weighted descriptions give the same mass function")
{
    json doc = {{"experiment", "completeness"},
                {"t", 0.1},
                {"controls", {{"cells_per_unit", 128}}}};
    doc["manifold"] = {{"family", "warped_cone"}};
    const ExperimentReport cone = run_experiment(config(doc));
    doc["manifold"] = {{"family", "power_exp"}, {"p", 4}, {"sign", 1}};
    const ExperimentReport weight = run_experiment(config(doc));
    REQUIRE(cone.table.rows.size() == weight.table.rows.size());
    for (std::size_t i = 0; i < cone.table.rows.size(); ++i) {
        CHECK(cell(cone.table.rows[i][0]) == cell(weight.table.rows[i][0]));
        CHECK(std::abs(cell(cone.table.rows[i][1]) - cell(weight.table.rows[i][1])) <= 1e-10);
    }
}

TEST_CASE("flat space is stochastically complete")
{
    const auto cfg = config({{"experiment", "completeness"},
                             {"t", 0.1},
                             {"controls", {{"cells_per_unit", 256}}}});
    const ExperimentReport r = run_experiment(cfg);
    CHECK(r.verdict == "complete");
    CHECK_FALSE(r.flagged);
    CHECK(cell(r.table.rows.back()[1]) >= 1.0 - 1e-6);
}

TEST_CASE("blowup preconditions")
{
    json doc = {{"experiment", "blowup"},
                {"manifold", {{"family", "power_exp"}, {"p", 4}}},
                {"datum", {{"kind", "complement_indicator"}, {"radius", 1.0001}}},
                {"times", {0.1}},
                {"radii", {2, 3}}};
    CHECK_THROWS_AS(run_experiment(config(doc)), InvalidArgument);
    doc["datum"]["radius"] = 1;
    doc["radii"] = {2, 6};
    CHECK_THROWS_AS(run_experiment(config(doc)), RangeError);
    doc["radii"] = {3, 2};
    CHECK_THROWS_AS(run_experiment(config(doc)), InvalidArgument);
    doc["radii"] = {2, 3};
    doc["datum"] = {{"kind", "constant_one"}};
    CHECK_THROWS_AS(run_experiment(config(doc)), InvalidArgument);
}

TEST_CASE("tail of the zero datum is inconclusive")
{
    const auto cfg = config({{"experiment", "tail"},
                             {"datum", {{"kind", "zero"}}},
                             {"times", {0.1, 0.05, 0.025}},
                             {"controls", {{"cells_per_unit", 64}}}});
    const ExperimentReport r = run_experiment(cfg);
    CHECK(r.verdict == "inconclusive");
    CHECK(r.flagged);
    CHECK(r.body["dropped"].size() == 3);
}

TEST_CASE("tail preconditions")
{
    json doc = {{"experiment", "tail"}, {"times", {0.05, 0.1}}};
    CHECK_THROWS_AS(run_experiment(config(doc)), InvalidArgument);
    doc["times"] = {0.1, 0.05};
    doc["R_out"] = 1.5;
    CHECK_THROWS_AS(run_experiment(config(doc)), InvalidArgument);
}

TEST_CASE("degiorgi preconditions")
{
    json doc = {{"experiment", "degiorgi"}, {"times", {0.01, 0.02, 0.005}}};
    CHECK_THROWS_AS(run_experiment(config(doc)), InvalidArgument);
    doc["times"] = {0.02, 0.01, 0.005};
    doc["datum"] = {{"kind", "complement_indicator"}};
    CHECK_THROWS_AS(run_experiment(config(doc)), InvalidArgument);
}

TEST_CASE("reports are byte-stable and independent of the thread count")
{
    const auto cfg = config({{"experiment", "comparison"},
                             {"manifold", {{"family", "power_exp"}, {"p", 4}}},
                             {"times", {0.1, 0.5}},
                             {"radii", {2, 3}},
                             {"controls", {{"cells_per_unit", 32}}}});
    const ExperimentReport a = run_experiment(cfg, {1});
    const ExperimentReport b = run_experiment(cfg, {3});
    CHECK(stable_json(report_document(a)) == stable_json(report_document(b)));
    CHECK(to_csv(a.table) == to_csv(b.table));
}
