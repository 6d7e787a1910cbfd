#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "config.hpp"
#include "errors.hpp"

#include <fstream>
#include <sstream>

using namespace heatlab;
using nlohmann::json;

namespace {

std::string message_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const InvalidArgument& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("embedded schema is the published file")
{
    std::ifstream f(HEATLAB_SOURCE_DIR "/schema/heatlab.schema.json");
    REQUIRE(f);
    std::ostringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == config_schema_text());
    CHECK(config_schema()["$schema"] == "https://json-schema.org/draft/2020-12/schema");
}

TEST_CASE("schema defaults agree with the solver defaults")
{
    const RunConfig cfg = parse_config(R"({"experiment": "degiorgi"})");
    const SolveControls ref;
    CHECK(cfg.controls.scheme == ref.scheme);
    CHECK(cfg.controls.dt_init == ref.dt_init);
    CHECK(cfg.controls.dt_max == ref.dt_max);
    CHECK(cfg.controls.dt_growth == ref.dt_growth);
    CHECK(cfg.controls.step_tolerance == ref.step_tolerance);
    CHECK(cfg.controls.max_steps == ref.max_steps);
    CHECK(cfg.controls.cells_per_unit == ref.cells_per_unit);
    CHECK(cfg.controls.richardson == ref.richardson);
    CHECK(cfg.controls.exhaustion.automatic == ref.exhaustion.automatic);
    CHECK(cfg.controls.exhaustion.max_levels == ref.exhaustion.max_levels);
    CHECK(cfg.controls.exhaustion.tolerance == ref.exhaustion.tolerance);
}

TEST_CASE("resolved configuration carries every default")
{
    const RunConfig cfg = parse_config(R"({"experiment": "tail", "R_out": 4})");
    CHECK(cfg.experiment == Experiment::tail);
    CHECK(cfg.r_out == 4.0);
    CHECK(cfg.manifold.family() == Family::euclidean);
    CHECK(cfg.manifold.dimension() == 3);
    CHECK(cfg.datum.kind() == DatumKind::ball_indicator);
    CHECK(cfg.resolved["criteria"]["r2_min"] == 0.95);
    CHECK(cfg.resolved["controls"]["exhaustion"]["mode"] == "auto");
    CHECK(cfg.criteria.min_points == 3);
    CHECK(cfg.seed == 0);
}

TEST_CASE("manifold and datum specs are honoured")
{
    const RunConfig cfg = parse_config(R"({
        "experiment": "degiorgi",
        "manifold": {"family": "power_exp", "dimension": 3, "p": 2, "sign": -1},
        "datum": {"kind": "piecewise", "breakpoints": [[0.5, 1.0], [0.5, 0.25], [1.0, 0.25]]}
    })");
    CHECK(cfg.manifold.family() == Family::power_exp_weight);
    CHECK(cfg.manifold.exponent() == 2.0);
    CHECK(cfg.manifold.sign() == -1);
    CHECK(cfg.datum.kind() == DatumKind::piecewise);
    CHECK(cfg.datum.value(0.25) == 1.0);
    CHECK(cfg.datum.value(0.75) == 0.25);
}

TEST_CASE("invalid documents are rejected with a path")
{
    CHECK(message_of("{not json").find("JSON") != std::string::npos);
    CHECK(message_of(R"({"experiment": "degiorgi", "bogus": 1})").find("bogus")
          != std::string::npos);
    CHECK(message_of(R"({"experiment": "degiorgi", "controls": {"dt_growth": 2}})")
              .find("/controls/dt_growth")
          != std::string::npos);
    CHECK(message_of(R"({"experiment": "nope"})").find("/experiment") != std::string::npos);
    CHECK(message_of(R"({"manifold": {"family": "euclidean"}})").find("experiment")
          != std::string::npos);
    CHECK(message_of(R"({"experiment": "degiorgi", "manifold": {"sign": 0}})").find("/manifold/sign")
          != std::string::npos);
    CHECK(message_of(R"({"experiment": "degiorgi", "controls": {"cells_per_unit": 2}})")
              .find("cells_per_unit")
          != std::string::npos);
    CHECK(message_of(R"([1, 2])") != "");
}

TEST_CASE("integral floats count as integers")
{
    const RunConfig cfg = parse_config(R"({"experiment": "tail", "criteria": {"min_points": 4.0}})");
    CHECK(cfg.criteria.min_points == 4);
    CHECK(message_of(R"({"experiment": "tail", "criteria": {"min_points": 4.5}})") != "");
}

TEST_CASE("explicit exhaustion radii")
{
    const RunConfig cfg = parse_config(
        R"({"experiment": "completeness", "controls": {"exhaustion": {"mode": "list", "radii": [2, 3]}}})");
    CHECK_FALSE(cfg.controls.exhaustion.automatic);
    CHECK(cfg.controls.exhaustion.radii == std::vector<double>{2.0, 3.0});
}

TEST_CASE("experiment names")
{
    CHECK(parse_experiment("blowup") == Experiment::blowup);
    CHECK(std::string(experiment_name(Experiment::validate)) == "validate");
    CHECK_THROWS_AS(parse_experiment("Blowup"), InvalidArgument);
}

TEST_CASE("manifold_from_json")
{
    const auto m = manifold_from_json(json{{"family", "warped_cone"}});
    CHECK(m.family() == Family::warped_cone);
    CHECK_THROWS_AS(manifold_from_json(json{{"family", "torus"}}), InvalidArgument);
}
