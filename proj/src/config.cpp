#include "config.hpp"

#include "errors.hpp"
#include "schema.hpp"
#include "schema_text.hpp"

#include <cmath>

namespace heatlab {

using nlohmann::json;

const char* experiment_name(Experiment e) noexcept
{
    switch (e) {
    case Experiment::degiorgi: return "degiorgi";
    case Experiment::completeness: return "completeness";
    case Experiment::blowup: return "blowup";
    case Experiment::comparison: return "comparison";
    case Experiment::tail: return "tail";
    case Experiment::validate: return "validate";
    }
    return "unknown";
}

Experiment parse_experiment(const std::string& name)
{
    for (Experiment e : {Experiment::degiorgi, Experiment::completeness, Experiment::blowup,
                         Experiment::comparison, Experiment::tail, Experiment::validate})
        if (name == experiment_name(e))
            return e;
    throw InvalidArgument("unknown experiment '" + name + "'");
}

const std::string& config_schema_text()
{
    static const std::string text = generated::kSchemaText;
    return text;
}

const json& config_schema()
{
    static const json schema = json::parse(config_schema_text());
    return schema;
}

namespace {

const SchemaValidator& validator()
{
    static const SchemaValidator v(config_schema());
    return v;
}

const SchemaValidator& manifold_validator()
{
    static const SchemaValidator v(config_schema()["properties"]["manifold"]);
    return v;
}

std::vector<double> numbers(const json& a)
{
    std::vector<double> out;
    for (const auto& x : a)
        out.push_back(x.get<double>());
    return out;
}

RadialManifold build_manifold(const json& m)
{
    const std::string family = m["family"];
    const int n = m["dimension"].get<int>();
    if (family == "euclidean")
        return RadialManifold::euclidean(n);
    if (family == "power_exp")
        return RadialManifold::power_exp(n, m["p"].get<double>(), m["sign"].get<int>());
    if (family == "warped_cone")
        return RadialManifold::warped_cone(n, m["p"].get<double>());
    if (!m.contains("table"))
        throw InvalidArgument("config /manifold: family 'custom' needs a table");
    return RadialManifold::custom(n, numbers(m["table"]["r"]), numbers(m["table"]["log_excess"]));
}

RadialBVDatum build_datum(const json& d)
{
    const std::string kind = d["kind"];
    const double radius = d["radius"].get<double>();
    if (kind == "ball_indicator")
        return RadialBVDatum::ball_indicator(radius);
    if (kind == "complement_indicator")
        return RadialBVDatum::complement_indicator(radius);
    if (kind == "constant_one")
        return RadialBVDatum::constant_one();
    if (kind == "zero")
        return RadialBVDatum::zero();
    std::vector<Breakpoint> pts;
    for (const auto& bp : d["breakpoints"])
        pts.push_back({bp[0].get<double>(), bp[1].get<double>()});
    if (pts.empty())
        throw InvalidArgument("config /datum: piecewise datum needs breakpoints");
    return RadialBVDatum::piecewise(std::move(pts));
}

SolveControls build_controls(const json& c)
{
    SolveControls out;
    out.scheme = c["scheme"] == "crank_nicolson" ? TimeScheme::crank_nicolson
                                                 : TimeScheme::implicit_euler;
    out.dt_init = c["dt_init"].get<double>();
    out.dt_max = c["dt_max"].get<double>();
    out.dt_growth = c["dt_growth"].get<double>();
    out.step_tolerance = c["step_tolerance"].get<double>();
    out.max_steps = static_cast<std::size_t>(c["max_steps"].get<double>());
    out.cells_per_unit = c["cells_per_unit"].get<double>();
    out.richardson = c["richardson"].get<bool>();
    const json& e = c["exhaustion"];
    out.exhaustion.automatic = e["mode"] == "auto";
    out.exhaustion.radii = numbers(e["radii"]);
    out.exhaustion.max_levels = static_cast<std::size_t>(e["max_levels"].get<double>());
    out.exhaustion.tolerance = e["tolerance"].get<double>();
    try {
        out.validate();
    } catch (const InvalidArgument& err) {
        throw InvalidArgument(std::string("config /controls: ") + err.what());
    }
    return out;
}

Criteria build_criteria(const json& c)
{
    return Criteria{
        .gap_tolerance = c["gap_tolerance"].get<double>(),
        .completeness_epsilon = c["completeness_epsilon"].get<double>(),
        .stability_tolerance = c["stability_tolerance"].get<double>(),
        .slope_threshold = c["slope_threshold"].get<double>(),
        .flux_tolerance = c["flux_tolerance"].get<double>(),
        .noise_multiplier = c["noise_multiplier"].get<double>(),
        .convergence_tolerance = c["convergence_tolerance"].get<double>(),
        .r2_min = c["r2_min"].get<double>(),
        .min_points = static_cast<std::size_t>(c["min_points"].get<double>()),
        .comparison_tolerance = c["comparison_tolerance"].get<double>(),
    };
}

}  // namespace

RadialManifold manifold_from_json(const json& spec)
{
    return build_manifold(manifold_validator().apply(spec));
}

RunConfig resolve_config(json doc)
{
    json r = validator().apply(std::move(doc));
    return RunConfig{
        .experiment = parse_experiment(r["experiment"]),
        .manifold = build_manifold(r["manifold"]),
        .datum = build_datum(r["datum"]),
        .times = numbers(r["times"]),
        .t = r["t"].get<double>(),
        .radii = numbers(r["radii"]),
        .r_out = r["R_out"].get<double>(),
        .controls = build_controls(r["controls"]),
        .extrapolation_method = r["extrapolation"]["method"],
        .extrapolation_order = r["extrapolation"]["order"].get<double>(),
        .criteria = build_criteria(r["criteria"]),
        .seed = r["seed"].get<std::uint64_t>(),
        .validate = ValidateOptions{r["validate"]["inject_fault"].get<bool>(),
                                    static_cast<std::size_t>(
                                        r["validate"]["random_pairs"].get<double>())},
        .resolved = r,
    };
}

RunConfig parse_config(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    return resolve_config(std::move(doc));
}

}  // namespace heatlab
