#pragma once

#include "geometry.hpp"
#include "solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace heatlab {

enum class Experiment { degiorgi, completeness, blowup, comparison, tail, validate };

const char* experiment_name(Experiment e) noexcept;
/// Throws InvalidArgument for unknown names.
Experiment parse_experiment(const std::string& name);

struct Criteria {
    double gap_tolerance;
    double completeness_epsilon;
    double stability_tolerance;
    double slope_threshold;
    double flux_tolerance;
    double noise_multiplier;
    double convergence_tolerance;
    double r2_min;
    std::size_t min_points;
    double comparison_tolerance;
};

struct ValidateOptions {
    bool inject_fault;
    std::size_t random_pairs;
};

/// A validated configuration.  Every field is populated from the document
/// after schema defaults have been applied; nothing here has a code default.
struct RunConfig {
    Experiment experiment;
    RadialManifold manifold;
    RadialBVDatum datum;
    std::vector<double> times;
    double t;
    std::vector<double> radii;
    double r_out;
    SolveControls controls;
    std::string extrapolation_method;
    double extrapolation_order;
    Criteria criteria;
    std::uint64_t seed;
    ValidateOptions validate;
    /// The configuration with defaults applied, echoed into reports.
    nlohmann::json resolved;
};

/// The published schema, embedded at build time.
const std::string& config_schema_text();
const nlohmann::json& config_schema();

/// Parses, validates and resolves a configuration document.  Every problem,
/// including malformed JSON, is reported as InvalidArgument.
RunConfig parse_config(const std::string& text);
RunConfig resolve_config(nlohmann::json doc);

RadialManifold manifold_from_json(const nlohmann::json& spec);

}  // namespace heatlab
