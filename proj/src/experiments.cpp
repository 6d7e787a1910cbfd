#include "experiments.hpp"

#include "experiment_support.hpp"

#include <chrono>
#include <cmath>

namespace heatlab {

using nlohmann::json;

ExperimentReport run_experiment(const RunConfig& cfg, const RunOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport r;
    switch (cfg.experiment) {
    case Experiment::degiorgi: r = degiorgi_sweep(cfg, opt); break;
    case Experiment::completeness: r = completeness_probe(cfg, opt); break;
    case Experiment::blowup: r = blowup_probe(cfg, opt); break;
    case Experiment::comparison: r = comparison_check(cfg, opt); break;
    case Experiment::tail: r = tail_probe(cfg, opt); break;
    case Experiment::validate: r = validate_suite(cfg, opt); break;
    }
    r.experiment = experiment_name(cfg.experiment);
    r.body["config"] = cfg.resolved;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidArgument("fit_line: need at least two (x, y) pairs");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw InvalidArgument("fit_line: x values are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        f.residuals.push_back(e);
        ss_res += e * e;
    }
    f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return f;
}

double comparison_laplacian(double r)
{
    if (r == 0.0)
        return -3.0;
    const double r4 = r * r * r * r;
    // (e^{r^4} - 1) / (r^4 e^{r^4}) = -expm1(-r^4) / r^4, which neither
    // overflows for large r nor cancels for small r.
    return -4.0 - std::expm1(-r4) / r4;
}

namespace detail {

json probes_json(const ExhaustionRun& run, std::size_t k, std::size_t j)
{
    json out = json::array();
    for (const auto& lv : run.levels) {
        const auto& p = lv.probes[k][j];
        out.push_back({{"R", p.radius},
                       {"N", static_cast<long long>(p.cells)},
                       {"value_at_pole", p.value_at_pole},
                       {"mass", p.mass},
                       {"tv", p.tv}});
    }
    return out;
}

json exhaustion_json(const ExhaustionRun& run)
{
    json radii = json::array();
    for (const auto& lv : run.levels)
        radii.push_back(lv.radius);
    return {{"radii", radii},
            {"R_used", run.used().radius},
            {"N_used", static_cast<long long>(run.used().grid->cells())},
            {"converged", run.converged},
            {"monotonicity_violation", run.monotonicity_violation},
            {"accepted_steps", static_cast<long long>(run.accepted_steps)}};
}

json extrapolation_json(const Extrapolation& e)
{
    return {{"estimate", e.estimate},
            {"error_indicator", e.error_indicator},
            {"consistency", e.consistency},
            {"low_confidence", e.low_confidence},
            {"method", e.method}};
}

}  // namespace detail

}  // namespace heatlab
