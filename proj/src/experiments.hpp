#pragma once

#include "config.hpp"
#include "report.hpp"

#include <span>
#include <vector>

namespace heatlab {

struct RunOptions {
    /// Worker threads for independent solves; results never depend on it.
    unsigned threads = 1;
};

/// Dispatches on cfg.experiment.  Errors propagate as heatlab::Error.
ExperimentReport run_experiment(const RunConfig& cfg, const RunOptions& opt = {});

ExperimentReport degiorgi_sweep(const RunConfig& cfg, const RunOptions& opt);
ExperimentReport completeness_probe(const RunConfig& cfg, const RunOptions& opt);
ExperimentReport blowup_probe(const RunConfig& cfg, const RunOptions& opt);
ExperimentReport comparison_check(const RunConfig& cfg, const RunOptions& opt);
ExperimentReport tail_probe(const RunConfig& cfg, const RunOptions& opt);
ExperimentReport validate_suite(const RunConfig& cfg, const RunOptions& opt);

/// Least-squares line y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Delta w for w(r) = int_r^R (1 - e^{-s^4}) / s^3 ds on the e^{r^4} model,
/// -4 - expm1(-r^4) / r^4, with its r -> 0 limit -3 at r = 0.
double comparison_laplacian(double r);

}  // namespace heatlab
