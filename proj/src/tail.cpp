#include "experiment_support.hpp"

#include <algorithm>
#include <sstream>

namespace heatlab {

using nlohmann::json;

ExperimentReport tail_probe(const RunConfig& cfg, const RunOptions&)
{
    const RadialManifold& m = cfg.manifold;
    const RadialBVDatum& d = cfg.datum;
    const double cpu = cfg.controls.cells_per_unit;
    const double r_out = detail::snap_to_lattice(cfg.r_out, cpu);
    detail::require(r_out > 0.0, "tail: R_out must be positive");
    detail::require(d.bounded_support(), "tail: the datum must have compact support");
    if (d.support_radius() > 0.5 * r_out) {
        std::ostringstream os;
        os << "tail: datum support radius " << d.support_radius() << " exceeds R_out/2 = "
           << 0.5 * r_out;
        throw InvalidArgument(os.str());
    }
    detail::require(!cfg.times.empty() && detail::strictly_decreasing(cfg.times),
                    "tail: times must be strictly decreasing");
    const std::vector<double>& times = cfg.times;
    const double t_max = times.front();

    const double cap = detail::representable_cap(m, cpu);
    const double step = std::max(1.0, 4.0 * std::sqrt(t_max));
    std::vector<double> levels;
    for (int k = 1; k <= 2; ++k) {
        const double R = std::min(cap, std::ceil((r_out + k * step) * cpu - 1e-9) / cpu);
        if (levels.empty() || R > levels.back())
            levels.push_back(R);
    }
    if (levels.front() <= r_out) {
        std::ostringstream os;
        os << "tail: R_out=" << r_out << " leaves no room below the representable radius " << cap;
        throw RangeError(os.str());
    }

    std::vector<double> ascending(times.rbegin(), times.rend());
    const RadialBVDatum data[] = {d};
    const ExhaustionRun run = run_exhaustion(m, data, ascending, detail::with_radii(cfg.controls, levels));
    const ExhaustionLevel& top = run.levels.back();

    // tails[k] follows the configured (decreasing) order of times.
    std::vector<double> tails(times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        tails[k] = total_variation(top.solutions[times.size() - 1 - k][0], m, r_out);

    std::vector<char> used(times.size(), 0);
    json dropped = json::array();
    // Walk up from the smallest t while the tail keeps growing with t; the
    // first point that breaks this and everything before it are pre-asymptotic.
    bool run_broken = false;
    for (std::size_t k = times.size(); k-- > 0;) {
        if (!(tails[k] > 0.0) || !std::isfinite(std::log(tails[k]))) {
            dropped.push_back({{"t", times[k]}, {"reason", "underflow"}});
            continue;
        }
        if (run_broken) {
            dropped.push_back({{"t", times[k]}, {"reason", "monotonicity"}});
            continue;
        }
        std::size_t prev = k + 1;
        while (prev < times.size() && !used[prev])
            ++prev;
        if (prev < times.size() && !(tails[k] > tails[prev])) {
            run_broken = true;
            dropped.push_back({{"t", times[k]}, {"reason", "monotonicity"}});
            continue;
        }
        used[k] = 1;
    }

    std::vector<double> x, y;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (used[k]) {
            x.push_back(1.0 / times[k]);
            y.push_back(std::log(tails[k]));
        }
    }

    CsvTable table{{"t", "tail", "fit_residual"}, {}};
    ExperimentReport r;
    json fit = nullptr;
    std::vector<double> residual(times.size(), NAN);
    if (x.size() >= std::max<std::size_t>(cfg.criteria.min_points, 2)) {
        const LineFit f = fit_line(x, y);
        for (std::size_t k = 0, j = 0; k < times.size(); ++k)
            if (used[k])
                residual[k] = f.residuals[j++];
        fit = {{"slope", f.slope},
               {"intercept", f.intercept},
               {"C", std::exp(f.intercept)},
               {"c", -f.slope},
               {"r_squared", f.r_squared},
               {"points", x.size()}};
        r.verdict = f.slope < 0.0 && f.r_squared >= cfg.criteria.r2_min ? "confirms" : "refutes";
    } else {
        r.verdict = "inconclusive";
    }
    for (std::size_t k = 0; k < times.size(); ++k)
        table.rows.push_back({times[k], tails[k], residual[k]});

    r.flagged = r.verdict != "confirms";
    r.body = {{"manifold", m.describe()},
              {"datum", d.describe()},
              {"R_out", r_out},
              {"R_solve", top.radius},
              {"fit", fit},
              {"dropped", dropped},
              {"exhaustion", detail::exhaustion_json(run)}};
    r.table = std::move(table);
    return r;
}

}  // namespace heatlab
