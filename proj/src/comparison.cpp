#include "experiment_support.hpp"

#include "quadrature.hpp"
#include "weighted_operator.hpp"

#include <algorithm>
#include <sstream>

namespace heatlab {

using nlohmann::json;

namespace {

// (1 - e^{-s^4}) / s^3, with its Taylor form where expm1 loses the leading term.
double w_integrand(double s)
{
    if (s < 1e-4)
        return s - 0.5 * s * s * s * s * s;
    return -std::expm1(-s * s * s * s) / (s * s * s);
}

struct RadiusResult {
    std::shared_ptr<const Grid> grid;
    std::vector<double> w;
    std::vector<double> lap_w;
    // Per checkpoint: u_R(t) and v_R(t) = int_0^t u_R.
    std::vector<std::vector<double>> u;
    std::vector<std::vector<double>> v;
    std::vector<double> identity_residual;
};

RadiusResult solve_radius(const RadialManifold& m, double R, std::span<const double> times,
                          const SolveControls& c)
{
    RadiusResult out;
    const auto cells = static_cast<std::size_t>(std::llround(R * c.cells_per_unit));
    out.grid = std::make_shared<const Grid>(build_grid(m, R, cells));
    const auto op = assemble(out.grid, m, BoundaryCondition::dirichlet_at_R);
    const auto one = project_datum(RadialBVDatum::constant_one(), m, out.grid);

    std::vector<double> acc(cells, 0.0);
    std::size_t next = 0;
    // Implicit Euler gives u_{n+1} - u_n = dt L u_{n+1}, so summing dt times the
    // post-step state makes L v = u - 1 hold to rounding.
    auto observer = [&](double t_new, double dt, std::span<const std::vector<double>> states) {
        for (std::size_t i = 0; i < cells; ++i)
            acc[i] += dt * states[0][i];
        while (next < times.size() && t_new == times[next]) {
            out.v.push_back(acc);
            ++next;
        }
    };
    const auto evolved = evolve_batch(op, {one.values}, 0.0, times, c, nullptr, observer);
    if (out.v.size() != times.size())
        throw NumericalFailure("comparison: time quadrature missed a checkpoint");
    for (std::size_t k = 0; k < times.size(); ++k) {
        out.u.push_back(evolved.snapshots[k][0].values);
        const auto lv = op.apply(out.v[k]);
        double worst = 0.0;
        for (std::size_t i = 0; i < cells; ++i)
            worst = std::max(worst, std::abs(lv[i] - (out.u[k][i] - 1.0)));
        out.identity_residual.push_back(worst);
    }

    const auto centers = out.grid->centers();
    out.w.assign(cells, 0.0);
    out.lap_w.assign(cells, 0.0);
    double upper = R;
    double running = 0.0;
    for (std::size_t i = cells; i-- > 0;) {
        running += integrate_adaptive(w_integrand, centers[i], upper);
        upper = centers[i];
        out.w[i] = running;
        out.lap_w[i] = comparison_laplacian(centers[i]);
    }
    return out;
}

}  // namespace

ExperimentReport comparison_check(const RunConfig& cfg, const RunOptions& opt)
{
    const RadialManifold& m = cfg.manifold;
    detail::require((m.family() == Family::power_exp_weight && m.sign() == 1)
                        || m.family() == Family::warped_cone,
                    "comparison: the model must be the e^{r^4} weight (power_exp, sign +1, or "
                    "warped_cone)");
    detail::require(m.dimension() == 3 && m.exponent() == 4.0,
                    "comparison: the model must be three-dimensional with p = 4");
    std::vector<double> times = cfg.times;
    std::sort(times.begin(), times.end());
    for (double t : times)
        detail::require(t > 0.0 && t <= 1.0, "comparison: times must lie in (0, 1]");
    std::vector<double> radii;
    const double cap = detail::representable_cap(m, cfg.controls.cells_per_unit);
    for (double R : cfg.radii) {
        detail::require(R > 0.0, "comparison: radii must be positive");
        const double snapped = detail::snap_to_lattice(R, cfg.controls.cells_per_unit);
        if (snapped > cap) {
            std::ostringstream os;
            os << "comparison: R=" << snapped << " exceeds the representable radius " << cap;
            throw RangeError(os.str());
        }
        radii.push_back(snapped);
    }

    std::vector<RadiusResult> solved(radii.size());
    detail::parallel_for(radii.size(), opt.threads, [&](std::size_t k) {
        solved[k] = solve_radius(m, radii[k], times, cfg.controls);
    });

    const double tol = cfg.criteria.comparison_tolerance;
    CsvTable table{{"t", "R", "r", "v_R", "w_R", "lap_w"}, {}};
    json cases = json::array();
    bool all_ok = true;
    for (std::size_t j = 0; j < radii.size(); ++j) {
        const RadiusResult& s = solved[j];
        const auto centers = s.grid->centers();
        double max_lap = -INFINITY;
        bool w_nonincreasing = true;
        for (std::size_t i = 0; i < centers.size(); ++i) {
            max_lap = std::max(max_lap, s.lap_w[i]);
            w_nonincreasing = w_nonincreasing && (i == 0 || s.w[i] <= s.w[i - 1]);
        }
        for (std::size_t k = 0; k < times.size(); ++k) {
            double v_minus_w = -INFINITY;
            double tu_minus_v = -INFINITY;
            for (std::size_t i = 0; i < centers.size(); ++i) {
                v_minus_w = std::max(v_minus_w, s.v[k][i] - s.w[i]);
                tu_minus_v = std::max(tu_minus_v, times[k] * s.u[k][i] - s.v[k][i]);
                table.rows.push_back({times[k], radii[j], centers[i], s.v[k][i], s.w[i], s.lap_w[i]});
            }
            const bool ok = v_minus_w <= tol && max_lap < -1.0 && tu_minus_v <= tol
                            && w_nonincreasing;
            all_ok = all_ok && ok;
            cases.push_back({{"t", times[k]},
                             {"R", radii[j]},
                             {"cells", centers.size()},
                             {"max_v_minus_w", v_minus_w},
                             {"max_lap_w", max_lap},
                             {"max_tu_minus_v", tu_minus_v},
                             {"w_nonincreasing", w_nonincreasing},
                             {"v_at_pole", s.v[k].front()},
                             {"w_at_pole", s.w.front()},
                             {"identity_residual", s.identity_residual[k]},
                             {"passed", ok}});
        }
    }

    ExperimentReport r;
    r.verdict = all_ok ? "confirms" : "refutes";
    r.flagged = !all_ok;
    r.body = {{"manifold", m.describe()},
              {"tolerance", tol},
              {"cases", cases},
              {"lap_w_at_1", comparison_laplacian(1.0)},
              {"lap_w_at_1e-4", comparison_laplacian(1e-4)},
              {"lap_w_at_10", comparison_laplacian(10.0)},
              {"lap_w_at_100", comparison_laplacian(100.0)},
              {"lap_w_limit_at_0", comparison_laplacian(0.0)}};
    r.table = std::move(table);
    return r;
}

}  // namespace heatlab
