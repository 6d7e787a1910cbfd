#include "experiment_support.hpp"

#include "functionals.hpp"
#include "weighted_operator.hpp"

#include <algorithm>
#include <cfloat>
#include <sstream>

namespace heatlab {

using nlohmann::json;

namespace {

// Largest |q| of the mass function on flat space (where m = 1 exactly)
// evolved with Neumann data on the same mesh spacing and step schedule, or
// the flux a one-ulp perturbation of u would produce, whichever is larger.
double flat_noise_floor(int dimension, const Grid& like, const StepSchedule& schedule,
                        std::span<const double> times, const SolveControls& c)
{
    const auto flat = RadialManifold::euclidean(dimension);
    auto grid = std::make_shared<const Grid>(build_grid(flat, like.radius(), like.cells()));
    const auto op = assemble(grid, flat, BoundaryCondition::neumann_at_R);
    const auto one = project_datum(RadialBVDatum::constant_one(), flat, grid);
    const auto out = evolve_batch(op, {one.values}, 0.0, times, c, &schedule);
    double floor = 0.0;
    for (const auto& row : out.snapshots)
        for (double q : flux_profile(row[0], flat, 0.0, false).q)
            floor = std::max(floor, std::abs(q));
    const auto centers = grid->centers();
    const auto log_a = grid->log_face_area();
    double ulp_flux = 0.0;
    for (std::size_t k = 1; k < grid->cells(); ++k)
        ulp_flux = std::max(ulp_flux, std::exp(log_a[k]) / (centers[k] - centers[k - 1]));
    return std::max(floor, DBL_EPSILON * ulp_flux);
}

}  // namespace

ExperimentReport blowup_probe(const RunConfig& cfg, const RunOptions&)
{
    const RadialManifold& m = cfg.manifold;
    const SolveControls& c = cfg.controls;
    const double cpu = c.cells_per_unit;
    detail::require(cfg.datum.kind() == DatumKind::complement_indicator
                        || cfg.datum.kind() == DatumKind::ball_indicator,
                    "blowup: the datum must be ball_indicator or complement_indicator of E = B_r0");
    const double r0 = cfg.datum.radius();
    if (!detail::on_lattice(r0, cpu)) {
        std::ostringstream os;
        os << "blowup: r0=" << r0 << " is not a grid face for cells_per_unit=" << cpu;
        throw InvalidArgument(os.str());
    }

    std::vector<double> trunc;
    for (double R : cfg.radii)
        trunc.push_back(detail::snap_to_lattice(R, cpu));
    for (std::size_t i = 0; i < trunc.size(); ++i) {
        detail::require(trunc[i] > r0, "blowup: truncation radii must exceed r0");
        detail::require(i == 0 || trunc[i] > trunc[i - 1],
                        "blowup: truncation radii must be strictly increasing");
    }
    std::vector<double> times = cfg.times;
    std::sort(times.begin(), times.end());
    const double t_max = times.back();

    const double cap = detail::representable_cap(m, cpu);
    const double r_max = trunc.back();
    if (r_max > cap) {
        std::ostringstream os;
        os << "blowup: R_max=" << r_max << " exceeds the largest radius with representable final "
           << "scalars (" << cap << ")";
        throw RangeError(os.str());
    }
    // Two automatic exhaustion steps past R_max keep the Dirichlet layer out
    // of the truncated sums on models where the cap allows it.
    const double step = std::max(1.0, 4.0 * std::sqrt(t_max));
    const double r_solve =
        std::min(cap, std::ceil((r_max + 2.0 * step) * cpu - 1e-9) / cpu);
    std::vector<double> levels = trunc;
    if (r_solve > r_max)
        levels.push_back(r_solve);

    const RadialBVDatum data[] = {RadialBVDatum::complement_indicator(r0),
                                  RadialBVDatum::constant_one()};
    const ExhaustionRun run = run_exhaustion(m, data, times, detail::with_radii(c, levels));
    const ExhaustionLevel& top = run.used();

    const double floor = flat_noise_floor(m.dimension(), *top.grid, run.schedule, times, c);
    const double threshold = cfg.criteria.noise_multiplier * floor;
    const double exact = exact_total_variation(data[0], m);

    CsvTable table{{"t", "R", "TV_R", "q_at_Rmax", "r_t", "delta_t"}, {}};
    json per_t = json::array();
    bool all_divergent = true;
    bool all_stabilized = true;
    std::vector<double> tv_at_rmax;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const RadialSolution& complement = top.solutions[k][0];
        const RadialSolution& mass = top.solutions[k][1];
        const FluxProfile q = flux_profile(mass, m, threshold);
        const double defect = flux_monotonicity_defect(q);

        auto q_at = [&](double R) {
            if (R == top.radius)
                return q.boundary_q;
            const long fi = top.grid->face_index(R);
            return q.q.at(static_cast<std::size_t>(fi - 1));
        };
        std::vector<double> tv;
        json rows = json::array();
        for (double R : trunc) {
            tv.push_back(total_variation(complement, m, 0.0, R));
            rows.push_back({{"R", R}, {"TV_R", tv.back()}, {"q_at_R", q_at(R)}});
        }
        const double q_rmax = q_at(r_max);
        bool increasing = true;
        for (std::size_t i = 1; i < tv.size(); ++i)
            increasing = increasing && tv[i] > tv[i - 1];
        const double slope = tv.size() >= 2 ? fit_line(trunc, tv).slope : 0.0;
        const bool divergent = increasing && slope > cfg.criteria.slope_threshold
                               && defect <= cfg.criteria.flux_tolerance && q_rmax > 0.0
                               && q_rmax >= threshold;
        const double change = tv.size() >= 2 ? std::abs(tv.back() - tv[tv.size() - 2]) : INFINITY;
        const bool stabilized = change <= cfg.criteria.convergence_tolerance * std::abs(tv.back());
        all_divergent = all_divergent && divergent;
        all_stabilized = all_stabilized && stabilized;
        tv_at_rmax.push_back(tv.back());

        for (std::size_t i = 0; i < trunc.size(); ++i)
            table.rows.push_back({times[k], trunc[i], tv[i], q_rmax,
                                  q.has_onset ? q.r_t : NAN, q.has_onset ? q.delta_t : NAN});
        per_t.push_back({{"t", times[k]},
                         {"truncations", rows},
                         {"slope", slope},
                         {"strictly_increasing", increasing},
                         {"flux_monotonicity_defect", defect},
                         {"q_at_Rmax", q_rmax},
                         {"boundary_flux", q.boundary_q},
                         {"has_onset", q.has_onset},
                         {"r_t", q.has_onset ? q.r_t : NAN},
                         {"delta_t", q.has_onset ? q.delta_t : NAN},
                         {"last_change", change},
                         {"divergent", divergent},
                         {"stabilized", stabilized}});
    }

    ExperimentReport r;
    json limit = nullptr;
    if (all_divergent) {
        r.verdict = "divergent";
    } else if (all_stabilized) {
        r.verdict = "convergent";
        if (times.size() >= 3) {
            std::vector<SeriesPoint> series;
            for (std::size_t k = times.size(); k-- > 0;)
                series.push_back({times[k], tv_at_rmax[k]});
            const Extrapolation ex =
                extrapolate_limit(series, cfg.extrapolation_method, cfg.extrapolation_order);
            const double gap = std::abs(ex.estimate - exact) / exact;
            limit = detail::extrapolation_json(ex);
            limit["relative_gap"] = gap;
            if (ex.low_confidence || gap > cfg.criteria.gap_tolerance)
                r.verdict = "inconclusive";
        }
    } else {
        r.verdict = "inconclusive";
    }
    r.flagged = r.verdict == "inconclusive";
    r.body = {{"manifold", m.describe()},
              {"r0", r0},
              {"exact_tv_of_E", exact},
              {"R_solve", top.radius},
              {"noise_floor", floor},
              {"q_threshold", threshold},
              {"per_t", per_t},
              {"t_limit", limit},
              {"exhaustion", detail::exhaustion_json(run)}};
    r.table = std::move(table);
    return r;
}

}  // namespace heatlab
