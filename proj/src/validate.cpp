#include "experiment_support.hpp"

#include "weighted_operator.hpp"

#include <algorithm>
#include <random>

namespace heatlab {

using nlohmann::json;

namespace {

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

std::shared_ptr<const Grid> lattice_grid(const RadialManifold& m, double R, double cpu,
                                         std::span<const double> jumps = {})
{
    const auto cells = static_cast<std::size_t>(std::llround(R * cpu));
    return std::make_shared<const Grid>(build_grid(m, R, cells, Grading::uniform(), jumps));
}

// Largest relative defect of <Lu, v> = <u, Lv> over random pairs, and of the
// row identity mu_i L_{i,i+1} = mu_{i+1} L_{i+1,i}.
double symmetry_defect(const WeightedOperator& op, std::size_t pairs, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> u(op.size()), v(op.size());
    double worst = 0.0;
    for (std::size_t trial = 0; trial < pairs; ++trial) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] = U(rng);
            v[i] = U(rng);
        }
        const double luv = inner_mu(op, op.apply(u), v);
        const double ulv = inner_mu(op, u, op.apply(v));
        worst = std::max(worst, std::abs(luv - ulv) / std::max(std::abs(luv), std::abs(ulv)));
    }
    const auto mu = op.measure();
    for (std::size_t i = 0; i + 1 < op.size(); ++i) {
        const double left = mu[i] * op.upper()[i];
        const double right = mu[i + 1] * op.lower()[i + 1];
        worst = std::max(worst, std::abs(left - right) / std::abs(left));
    }
    return worst;
}

// max(<Lu, u>, 0) / <u, u> over random vectors; 0 for a negative semidefinite L.
double negativity_defect(const WeightedOperator& op, std::size_t trials, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> u(op.size());
    double worst = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        for (double& x : u)
            x = U(rng);
        worst = std::max(worst, inner_mu(op, op.apply(u), u) / inner_mu(op, u, u));
    }
    return worst;
}

// Distance of every implicit Euler sub-step state from [0, 1].
double max_principle_excursion(const RadialManifold& m, const SolveControls& base)
{
    SolveControls c = base;
    c.scheme = TimeScheme::implicit_euler;
    const double jumps[] = {0.5, 1.0, 1.5};
    const auto grid = lattice_grid(m, 3.0, c.cells_per_unit, jumps);
    const auto op = assemble(grid, m, BoundaryCondition::dirichlet_at_R);
    const auto hat = RadialBVDatum::piecewise({{0.5, 0.0}, {0.5, 1.0}, {1.0, 1.0}, {1.0, 0.25},
                                               {1.5, 0.25}, {1.5, 0.0}});
    std::vector<std::vector<double>> initial = {
        project_datum(RadialBVDatum::ball_indicator(1.0), m, grid).values,
        project_datum(RadialBVDatum::constant_one(), m, grid).values,
        project_datum(hat, m, grid).values};
    double worst = 0.0;
    auto observer = [&](double, double, std::span<const std::vector<double>> states) {
        for (const auto& s : states)
            for (double x : s)
                worst = std::max({worst, -x, x - 1.0});
    };
    const double times[] = {0.01, 0.1, 0.2};
    evolve_batch(op, initial, 0.0, times, c, nullptr, observer);
    return worst;
}

}  // namespace

ExperimentReport validate_suite(const RunConfig& cfg, const RunOptions& opt)
{
    const SolveControls& c = cfg.controls;
    const double cpu = c.cells_per_unit;
    const auto flat = RadialManifold::euclidean(3);
    const auto p4 = RadialManifold::power_exp(3, 4.0, 1);
    const auto cone = RadialManifold::warped_cone(3, 4.0);
    const bool fault = cfg.validate.inject_fault;
    const std::size_t pairs = cfg.validate.random_pairs;

    // The negative control perturbs the coefficient with the largest weight,
    // which is where a real assembly error would matter most.
    auto maybe_faulty = [&](WeightedOperator op) {
        return fault ? op.with_perturbed_upper(op.size() - 2, 1e-3) : op;
    };

    std::vector<std::function<Check()>> jobs;
    jobs.push_back([&] {
        const auto op = maybe_faulty(
            assemble(lattice_grid(flat, 4.0, cpu), flat, BoundaryCondition::dirichlet_at_R));
        return Check{"symmetry_euclidean", symmetry_defect(op, pairs, cfg.seed), 1e-12,
                     "relative defect of <Lu,v> - <u,Lv> and of mu_i L_i,i+1 - mu_i+1 L_i+1,i"};
    });
    jobs.push_back([&] {
        const auto op = maybe_faulty(
            assemble(lattice_grid(p4, 3.0, cpu), p4, BoundaryCondition::dirichlet_at_R));
        return Check{"symmetry_power_exp4", symmetry_defect(op, pairs, cfg.seed + 1), 1e-12,
                     "relative defect of <Lu,v> - <u,Lv> and of mu_i L_i,i+1 - mu_i+1 L_i+1,i"};
    });
    jobs.push_back([&] {
        const auto op = assemble(lattice_grid(p4, 3.0, cpu), p4, BoundaryCondition::dirichlet_at_R);
        return Check{"negativity_power_exp4", negativity_defect(op, pairs, cfg.seed + 2), 1e-12,
                     "max <Lu,u> / <u,u>"};
    });
    jobs.push_back([&] {
        return Check{"max_principle_euclidean", max_principle_excursion(flat, c), 1e-12,
                     "distance of implicit Euler states from [0,1]"};
    });
    jobs.push_back([&] {
        return Check{"max_principle_power_exp4", max_principle_excursion(p4, c), 1e-12,
                     "distance of implicit Euler states from [0,1]"};
    });
    jobs.push_back([&] {
        const RadialBVDatum data[] = {RadialBVDatum::ball_indicator(1.0),
                                      RadialBVDatum::constant_one()};
        const double times[] = {0.05, 0.1};
        double violation = INFINITY;
        std::string note = "largest u_Rk - u_Rk+1 on shared cells, R in {2,3,4}";
        try {
            violation =
                run_exhaustion(p4, data, times, detail::with_radii(c, {2.0, 3.0, 4.0}))
                    .monotonicity_violation;
        } catch (const NumericalFailure& e) {
            note = e.what();
        }
        return Check{"exhaustion_monotonicity", std::max(violation, 0.0), 1e-10, note};
    });
    jobs.push_back([&] {
        return Check{"semigroup_euclidean",
                     semigroup_check(flat, RadialBVDatum::ball_indicator(1.0), 0.02, 0.03,
                                     detail::with_radii(c, {3.0})),
                     1e-4, "relative L1(mu) distance of h_0.05 and h_0.02 h_0.03"};
    });
    jobs.push_back([&] {
        return Check{"semigroup_power_exp4",
                     semigroup_check(p4, RadialBVDatum::ball_indicator(1.0), 0.05, 0.05,
                                     detail::with_radii(c, {3.0})),
                     1e-4, "relative L1(mu) distance of h_0.1 and h_0.05 h_0.05"};
    });
    jobs.push_back([&] {
        const auto grid = lattice_grid(p4, 3.0, cpu);
        const auto op = assemble(grid, p4, BoundaryCondition::dirichlet_at_R);
        const auto one = project_datum(RadialBVDatum::constant_one(), p4, grid);
        const double times[] = {0.05, 0.1, 0.2};
        const auto out = evolve_batch(op, {one.values}, 0.0, times, c);
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < out.snapshots.size(); ++k) {
            const auto& a = out.snapshots[k][0].values;
            const auto& b = out.snapshots[k + 1][0].values;
            for (std::size_t i = 0; i < a.size(); ++i)
                worst = std::max(worst, b[i] - a[i]);
        }
        return Check{"mass_function_time_monotonicity", worst, 1e-10,
                     "largest increase of m(t,r) between t = 0.05, 0.1, 0.2"};
    });
    jobs.push_back([&] {
        const auto grid = lattice_grid(p4, 3.0, cpu);
        const auto op = assemble(grid, p4, BoundaryCondition::dirichlet_at_R);
        const auto one = project_datum(RadialBVDatum::constant_one(), p4, grid);
        const RadialSolution m = evolve(op, one, 0.1, c);
        const FluxProfile q = flux_profile(m, p4);
        double lowest = q.boundary_q;
        double scale = std::abs(q.boundary_q);
        for (double x : q.q) {
            lowest = std::min(lowest, x);
            scale = std::max(scale, std::abs(x));
        }
        return Check{"mass_function_outward_flux", std::max(0.0, -lowest / scale), 1e-12,
                     "largest inward flux of m(0.1,.) relative to max |q|"};
    });
    jobs.push_back([&] {
        const auto a = assemble(lattice_grid(cone, 5.0, cpu / 2), cone,
                                BoundaryCondition::dirichlet_at_R);
        const auto b = assemble(lattice_grid(p4, 5.0, cpu / 2), p4,
                                BoundaryCondition::dirichlet_at_R);
        double worst = std::abs(a.boundary() - b.boundary()) / b.boundary();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i > 0)
                worst = std::max(worst, std::abs(a.lower()[i] - b.lower()[i]) / b.lower()[i]);
            if (i + 1 < a.size())
                worst = std::max(worst, std::abs(a.upper()[i] - b.upper()[i]) / b.upper()[i]);
        }
        return Check{"conical_vs_weighted_coefficients", worst, 1e-14,
                     "relative coefficient difference on [0,5]"};
    });
    jobs.push_back([&] {
        const double jumps[] = {1.0};
        const auto grid = lattice_grid(p4, 2.0, cpu, jumps);
        const auto op = assemble(grid, p4, BoundaryCondition::neumann_at_R);
        const auto ball = project_datum(RadialBVDatum::ball_indicator(1.0), p4, grid);
        const double t = 0.5;
        const RadialSolution u = evolve(op, ball, t, c);
        const double m0 = weighted_mass(ball);
        return Check{"neumann_mass_conservation", std::abs(weighted_mass(u) - m0) / m0 / t, 1e-12,
                     "relative mass drift per unit time, ball datum on [0,2], t = 0.5"};
    });
    jobs.push_back([&] {
        const double jumps[] = {1.0, 2.0};
        const auto grid = lattice_grid(p4, 3.0, cpu, jumps);
        const auto op = assemble(grid, p4, BoundaryCondition::dirichlet_at_R);
        const auto annulus = RadialBVDatum::piecewise({{1.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}, {2.0, 0.0}});
        std::vector<std::vector<double>> initial = {
            project_datum(RadialBVDatum::ball_indicator(1.0), p4, grid).values,
            project_datum(annulus, p4, grid).values,
            project_datum(RadialBVDatum::ball_indicator(2.0), p4, grid).values};
        const double times[] = {0.1};
        const auto out = evolve_batch(op, initial, 0.0, times, c);
        const auto& s = out.snapshots[0];
        double worst = 0.0;
        for (std::size_t i = 0; i < op.size(); ++i)
            worst = std::max(worst, std::abs(s[0].values[i] + s[1].values[i] - s[2].values[i]));
        return Check{"linearity", worst, 1e-12,
                     "h(chi_B1) + h(chi_[1,2)) - h(chi_B2) at t = 0.1, cellwise"};
    });

    std::vector<Check> results(jobs.size());
    detail::parallel_for(jobs.size(), opt.threads, [&](std::size_t k) { results[k] = jobs[k](); });

    CsvTable table{{"check", "value", "tolerance", "pass"}, {}};
    json checks = json::array();
    bool all = true;
    for (const auto& r : results) {
        const bool pass = r.value <= r.tolerance;
        all = all && pass;
        table.rows.push_back({r.name, r.value, r.tolerance, static_cast<long long>(pass)});
        checks.push_back({{"name", r.name},
                          {"value", r.value},
                          {"tolerance", r.tolerance},
                          {"pass", pass},
                          {"detail", r.detail}});
    }
    ExperimentReport rep;
    rep.verdict = all ? "pass" : "fail";
    rep.flagged = !all;
    rep.body = {{"checks", checks}, {"inject_fault", fault}, {"seed", cfg.seed}};
    rep.table = std::move(table);
    return rep;
}

}  // namespace heatlab
