#include "solver.hpp"

#include "errors.hpp"
#include "functionals.hpp"
#include "numerics.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heatlab {

const char* time_scheme_name(TimeScheme s) noexcept
{
    return s == TimeScheme::implicit_euler ? "implicit_euler" : "crank_nicolson";
}

void SolveControls::validate() const
{
    auto fail = [](const std::string& what) { throw InvalidArgument("solve controls: " + what); };
    if (!(dt_init > 0.0) || !std::isfinite(dt_init))
        fail("dt_init must be > 0");
    if (!(dt_max >= dt_init) || !std::isfinite(dt_max))
        fail("dt_max must be >= dt_init");
    if (!(dt_growth > 1.0) || !std::isfinite(dt_growth))
        fail("dt_growth must be > 1");
    if (!(step_tolerance > 0.0))
        fail("step_tolerance must be > 0");
    if (max_steps == 0)
        fail("max_steps must be positive");
    if (!(cells_per_unit > 0.0) || !std::isfinite(cells_per_unit))
        fail("cells_per_unit must be > 0");
    if (!exhaustion.automatic) {
        if (exhaustion.radii.empty())
            fail("explicit exhaustion needs at least one radius");
        for (std::size_t i = 1; i < exhaustion.radii.size(); ++i)
            if (!(exhaustion.radii[i] > exhaustion.radii[i - 1]))
                fail("exhaustion radii must be strictly increasing");
    } else if (exhaustion.max_levels == 0) {
        fail("exhaustion max_levels must be positive");
    }
    if (!(exhaustion.tolerance > 0.0))
        fail("exhaustion tolerance must be > 0");
}

namespace {

// LU factors of (I - theta*dt*L).  The matrix is an M-matrix, and the
// recurrences below only ever add nonnegative quantities, so nonnegative
// right-hand sides are solved to componentwise relative accuracy.
class ShiftedSolver {
public:
    ShiftedSolver(const WeightedOperator& op, double scaled_dt)
    {
        const std::size_t n = op.size();
        const auto lower = op.lower();
        const auto upper = op.upper();
        inv_d_.resize(n);
        g_.resize(n);
        a_.resize(n);
        double e_prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a_[i] = scaled_dt * lower[i];
            const double b = scaled_dt * upper[i];
            double s = 1.0 + a_[i] * e_prev;
            if (i + 1 == n)
                s += scaled_dt * op.boundary();
            const double d = s + b;
            if (!(d > 0.0) || !std::isfinite(d)) {
                std::ostringstream os;
                os << "tridiagonal factorization broke down at row " << i;
                throw NumericalFailure(os.str());
            }
            inv_d_[i] = 1.0 / d;
            g_[i] = b * inv_d_[i];
            e_prev = s * inv_d_[i];
        }
    }

    void solve(std::span<const double> rhs, std::span<double> x) const
    {
        const std::size_t n = inv_d_.size();
        double y_prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y_prev = (rhs[i] + a_[i] * y_prev) * inv_d_[i];
            x[i] = y_prev;
        }
        for (std::size_t i = n - 1; i-- > 0;)
            x[i] += g_[i] * x[i + 1];
    }

private:
    std::vector<double> inv_d_;
    std::vector<double> g_;
    std::vector<double> a_;
};

class Stepper {
public:
    Stepper(const WeightedOperator& op, TimeScheme scheme) : op_(op), scheme_(scheme) {}

    // One step of length dt from `in` into `out` using a prepared factorization.
    void step(const ShiftedSolver& solver, double dt, const std::vector<double>& in,
              std::vector<double>& out)
    {
        out.resize(in.size());
        if (scheme_ == TimeScheme::implicit_euler) {
            solver.solve(in, out);
            return;
        }
        rhs_.resize(in.size());
        op_.apply(in, rhs_);
        for (std::size_t i = 0; i < in.size(); ++i)
            rhs_[i] = in[i] + 0.5 * dt * rhs_[i];
        solver.solve(rhs_, out);
    }

    ShiftedSolver factor(double dt) const
    {
        return ShiftedSolver(op_, scheme_ == TimeScheme::implicit_euler ? dt : 0.5 * dt);
    }

    // Local error of step doubling scales like dt^(order+1).
    double error_exponent() const
    {
        return scheme_ == TimeScheme::implicit_euler ? 0.5 : 1.0 / 3.0;
    }

private:
    const WeightedOperator& op_;
    TimeScheme scheme_;
    std::vector<double> rhs_;
};

RadialSolution make_solution(const WeightedOperator& op, double t, std::vector<double> values,
                             const SolveControls& c, std::size_t steps, bool replayed)
{
    RadialSolution s;
    s.grid = op.grid_ptr();
    s.t = t;
    s.values = std::move(values);
    s.provenance.radius = op.grid().radius();
    s.provenance.cells = op.grid().cells();
    s.provenance.scheme = time_scheme_name(c.scheme);
    s.provenance.dt_policy = replayed ? "replayed_step_doubling" : "step_doubling";
    s.provenance.steps = steps;
    return s;
}

}  // namespace

EvolveResult evolve_batch(const WeightedOperator& op, std::vector<std::vector<double>> states,
                          double t0, std::span<const double> checkpoints, const SolveControls& c,
                          const StepSchedule* replay, const StepObserver& observer)
{
    c.validate();
    for (const auto& s : states)
        if (s.size() != op.size())
            throw InvalidArgument("evolve: state length does not match operator size");
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        if (!std::isfinite(checkpoints[k]) || checkpoints[k] < t0
            || (k > 0 && checkpoints[k] < checkpoints[k - 1]))
            throw InvalidArgument("evolve: checkpoints must be finite, nondecreasing and >= t0");
    }

    EvolveResult result;
    result.snapshots.resize(checkpoints.size());
    std::size_t next = 0;
    double t = t0;
    auto snapshot_up_to = [&](double now, std::size_t steps) {
        while (next < checkpoints.size() && checkpoints[next] <= now) {
            auto& row = result.snapshots[next];
            for (const auto& s : states)
                row.push_back(make_solution(op, now, s, c, steps, replay != nullptr));
            result.schedule.checkpoint_after.push_back(steps);
            ++next;
        }
    };
    snapshot_up_to(t, 0);
    if (next == checkpoints.size())
        return result;

    Stepper stepper(op, c.scheme);
    std::vector<std::vector<double>> half(states.size()), fine(states.size()),
        coarse(states.size());

    auto advance_fine = [&](double t_from, double step, const ShiftedSolver& half_solver) {
        for (std::size_t j = 0; j < states.size(); ++j)
            stepper.step(half_solver, 0.5 * step, states[j], half[j]);
        if (observer)
            observer(t_from + 0.5 * step, 0.5 * step, half);
        for (std::size_t j = 0; j < states.size(); ++j)
            stepper.step(half_solver, 0.5 * step, half[j], fine[j]);
    };

    if (replay) {
        std::size_t cp = 0;
        while (cp < replay->checkpoint_after.size() && replay->checkpoint_after[cp] == 0)
            ++cp;
        for (std::size_t n = 0; n < replay->dt.size() && next < checkpoints.size(); ++n) {
            const double step = replay->dt[n];
            const ShiftedSolver half_solver = stepper.factor(0.5 * step);
            advance_fine(t, step, half_solver);
            states.swap(fine);
            const bool lands = cp < replay->checkpoint_after.size()
                               && replay->checkpoint_after[cp] == n + 1;
            t = lands ? checkpoints[next] : t + step;
            if (observer)
                observer(t, 0.5 * step, states);
            ++result.accepted;
            result.schedule.dt.push_back(step);
            if (lands) {
                while (cp < replay->checkpoint_after.size() && replay->checkpoint_after[cp] == n + 1)
                    ++cp;
                snapshot_up_to(t, result.accepted);
            }
        }
        if (next < checkpoints.size())
            throw InvalidArgument("evolve: replayed schedule does not reach every checkpoint");
        return result;
    }

    const double exponent = stepper.error_exponent();
    double dt = c.dt_init;
    while (next < checkpoints.size()) {
        const double target = checkpoints[next];
        double step = std::min(dt, c.dt_max);
        bool lands = false;
        if (t + step >= target - 1e-13 * std::max(1.0, std::abs(target))) {
            step = target - t;
            lands = true;
        }
        const ShiftedSolver full_solver = stepper.factor(step);
        const ShiftedSolver half_solver = stepper.factor(0.5 * step);
        for (std::size_t j = 0; j < states.size(); ++j)
            stepper.step(full_solver, step, states[j], coarse[j]);
        // Observer only sees accepted sub-steps; run the fine path silently first.
        for (std::size_t j = 0; j < states.size(); ++j) {
            stepper.step(half_solver, 0.5 * step, states[j], half[j]);
            stepper.step(half_solver, 0.5 * step, half[j], fine[j]);
        }
        double scale = 0.0;
        double diff = 0.0;
        for (std::size_t j = 0; j < states.size(); ++j) {
            for (std::size_t i = 0; i < fine[j].size(); ++i) {
                scale = std::max(scale, std::abs(fine[j][i]));
                diff = std::max(diff, std::abs(fine[j][i] - coarse[j][i]));
            }
        }
        const double err = scale > 0.0 ? diff / scale : 0.0;
        if (!std::isfinite(err))
            throw NumericalFailure("evolve: non-finite state encountered");

        if (err <= c.step_tolerance) {
            if (observer) {
                observer(t + 0.5 * step, 0.5 * step, half);
            }
            states.swap(fine);
            t = lands ? target : t + step;
            if (observer)
                observer(t, 0.5 * step, states);
            ++result.accepted;
            result.schedule.dt.push_back(step);
            if (result.accepted > c.max_steps) {
                std::ostringstream os;
                os << "evolve: exceeded max_steps=" << c.max_steps << " before t=" << target;
                throw NumericalFailure(os.str());
            }
            const double factor =
                err > 0.0 ? std::clamp(0.9 * std::pow(c.step_tolerance / err, exponent), 0.2,
                                       c.dt_growth)
                          : c.dt_growth;
            // A step shortened to land on a checkpoint says nothing about the planned size.
            if (!(lands && step < dt))
                dt = std::min(step * factor, c.dt_max);
            if (lands)
                snapshot_up_to(t, result.accepted);
        } else {
            ++result.rejected;
            dt = step * std::max(0.2, 0.9 * std::pow(c.step_tolerance / err, exponent));
            if (dt < 1e-14 * std::max(t, c.dt_init)) {
                std::ostringstream os;
                os << "evolve: step size underflow at t=" << t << " (tolerance "
                   << c.step_tolerance << " unreachable)";
                throw NumericalFailure(os.str());
            }
        }
    }
    return result;
}

RadialSolution evolve(const WeightedOperator& op, const RadialSolution& s, double t_target,
                      const SolveControls& c)
{
    if (t_target < s.t)
        throw InvalidArgument("evolve: target time precedes the solution time");
    if (t_target == s.t)
        return s;
    const double cps[] = {t_target};
    auto out = evolve_batch(op, {s.values}, s.t, cps, c);
    return std::move(out.snapshots[0][0]);
}

// ---------------------------------------------------------------------------

RadialSolution project_datum(const RadialBVDatum& d, const RadialManifold& m,
                             std::shared_ptr<const Grid> grid)
{
    if (!grid)
        throw InvalidArgument("project_datum: null grid");
    const Grid& g = *grid;
    for (double r : d.jump_radii()) {
        if (g.face_index(r) < 0) {
            std::ostringstream os;
            os << "project_datum: jump at r=" << r << " is not a grid face";
            throw InvalidArgument(os.str());
        }
    }
    if (d.bounded_support() && d.support_radius() > g.radius())
        throw InvalidArgument("project_datum: datum support extends beyond the grid");

    const std::size_t n = g.cells();
    const auto faces = g.faces();
    const auto centers = g.centers();
    std::vector<double> values(n, 0.0);
    switch (d.kind()) {
    case DatumKind::ball_indicator:
        for (std::size_t i = 0; i < n; ++i)
            values[i] = centers[i] < d.radius() ? 1.0 : 0.0;
        break;
    case DatumKind::complement_indicator:
        for (std::size_t i = 0; i < n; ++i)
            values[i] = centers[i] < d.radius() ? 0.0 : 1.0;
        break;
    case DatumKind::constant_one:
        std::fill(values.begin(), values.end(), 1.0);
        break;
    case DatumKind::piecewise: {
        const auto breaks = d.break_radii();
        const auto& rule = gauss_legendre();
        const auto log_mu = g.log_cell_measure();
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> cuts{faces[i]};
            for (double b : breaks)
                if (b > faces[i] && b < faces[i + 1])
                    cuts.push_back(b);
            cuts.push_back(faces[i + 1]);
            CompensatedSum acc;
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                const double half = 0.5 * (cuts[k + 1] - cuts[k]);
                const double mid = 0.5 * (cuts[k + 1] + cuts[k]);
                for (int q = 0; q < GaussRule::kPoints; ++q) {
                    const double s = mid + half * rule.nodes[q];
                    const double w = std::exp(m.log_sphere_constant() + m.log_area(s)
                                              + std::log(half * rule.weights[q]) - log_mu[i]);
                    acc.add(w * d.value(s));
                }
            }
            values[i] = acc.value();
        }
        break;
    }
    }
    RadialSolution s;
    s.grid = std::move(grid);
    s.t = 0.0;
    s.values = std::move(values);
    s.provenance.radius = g.radius();
    s.provenance.cells = n;
    s.provenance.dt_policy = "projection";
    return s;
}

// ---------------------------------------------------------------------------

namespace {

bool same_datum(const RadialBVDatum& a, const RadialBVDatum& b)
{
    if (a.kind() != b.kind() || a.radius() != b.radius())
        return false;
    const auto& pa = a.breakpoints();
    const auto& pb = b.breakpoints();
    return std::equal(pa.begin(), pa.end(), pb.begin(), pb.end(),
                      [](const Breakpoint& x, const Breakpoint& y) {
                          return x.r == y.r && x.value == y.value;
                      });
}

// Data expressed as linear combinations of the states that are actually evolved.
struct Decomposition {
    std::vector<RadialBVDatum> bases;
    std::vector<std::vector<std::pair<std::size_t, double>>> terms;

    std::size_t add_base(const RadialBVDatum& d)
    {
        for (std::size_t i = 0; i < bases.size(); ++i)
            if (same_datum(bases[i], d))
                return i;
        bases.push_back(d);
        return bases.size() - 1;
    }

    explicit Decomposition(std::span<const RadialBVDatum> data)
    {
        for (const auto& d : data) {
            if (d.kind() == DatumKind::complement_indicator) {
                const std::size_t one = add_base(RadialBVDatum::constant_one());
                const std::size_t ball = add_base(RadialBVDatum::ball_indicator(d.radius()));
                terms.push_back({{one, 1.0}, {ball, -1.0}});
            } else {
                terms.push_back({{add_base(d), 1.0}});
            }
        }
    }

    std::vector<double> combine(std::size_t datum, const std::vector<RadialSolution>& evolved) const
    {
        const auto& t = terms[datum];
        std::vector<double> out = evolved[t[0].first].values;
        if (t[0].second != 1.0)
            for (double& v : out)
                v *= t[0].second;
        for (std::size_t k = 1; k < t.size(); ++k) {
            const auto& src = evolved[t[k].first].values;
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] += t[k].second * src[i];
        }
        return out;
    }
};

double snap_down(double r, double cpu) { return std::floor(r * cpu + 1e-9) / cpu; }
double snap_nearest(double r, double cpu) { return std::round(r * cpu) / cpu; }
double snap_up(double r, double cpu) { return std::ceil(r * cpu - 1e-9) / cpu; }

double exhaustion_base(std::span<const RadialBVDatum> data)
{
    double base = 0.0;
    for (const auto& d : data) {
        if (d.bounded_support())
            base = std::max(base, d.support_radius());
        for (double r : d.break_radii())
            base = std::max(base, r);
    }
    return base;
}

}  // namespace

std::vector<double> exhaustion_radii(const RadialManifold& m, std::span<const RadialBVDatum> data,
                                     double t_max, const SolveControls& c)
{
    c.validate();
    const double cpu = c.cells_per_unit;
    const double base = exhaustion_base(data);
    std::vector<double> radii;
    if (!c.exhaustion.automatic) {
        for (double r : c.exhaustion.radii) {
            const double snapped = snap_nearest(r, cpu);
            if (!(snapped > base)) {
                std::ostringstream os;
                os << "exhaustion radius " << r << " does not contain the datum (needs > " << base
                   << ")";
                throw InvalidArgument(os.str());
            }
            radii.push_back(snapped);
        }
        return radii;
    }
    const double cap = snap_down(max_representable_radius(m) * (1.0 - 1e-9), cpu);
    if (!(cap > base))
        throw RangeError("exhaustion: no representable radius contains the datum");
    const double step = std::max(1.0, 4.0 * std::sqrt(t_max));
    for (std::size_t k = 1; k <= c.exhaustion.max_levels; ++k) {
        double r = snap_up(base + static_cast<double>(k) * step, cpu);
        if (r >= cap) {
            if (radii.empty() || radii.back() < cap)
                radii.push_back(cap);
            break;
        }
        radii.push_back(r);
    }
    return radii;
}

ExhaustionRun run_exhaustion(const RadialManifold& m, std::span<const RadialBVDatum> data,
                             std::span<const double> times, const SolveControls& c)
{
    if (data.empty() || times.empty())
        throw InvalidArgument("run_exhaustion: need at least one datum and one time");
    for (std::size_t k = 0; k < times.size(); ++k)
        if (!(times[k] > 0.0) || (k > 0 && times[k] < times[k - 1]))
            throw InvalidArgument("run_exhaustion: times must be positive and nondecreasing");

    const Decomposition dec(data);
    const std::vector<double> radii = exhaustion_radii(m, data, times.back(), c);
    std::vector<double> jumps;
    for (const auto& d : dec.bases)
        for (double r : d.jump_radii())
            jumps.push_back(r);

    bool all_nonnegative = true;
    for (const auto& d : data)
        all_nonnegative = all_nonnegative && d.nonnegative();

    ExhaustionRun run;
    for (std::size_t level = 0; level < radii.size(); ++level) {
        const double radius = radii[level];
        const auto cells = static_cast<std::size_t>(std::llround(radius * c.cells_per_unit));
        auto grid = std::make_shared<const Grid>(
            build_grid(m, radius, cells, Grading::uniform(), jumps));
        auto op = std::make_shared<const WeightedOperator>(
            assemble(grid, m, BoundaryCondition::dirichlet_at_R));

        std::vector<std::vector<double>> states;
        states.reserve(dec.bases.size());
        for (const auto& b : dec.bases)
            states.push_back(project_datum(b, m, grid).values);
        EvolveResult evolved = evolve_batch(*op, std::move(states), 0.0, times, c,
                                            level == 0 ? nullptr : &run.schedule);
        if (level == 0) {
            run.schedule = evolved.schedule;
            run.accepted_steps = evolved.accepted;
        }

        ExhaustionLevel lv;
        lv.radius = radius;
        lv.grid = grid;
        lv.op = op;
        lv.solutions.resize(times.size());
        lv.probes.resize(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) {
            for (std::size_t j = 0; j < data.size(); ++j) {
                RadialSolution s = evolved.snapshots[k][0];
                s.values = dec.combine(j, evolved.snapshots[k]);
                ExhaustionProbe p;
                p.radius = radius;
                p.cells = cells;
                p.value_at_pole = s.at_pole();
                p.mass = weighted_mass(s);
                p.tv = total_variation(s, m);
                lv.solutions[k].push_back(std::move(s));
                lv.probes[k].push_back(p);
            }
        }

        if (level > 0) {
            const ExhaustionLevel& prev = run.levels.back();
            const auto c_prev = prev.grid->centers();
            const auto c_next = grid->centers();
            if (all_nonnegative) {
                for (std::size_t k = 0; k < times.size(); ++k) {
                    for (std::size_t j = 0; j < data.size(); ++j) {
                        const auto& a = prev.solutions[k][j].values;
                        const auto& b = lv.solutions[k][j].values;
                        for (std::size_t i = 0; i < a.size(); ++i) {
                            if (std::abs(c_prev[i] - c_next[i]) > 1e-12 * radius)
                                continue;
                            run.monotonicity_violation =
                                std::max(run.monotonicity_violation, a[i] - b[i]);
                        }
                    }
                }
                if (run.monotonicity_violation > kExhaustionMonotonicitySlack) {
                    std::ostringstream os;
                    os << "exhaustion monotonicity violated by " << run.monotonicity_violation
                       << " between R=" << prev.radius << " and R=" << radius;
                    throw NumericalFailure(os.str());
                }
            }
            bool stable = true;
            const double tol = c.exhaustion.tolerance;
            for (std::size_t k = 0; k < times.size(); ++k) {
                for (std::size_t j = 0; j < data.size(); ++j) {
                    const auto& p0 = prev.probes[k][j];
                    const auto& p1 = lv.probes[k][j];
                    stable = stable && std::abs(p1.value_at_pole - p0.value_at_pole) <= tol;
                    // Mass and TV of an unbounded datum grow with the ball and the
                    // boundary layer at R, so only the pole value can settle.
                    if (data[j].bounded_support())
                        stable = stable
                                 && std::abs(p1.mass - p0.mass) <= tol * std::max(1.0, std::abs(p1.mass))
                                 && std::abs(p1.tv - p0.tv) <= tol * std::max(1.0, std::abs(p1.tv));
                }
            }
            run.converged = stable;
        }
        run.levels.push_back(std::move(lv));
        run.used_level = run.levels.size() - 1;
        if (c.exhaustion.automatic && run.converged)
            break;
    }
    return run;
}

RadialSolution heat_semigroup(const RadialManifold& m, const RadialBVDatum& d, double t,
                              const SolveControls& c)
{
    if (!(t > 0.0))
        throw InvalidArgument("heat_semigroup: t must be positive");
    const RadialBVDatum data[] = {d};
    const double times[] = {t};
    ExhaustionRun run = run_exhaustion(m, data, times, c);
    return run.levels[run.used_level].solutions[0][0];
}

double semigroup_check(const RadialManifold& m, const RadialBVDatum& d, double t1, double t2,
                       const SolveControls& c)
{
    if (!(t1 >= 0.0) || !(t2 > 0.0))
        throw InvalidArgument("semigroup_check: need t1 >= 0 and t2 > 0");
    const RadialBVDatum data[] = {d};
    const double horizon[] = {t1 + t2};
    const ExhaustionRun run = run_exhaustion(m, data, horizon, c);
    const auto& level = run.used();
    const Decomposition dec(data);

    std::vector<std::vector<double>> initial;
    for (const auto& b : dec.bases)
        initial.push_back(project_datum(b, m, level.grid).values);

    const double direct_cp[] = {t1 + t2};
    const EvolveResult direct = evolve_batch(*level.op, initial, 0.0, direct_cp, c);
    const double first_cp[] = {t2};
    const EvolveResult first = evolve_batch(*level.op, initial, 0.0, first_cp, c);
    std::vector<std::vector<double>> mid;
    for (const auto& s : first.snapshots[0])
        mid.push_back(s.values);
    const EvolveResult second = evolve_batch(*level.op, mid, t2, direct_cp, c);

    RadialSolution a = direct.snapshots[0][0];
    a.values = dec.combine(0, direct.snapshots[0]);
    RadialSolution b = second.snapshots[0][0];
    b.values = dec.combine(0, second.snapshots[0]);
    const double dist = l1_mu_distance(a, b);
    const double norm = l1_mu_norm(a);
    return norm > 0.0 ? dist / norm : dist;
}

}  // namespace heatlab
