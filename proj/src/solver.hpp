#pragma once

#include "geometry.hpp"
#include "solution.hpp"
#include "weighted_operator.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace heatlab {

enum class TimeScheme { implicit_euler, crank_nicolson };

const char* time_scheme_name(TimeScheme s) noexcept;

struct ExhaustionPolicy {
    /// Automatic radii R_k = base + k * max(1, 4 sqrt(t_max)); otherwise `radii`.
    bool automatic = true;
    std::vector<double> radii;
    std::size_t max_levels = 6;
    /// Probe change (pole value, mass, TV) below which the exhaustion is accepted.
    double tolerance = 1e-8;
};

struct SolveControls {
    TimeScheme scheme = TimeScheme::implicit_euler;
    double dt_init = 1e-7;
    double dt_max = 0.05;
    double dt_growth = 1.5;
    /// Step-doubling local error bound, relative to the largest state magnitude.
    double step_tolerance = 1e-7;
    std::size_t max_steps = 2'000'000;
    /// Uniform spacing of exhaustion grids is 1 / cells_per_unit.
    double cells_per_unit = 1024.0;
    ExhaustionPolicy exhaustion;
    /// Repeat on a grid with twice the cells and Richardson-combine in dr.
    bool richardson = false;

    void validate() const;
};

/// Accepted step sizes of an adaptive run; replaying it reproduces the run's
/// time levels on any operator.
struct StepSchedule {
    std::vector<double> dt;
    /// Number of accepted steps after which checkpoint k is reached.
    std::vector<std::size_t> checkpoint_after;
};

/// Called after every implicit sub-step with the time span it covered and
/// the updated states.
using StepObserver =
    std::function<void(double t_new, double dt, std::span<const std::vector<double>> states)>;

struct EvolveResult {
    /// snapshots[k][j]: state j at checkpoint k.
    std::vector<std::vector<RadialSolution>> snapshots;
    StepSchedule schedule;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Cell averages of the datum.  Every jump radius must be a grid face.
RadialSolution project_datum(const RadialBVDatum& d, const RadialManifold& m,
                             std::shared_ptr<const Grid> grid);

/// Advances several states sharing one operator through the given
/// nondecreasing checkpoints (all >= t0).  Step-doubling error control when
/// `replay` is null, otherwise the recorded steps are applied verbatim.
EvolveResult evolve_batch(const WeightedOperator& op, std::vector<std::vector<double>> states,
                          double t0, std::span<const double> checkpoints, const SolveControls& c,
                          const StepSchedule* replay = nullptr, const StepObserver& observer = {});

RadialSolution evolve(const WeightedOperator& op, const RadialSolution& s, double t_target,
                      const SolveControls& c);

struct ExhaustionProbe {
    double radius = 0.0;
    std::size_t cells = 0;
    double value_at_pole = 0.0;
    double mass = 0.0;
    double tv = 0.0;
};

struct ExhaustionLevel {
    double radius = 0.0;
    std::shared_ptr<const Grid> grid;
    std::shared_ptr<const WeightedOperator> op;
    /// solutions[k][j]: datum j at checkpoint k.
    std::vector<std::vector<RadialSolution>> solutions;
    std::vector<std::vector<ExhaustionProbe>> probes;
};

struct ExhaustionRun {
    std::vector<ExhaustionLevel> levels;
    std::size_t used_level = 0;
    bool converged = false;
    /// Largest u_{R_k} - u_{R_{k+1}} seen at shared cells (nonnegative data only).
    double monotonicity_violation = 0.0;
    StepSchedule schedule;
    std::size_t accepted_steps = 0;

    const ExhaustionLevel& used() const { return levels.at(used_level); }
};

inline constexpr double kExhaustionMonotonicitySlack = 1e-10;

/// Minimal heat semigroup by Dirichlet-ball exhaustion.  The step schedule is
/// chosen adaptively on the first radius and replayed on the others, so
/// consecutive levels are comparable cell by cell.  Complement indicators
/// are never evolved: they are formed as h_t 1 - h_t chi_E.
///
/// Throws NumericalFailure if exhaustion monotonicity is violated by more
/// than kExhaustionMonotonicitySlack.
ExhaustionRun run_exhaustion(const RadialManifold& m, std::span<const RadialBVDatum> data,
                             std::span<const double> times, const SolveControls& c);

/// Radii the exhaustion would use for these data and times.
std::vector<double> exhaustion_radii(const RadialManifold& m, std::span<const RadialBVDatum> data,
                                     double t_max, const SolveControls& c);

/// h_t d on the accepted exhaustion level.
RadialSolution heat_semigroup(const RadialManifold& m, const RadialBVDatum& d, double t,
                              const SolveControls& c);

/// Relative L1(mu) distance between h_{t1+t2} d and h_{t1}(h_{t2} d) on one grid.
double semigroup_check(const RadialManifold& m, const RadialBVDatum& d, double t1, double t2,
                       const SolveControls& c);

}  // namespace heatlab
