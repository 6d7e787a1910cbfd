#pragma once

// Helpers shared by the experiment implementations.

#include "errors.hpp"
#include "experiments.hpp"
#include "functionals.hpp"
#include "solver.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace heatlab::detail {

/// Runs job(0..n-1) on up to `threads` workers.  If several jobs throw, the
/// exception of the lowest index is rethrown, so failures are reproducible.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job)
{
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            job(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    const std::size_t count = std::min<std::size_t>(threads, n);
    for (std::size_t k = 0; k < count; ++k)
        pool.emplace_back(worker);
    pool.clear();  // joins
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

inline bool on_lattice(double r, double cells_per_unit)
{
    const double k = r * cells_per_unit;
    return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k);
}

inline double snap_to_lattice(double r, double cells_per_unit)
{
    return std::round(r * cells_per_unit) / cells_per_unit;
}

/// Largest lattice radius at which final scalars stay representable.
inline double representable_cap(const RadialManifold& m, double cells_per_unit)
{
    return std::floor(max_representable_radius(m) * (1.0 - 1e-9) * cells_per_unit) / cells_per_unit;
}

inline SolveControls with_radii(SolveControls c, std::vector<double> radii)
{
    c.exhaustion.automatic = false;
    c.exhaustion.radii = std::move(radii);
    return c;
}

inline void require(bool ok, const std::string& what)
{
    if (!ok)
        throw InvalidArgument(what);
}

inline bool strictly_decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1]))
            return false;
    return true;
}

nlohmann::json probes_json(const ExhaustionRun& run, std::size_t time_index, std::size_t datum);
nlohmann::json exhaustion_json(const ExhaustionRun& run);
nlohmann::json extrapolation_json(const Extrapolation& e);

}  // namespace heatlab::detail
