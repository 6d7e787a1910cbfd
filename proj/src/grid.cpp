#include "grid.hpp"

#include "errors.hpp"
#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heatlab {

long Grid::face_index(double r) const noexcept
{
    const auto it = std::lower_bound(faces_.begin(), faces_.end(), r);
    if (it == faces_.end() || *it != r)
        return -1;
    return static_cast<long>(it - faces_.begin());
}

double Grid::log_total_measure() const noexcept
{
    return log_sum_exp(log_cell_measure_);
}

Grid build_grid(const RadialManifold& m, double radius, std::size_t cells, Grading grading,
                std::span<const double> jump_radii)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw InvalidArgument("build_grid: radius must be positive and finite");
    if (cells == 0)
        throw InvalidArgument("build_grid: need at least one cell");

    // The outermost face area and the ball volume are final scalar outputs.
    const double log_outer = m.log_sphere_constant() + m.log_area(radius);
    if (log_outer >= kLogMaxDouble) {
        std::ostringstream os;
        os << "build_grid: sigma*A(R) overflows a double at R=" << radius << " (log " << log_outer
           << ")";
        throw RangeError(os.str());
    }

    Grid g;
    g.grading_ = grading;
    auto& f = g.faces_;
    f.resize(cells + 1);
    if (grading.kind == Grading::Kind::geometric && grading.ratio != 1.0) {
        const double q = grading.ratio;
        if (!(q > 0.0) || !std::isfinite(q))
            throw InvalidArgument("build_grid: geometric ratio must be positive");
        const double h0 = radius * (q - 1.0) / (std::pow(q, static_cast<double>(cells)) - 1.0);
        double width = h0;
        f[0] = 0.0;
        for (std::size_t i = 1; i <= cells; ++i) {
            f[i] = f[i - 1] + width;
            width *= q;
        }
    } else {
        const double h = radius / static_cast<double>(cells);
        for (std::size_t i = 0; i <= cells; ++i)
            f[i] = h * static_cast<double>(i);
    }
    f[cells] = radius;

    std::vector<double> jumps(jump_radii.begin(), jump_radii.end());
    std::sort(jumps.begin(), jumps.end());
    jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
    std::vector<std::size_t> used;
    for (double r : jumps) {
        if (!(r > 0.0 && r < radius)) {
            std::ostringstream os;
            os << "build_grid: jump radius " << r << " is outside (0, " << radius << ")";
            throw InvalidArgument(os.str());
        }
        const auto it = std::lower_bound(f.begin(), f.end(), r);
        std::size_t k = static_cast<std::size_t>(it - f.begin());
        if (k > 0 && (k == f.size() || r - f[k - 1] < f[k] - r))
            --k;
        if (k == 0 || k == cells || std::find(used.begin(), used.end(), k) != used.end()) {
            std::ostringstream os;
            os << "build_grid: " << cells << " cells cannot separate jump radius " << r;
            throw InvalidArgument(os.str());
        }
        f[k] = r;
        used.push_back(k);
    }
    for (std::size_t i = 0; i < cells; ++i)
        if (!(f[i + 1] > f[i]))
            throw InvalidArgument("build_grid: snapping produced a degenerate cell");

    g.centers_.resize(cells);
    g.log_face_area_.resize(cells + 1);
    g.log_cell_measure_.resize(cells);
    for (std::size_t i = 0; i <= cells; ++i)
        g.log_face_area_[i] = m.log_area(f[i]);
    for (std::size_t i = 0; i < cells; ++i) {
        g.centers_[i] = 0.5 * (f[i] + f[i + 1]);
        g.log_cell_measure_[i] = log_shell_measure(m, f[i], f[i + 1]);
        if (!std::isfinite(g.log_cell_measure_[i]))
            throw NumericalFailure("build_grid: non-finite cell measure in cell " + std::to_string(i));
    }
    const double log_volume = g.log_total_measure();
    if (log_volume >= kLogMaxDouble) {
        std::ostringstream os;
        os << "build_grid: ball volume overflows a double at R=" << radius << " (log " << log_volume
           << ")";
        throw RangeError(os.str());
    }
    return g;
}

}  // namespace heatlab
