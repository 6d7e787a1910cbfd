#include "weighted_operator.hpp"

#include "errors.hpp"
#include "numerics.hpp"

#include <cmath>
#include <sstream>

namespace heatlab {

const char* boundary_condition_name(BoundaryCondition bc) noexcept
{
    return bc == BoundaryCondition::dirichlet_at_R ? "dirichlet_at_R" : "neumann_at_R";
}

WeightedOperator::WeightedOperator(std::shared_ptr<const Grid> grid, BoundaryCondition bc,
                                   std::vector<double> lower, std::vector<double> upper,
                                   double boundary)
    : grid_(std::move(grid)), bc_(bc), lower_(std::move(lower)), upper_(std::move(upper)),
      boundary_(boundary)
{
    const auto log_mu = grid_->log_cell_measure();
    measure_.resize(log_mu.size());
    for (std::size_t i = 0; i < log_mu.size(); ++i)
        measure_[i] = std::exp(log_mu[i]);
}

std::vector<double> WeightedOperator::diagonal() const
{
    std::vector<double> d(size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = -(lower_[i] + upper_[i]);
    if (!d.empty())
        d.back() -= boundary_;
    return d;
}

void WeightedOperator::apply(std::span<const double> u, std::span<double> v) const
{
    const std::size_t n = size();
    if (u.size() != n || v.size() != n) {
        std::ostringstream os;
        os << "apply: vector length " << u.size() << "/" << v.size() << " does not match grid size "
           << n;
        throw InvalidArgument(os.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        if (i > 0)
            acc += lower_[i] * (u[i - 1] - u[i]);
        if (i + 1 < n)
            acc += upper_[i] * (u[i + 1] - u[i]);
        v[i] = acc;
    }
    v[n - 1] -= boundary_ * u[n - 1];
}

std::vector<double> WeightedOperator::apply(std::span<const double> u) const
{
    std::vector<double> v(size());
    apply(u, v);
    return v;
}

WeightedOperator WeightedOperator::with_perturbed_upper(std::size_t row, double rel) const
{
    if (row + 1 >= size())
        throw InvalidArgument("with_perturbed_upper: row has no upper neighbour");
    WeightedOperator copy = *this;
    copy.upper_[row] *= 1.0 + rel;
    return copy;
}

WeightedOperator assemble(std::shared_ptr<const Grid> grid, const RadialManifold& m,
                          BoundaryCondition bc)
{
    if (!grid)
        throw InvalidArgument("assemble: null grid");
    const Grid& g = *grid;
    const std::size_t n = g.cells();
    const auto faces = g.faces();
    const auto centers = g.centers();
    const auto log_a = g.log_face_area();
    const auto log_mu = g.log_cell_measure();
    const double log_sigma = m.log_sphere_constant();

    // Cross-check that the grid was built for a manifold with the same area function.
    if (std::abs(m.log_area(faces.back()) - log_a.back())
        > 1e-12 * std::max(1.0, std::abs(log_a.back())))
        throw InvalidArgument("assemble: grid face areas do not match the manifold");

    std::vector<double> lower(n, 0.0), upper(n, 0.0);
    auto coefficient = [&](std::size_t face, std::size_t cell, double distance) {
        const double c = std::exp(log_sigma + log_a[face] - log_mu[cell]) / distance;
        if (!std::isfinite(c)) {
            std::ostringstream os;
            os << "assemble: non-finite coefficient at face " << face << " (r=" << faces[face] << ")";
            throw NumericalFailure(os.str());
        }
        return c;
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dc = centers[i + 1] - centers[i];
        upper[i] = coefficient(i + 1, i, dc);
        lower[i + 1] = coefficient(i + 1, i + 1, dc);
    }
    double boundary = 0.0;
    if (bc == BoundaryCondition::dirichlet_at_R)
        boundary = coefficient(n, n - 1, faces[n] - centers[n - 1]);
    return WeightedOperator(std::move(grid), bc, std::move(lower), std::move(upper), boundary);
}

double inner_mu(const WeightedOperator& op, std::span<const double> a, std::span<const double> b)
{
    const auto mu = op.measure();
    if (a.size() != mu.size() || b.size() != mu.size())
        throw InvalidArgument("inner_mu: length mismatch");
    CompensatedSum s;
    for (std::size_t i = 0; i < mu.size(); ++i)
        s.add(mu[i] * a[i] * b[i]);
    return s.value();
}

}  // namespace heatlab
