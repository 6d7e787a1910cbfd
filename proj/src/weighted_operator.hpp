#pragma once

#include "geometry.hpp"
#include "grid.hpp"

#include <memory>
#include <span>
#include <vector>

namespace heatlab {

enum class BoundaryCondition { dirichlet_at_R, neumann_at_R };

const char* boundary_condition_name(BoundaryCondition bc) noexcept;

/// Discrete weighted Laplacian A^{-1} d/dr (A d/dr .) in flux form:
///
///   (Lu)_i = (F_{i+1/2} - F_{i-1/2}) / mu_i,
///   F_{i+1/2} = sigma A(f_{i+1}) (u_{i+1} - u_i) / (c_{i+1} - c_i).
///
/// The pole face carries zero flux because A(0) = 0.  With dirichlet_at_R the
/// outer face sees the value 0 at r = R, at distance R - c_{N-1}.
/// Row i stores lower(i) and upper(i), the coefficients multiplying
/// (u_{i-1} - u_i) and (u_{i+1} - u_i); boundary() multiplies (0 - u_{N-1}).
class WeightedOperator {
public:
    WeightedOperator(std::shared_ptr<const Grid> grid, BoundaryCondition bc,
                     std::vector<double> lower, std::vector<double> upper, double boundary);

    const Grid& grid() const noexcept { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const noexcept { return grid_; }
    BoundaryCondition bc() const noexcept { return bc_; }
    std::size_t size() const noexcept { return lower_.size(); }

    std::span<const double> lower() const noexcept { return lower_; }
    std::span<const double> upper() const noexcept { return upper_; }
    double boundary() const noexcept { return boundary_; }
    /// Matrix diagonal: -(lower + upper), minus boundary() in the last row.
    std::vector<double> diagonal() const;
    /// Cell measures mu_i as doubles.
    std::span<const double> measure() const noexcept { return measure_; }

    /// v = L u.  Throws InvalidArgument on length mismatch.
    void apply(std::span<const double> u, std::span<double> v) const;
    std::vector<double> apply(std::span<const double> u) const;

    /// Copy with upper(row) scaled by (1 + rel); breaks weighted symmetry.
    /// Used by the validation suite as a negative control.
    WeightedOperator with_perturbed_upper(std::size_t row, double rel) const;

private:
    std::shared_ptr<const Grid> grid_;
    BoundaryCondition bc_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    double boundary_;
    std::vector<double> measure_;
};

/// Throws NumericalFailure naming the face when a coefficient is not finite.
WeightedOperator assemble(std::shared_ptr<const Grid> grid, const RadialManifold& m,
                          BoundaryCondition bc);

/// Weighted inner product sum mu_i a_i b_i, compensated.
double inner_mu(const WeightedOperator& op, std::span<const double> a, std::span<const double> b);

}  // namespace heatlab
