#pragma once

#include "geometry.hpp"

#include <span>
#include <vector>

namespace heatlab {

struct Grading {
    enum class Kind { uniform, geometric } kind = Kind::uniform;
    double ratio = 1.0;  // cell-width growth factor for geometric grading

    static Grading uniform() { return {}; }
    static Grading geometric(double ratio) { return {Kind::geometric, ratio}; }
};

/// Finite-volume mesh of the ball [0, R]: N cells between N+1 faces.
/// Face areas and cell measures are stored as logarithms so that weights
/// such as e^{r^4} never have to be formed.
class Grid {
public:
    double radius() const noexcept { return faces_.back(); }
    std::size_t cells() const noexcept { return centers_.size(); }

    std::span<const double> faces() const noexcept { return faces_; }
    std::span<const double> centers() const noexcept { return centers_; }
    /// log A(f_i), i = 0..N; the pole entry is -inf.
    std::span<const double> log_face_area() const noexcept { return log_face_area_; }
    /// log mu_i with mu_i = sigma * integral of A over cell i.
    std::span<const double> log_cell_measure() const noexcept { return log_cell_measure_; }
    const Grading& grading() const noexcept { return grading_; }

    /// Index of the face located exactly at r, or -1.
    long face_index(double r) const noexcept;

    /// Sum of the cell measures, in log space.
    double log_total_measure() const noexcept;

private:
    friend Grid build_grid(const RadialManifold&, double, std::size_t, Grading,
                           std::span<const double>);
    std::vector<double> faces_;
    std::vector<double> centers_;
    std::vector<double> log_face_area_;
    std::vector<double> log_cell_measure_;
    Grading grading_;
};

/// Builds a grid whose faces contain every requested jump radius exactly
/// (the nearest face is moved onto it).  Centres are cell midpoints.  Cell
/// measures come from adaptive Gauss-Legendre quadrature accumulated with
/// log-sum-exp.
///
/// Throws InvalidArgument (R <= 0, no cells, jump outside (0, R), two jumps
/// competing for one face) and RangeError when sigma*A(R) or the ball volume
/// is not representable as a double.
Grid build_grid(const RadialManifold& m, double radius, std::size_t cells,
                Grading grading = Grading::uniform(), std::span<const double> jump_radii = {});


}  // namespace heatlab
