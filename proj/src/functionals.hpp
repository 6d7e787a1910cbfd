#pragma once

#include "geometry.hpp"
#include "solution.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace heatlab {

/// De Giorgi functional of a radial solution: sigma * sum over interior faces
/// of A(f) |u_{i+1} - u_i|.  Faces are restricted to lo < f <= hi.
/// Throws RangeError naming the face if a single term overflows.
double total_variation(const RadialSolution& s, const RadialManifold& m,
                       double lo = 0.0, double hi = std::numeric_limits<double>::infinity());

/// q(f) = -A(f) du/dr at interior faces, from the discrete flux.
struct FluxProfile {
    double t = 0.0;
    std::vector<double> faces;
    std::vector<double> q;
    /// Flux through r = R for a Dirichlet solution (0 otherwise).
    double boundary_q = 0.0;
    double threshold = 0.0;
    /// Smallest face with q > threshold, and q there; absent when no face qualifies.
    bool has_onset = false;
    double r_t = 0.0;
    double delta_t = 0.0;
};

FluxProfile flux_profile(const RadialSolution& s, const RadialManifold& m, double threshold = 0.0,
                         bool dirichlet = true);

/// Largest drop q_i - q_{i+1} along the profile, relative to max(1, max|q|);
/// <= 0 means q is nondecreasing.
double flux_monotonicity_defect(const FluxProfile& p);

/// sum mu_i |a_i - b_i|.  InvalidArgument if the grids differ.
double l1_mu_distance(const RadialSolution& a, const RadialSolution& b);
/// sum mu_i |a_i|.
double l1_mu_norm(const RadialSolution& a);
/// sum mu_i a_i (signed).
double weighted_mass(const RadialSolution& a);

struct Extrapolation {
    double estimate = 0.0;
    /// Magnitude of the last correction applied to the raw sequence.
    double error_indicator = 0.0;
    /// Spread between the last two accelerated estimates (0 with three points).
    double consistency = 0.0;
    bool low_confidence = false;
    std::string method;
};

struct SeriesPoint {
    double h;
    double value;
};

/// Aitken delta-squared on a sequence with h strictly decreasing to 0.
/// Fewer than three points, non-decreasing h, or non-finite values throw
/// InvalidArgument; oscillating or non-contracting differences only set
/// low_confidence.
Extrapolation aitken_limit(std::span<const SeriesPoint> series);

/// Richardson elimination of an h^order error term on consecutive pairs.
Extrapolation richardson_limit(std::span<const SeriesPoint> series, double order);

/// Dispatches on method "aitken" or "richardson".
Extrapolation extrapolate_limit(std::span<const SeriesPoint> series,
                                const std::string& method = "aitken", double order = 1.0);

/// One Richardson step between a coarse and a fine value, for refinement
/// factor `ratio` and error order `order`.
inline double richardson_pair(double coarse, double fine, double ratio, double order)
{
    const double f = std::pow(ratio, order);
    return fine + (fine - coarse) / (f - 1.0);
}

}  // namespace heatlab
