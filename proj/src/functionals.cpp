#include "functionals.hpp"

#include "errors.hpp"
#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heatlab {

namespace {

const Grid& grid_of(const RadialSolution& s)
{
    if (!s.grid)
        throw InvalidArgument("solution has no grid");
    if (s.values.size() != s.grid->cells())
        throw InvalidArgument("solution length does not match its grid");
    return *s.grid;
}

// exp(log_weight) * x without forming exp(log_weight) on its own.
bool weighted_term(double log_weight, double x, double& out)
{
    if (x == 0.0 || log_weight == kNegInf) {
        out = 0.0;
        return true;
    }
    double mag = 0.0;
    if (!checked_exp(log_weight + std::log(std::abs(x)), mag))
        return false;
    out = std::copysign(mag, x);
    return true;
}

}  // namespace

double total_variation(const RadialSolution& s, const RadialManifold& m, double lo, double hi)
{
    const Grid& g = grid_of(s);
    const auto faces = g.faces();
    const auto log_a = g.log_face_area();
    CompensatedSum tv;
    for (std::size_t i = 0; i + 1 < s.values.size(); ++i) {
        const double f = faces[i + 1];
        if (!(f > lo && f <= hi))
            continue;
        const double du = s.values[i + 1] - s.values[i];
        // Literal sigma * A * |du| whenever A is representable, so a single
        // unit jump reproduces perimeter_ball bit for bit.
        double term = m.sphere_constant() * std::exp(log_a[i + 1]) * du;
        if (!std::isfinite(term)
            && !weighted_term(m.log_sphere_constant() + log_a[i + 1], du, term)) {
            std::ostringstream os;
            os << "total_variation overflows at face " << i + 1 << " (r=" << f << ")";
            throw RangeError(os.str());
        }
        tv.add(std::abs(term));
    }
    return tv.value();
}

FluxProfile flux_profile(const RadialSolution& s, const RadialManifold& m, double threshold,
                         bool dirichlet)
{
    (void)m;
    const Grid& g = grid_of(s);
    const auto faces = g.faces();
    const auto centers = g.centers();
    const auto log_a = g.log_face_area();
    const std::size_t n = s.values.size();
    FluxProfile p;
    p.t = s.t;
    p.threshold = threshold;
    p.faces.reserve(n);
    p.q.reserve(n);
    auto flux = [&](std::size_t face, double du, double dist) {
        double term = 0.0;
        if (!weighted_term(log_a[face], -du / dist, term)) {
            std::ostringstream os;
            os << "flux_profile overflows at face " << face << " (r=" << faces[face] << ")";
            throw RangeError(os.str());
        }
        return term;
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        p.faces.push_back(faces[i + 1]);
        p.q.push_back(flux(i + 1, s.values[i + 1] - s.values[i], centers[i + 1] - centers[i]));
    }
    if (dirichlet)
        p.boundary_q = flux(n, -s.values[n - 1], faces[n] - centers[n - 1]);
    for (std::size_t k = 0; k < p.q.size(); ++k) {
        if (p.q[k] > threshold) {
            p.has_onset = true;
            p.r_t = p.faces[k];
            p.delta_t = p.q[k];
            break;
        }
    }
    return p;
}

double flux_monotonicity_defect(const FluxProfile& p)
{
    double scale = 1.0;
    for (double q : p.q)
        scale = std::max(scale, std::abs(q));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < p.q.size(); ++k)
        worst = std::max(worst, (p.q[k] - p.q[k + 1]) / scale);
    return p.q.size() < 2 ? 0.0 : worst;
}

double l1_mu_distance(const RadialSolution& a, const RadialSolution& b)
{
    const Grid& ga = grid_of(a);
    const Grid& gb = grid_of(b);
    if (&ga != &gb) {
        const auto fa = ga.faces();
        const auto fb = gb.faces();
        if (fa.size() != fb.size() || !std::equal(fa.begin(), fa.end(), fb.begin()))
            throw InvalidArgument("l1_mu_distance: solutions live on different grids");
    }
    const auto log_mu = ga.log_cell_measure();
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        double term = 0.0;
        if (!weighted_term(log_mu[i], std::abs(a.values[i] - b.values[i]), term))
            throw RangeError("l1_mu_distance overflows in cell " + std::to_string(i));
        acc.add(term);
    }
    return acc.value();
}

double l1_mu_norm(const RadialSolution& a)
{
    const Grid& g = grid_of(a);
    const auto log_mu = g.log_cell_measure();
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        double term = 0.0;
        if (!weighted_term(log_mu[i], std::abs(a.values[i]), term))
            throw RangeError("l1_mu_norm overflows in cell " + std::to_string(i));
        acc.add(term);
    }
    return acc.value();
}

double weighted_mass(const RadialSolution& a)
{
    const Grid& g = grid_of(a);
    const auto log_mu = g.log_cell_measure();
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        double term = 0.0;
        if (!weighted_term(log_mu[i], a.values[i], term))
            throw RangeError("weighted_mass overflows in cell " + std::to_string(i));
        acc.add(term);
    }
    return acc.value();
}

namespace {

void check_series(std::span<const SeriesPoint> series, std::size_t min_points)
{
    if (series.size() < min_points) {
        std::ostringstream os;
        os << "extrapolation needs at least " << min_points << " points, got " << series.size();
        throw InvalidArgument(os.str());
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (!std::isfinite(series[k].value) || !std::isfinite(series[k].h) || series[k].h <= 0.0)
            throw InvalidArgument("extrapolation: points need finite values and h > 0");
        if (k > 0 && !(series[k].h < series[k - 1].h))
            throw InvalidArgument("extrapolation: h must be strictly decreasing");
    }
}

}  // namespace

Extrapolation aitken_limit(std::span<const SeriesPoint> series)
{
    check_series(series, 3);
    double scale = 0.0;
    for (const auto& p : series)
        scale = std::max(scale, std::abs(p.value));
    const double flat = 1e-14 * std::max(scale, 1e-300);

    Extrapolation out;
    out.method = "aitken";
    std::vector<double> accelerated;
    for (std::size_t k = 0; k + 2 < series.size(); ++k) {
        const double x0 = series[k].value;
        const double x1 = series[k + 1].value;
        const double x2 = series[k + 2].value;
        const double d1 = x1 - x0;
        const double d2 = x2 - x1;
        const double dd = d2 - d1;
        if (std::abs(d1) <= flat && std::abs(d2) <= flat) {
            accelerated.push_back(x2);
            continue;
        }
        const double ratio = (d1 != 0.0) ? d2 / d1 : std::numeric_limits<double>::infinity();
        // Aitken assumes geometric contraction of the differences: 0 < ratio < 1.
        if (!(ratio > 0.0 && ratio < 1.0) || std::abs(dd) <= flat) {
            out.low_confidence = true;
            accelerated.push_back(x2);
            continue;
        }
        accelerated.push_back(x2 - d2 * d2 / dd);
    }
    out.estimate = accelerated.back();
    out.error_indicator = std::abs(out.estimate - series.back().value);
    if (accelerated.size() >= 2)
        out.consistency = std::abs(accelerated.back() - accelerated[accelerated.size() - 2]);
    return out;
}

Extrapolation richardson_limit(std::span<const SeriesPoint> series, double order)
{
    check_series(series, 2);
    if (!(order > 0.0))
        throw InvalidArgument("richardson: order must be positive");
    Extrapolation out;
    out.method = "richardson";
    std::vector<double> accelerated;
    for (std::size_t k = 0; k + 1 < series.size(); ++k) {
        const double ratio = series[k].h / series[k + 1].h;
        accelerated.push_back(richardson_pair(series[k].value, series[k + 1].value, ratio, order));
    }
    // Successive differences should shrink by ratio^order; anything else means the
    // assumed error model does not hold.
    if (series.size() >= 3) {
        const std::size_t n = series.size();
        const double d1 = series[n - 2].value - series[n - 3].value;
        const double d2 = series[n - 1].value - series[n - 2].value;
        if (d1 != 0.0 && !(d2 / d1 > 0.0 && d2 / d1 < 1.0))
            out.low_confidence = true;
    }
    out.estimate = accelerated.back();
    out.error_indicator = std::abs(out.estimate - series.back().value);
    if (accelerated.size() >= 2)
        out.consistency = std::abs(accelerated.back() - accelerated[accelerated.size() - 2]);
    return out;
}

Extrapolation extrapolate_limit(std::span<const SeriesPoint> series, const std::string& method,
                                double order)
{
    if (method == "aitken")
        return aitken_limit(series);
    if (method == "richardson")
        return richardson_limit(series, order);
    throw InvalidArgument("unknown extrapolation method '" + method + "'");
}

}  // namespace heatlab
