#pragma once

// Independent reference values for the test suite.  Nothing here calls into
// the library: every number is produced from first principles with Boost
// quadrature or a closed form.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Heat flow of the indicator of the unit ball in R^3, evaluated at radius r
// by integrating the radial heat kernel against the datum.  For r > 0 the
// kernel reduces to a difference of 1D Gaussians through the method of
// images for odd functions r*u.
inline double euclidean_ball_heat(double t, double r, double r0 = 1.0)
{
    const double g = 1.0 / std::sqrt(4.0 * pi * t);
    auto kernel = [&](double s) {
        if (r < 1e-8)  // limit r -> 0 of the image difference below
            return g * g * g * 4.0 * pi * s * s * std::exp(-s * s / (4.0 * t));
        return (s / r) * g
               * (std::exp(-(r - s) * (r - s) / (4.0 * t)) - std::exp(-(r + s) * (r + s) / (4.0 * t)));
    };
    // Fixed 30-point Gauss panels, each a fraction of the diffusion length
    // sqrt(t) wide, with a panel edge at r so the peak is never straddled.
    auto panels = [&](double a, double b) {
        const double width = 0.25 * std::sqrt(t);
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            const double lo = a + (b - a) * k / n;
            const double hi = a + (b - a) * (k + 1) / n;
            sum += boost::math::quadrature::gauss<double, 30>::integrate(kernel, lo, hi);
        }
        return sum;
    };
    if (r > 0.0 && r < r0)
        return panels(0.0, r) + panels(r, r0);
    return panels(0.0, r0);
}

// Same quantity from the erf closed form, used only to validate the
// quadrature oracle above.
inline double euclidean_ball_heat_closed(double t, double r)
{
    const double s = 2.0 * std::sqrt(t);
    const double a = 0.5 * (std::erf((1.0 - r) / s) + std::erf((1.0 + r) / s));
    const double b = std::sqrt(t / pi) / r
                     * (std::exp(-(1.0 - r) * (1.0 - r) / (4.0 * t))
                        - std::exp(-(1.0 + r) * (1.0 + r) / (4.0 * t)));
    return a - b;
}

// sigma * int_0^r s^2 e^{s^4} ds by tanh-sinh, a rule unrelated to the
// Gauss-Legendre panels used by the library.
inline double power4_ball_volume(double r)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [](double s) { return s * s * std::exp(s * s * s * s); };
    return 4.0 * pi * ts.integrate(f, 0.0, r);
}

// Delta w for w(r) = int_r^R (1 - e^{-s^4}) / s^3 ds on the e^{r^4} model,
// written as -4 + (e^{r^4} - 1)/(r^4 e^{r^4}).
inline double comparison_laplacian(double r)
{
    const double r4 = r * r * r * r;
    return -4.0 + (std::exp(r4) - 1.0) / (r4 * std::exp(r4));
}

inline double comparison_w(double r, double R)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [](double s) { return (1.0 - std::exp(-s * s * s * s)) / (s * s * s); };
    return r >= R ? 0.0 : ts.integrate(f, r, R);
}

}  // namespace oracle
