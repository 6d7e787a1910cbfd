#include "quadrature.hpp"

#include "errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace heatlab {

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol)
{
    if (a == b)
        return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    // Boost compares the error estimate of the unit-interval rule against a
    // tolerance scaled by the interval length, so on short intervals roundoff
    // alone drives the recursion to full depth.  Integrating the pulled-back
    // function over [-1, 1] keeps both on the same scale.
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto g = [&](double x) { return half * f(mid + half * x); };
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        g, -1.0, 1.0, 20, rel_tol, &error, &l1);
    if (!std::isfinite(value) || error > 100.0 * rel_tol * std::max(l1, 1e-300)) {
        std::ostringstream os;
        os << "adaptive quadrature on [" << a << ", " << b << "] did not converge (error "
           << error << ", L1 " << l1 << ")";
        throw NumericalFailure(os.str());
    }
    return value;
}

const GaussRule& gauss_legendre()
{
    static const GaussRule rule = [] {
        using Gauss = boost::math::quadrature::gauss<double, GaussRule::kPoints>;
        // Boost stores the non-negative half of a symmetric rule.
        const auto& x = Gauss::abscissa();
        const auto& w = Gauss::weights();
        GaussRule out{};
        int k = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            out.nodes[k] = -x[i];
            out.weights[k] = w[i];
            ++k;
            out.nodes[k] = x[i];
            out.weights[k] = w[i];
            ++k;
        }
        return out;
    }();
    return rule;
}

}  // namespace heatlab
