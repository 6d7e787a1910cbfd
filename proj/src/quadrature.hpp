#pragma once

#include <array>
#include <functional>

namespace heatlab {

// Adaptive Gauss-Kronrod (15-point) integration of f over [a, b].
// Throws NumericalFailure if the estimated relative error stays above rel_tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12);

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    static constexpr int kPoints = 8;
    std::array<double, kPoints> nodes;
    std::array<double, kPoints> weights;
};

const GaussRule& gauss_legendre();

}  // namespace heatlab
