#pragma once

#include "grid.hpp"

#include <memory>
#include <string>
#include <vector>

namespace heatlab {

struct Provenance {
    double radius = 0.0;
    std::size_t cells = 0;
    std::string scheme;
    std::string dt_policy;
    std::size_t steps = 0;
};

/// Cell values of h_t u on a grid.
struct RadialSolution {
    std::shared_ptr<const Grid> grid;
    double t = 0.0;
    std::vector<double> values;
    Provenance provenance;

    double at_pole() const { return values.front(); }
};

}  // namespace heatlab
