#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "errors.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace heatlab;

TEST_CASE("uniform faces")
{
    const auto flat = RadialManifold::euclidean(3);
    const Grid g = build_grid(flat, 4.0, 4);
    const std::vector<double> expect{0, 1, 2, 3, 4};
    CHECK(std::vector<double>(g.faces().begin(), g.faces().end()) == expect);
    CHECK(g.log_face_area()[0] == -std::numeric_limits<double>::infinity());
    CHECK(g.centers()[0] == 0.5);
    CHECK(g.cells() == 4);
    CHECK(g.radius() == 4.0);
}

TEST_CASE("jump radii are snapped onto faces")
{
    const auto flat = RadialManifold::euclidean(3);
    const double jump[] = {1.0};
    const Grid g = build_grid(flat, 2.0, 4, Grading::uniform(), jump);
    CHECK(g.face_index(1.0) >= 0);

    // Off-lattice jump moves its nearest face by at most half a cell.
    const double odd[] = {1.3};
    const Grid h = build_grid(flat, 2.0, 16, Grading::uniform(), odd);
    const long k = h.face_index(1.3);
    REQUIRE(k > 0);
    CHECK(std::abs(1.3 - 2.0 * static_cast<double>(k) / 16.0) <= 0.5 * 2.0 / 16.0);

    const double two[] = {1.0, 1.05};
    CHECK_THROWS_AS(build_grid(flat, 2.0, 4, Grading::uniform(), two), InvalidArgument);
    const double outside[] = {2.5};
    CHECK_THROWS_AS(build_grid(flat, 2.0, 16, Grading::uniform(), outside), InvalidArgument);
    CHECK_THROWS_AS(build_grid(flat, 0.0, 16), InvalidArgument);
    CHECK_THROWS_AS(build_grid(flat, 1.0, 0), InvalidArgument);
}

TEST_CASE("cell measures sum to the ball volume")
{
    const auto p4 = RadialManifold::power_exp(3, 4.0, 1);
    const Grid g = build_grid(p4, 3.0, 1024);
    const double sum = std::exp(g.log_total_measure());
    const double ref = ball_volume(p4, 3.0);
    CHECK(std::abs(sum - ref) <= 1e-9 * ref);

    const Grid fine = build_grid(p4, 3.0, 2048);
    CHECK(std::abs(std::exp(fine.log_total_measure()) - sum) <= 1e-9 * sum);

    const auto flat = RadialManifold::euclidean(3);
    const Grid e = build_grid(flat, 1.0, 64);
    CHECK(std::exp(e.log_total_measure()) == doctest::Approx(4.0 * oracle::pi / 3.0).epsilon(1e-12));
    for (double lm : e.log_cell_measure())
        CHECK(std::isfinite(lm));
}

TEST_CASE("geometric grading")
{
    const auto flat = RadialManifold::euclidean(3);
    const Grid g = build_grid(flat, 5.0, 200, Grading::geometric(1.01));
    const auto f = g.faces();
    CHECK(f.front() == 0.0);
    CHECK(f.back() == 5.0);
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        CHECK(f[i + 1] > f[i]);
        CHECK((f[i + 1] - f[i]) / (f[i] - f[i - 1]) == doctest::Approx(1.01).epsilon(1e-9));
    }
}

TEST_CASE("overflowing radius is a range error")
{
    const auto p4 = RadialManifold::power_exp(3, 4.0, 1);
    CHECK_THROWS_AS(build_grid(p4, 6.0, 64), RangeError);
    CHECK_NOTHROW(build_grid(p4, 5.0, 64));
}
