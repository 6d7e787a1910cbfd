#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "errors.hpp"
#include "geometry.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>

using namespace heatlab;

TEST_CASE("log_area of the closed-form families")
{
    const auto flat = RadialManifold::euclidean(3);
    CHECK(flat.log_area(2.0) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(flat.log_area(0.0) == -std::numeric_limits<double>::infinity());

    const auto p4 = RadialManifold::power_exp(3, 4.0, 1);
    CHECK(p4.log_area(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p4.log_area(0.0) == -std::numeric_limits<double>::infinity());
    // Far beyond where e^{r^4} overflows the log stays finite.
    CHECK(std::isfinite(p4.log_area(20.0)));
    CHECK(p4.log_area(20.0) == doctest::Approx(2.0 * std::log(20.0) + 160000.0));

    const auto gauss = RadialManifold::power_exp(3, 2.0, -1);
    CHECK(gauss.log_area(1.0) == doctest::Approx(-1.0));

    CHECK_THROWS_AS(flat.log_area(-1.0), InvalidArgument);
    CHECK_THROWS_AS(flat.log_area(std::nan("")), InvalidArgument);
    CHECK_THROWS_AS(flat.log_area(std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST_CASE("sphere constants come from the Gamma function")
{
    CHECK(RadialManifold::euclidean(2).sphere_constant() == doctest::Approx(2.0 * oracle::pi));
    CHECK(RadialManifold::euclidean(3).sphere_constant() == doctest::Approx(4.0 * oracle::pi));
    CHECK(RadialManifold::euclidean(4).sphere_constant()
          == doctest::Approx(2.0 * oracle::pi * oracle::pi));
    CHECK_THROWS_AS(RadialManifold::euclidean(1), InvalidArgument);
}

TEST_CASE("warped cone and weighted model share log A to 1e-14")
{
    const auto cone = RadialManifold::warped_cone(3);
    const auto p4 = RadialManifold::power_exp(3, 4.0, 1);
    double worst = 0.0;
    for (int k = 1; k <= 1000; ++k) {
        const double r = 5.12 * k / 1000.0;
        const double a = cone.log_area(r);
        const double b = p4.log_area(r);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("log_area is nondecreasing for r >= 1 on the provided families")
{
    const RadialManifold models[] = {
        RadialManifold::euclidean(3), RadialManifold::euclidean(5),
        RadialManifold::power_exp(3, 4.0, 1), RadialManifold::power_exp(3, 2.0, 1),
        RadialManifold::warped_cone(3)};
    for (const auto& m : models) {
        double prev = m.log_area(1.0);
        for (int k = 1; k <= 400; ++k) {
            const double v = m.log_area(1.0 + 0.01 * k);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("perimeter_ball")
{
    const auto flat = RadialManifold::euclidean(3);
    const auto p4 = RadialManifold::power_exp(3, 4.0, 1);
    CHECK(perimeter_ball(flat, 1.0) == doctest::Approx(4.0 * oracle::pi).epsilon(1e-15));
    CHECK(perimeter_ball(p4, 1.0) == doctest::Approx(4.0 * oracle::pi * std::exp(1.0)).epsilon(1e-14));
    CHECK(perimeter_ball(p4, 0.0) == 0.0);
    // Construction identity.
    for (double r : {0.3, 1.7, 4.2})
        CHECK(perimeter_ball(p4, r) == p4.sphere_constant() * std::exp(p4.log_area(r)));
    CHECK_THROWS_AS(perimeter_ball(p4, 6.0), RangeError);
}

TEST_CASE("ball_volume against independent quadrature")
{
    const auto flat = RadialManifold::euclidean(3);
    CHECK(ball_volume(flat, 1.0) == doctest::Approx(4.0 * oracle::pi / 3.0).epsilon(1e-12));
    CHECK(ball_volume(flat, 0.0) == 0.0);

    const auto p4 = RadialManifold::power_exp(3, 4.0, 1);
    for (double r : {0.5, 1.0, 1.5, 2.0}) {
        const double ref = oracle::power4_ball_volume(r);
        CHECK(std::abs(ball_volume(p4, r) - ref) <= 1e-8 * ref);
    }
    CHECK_THROWS_AS(ball_volume(p4, 6.0), RangeError);
    CHECK(max_representable_radius(p4) == doctest::Approx(5.13).epsilon(0.01));
    CHECK_NOTHROW(ball_volume(p4, max_representable_radius(p4) * (1.0 - 1e-9)));
}

TEST_CASE("custom family reproduces a tabulated weight")
{
    std::vector<double> r, g;
    for (int k = 0; k <= 40; ++k) {
        r.push_back(0.1 * k);
        g.push_back(std::pow(0.1 * k, 2));
    }
    const auto tab = RadialManifold::custom(3, r, g);
    const auto p2 = RadialManifold::power_exp(3, 2.0, 1);
    for (double x : {0.05, 0.77, 1.5, 3.33})
        CHECK(tab.log_area(x) == doctest::Approx(p2.log_area(x)).epsilon(1e-3));
    CHECK_THROWS_AS(RadialManifold::custom(3, {0.0, 1.0}, {0.0}), InvalidArgument);
    CHECK_THROWS_AS(RadialManifold::custom(3, {1.0, 0.5}, {0.0, 0.0}), InvalidArgument);
}

TEST_CASE("exact total variation of radial data")
{
    const auto flat = RadialManifold::euclidean(3);
    CHECK(exact_total_variation(RadialBVDatum::ball_indicator(1.0), flat)
          == doctest::Approx(4.0 * oracle::pi));
    CHECK(exact_total_variation(RadialBVDatum::complement_indicator(1.0), flat)
          == doctest::Approx(4.0 * oracle::pi));
    CHECK(exact_total_variation(RadialBVDatum::constant_one(), flat) == 0.0);
    CHECK(exact_total_variation(RadialBVDatum::zero(), flat) == 0.0);

    // Hat: rises linearly 0 -> 1 on [0,1], stays 1, jumps to 0 at r = 2.
    const auto hat = RadialBVDatum::piecewise({{0.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}, {2.0, 0.0}});
    using boost::math::quadrature::gauss_kronrod;
    const double smooth = gauss_kronrod<double, 31>::integrate([](double s) { return s * s; },
                                                                0.0, 1.0);
    CHECK(exact_total_variation(hat, flat)
          == doctest::Approx(4.0 * oracle::pi * (smooth + 4.0)).epsilon(1e-12));
    CHECK(exact_total_variation(hat, flat)
          == doctest::Approx(4.0 * oracle::pi * (1.0 / 3.0 + 4.0)).epsilon(1e-12));

    const auto gauss = RadialManifold::power_exp(3, 2.0, -1);
    CHECK(exact_total_variation(RadialBVDatum::ball_indicator(1.0), gauss)
          == doctest::Approx(4.0 * oracle::pi * std::exp(-1.0)));
}

TEST_CASE("datum semantics")
{
    const auto hat = RadialBVDatum::piecewise({{0.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}, {2.0, 0.0}});
    CHECK(hat.value(0.5) == doctest::Approx(0.5));
    CHECK(hat.value(1.5) == 1.0);
    CHECK(hat.value(2.0) == 0.0);
    CHECK(hat.value(3.0) == 0.0);
    CHECK(hat.support_radius() == 2.0);
    CHECK(hat.jump_radii() == std::vector<double>{2.0});
    CHECK(hat.bounded_support());

    CHECK_FALSE(RadialBVDatum::constant_one().bounded_support());
    CHECK_FALSE(RadialBVDatum::complement_indicator(1.0).bounded_support());
    CHECK(RadialBVDatum::ball_indicator(1.0).bounded_support());
    CHECK(RadialBVDatum::zero().identically_zero());
    CHECK_THROWS_AS(RadialBVDatum::ball_indicator(0.0), InvalidArgument);
    CHECK_THROWS_AS(RadialBVDatum::piecewise({{1.0, 0.0}, {0.5, 1.0}}), InvalidArgument);
}
