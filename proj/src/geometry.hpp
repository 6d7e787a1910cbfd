#pragma once

#include <string>
#include <vector>

namespace heatlab {

enum class Family { euclidean, power_exp_weight, warped_cone, custom };

const char* family_name(Family f) noexcept;

/// Rotationally symmetric model manifold, encoded by the logarithm of its
/// area function A(r): the weighted (n-1)-area density of the sphere of
/// radius r.  Radial functions then evolve by A^{-1} d/dr (A d/dr u).
///
/// Families:
///   euclidean         log A = (n-1) ln r
///   power_exp_weight  log A = (n-1) ln r + sign * r^p   (measure e^{sign r^p} dx)
///   warped_cone       log A = (n-1) ln psi, psi(r) = r e^{r^p / 2}
///   custom            log A = (n-1) ln r + g(r), g tabulated, monotone cubic
///
/// Immutable after construction.
class RadialManifold {
public:
    static RadialManifold euclidean(int dimension);
    static RadialManifold power_exp(int dimension, double p, int sign);
    static RadialManifold warped_cone(int dimension, double p = 4.0);
    static RadialManifold custom(int dimension, std::vector<double> radii,
                                 std::vector<double> log_excess);

    int dimension() const noexcept { return dimension_; }
    Family family() const noexcept { return family_; }
    double exponent() const noexcept { return p_; }
    int sign() const noexcept { return sign_; }
    const std::vector<double>& table_radii() const noexcept { return table_r_; }
    const std::vector<double>& table_values() const noexcept { return table_g_; }

    /// Surface measure of the unit (n-1)-sphere.
    double sphere_constant() const noexcept { return sigma_; }
    double log_sphere_constant() const noexcept { return log_sigma_; }

    /// log A(r); -inf at the pole.  Throws InvalidArgument for negative or
    /// non-finite r.
    double log_area(double r) const;

    std::string describe() const;

private:
    RadialManifold(Family family, int dimension);
    double log_excess(double r) const;

    Family family_;
    int dimension_;
    double p_ = 0.0;
    int sign_ = 1;
    double sigma_ = 0.0;
    double log_sigma_ = 0.0;
    std::vector<double> table_r_;
    std::vector<double> table_g_;
    std::vector<double> table_slope_;
};

/// Per(B_r) = sigma * A(r).  RangeError when it overflows a double.
double perimeter_ball(const RadialManifold& m, double r);

/// log of sigma * integral_a^b A(s) ds, computed without forming A.
double log_shell_measure(const RadialManifold& m, double a, double b);

double log_ball_volume(const RadialManifold& m, double r);
double ball_volume(const RadialManifold& m, double r);

/// Largest radius at which sigma*A(r) and the ball volume both stay finite
/// (bisection over log A, accurate to ~1e-9).
double max_representable_radius(const RadialManifold& m, double hi = 64.0);

enum class DatumKind { ball_indicator, complement_indicator, piecewise, constant_one };

const char* datum_kind_name(DatumKind k) noexcept;

struct Breakpoint {
    double r;
    double value;
};

/// Radial BV profile.  A piecewise datum is linear between consecutive
/// breakpoints, equal to the first value on [0, r_first), and zero beyond the
/// last breakpoint; two breakpoints at the same radius encode a jump.
class RadialBVDatum {
public:
    static RadialBVDatum ball_indicator(double radius);
    static RadialBVDatum complement_indicator(double radius);
    static RadialBVDatum constant_one();
    static RadialBVDatum piecewise(std::vector<Breakpoint> points);
    static RadialBVDatum zero() { return piecewise({}); }

    DatumKind kind() const noexcept { return kind_; }
    double radius() const noexcept { return radius_; }
    const std::vector<Breakpoint>& breakpoints() const noexcept { return points_; }

    /// +inf for constant_one and complement_indicator.
    double support_radius() const noexcept;
    bool bounded_support() const noexcept;

    /// Radii carrying a nonzero jump, increasing.
    std::vector<double> jump_radii() const;
    /// Radii where the profile is not smooth (jumps and kinks), increasing.
    std::vector<double> break_radii() const;

    double lower_bound() const noexcept { return lo_; }
    double upper_bound() const noexcept { return hi_; }
    bool nonnegative() const noexcept { return lo_ >= 0.0; }
    bool identically_zero() const noexcept { return lo_ == 0.0 && hi_ == 0.0; }

    /// Value at r, taking the right limit at a jump.
    double value(double r) const;

    std::string describe() const;

private:
    RadialBVDatum(DatumKind kind, double radius) : kind_(kind), radius_(radius) {}

    DatumKind kind_;
    double radius_ = 0.0;
    std::vector<Breakpoint> points_;
    double lo_ = 0.0;
    double hi_ = 1.0;
};

/// |Du|(M) for radial data, in closed form: sigma * (sum over jumps of
/// |jump| A(r_jump) + integral of |u'| A).
double exact_total_variation(const RadialBVDatum& d, const RadialManifold& m);

}  // namespace heatlab
