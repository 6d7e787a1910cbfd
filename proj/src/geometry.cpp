#include "geometry.hpp"

#include "errors.hpp"
#include "numerics.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace heatlab {

const char* family_name(Family f) noexcept
{
    switch (f) {
    case Family::euclidean: return "euclidean";
    case Family::power_exp_weight: return "power_exp_weight";
    case Family::warped_cone: return "warped_cone";
    case Family::custom: return "custom";
    }
    return "unknown";
}

const char* datum_kind_name(DatumKind k) noexcept
{
    switch (k) {
    case DatumKind::ball_indicator: return "ball_indicator";
    case DatumKind::complement_indicator: return "complement_indicator";
    case DatumKind::piecewise: return "piecewise";
    case DatumKind::constant_one: return "constant_one";
    }
    return "unknown";
}

RadialManifold::RadialManifold(Family family, int dimension) : family_(family), dimension_(dimension)
{
    if (dimension < 2)
        throw InvalidArgument("manifold dimension must be >= 2, got " + std::to_string(dimension));
    const double half_n = 0.5 * dimension;
    log_sigma_ = std::log(2.0) + half_n * std::log(std::numbers::pi) - std::lgamma(half_n);
    sigma_ = std::exp(log_sigma_);
}

RadialManifold RadialManifold::euclidean(int dimension)
{
    return RadialManifold(Family::euclidean, dimension);
}

RadialManifold RadialManifold::power_exp(int dimension, double p, int sign)
{
    if (!(p > 0.0) || !std::isfinite(p))
        throw InvalidArgument("power_exp_weight exponent must be positive and finite");
    if (sign != 1 && sign != -1)
        throw InvalidArgument("power_exp_weight sign must be +1 or -1");
    RadialManifold m(Family::power_exp_weight, dimension);
    m.p_ = p;
    m.sign_ = sign;
    return m;
}

RadialManifold RadialManifold::warped_cone(int dimension, double p)
{
    if (!(p > 0.0) || !std::isfinite(p))
        throw InvalidArgument("warped_cone exponent must be positive and finite");
    RadialManifold m(Family::warped_cone, dimension);
    m.p_ = p;
    return m;
}

RadialManifold RadialManifold::custom(int dimension, std::vector<double> radii,
                                      std::vector<double> log_excess)
{
    if (radii.size() != log_excess.size() || radii.size() < 2)
        throw InvalidArgument("custom table needs at least two (r, g) rows of equal length");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!std::isfinite(radii[i]) || !std::isfinite(log_excess[i]) || radii[i] < 0.0)
            throw InvalidArgument("custom table entries must be finite with r >= 0");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw InvalidArgument("custom table radii must be strictly increasing");
    }
    RadialManifold m(Family::custom, dimension);
    m.table_r_ = std::move(radii);
    m.table_g_ = std::move(log_excess);

    // Fritsch-Carlson monotone slopes.
    const std::size_t n = m.table_r_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = m.table_r_[i + 1] - m.table_r_[i];
        delta[i] = (m.table_g_[i + 1] - m.table_g_[i]) / h[i];
    }
    std::vector<double>& d = m.table_slope_;
    d.assign(n, 0.0);
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    return m;
}

double RadialManifold::log_excess(double r) const
{
    const auto& x = table_r_;
    if (r <= x.front())
        return table_g_.front();
    if (r >= x.back())
        return table_g_.back();
    const auto it = std::upper_bound(x.begin(), x.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double h = x[i + 1] - x[i];
    const double s = (r - x[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * table_g_[i] + h10 * h * table_slope_[i] + h01 * table_g_[i + 1]
           + h11 * h * table_slope_[i + 1];
}

double RadialManifold::log_area(double r) const
{
    if (!std::isfinite(r) || r < 0.0) {
        std::ostringstream os;
        os << "log_area: radius must be finite and >= 0, got " << r;
        throw InvalidArgument(os.str());
    }
    if (r == 0.0)
        return kNegInf;
    const double k = dimension_ - 1;
    switch (family_) {
    case Family::euclidean:
        return k * std::log(r);
    case Family::power_exp_weight:
        return k * std::log(r) + sign_ * std::pow(r, p_);
    case Family::warped_cone: {
        const double log_psi = std::log(r) + 0.5 * std::pow(r, p_);
        return k * log_psi;
    }
    case Family::custom:
        return k * std::log(r) + log_excess(r);
    }
    return kNegInf;
}

std::string RadialManifold::describe() const
{
    std::ostringstream os;
    os << family_name(family_) << "(n=" << dimension_;
    if (family_ == Family::power_exp_weight)
        os << ", p=" << p_ << ", sign=" << sign_;
    if (family_ == Family::warped_cone)
        os << ", p=" << p_;
    if (family_ == Family::custom)
        os << ", rows=" << table_r_.size();
    os << ")";
    return os.str();
}

double perimeter_ball(const RadialManifold& m, double r)
{
    const double la = m.log_area(r);
    if (la == kNegInf)
        return 0.0;
    // sigma * exp(log A) literally, so the identity with log_area is exact;
    // the log-space route only matters when exp(log A) alone overflows.
    double out = m.sphere_constant() * std::exp(la);
    if (!std::isfinite(out) && !checked_exp(m.log_sphere_constant() + la, out)) {
        std::ostringstream os;
        os << "perimeter_ball overflows at r=" << r << " (log value " << m.log_sphere_constant() + la
           << ")";
        throw RangeError(os.str());
    }
    return out;
}

namespace {

double log_gauss(const RadialManifold& m, double a, double b)
{
    const auto& rule = gauss_legendre();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double log_half = std::log(half);
    LogSumExp acc;
    for (int k = 0; k < GaussRule::kPoints; ++k) {
        const double s = mid + half * rule.nodes[k];
        acc.add(std::log(rule.weights[k]) + log_half + m.log_area(s));
    }
    return acc.value();
}

double log_add(double x, double y)
{
    if (x == kNegInf)
        return y;
    if (y == kNegInf)
        return x;
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

double log_adaptive(const RadialManifold& m, double a, double b, double whole, int depth)
{
    const double mid = 0.5 * (a + b);
    const double left = log_gauss(m, a, mid);
    const double right = log_gauss(m, mid, b);
    const double both = log_add(left, right);
    if (both == kNegInf && whole == kNegInf)
        return both;
    const double tol = std::max(1e-14, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(both));
    if (depth >= 40 || std::abs(both - whole) <= tol)
        return both;
    return log_add(log_adaptive(m, a, mid, left, depth + 1),
                   log_adaptive(m, mid, b, right, depth + 1));
}

}  // namespace

double log_shell_measure(const RadialManifold& m, double a, double b)
{
    if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < a)
        throw InvalidArgument("log_shell_measure: need finite 0 <= a <= b");
    if (a == b)
        return kNegInf;
    return m.log_sphere_constant() + log_adaptive(m, a, b, log_gauss(m, a, b), 0);
}

double log_ball_volume(const RadialManifold& m, double r)
{
    if (!std::isfinite(r) || r < 0.0)
        throw InvalidArgument("ball_volume: radius must be finite and >= 0");
    return log_shell_measure(m, 0.0, r);
}

double ball_volume(const RadialManifold& m, double r)
{
    const double lv = log_ball_volume(m, r);
    if (lv == kNegInf)
        return 0.0;
    double out = 0.0;
    if (!checked_exp(lv, out)) {
        std::ostringstream os;
        os << "ball_volume overflows at r=" << r << " (log value " << lv << ")";
        throw RangeError(os.str());
    }
    return out;
}

double max_representable_radius(const RadialManifold& m, double hi)
{
    auto fits = [&](double r) {
        return m.log_sphere_constant() + m.log_area(r) < kLogMaxDouble
               && log_ball_volume(m, r) < kLogMaxDouble;
    };
    if (fits(hi))
        return hi;
    double lo = 0.0;
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fits(mid) ? lo : hi) = mid;
    }
    return lo;
}

// ---------------------------------------------------------------------------

RadialBVDatum RadialBVDatum::ball_indicator(double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw InvalidArgument("ball_indicator radius must be positive and finite");
    RadialBVDatum d(DatumKind::ball_indicator, radius);
    d.lo_ = 0.0;
    d.hi_ = 1.0;
    return d;
}

RadialBVDatum RadialBVDatum::complement_indicator(double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw InvalidArgument("complement_indicator radius must be positive and finite");
    RadialBVDatum d(DatumKind::complement_indicator, radius);
    d.lo_ = 0.0;
    d.hi_ = 1.0;
    return d;
}

RadialBVDatum RadialBVDatum::constant_one()
{
    RadialBVDatum d(DatumKind::constant_one, 0.0);
    d.lo_ = 1.0;
    d.hi_ = 1.0;
    return d;
}

RadialBVDatum RadialBVDatum::piecewise(std::vector<Breakpoint> points)
{
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].r) || !std::isfinite(points[i].value) || points[i].r < 0.0)
            throw InvalidArgument("piecewise breakpoints must be finite with r >= 0");
        if (i > 0 && points[i].r < points[i - 1].r)
            throw InvalidArgument("piecewise breakpoints must be sorted by radius");
        if (i > 1 && points[i].r == points[i - 1].r && points[i].r == points[i - 2].r)
            throw InvalidArgument("at most two breakpoints may share a radius");
    }
    if (points.size() >= 2 && points[0].r == 0.0 && points[1].r == 0.0)
        throw InvalidArgument("a jump at r = 0 is not allowed");
    RadialBVDatum d(DatumKind::piecewise, 0.0);
    d.lo_ = 0.0;
    d.hi_ = 0.0;
    for (const auto& p : points) {
        d.lo_ = std::min(d.lo_, p.value);
        d.hi_ = std::max(d.hi_, p.value);
    }
    d.points_ = std::move(points);
    return d;
}

double RadialBVDatum::support_radius() const noexcept
{
    switch (kind_) {
    case DatumKind::ball_indicator: return radius_;
    case DatumKind::complement_indicator:
    case DatumKind::constant_one: return std::numeric_limits<double>::infinity();
    case DatumKind::piecewise: {
        for (auto it = points_.rbegin(); it != points_.rend(); ++it)
            if (it->value != 0.0)
                return it->r;
        return 0.0;
    }
    }
    return 0.0;
}

bool RadialBVDatum::bounded_support() const noexcept
{
    return std::isfinite(support_radius());
}

std::vector<double> RadialBVDatum::jump_radii() const
{
    std::vector<double> out;
    switch (kind_) {
    case DatumKind::ball_indicator:
    case DatumKind::complement_indicator:
        out.push_back(radius_);
        break;
    case DatumKind::constant_one:
        break;
    case DatumKind::piecewise:
        for (std::size_t i = 0; i + 1 < points_.size(); ++i)
            if (points_[i].r == points_[i + 1].r && points_[i].value != points_[i + 1].value)
                out.push_back(points_[i].r);
        if (!points_.empty() && points_.back().value != 0.0)
            out.push_back(points_.back().r);
        break;
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> RadialBVDatum::break_radii() const
{
    if (kind_ != DatumKind::piecewise)
        return jump_radii();
    std::vector<double> out;
    for (const auto& p : points_)
        if (p.r > 0.0)
            out.push_back(p.r);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double RadialBVDatum::value(double r) const
{
    switch (kind_) {
    case DatumKind::ball_indicator: return r < radius_ ? 1.0 : 0.0;
    case DatumKind::complement_indicator: return r < radius_ ? 0.0 : 1.0;
    case DatumKind::constant_one: return 1.0;
    case DatumKind::piecewise: break;
    }
    if (points_.empty())
        return 0.0;
    if (r < points_.front().r)
        return points_.front().value;
    if (r >= points_.back().r)
        return 0.0;
    // Last breakpoint with radius <= r, so a jump resolves to its right value.
    auto it = std::upper_bound(points_.begin(), points_.end(), r,
                               [](double x, const Breakpoint& p) { return x < p.r; });
    const Breakpoint& right = *it;
    const Breakpoint& left = *(it - 1);
    const double w = (r - left.r) / (right.r - left.r);
    return left.value + w * (right.value - left.value);
}

std::string RadialBVDatum::describe() const
{
    std::ostringstream os;
    os << datum_kind_name(kind_);
    if (kind_ == DatumKind::ball_indicator || kind_ == DatumKind::complement_indicator)
        os << "(r0=" << radius_ << ")";
    if (kind_ == DatumKind::piecewise)
        os << "(" << points_.size() << " breakpoints)";
    return os.str();
}

double exact_total_variation(const RadialBVDatum& d, const RadialManifold& m)
{
    switch (d.kind()) {
    case DatumKind::ball_indicator:
    case DatumKind::complement_indicator:
        return perimeter_ball(m, d.radius());
    case DatumKind::constant_one:
        return 0.0;
    case DatumKind::piecewise:
        break;
    }
    const auto& pts = d.breakpoints();
    CompensatedSum tv;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double dv = pts[i + 1].value - pts[i].value;
        if (dv == 0.0)
            continue;
        if (pts[i + 1].r == pts[i].r) {
            tv.add(std::abs(dv) * perimeter_ball(m, pts[i].r));
        } else {
            const double slope = std::abs(dv) / (pts[i + 1].r - pts[i].r);
            double shell = 0.0;
            if (!checked_exp(std::log(slope) + log_shell_measure(m, pts[i].r, pts[i + 1].r), shell))
                throw RangeError("exact_total_variation overflows on a linear segment");
            tv.add(shell);
        }
    }
    if (!pts.empty() && pts.back().value != 0.0)
        tv.add(std::abs(pts.back().value) * perimeter_ball(m, pts.back().r));
    return tv.value();
}

}  // namespace heatlab
