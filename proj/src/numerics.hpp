#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace heatlab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(DBL_MAX); anything whose log exceeds this cannot be returned as a double.
inline const double kLogMaxDouble = std::log(std::numeric_limits<double>::max());

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Streaming log-sum-exp accumulator: value() = log(sum exp(x_k)).
class LogSumExp {
public:
    void add(double log_term) noexcept
    {
        if (log_term == kNegInf)
            return;
        if (log_term <= max_) {
            acc_.add(std::exp(log_term - max_));
        } else {
            const double rescale = (max_ == kNegInf) ? 0.0 : std::exp(max_ - log_term);
            const double prev = acc_.value() * rescale;
            acc_ = CompensatedSum{};
            acc_.add(prev);
            acc_.add(1.0);
            max_ = log_term;
        }
    }
    double value() const noexcept
    {
        if (max_ == kNegInf)
            return kNegInf;
        return max_ + std::log(acc_.value());
    }

private:
    double max_ = kNegInf;
    CompensatedSum acc_;
};

inline double log_sum_exp(std::span<const double> terms) noexcept
{
    LogSumExp acc;
    for (double x : terms)
        acc.add(x);
    return acc.value();
}

// exp with an explicit overflow check; returns false when the result is not representable.
inline bool checked_exp(double log_value, double& out) noexcept
{
    if (std::isnan(log_value) || log_value > kLogMaxDouble)
        return false;
    out = std::exp(log_value);
    return std::isfinite(out);
}

}  // namespace heatlab
