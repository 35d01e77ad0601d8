#ifndef POLYA_SUMMATION_HPP
#define POLYA_SUMMATION_HPP

#include <cmath>
#include <limits>
#include <span>

namespace polya {

// Neumaier's variant of Kahan compensated summation.
class compensated_sum
{
public:
    compensated_sum() = default;
    explicit compensated_sum(double initial) : sum_(initial) {}

    compensated_sum& operator+=(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0;
    double comp_ = 0;
};

// A real number held as sign * exp(log_abs). Zero is log_abs = -inf.
struct signed_log
{
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static signed_log from_linear(double v) noexcept
    {
        if (v == 0)
            return {};
        return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
    }

    double to_linear() const noexcept { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
    bool is_zero() const noexcept { return sign == 0; }

    friend signed_log operator*(signed_log a, signed_log b) noexcept
    {
        if (a.sign == 0 || b.sign == 0)
            return {};
        return {a.log_abs + b.log_abs, a.sign * b.sign};
    }
};

// log(sum_i exp(v_i)) for plain (positive) log-space values; -inf for empty or all -inf.
inline double log_sum_exp(std::span<const double> v) noexcept
{
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v)
        m = x > m ? x : m;
    if (!std::isfinite(m))
        return m;
    compensated_sum s;
    for (double x : v)
        s += std::exp(x - m);
    return m + std::log(s.value());
}

// Signed log-sum-exp.
inline signed_log log_sum_exp(std::span<const signed_log> v) noexcept
{
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& x : v)
        if (x.sign != 0 && x.log_abs > m)
            m = x.log_abs;
    if (!std::isfinite(m))
        return {};
    compensated_sum s;
    for (const auto& x : v)
        if (x.sign != 0)
            s += x.sign * std::exp(x.log_abs - m);
    const double lin = s.value();
    if (lin == 0)
        return {};
    return {m + std::log(std::fabs(lin)), lin > 0 ? 1 : -1};
}

} // namespace polya

#endif
