#ifndef POLYA_SPECFUN_HPP
#define POLYA_SPECFUN_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "summation.hpp"

namespace polya::specfun {

// Order of a modified Bessel function of the first kind. Only real orders
// above -1 are representable.
class bessel_order
{
public:
    explicit bessel_order(double nu) : nu_(nu)
    {
        if (!(nu > -1))
            throw domain_error("Bessel order must satisfy nu > -1");
    }

    double value() const noexcept { return nu_; }

private:
    double nu_;
};

enum class scaling
{
    none,        // I_nu(x)
    exponential  // exp(-x) I_nu(x)
};

namespace detail {

// Lanczos approximation N=13, g=6.0246800407767295837 (double precision set
// published with Boost.Math). Rational form sum(num[i] z^i) / sum(den[i] z^i),
// scaled by exp(g).
inline double lanczos_sum_expg_scaled(double z) noexcept
{
    static constexpr std::array<double, 13> num = {
        56906521.91347156388090791033559122686859,
        103794043.1163445451906271053616070238554,
        86363131.28813859145546927288977868422342,
        43338889.32467613834773723740590533316085,
        14605578.08768506808414169982791359218571,
        3481712.15498064590882071018964774556468,
        601859.6171681098786670226533699352302507,
        75999.29304014542649875303443598909137092,
        6955.999602515376140356310115515198987526,
        449.9445569063168119446858607650988409623,
        19.51992788247617482847860966235652136208,
        0.5098416655656676188125178644804694509993,
        0.006061842346248906525783753964555936883222,
    };
    static constexpr std::array<double, 13> den = {
        0.0,       39916800.0, 120543840.0, 150917976.0, 105258076.0, 45995730.0, 13339535.0,
        2637558.0, 357423.0,   32670.0,     1925.0,      66.0,        1.0,
    };
    double n = 0, d = 0;
    if (z <= 1) {
        for (int i = 12; i >= 0; --i) {
            n = n * z + num[i];
            d = d * z + den[i];
        }
    } else {
        const double w = 1 / z;
        for (int i = 0; i <= 12; ++i) {
            n = n * w + num[i];
            d = d * w + den[i];
        }
    }
    return n / d;
}

inline constexpr double lanczos_g = 6.024680040776729583740234375;

} // namespace detail

inline double log_gamma(double x)
{
    if (!(x > 0))
        throw domain_error("log_gamma requires x > 0");
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1 - x);
    }
    if (x == 1 || x == 2)
        return 0;
    const double zgh = x + detail::lanczos_g - 0.5;
    return (x - 0.5) * (std::log(zgh) - 1) + std::log(detail::lanczos_sum_expg_scaled(x));
}

// log of the Pochhammer symbol (f)_k = Gamma(f+k)/Gamma(f) for f > 0.
inline double log_pochhammer(double f, std::uint64_t k)
{
    if (!(f > 0))
        throw domain_error("log_pochhammer requires f > 0");
    if (k == 0)
        return 0;
    if (k <= 32) {
        compensated_sum s;
        for (std::uint64_t j = 0; j < k; ++j)
            s += std::log(f + static_cast<double>(j));
        return s.value();
    }
    return log_gamma(f + static_cast<double>(k)) - log_gamma(f);
}

// (f)_k on the linear scale. Any real f; positive f beyond 32 factors goes
// through log space.
inline double pochhammer(double f, std::uint64_t k)
{
    if (k == 0)
        return 1;
    double r;
    if (k <= 32 || !(f > 0)) {
        r = 1;
        for (std::uint64_t j = 0; j < k; ++j)
            r *= f + static_cast<double>(j);
    } else {
        r = std::exp(log_pochhammer(f, k));
    }
    if (!std::isfinite(r))
        throw overflow_error("pochhammer: result exceeds the double range; use log_pochhammer");
    return r;
}

// Coefficients c_k of exp(-y) I_nu(y) ~ (2 pi y)^(-1/2) sum_k c_k y^(-k).
inline std::vector<double> scaled_bessel_asymptotic_coefficients(double nu, int terms)
{
    std::vector<double> c(static_cast<std::size_t>(terms) + 1);
    c[0] = 1;
    const double mu = 4 * nu * nu;
    for (int k = 1; k <= terms; ++k) {
        const double odd = 2.0 * k - 1;
        c[k] = c[k - 1] * (odd * odd - mu) / (8.0 * k);
    }
    return c;
}

namespace detail {

inline constexpr double bessel_series_limit = 30;

// sum_k (x^2/4)^k / (k! Gamma(nu+k+1)) * Gamma(nu+1), i.e. the power series
// with its leading term normalised to one.
inline double bessel_series_normalised(double nu, double x) noexcept
{
    const double q = 0.25 * x * x;
    compensated_sum s(1.0);
    double term = 1;
    for (int k = 1; k < 500; ++k) {
        term *= q / (k * (nu + k));
        s += term;
        if (term < 1e-17 * s.value())
            break;
    }
    return s.value();
}

// sum_k c_k x^(-k) truncated at the smallest term or at full precision.
inline double bessel_asymptotic_sum(double nu, double x) noexcept
{
    const double mu = 4 * nu * nu;
    compensated_sum s(1.0);
    double term = 1;
    for (int k = 1; k < 120; ++k) {
        const double odd = 2.0 * k - 1;
        const double next = term * (odd * odd - mu) / (8.0 * k * x);
        if (std::fabs(next) > std::fabs(term))
            break;
        term = next;
        s += term;
        if (std::fabs(term) < 1e-17 * std::fabs(s.value()))
            break;
    }
    return s.value();
}

// (x/2)^(-nu) I_nu(x): entire in x, finite at the origin.
inline double bessel_i_regularised(double nu, double x)
{
    if (x <= bessel_series_limit)
        return bessel_series_normalised(nu, x) * std::exp(-log_gamma(nu + 1));
    return std::exp(x - nu * std::log(0.5 * x) - 0.5 * std::log(2 * std::numbers::pi * x))
           * bessel_asymptotic_sum(nu, x);
}

} // namespace detail

// Modified Bessel function of the first kind. The power series is used up to
// x = 30 and the large-argument expansion beyond.
inline double bessel_i(bessel_order order, double x, scaling mode = scaling::none)
{
    const double nu = order.value();
    if (!(x >= 0))
        throw domain_error("bessel_i requires x >= 0");
    if (x == 0) {
        if (nu == 0)
            return 1;
        return nu > 0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    const bool scaled = mode == scaling::exponential;
    if (x <= detail::bessel_series_limit) {
        const double log_prefix = nu * std::log(0.5 * x) - log_gamma(nu + 1) - (scaled ? x : 0.0);
        return std::exp(log_prefix) * detail::bessel_series_normalised(nu, x);
    }
    const double s = detail::bessel_asymptotic_sum(nu, x);
    if (scaled)
        return s / std::sqrt(2 * std::numbers::pi * x);
    return std::exp(x - 0.5 * std::log(2 * std::numbers::pi * x)) * s;
}

inline double bessel_i(double nu, double x, scaling mode = scaling::none)
{
    return bessel_i(bessel_order(nu), x, mode);
}

// sqrt(6)/(32 pi^3) Gamma(1/24) Gamma(5/24) Gamma(7/24) Gamma(11/24): the
// expected number of visits to the origin of the walk on Z^3.
inline double gamma_product_u3()
{
    const double lg = log_gamma(1.0 / 24) + log_gamma(5.0 / 24) + log_gamma(7.0 / 24)
                      + log_gamma(11.0 / 24);
    return std::sqrt(6.0) / (32 * std::numbers::pi * std::numbers::pi * std::numbers::pi)
           * std::exp(lg);
}

namespace detail {

inline double exponential_integral_e1(double z)
{
    if (z <= 1.5) {
        compensated_sum s(-std::numbers::egamma - std::log(z));
        double t = 1;
        for (int k = 1; k < 200; ++k) {
            t *= -z / k;
            s += -t / k;
            if (std::fabs(t) < 1e-18)
                break;
        }
        return s.value();
    }
    // Continued fraction for Gamma(0, z).
    constexpr double tiny = 1e-300;
    double b = z + 1, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1) < 1e-16)
            break;
    }
    return std::exp(-z) * h;
}

inline double upper_gamma_continued_fraction(double a, double z)
{
    constexpr double tiny = 1e-300;
    double b = z + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i < 5000; ++i) {
        const double an = -i * (i - a);
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1) < 1e-16)
            break;
    }
    return std::exp(-z + a * std::log(z)) * h;
}

// Gamma(a) - gamma(a, z) with gamma from its power series; a > 0.
inline double upper_gamma_series(double a, double z)
{
    double ap = a, del = 1 / a;
    compensated_sum s(del);
    for (int n = 0; n < 5000; ++n) {
        ap += 1;
        del *= z / ap;
        s += del;
        if (std::fabs(del) < std::fabs(s.value()) * 1e-17)
            break;
    }
    const double lower = s.value() * std::exp(-z + a * std::log(z));
    return std::exp(log_gamma(a)) - lower;
}

} // namespace detail

// Upper incomplete gamma function Gamma(a, z) = int_z^inf t^(a-1) e^(-t) dt
// for real a and z > 0.
inline double upper_incomplete_gamma(double a, double z)
{
    if (!(z > 0))
        throw domain_error("upper_incomplete_gamma requires z > 0");
    if (a > 0) {
        if (z < a + 1)
            return detail::upper_gamma_series(a, z);
        return detail::upper_gamma_continued_fraction(a, z);
    }
    if (z >= 1.5)
        return detail::upper_gamma_continued_fraction(a, z);
    // Downward recurrence Gamma(a, z) = (Gamma(a+1, z) - z^a e^(-z)) / a from
    // a base order in (0, 1), or from Gamma(0, z) = E1(z) for integer a.
    const double shift = std::ceil(-a);
    double base = a + shift;
    double g;
    if (base == 0) {
        g = detail::exponential_integral_e1(z);
    } else {
        g = detail::upper_gamma_series(base, z);
    }
    for (double s = base - 1; s >= a - 1e-12; s -= 1)
        g = (g - std::exp(s * std::log(z) - z)) / s;
    return g;
}

// sum_{n >= q} exp(-eps n) n^sigma for integer q >= 1, eps >= 0; with eps = 0
// this is the Hurwitz zeta function zeta(-sigma, q) and needs sigma < -1.
inline double power_exp_sum(double sigma, double eps, double q)
{
    if (!(q >= 1))
        throw domain_error("power_exp_sum requires q >= 1");
    if (eps < 0 || (eps == 0 && !(sigma < -1)))
        throw domain_error("power_exp_sum diverges for these parameters");
    auto f = [&](double t) { return std::exp(-eps * t + sigma * std::log(t)); };
    const double n0 = std::max(q, std::ceil(2 * std::fabs(sigma)) + 40);
    compensated_sum s;
    for (double n = q; n < n0; n += 1)
        s += f(n);
    // Euler-Maclaurin from n0.
    if (eps > 0)
        s += std::exp(-(sigma + 1) * std::log(eps)) * upper_incomplete_gamma(sigma + 1, eps * n0);
    else
        s += std::exp((sigma + 1) * std::log(n0)) / (-sigma - 1);
    s += 0.5 * f(n0);
    static constexpr std::array<double, 5> bernoulli_over_factorial = {
        1.0 / 12, -1.0 / 720, 1.0 / 30240, -1.0 / 1209600, 1.0 / 47900160};
    for (int k = 1; k <= 5; ++k) {
        // m-th derivative of exp(-eps t) t^sigma, m = 2k-1.
        const int m = 2 * k - 1;
        double deriv = 0, binom = 1, falling = 1;
        for (int i = 0; i <= m; ++i) {
            if (i > 0) {
                binom = binom * (m - i + 1) / i;
                falling *= sigma - (i - 1);
            }
            const double eps_pow = m - i == 0 ? 1.0 : std::pow(-eps, m - i);
            deriv += binom * eps_pow * falling * std::exp(-eps * n0 + (sigma - i) * std::log(n0));
        }
        s += -bernoulli_over_factorial[k - 1] * deriv;
    }
    return s.value();
}

} // namespace polya::specfun

#endif
