#ifndef POLYA_QUAD_HPP
#define POLYA_QUAD_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "specfun.hpp"
#include "summation.hpp"

namespace polya::quad {

struct quadrature_config
{
    std::optional<double> split_point; // M; unset picks a default per problem
    int panels = 4000;                 // adaptive panel budget per segment
    double rel_tol = 1e-13;
    int tail_terms = 6;                // asymptotic correction terms in the tail, 0..6

    void validate() const
    {
        if (!(rel_tol > 0))
            throw argument_error("quadrature_config: rel_tol must be positive");
        if (split_point && !(*split_point > 0 && std::isfinite(*split_point)))
            throw argument_error("quadrature_config: split_point must be positive");
        if (panels < 1)
            throw argument_error("quadrature_config: panels must be at least 1");
        if (tail_terms < 0 || tail_terms > 6)
            throw argument_error("quadrature_config: tail_terms must lie in 0..6");
    }
};

struct quadrature_result
{
    double value = 0;
    double error_estimate = 0;
    double finite_part = 0;
    double tail_part = 0;
};

inline double default_split_point(int d) { return std::max(50.0, 10.0 * d); }

namespace detail {

// Integrand x^lambda e^(-s x) prod_j e^(-a_j x) I_{nu_j}(a_j x) on (0, inf).
// Entries with a_j = 0 must have nu_j = 0 (factor one) and are ignored.
struct bessel_product
{
    double lambda = 0;
    std::vector<double> nu;
    std::vector<double> a;
    double s = 0;

    double operator()(double x) const
    {
        double v = std::pow(x, lambda) * std::exp(-s * x);
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[j] > 0)
                v *= specfun::bessel_i(nu[j], a[j] * x, specfun::scaling::exponential);
        return v;
    }

    // Exponent of the small-x power law, lambda + sum of active orders.
    double origin_exponent() const
    {
        double g = lambda;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[j] > 0)
                g += nu[j];
        return g;
    }

    int active() const
    {
        return static_cast<int>(std::count_if(a.begin(), a.end(), [](double v) { return v > 0; }));
    }

    double a_max() const { return *std::max_element(a.begin(), a.end()); }

    double a_min_active() const
    {
        double m = std::numeric_limits<double>::infinity();
        for (double v : a)
            if (v > 0)
                m = std::min(m, v);
        return m;
    }
};

// int_M^inf x^alpha e^(-s x) dx, written M^(alpha+1) z^-(alpha+1) Gamma(alpha+1, z)
// with z = s M so that no factor over- or underflows separately.
inline double power_exp_tail(double alpha, double s, double M)
{
    const double b = alpha + 1;
    if (s == 0)
        return std::pow(M, b) / -b;
    const double z = s * M;
    const double g = specfun::upper_incomplete_gamma(b, z);
    if (g == 0)
        return 0;
    return std::exp(b * std::log(M) - b * std::log(z)) * g;
}

struct tail_terms_sum
{
    double value = 0;
    double first_omitted = 0;
};

// Term-by-term integral over [M, inf) of the large-x expansion
// prod_j (2 pi a_j x)^(-1/2) sum_k c_k(nu_j) (a_j x)^(-k), truncated at total
// order `terms`.
inline tail_terms_sum asymptotic_tail(const bessel_product& f, double M, int terms)
{
    const int order = terms + 1;
    std::vector<double> e(static_cast<std::size_t>(order) + 1, 0.0);
    e[0] = 1;
    double log_k = 0;
    for (std::size_t j = 0; j < f.a.size(); ++j) {
        if (f.a[j] <= 0)
            continue;
        auto c = specfun::scaled_bessel_asymptotic_coefficients(f.nu[j], order);
        for (int k = 1; k <= order; ++k)
            c[k] *= std::pow(f.a[j], -k);
        std::vector<double> next(e.size(), 0.0);
        for (int m = 0; m <= order; ++m)
            for (int k = 0; k <= m; ++k)
                next[m] += e[m - k] * c[k];
        e.swap(next);
        log_k -= 0.5 * std::log(2 * std::numbers::pi * f.a[j]);
    }
    const double beta = f.lambda - 0.5 * f.active();
    compensated_sum sum;
    for (int m = 0; m <= terms; ++m)
        sum += e[m] * power_exp_tail(beta - m, f.s, M);
    const double k = std::exp(log_k);
    return {k * sum.value(), k * std::fabs(e[order] * power_exp_tail(beta - order, f.s, M))};
}

// Integral of f over [0, x0] after x = x0 t^(1/(g+1)), g the small-x exponent,
// which turns the x^g behaviour at the origin into a smooth integrand in t.
// Needs a_j x0 <= 30 so the regularised Bessel series applies.
inline quadrature::adaptive_result head_integral(const bessel_product& f, double x0,
                                                 double rel_tol, int panels)
{
    const double g = f.origin_exponent();
    double log_pref = (g + 1) * std::log(x0) - std::log(g + 1);
    for (std::size_t j = 0; j < f.a.size(); ++j)
        if (f.a[j] > 0)
            log_pref += f.nu[j] * std::log(0.5 * f.a[j]);
    auto h = [&](double t) {
        const double x = x0 * std::pow(t, 1 / (g + 1));
        double v = std::exp(-f.s * x);
        for (std::size_t j = 0; j < f.a.size(); ++j)
            if (f.a[j] > 0) {
                const double y = f.a[j] * x;
                v *= std::exp(-y) * specfun::detail::bessel_i_regularised(f.nu[j], y);
            }
        return v;
    };
    auto r = quadrature::integrate_adaptive(h, 0.0, 1.0, rel_tol, 0.0, panels, 4);
    const double pref = std::exp(log_pref);
    return {pref * r.value, pref * r.error, r.panels};
}

// int_0^inf f(x) dx as head [0, x0] + middle [x0, M] + tail [M, inf). With
// tail_bound_only the tail is not added; a bound of its size is charged to the
// error instead (used when e^(-s x) has already extinguished it).
inline quadrature_result integrate_bessel_product(const bessel_product& f, double M,
                                                  const quadrature_config& cfg,
                                                  bool tail_bound_only = false)
{
    const double x0 = std::min({1.0, M, 30.0 / f.a_max()});
    const auto head = head_integral(f, x0, cfg.rel_tol, cfg.panels);

    tail_terms_sum tail;
    if (tail_bound_only)
        tail.first_omitted = f.s > 0 ? std::fabs(f(M)) / f.s : std::numeric_limits<double>::infinity();
    else
        tail = asymptotic_tail(f, M, cfg.tail_terms);

    const double scale = std::fabs(head.value) + std::fabs(tail.value);
    auto mid = quadrature::integrate_adaptive(f, x0, M, cfg.rel_tol, cfg.rel_tol * scale,
                                              cfg.panels, 16);

    quadrature_result out;
    compensated_sum finite;
    finite += head.value;
    finite += mid.value;
    out.finite_part = finite.value();
    out.tail_part = tail.value;
    out.value = out.finite_part + out.tail_part;
    // The omitted asymptotic term, doubled, stands in for the truncation error.
    out.error_estimate = head.error + mid.error + 2 * tail.first_omitted
                         + 1e-15 * std::fabs(out.value);
    return out;
}

} // namespace detail

// u(d) = int_0^inf [I_0(x/d)]^d e^(-x) dx, evaluated as int_0^inf [e^(-x/d) I_0(x/d)]^d dx:
// adaptive Gauss-Legendre on [0, M] and the term-wise integrated large-x
// expansion on [M, inf).
inline quadrature_result u_quadrature(int d, const quadrature_config& cfg = {})
{
    require_transient_dimension(d);
    cfg.validate();
    detail::bessel_product f;
    f.nu.assign(d, 0.0);
    f.a.assign(d, 1.0 / d);
    return detail::integrate_bessel_product(f, cfg.split_point.value_or(default_split_point(d)), cfg);
}

// [I_0(x/d)]^d e^(-x) via the scaled Bessel function.
inline double u_integrand(int d, double x)
{
    return std::pow(specfun::bessel_i(0.0, x / d, specfun::scaling::exponential), d);
}

struct lattice_config
{
    std::uint64_t samples = 10'000'000;
    bool normalize = true; // apply the d/(2 pi)^d prefactor

    void validate() const
    {
        if (samples < 1)
            throw argument_error("lattice_config: samples must be at least 1");
    }
};

struct lattice_result
{
    double value = 0;
    double error_estimate = 0; // |Q(N) - Q(N/2)|
    std::uint64_t samples = 0;
};

// 1/(d - sum_k cos x_k), with the denominator formed as sum_k 2 sin^2(x_k/2)
// to avoid cancellation near the origin.
inline double lattice_integrand(std::span<const double> x)
{
    double den = 0;
    for (double xk : x) {
        const double h = std::sin(0.5 * xk);
        den += 2 * h * h;
    }
    return 1 / den;
}

namespace detail {

// Generalised golden ratio: the positive root of x^(d+1) = x + 1.
inline double harmonious_ratio(int d)
{
    double x = 1.5;
    for (int it = 0; it < 60; ++it) {
        const double f = std::pow(x, d + 1) - x - 1;
        const double df = (d + 1) * std::pow(x, d) - 1;
        x -= f / df;
    }
    return x;
}

} // namespace detail

// Quasi-Monte-Carlo estimate of int_{(-pi,pi)^d} dx / (d - sum cos x_k), times
// d/(2 pi)^d when normalised. Symmetry folds the domain onto (0, pi)^d, and
// x_k = pi t_k^3 removes the |x|^-2 singularity at the origin (the transformed
// integrand is bounded for d >= 3). Points come from the additive recurrence
// t_n = frac(shift + n alpha), alpha_k = phi_d^-k, with a seed-derived shift.
inline lattice_result lattice_green_integral(int d, const lattice_config& cfg, std::uint64_t seed)
{
    require_transient_dimension(d);
    cfg.validate();

    const double phi = detail::harmonious_ratio(d);
    std::vector<double> alpha(d), shift(d), t(d), x(d);
    rng::philox_stream gen(rng::mix64(seed), static_cast<std::uint64_t>(d));
    for (int k = 0; k < d; ++k) {
        alpha[k] = std::fmod(std::pow(phi, -(k + 1)), 1.0);
        shift[k] = gen.uniform();
    }

    constexpr std::uint64_t block = 1u << 16;
    const std::uint64_t n = cfg.samples;
    const std::uint64_t half = n / 2;
    compensated_sum total;
    double half_total = 0;
    for (std::uint64_t start = 1; start <= n; start += block) {
        const std::uint64_t stop = std::min(n + 1, start + block);
        compensated_sum s;
        for (std::uint64_t i = start; i < stop; ++i) {
            double jac = 1;
            for (int k = 0; k < d; ++k) {
                const double v = shift[k] + static_cast<double>(i) * alpha[k];
                t[k] = v - std::floor(v);
                jac *= 3 * t[k] * t[k];
                x[k] = std::numbers::pi * t[k] * t[k] * t[k];
            }
            if (jac == 0)
                continue; // a point on a face through the origin
            s += jac * lattice_integrand(x);
            if (i == half)
                half_total = total.value() + s.value();
        }
        total += s.value();
    }

    // mean of the transformed integrand over (0,1)^d equals pi^-d int_{(0,pi)^d}.
    const double mean = total.value() / static_cast<double>(n);
    const double half_mean = half > 0 ? half_total / static_cast<double>(half) : mean;
    const double scale = cfg.normalize ? d : std::pow(2 * std::numbers::pi, d);
    return {scale * mean, scale * std::fabs(mean - half_mean), n};
}

} // namespace polya::quad

#endif
