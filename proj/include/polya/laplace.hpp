#ifndef POLYA_LAPLACE_HPP
#define POLYA_LAPLACE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "quad.hpp"
#include "rng.hpp"
#include "series.hpp"
#include "specfun.hpp"

namespace polya::laplace {

// L_p[x^lambda prod_j I_{nu_j}(a_j x)] = int_0^inf e^(-p x) x^lambda prod_j I_{nu_j}(a_j x) dx.
struct laplace_spec
{
    double lambda = 0;
    std::vector<double> nu;
    std::vector<double> a;
    double p = 1;

    int dimension() const noexcept { return static_cast<int>(nu.size()); }
    double order_sum() const { return std::accumulate(nu.begin(), nu.end(), 0.0); }
    double scale_sum() const { return std::accumulate(a.begin(), a.end(), 0.0); }
    bool on_boundary() const { return std::fabs(p - scale_sum()) <= 1e-12 * p; }
};

enum class constraint
{
    order_bound,       // nu_j > -1
    exponent_bound,    // lambda + sum nu_j > -1
    convergence_bound, // p > sum a_j, or p = sum a_j with lambda < d/2 - 1
    boundary_case      // p = sum a_j handed to the quadrature side
};

inline const char* constraint_name(constraint c) noexcept
{
    switch (c) {
    case constraint::order_bound: return "order bound";
    case constraint::exponent_bound: return "exponent bound";
    case constraint::convergence_bound: return "convergence bound";
    case constraint::boundary_case: return "boundary case";
    }
    return "?";
}

class constraint_error : public domain_error
{
public:
    constraint_error(constraint which, const std::string& detail)
        : domain_error(std::string(constraint_name(which)) + " violated: " + detail), which_(which)
    {
    }

    constraint which() const noexcept { return which_; }

private:
    constraint which_;
};

inline void validate(const laplace_spec& s)
{
    if (s.nu.empty())
        throw argument_error("laplace_spec: at least one Bessel factor is required");
    if (s.nu.size() != s.a.size())
        throw argument_error("laplace_spec: nu and a must have the same length");
    if (!std::isfinite(s.lambda) || !std::isfinite(s.p))
        throw argument_error("laplace_spec: lambda and p must be finite");
    for (std::size_t j = 0; j < s.nu.size(); ++j) {
        if (!(s.nu[j] > -1))
            throw constraint_error(constraint::order_bound,
                                   "nu_" + std::to_string(j + 1) + " = " + std::to_string(s.nu[j])
                                       + " must exceed -1");
        if (!(s.a[j] >= 0) || !std::isfinite(s.a[j]))
            throw argument_error("laplace_spec: scale factors a_j must be nonnegative");
        if (s.a[j] == 0 && s.nu[j] < 0)
            throw constraint_error(constraint::order_bound,
                                   "a zero scale factor needs a nonnegative order");
    }
    if (!(s.lambda + s.order_sum() > -1))
        throw constraint_error(constraint::exponent_bound, "lambda + sum nu_j must exceed -1");
    if (!(s.p > 0))
        throw constraint_error(constraint::convergence_bound, "p must be positive");
    const double sum_a = s.scale_sum();
    if (s.on_boundary()) {
        if (!(s.lambda < 0.5 * s.dimension() - 1))
            throw constraint_error(constraint::convergence_bound,
                                   "at p = sum a_j the transform needs lambda < d/2 - 1");
    } else if (!(s.p > sum_a)) {
        throw constraint_error(constraint::convergence_bound, "p must be at least sum a_j");
    }
}

namespace detail {

// A factor I_nu(0) with nu > 0 is zero, and so is the whole transform.
inline bool vanishes(const laplace_spec& s)
{
    for (std::size_t j = 0; j < s.nu.size(); ++j)
        if (s.a[j] == 0 && s.nu[j] > 0)
            return true;
    return false;
}

} // namespace detail

// Gamma(lambda+nu+1) / (2^nu p^(lambda+nu+1)) prod_j a_j^nu_j / Gamma(nu_j+1)
//   * F_C((lambda+nu+1)/2, (lambda+nu)/2 + 1; nu_1+1, ..., nu_d+1; a_1^2/p^2, ..., a_d^2/p^2)
// with nu = sum_j nu_j.
inline double laplace_rhs(const laplace_spec& s, const series::series_config& cfg = {})
{
    validate(s);
    if (detail::vanishes(s))
        return 0;
    const double nu = s.order_sum();
    const double g = s.lambda + nu;
    double log_pref = specfun::log_gamma(g + 1) - nu * std::log(2.0) - (g + 1) * std::log(s.p);
    series::lauricella_params fc;
    fc.a = 0.5 * (g + 1);
    fc.b = 0.5 * g + 1;
    for (std::size_t j = 0; j < s.nu.size(); ++j) {
        if (s.a[j] > 0)
            log_pref += s.nu[j] * std::log(s.a[j]);
        log_pref -= specfun::log_gamma(s.nu[j] + 1);
        fc.c.push_back(s.nu[j] + 1);
        fc.x.push_back(s.a[j] * s.a[j] / (s.p * s.p));
    }
    return std::exp(log_pref) * series::lauricella_fc(fc, cfg).value;
}

namespace detail {

// Split point from which the truncated large-argument expansions of all the
// scaled Bessel factors are accurate to about 1e-14.
inline double asymptotic_split_point(const laplace_spec& s, int tail_terms)
{
    double m = 0;
    for (std::size_t j = 0; j < s.nu.size(); ++j) {
        if (s.a[j] == 0)
            continue;
        const auto c = specfun::scaled_bessel_asymptotic_coefficients(s.nu[j], tail_terms + 1);
        const double next = std::fabs(c.back());
        double y = 30;
        if (next > 0)
            y = std::max(y, std::pow(next / 1e-14, 1.0 / (tail_terms + 1)));
        m = std::max(m, y / s.a[j]);
    }
    return m;
}

} // namespace detail

// Direct quadrature of the defining integral, using
// e^(-p x) prod I_nu_j(a_j x) = e^(-(p - sum a_j) x) prod e^(-a_j x) I_nu_j(a_j x).
inline quad::quadrature_result laplace_lhs(const laplace_spec& s, const quad::quadrature_config& cfg = {})
{
    validate(s);
    cfg.validate();
    if (s.on_boundary())
        throw constraint_error(constraint::boundary_case,
                               "p = sum a_j decays only algebraically; use laplace_rhs");
    if (detail::vanishes(s))
        return {};

    quad::detail::bessel_product f;
    f.lambda = s.lambda;
    f.nu = s.nu;
    f.a = s.a;
    f.s = s.p - s.scale_sum();

    if (cfg.split_point)
        return quad::detail::integrate_bessel_product(f, *cfg.split_point, cfg);
    // Past x = 60/s the factor e^(-s x) leaves nothing to resolve.
    const double m_exp = 60 / f.s;
    const double m_asym = detail::asymptotic_split_point(s, cfg.tail_terms);
    if (f.active() == 0 || m_asym <= m_exp)
        return quad::detail::integrate_bessel_product(f, std::max(m_asym, 1.0), cfg);
    return quad::detail::integrate_bessel_product(f, m_exp, cfg, true);
}

struct lemma_check
{
    laplace_spec spec;
    double lhs = 0;
    double rhs = 0;
    double rel_diff = 0;
};

struct lemma_report
{
    std::vector<lemma_check> checks; // ordered by spec index
    double max_rel_diff = 0;
    double mean_rel_diff = 0;
    std::size_t worst_index = 0;
};

// Random spec number `index` of the property suite for `seed`: d in 1..4,
// nu_j in (-0.9, 3), lambda in (-0.5, 3), a_j in (0.05, 1), p = sum a_j * U(1.1, 3).
// Draws with lambda + sum nu_j <= -1 are rejected and redrawn from the same stream.
inline laplace_spec random_spec(std::uint64_t seed, std::uint64_t index)
{
    rng::philox_stream gen(rng::mix64(seed), index);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * gen.uniform(); };
    for (;;) {
        laplace_spec s;
        const int d = 1 + static_cast<int>(gen.uniform() * 4);
        for (int j = 0; j < d; ++j) {
            s.nu.push_back(uniform(-0.9, 3));
            s.a.push_back(uniform(0.05, 1));
        }
        s.lambda = uniform(-0.5, 3);
        s.p = s.scale_sum() * uniform(1.1, 3);
        if (s.lambda + s.order_sum() > -1)
            return s;
    }
}

// Compares laplace_lhs and laplace_rhs on spec_count random specs. Specs are
// independent streams, so the report does not depend on the worker count.
inline lemma_report verify_lemma1(std::uint64_t spec_count, std::uint64_t seed, unsigned workers = 1)
{
    if (spec_count == 0)
        throw argument_error("verify_lemma1: spec_count must be positive");
    std::vector<lemma_check> checks(spec_count);
    auto run = [&](std::uint64_t i) {
        auto& c = checks[i];
        c.spec = random_spec(seed, i);
        c.lhs = laplace_lhs(c.spec).value;
        c.rhs = laplace_rhs(c.spec);
        c.rel_diff = std::fabs(c.lhs - c.rhs) / std::fabs(c.rhs);
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(spec_count)));
    if (workers == 1) {
        for (std::uint64_t i = 0; i < spec_count; ++i)
            run(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t i = w; i < spec_count; i += workers)
                    run(i);
            });
        for (auto& t : pool)
            t.join();
    }

    lemma_report r;
    compensated_sum total;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        total += checks[i].rel_diff;
        if (checks[i].rel_diff > r.max_rel_diff) {
            r.max_rel_diff = checks[i].rel_diff;
            r.worst_index = i;
        }
    }
    r.mean_rel_diff = total.value() / static_cast<double>(checks.size());
    r.checks = std::move(checks);
    return r;
}

} // namespace polya::laplace

#endif
