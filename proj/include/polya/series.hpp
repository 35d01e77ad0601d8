#ifndef POLYA_SERIES_HPP
#define POLYA_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "specfun.hpp"
#include "summation.hpp"

namespace polya::series {

struct series_config
{
    double tolerance = 1e-10;     // target relative error
    std::uint64_t n_max = 200000; // hard cap on the total-degree index (0: leading term only)
    bool tail_model = true;       // add the extrapolated remainder

    void validate() const
    {
        if (!(tolerance > 0 && tolerance < 1))
            throw argument_error("series_config: tolerance must lie in (0, 1)");
    }
};

// c_d(n) = sum over k_1 + ... + k_d = n of prod_j 1/(k_j!)^2, in log space.
class multi_coeff_table
{
public:
    multi_coeff_table(int d, std::vector<double> log_coeffs)
        : d_(d), log_coeffs_(std::move(log_coeffs))
    {
    }

    int dimension() const noexcept { return d_; }
    std::size_t size() const noexcept { return log_coeffs_.size(); }
    double log_coeff(std::size_t n) const { return log_coeffs_.at(n); }
    double coeff(std::size_t n) const { return std::exp(log_coeffs_.at(n)); }
    const std::vector<double>& log_coeffs() const noexcept { return log_coeffs_; }

private:
    int d_;
    std::vector<double> log_coeffs_;
};

namespace detail {

// Incremental d-fold convolution of log-space weight sequences:
// shell(n) = log sum_{k_1+...+k_d=n} prod_j w_j(k_j). Each call to next()
// appends one shell at O(d n) cost. All weights must be positive.
class shell_convolution
{
public:
    using weight_fn = std::function<double(int j, std::uint64_t k)>;

    shell_convolution(int d, weight_fn log_weight)
        : d_(d), log_weight_(std::move(log_weight)), rows_(static_cast<std::size_t>(d)),
          weights_(static_cast<std::size_t>(d))
    {
    }

    double next()
    {
        const std::uint64_t n = rows_[0].size();
        for (int j = 0; j < d_; ++j)
            weights_[j].push_back(log_weight_(j, n));
        rows_[0].push_back(weights_[0][n]);
        scratch_.resize(n + 1);
        for (int j = 1; j < d_; ++j) {
            const auto& prev = rows_[j - 1];
            const auto& w = weights_[j];
            double m = -std::numeric_limits<double>::infinity();
            for (std::uint64_t i = 0; i <= n; ++i) {
                scratch_[i] = prev[i] + w[n - i];
                if (scratch_[i] > m)
                    m = scratch_[i];
            }
            double value = m;
            if (std::isfinite(m)) {
                compensated_sum s;
                for (std::uint64_t i = 0; i <= n; ++i)
                    s += std::exp(scratch_[i] - m);
                value = m + std::log(s.value());
            }
            rows_[j].push_back(value);
        }
        return rows_[d_ - 1].back();
    }

    const std::vector<double>& shells() const noexcept { return rows_[d_ - 1]; }

private:
    int d_;
    weight_fn log_weight_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::vector<double>> weights_;
    std::vector<double> scratch_;
};

struct tail_estimate
{
    double tail = 0;  // two-parameter model A n^s (1 + b/n)
    double error = 0; // distance to the three-parameter model
};

// Remainder sum_{n>N} t_n for positive terms t_n ~ A rho^n n^sigma (1 + b/n),
// fitted to t at N/2 and N; a three-parameter fit through N/4, N/2, N gauges
// the model error.
inline tail_estimate fit_power_tail(const std::vector<double>& log_terms, double sigma,
                                    double log_rho)
{
    const std::uint64_t n3 = log_terms.size() - 1;
    const std::uint64_t n2 = std::max<std::uint64_t>(n3 / 2, 2);
    const std::uint64_t n1 = std::max<std::uint64_t>(n3 / 4, 1);
    if (n3 < 3 || n2 >= n3 || n1 >= n2)
        return {0, std::numeric_limits<double>::infinity()};

    const double eps = -log_rho;
    auto q = [&](std::uint64_t n) {
        const double dn = static_cast<double>(n);
        return std::exp(log_terms[n] - dn * log_rho - sigma * std::log(dn));
    };
    const double h1 = 1.0 / static_cast<double>(n1);
    const double h2 = 1.0 / static_cast<double>(n2);
    const double h3 = 1.0 / static_cast<double>(n3);
    const double q1 = q(n1), q2 = q(n2), q3 = q(n3);

    const double first = static_cast<double>(n3 + 1);
    const double s0 = specfun::power_exp_sum(sigma, eps, first);
    const double s1 = specfun::power_exp_sum(sigma - 1, eps, first);
    const double s2 = specfun::power_exp_sum(sigma - 2, eps, first);

    const double b2 = (q2 - q3) / (h2 - h3);
    const double a2 = q3 - b2 * h3;
    const double tail2 = a2 * s0 + b2 * s1;

    // q = A + B h + C h^2 through three points (Newton divided differences).
    const double d12 = (q1 - q2) / (h1 - h2);
    const double d23 = (q2 - q3) / (h2 - h3);
    const double c3 = (d12 - d23) / (h1 - h3);
    const double b3 = d23 - c3 * (h2 + h3);
    const double a3 = q3 - b3 * h3 - c3 * h3 * h3;
    const double tail3 = a3 * s0 + b3 * s1 + c3 * s2;

    return {tail2, std::fabs(tail2 - tail3)};
}

struct positive_sum
{
    double value = 0;
    double partial = 0;
    double tail = 0;
    double error = 0;
    double last_term = 0;
    std::uint64_t last_index = 0;
};

// Sums positive terms given in log space by next_log_term(n), n = 0, 1, ...,
// whose large-n behaviour is A rho^n n^sigma. Stops when the estimated error
// drops below the tolerance at two consecutive checkpoints, when it stalls, or
// at n_max.
template <class NextLogTerm>
positive_sum sum_power_tail_series(NextLogTerm&& next_log_term, double sigma, double log_rho,
                                   const series_config& cfg)
{
    std::vector<double> logs;
    compensated_sum partial;
    positive_sum out;
    std::uint64_t checkpoint = 16;
    int satisfied = 0, stalled = 0;
    double best_error = std::numeric_limits<double>::infinity();
    for (std::uint64_t n = 0;; ++n) {
        const double lt = next_log_term(n);
        logs.push_back(lt);
        partial += std::exp(lt);
        const bool at_cap = n >= cfg.n_max;
        if (n != checkpoint && !at_cap)
            continue;
        checkpoint = std::max(checkpoint + 1, static_cast<std::uint64_t>(std::ceil(checkpoint * 1.25)));

        const double p = partial.value();
        const auto t = fit_power_tail(logs, sigma, log_rho);
        const double round = 4e-16 * p * std::log2(static_cast<double>(n) + 2);
        out.partial = p;
        out.last_term = std::exp(lt);
        out.last_index = n;
        if (cfg.tail_model) {
            out.tail = std::isfinite(t.error) ? t.tail : 0.0;
            out.value = p + out.tail;
            out.error = t.error + round;
        } else {
            out.tail = 0;
            out.value = p;
            out.error = std::fabs(t.tail) + t.error + round;
        }
        if (at_cap)
            break;
        satisfied = out.error <= cfg.tolerance * out.value ? satisfied + 1 : 0;
        // Below about 1e-12 relative the log-space terms themselves are the
        // limit; stop once the error estimate has stopped improving.
        if (out.error < 0.5 * best_error) {
            best_error = out.error;
            stalled = 0;
        } else if (++stalled >= 6) {
            break;
        }
        if (satisfied >= 2)
            break;
    }
    return out;
}

} // namespace detail

inline multi_coeff_table sum_multi_coeff(int d, std::uint64_t n_max)
{
    if (d < 1)
        throw argument_error("sum_multi_coeff: dimension must be positive");
    detail::shell_convolution conv(d, [](int, std::uint64_t k) {
        return -2 * specfun::log_gamma(static_cast<double>(k) + 1);
    });
    for (std::uint64_t n = 0; n <= n_max; ++n)
        conv.next();
    return multi_coeff_table(d, conv.shells());
}

// u(d) = sum_n Gamma(2n+1) c_d(n) / (2d)^(2n): the symmetric Lauricella F_C
// collapsed onto the total degree.
struct u_value
{
    int d = 0;
    double value = 0;
    double error_estimate = 0;
    std::uint64_t terms_used = 0;
    double tail_added = 0;
};

inline u_value u_series(int d, const series_config& cfg = {})
{
    require_transient_dimension(d);
    cfg.validate();
    detail::shell_convolution conv(d, [](int, std::uint64_t k) {
        return -2 * specfun::log_gamma(static_cast<double>(k) + 1);
    });
    const double log_2d = std::log(2.0 * d);
    auto term = [&](std::uint64_t n) {
        const double lc = conv.next();
        const double dn = static_cast<double>(n);
        return specfun::log_gamma(2 * dn + 1) + lc - 2 * dn * log_2d;
    };
    const auto s = detail::sum_power_tail_series(term, -0.5 * d, 0.0, cfg);
    return {d, s.value, s.error, s.last_index + 1, s.tail};
}

struct lauricella_params
{
    double a = 0;
    double b = 0;
    std::vector<double> c;
    std::vector<double> x;

    int dimension() const noexcept { return static_cast<int>(c.size()); }

    void validate() const
    {
        if (c.empty())
            throw argument_error("lauricella_fc: dimension must be positive");
        if (c.size() != x.size())
            throw argument_error("lauricella_fc: c and x must have the same length");
        for (double cj : c)
            if (cj <= 0 && cj == std::floor(cj))
                throw argument_error("lauricella_fc: c_j must not be a nonpositive integer");
    }

    // sum_j sqrt|x_j|; the classical domain of convergence is this < 1.
    double root_sum() const noexcept
    {
        double s = 0;
        for (double xj : x)
            s += std::sqrt(std::fabs(xj));
        return s;
    }
};

enum class convergence_domain
{
    inside,   // sum sqrt|x_j| < 1
    boundary, // sum sqrt|x_j| = 1 to within 1e-12
    outside
};

struct lauricella_result
{
    double value = 0;
    double partial_sum = 0;
    double tail_added = 0;
    double last_shell = 0;     // |contribution of the final total degree|
    double error_estimate = 0;
    std::uint64_t shells = 0;  // total degrees 0..shells-1 were summed
    convergence_domain domain = convergence_domain::inside;
    bool warning = false;      // sum sqrt|x_j| >= 1, or the series diverges there
    std::string note;
};

namespace detail {

inline bool is_nonpositive_integer(double v) { return v <= 0 && v == std::floor(v); }

inline constexpr std::uint64_t divergent_shell_cap = 2000;

} // namespace detail

// Lauricella F_C^(d)(a, b; c; x). Terms depend on the multi-index only through
// per-variable weights and the total degree n, so the sum is taken shell by
// shell: the shell sums come from an incremental convolution over the
// variables. For positive terms the remainder is extrapolated from the
// power law A rho^n n^sigma, rho = (sum sqrt x_j)^2.
inline lauricella_result lauricella_fc(const lauricella_params& params,
                                       const series_config& cfg = {})
{
    params.validate();
    cfg.validate();
    const int d = params.dimension();

    lauricella_result out;
    const double root_sum = params.root_sum();
    if (std::fabs(root_sum - 1) <= 1e-12)
        out.domain = convergence_domain::boundary;
    else if (root_sum > 1)
        out.domain = convergence_domain::outside;
    out.warning = out.domain != convergence_domain::inside;

    bool positive = params.a > 0 && params.b > 0;
    for (int j = 0; j < d; ++j)
        positive = positive && params.x[j] >= 0 && params.c[j] > 0;

    const bool terminating = detail::is_nonpositive_integer(params.a)
                             || detail::is_nonpositive_integer(params.b);
    std::uint64_t degree_cap = cfg.n_max;
    if (terminating) {
        const double top = std::max(detail::is_nonpositive_integer(params.a) ? params.a : -1e300,
                                    detail::is_nonpositive_integer(params.b) ? params.b : -1e300);
        degree_cap = std::min<std::uint64_t>(degree_cap, static_cast<std::uint64_t>(-top));
    }

    if (positive && !terminating) {
        // Large-n exponent of the shell terms among the variables with x_j > 0.
        int active = 0;
        double c_excess = 0;
        for (int j = 0; j < d; ++j)
            if (params.x[j] > 0) {
                ++active;
                c_excess += 1 - params.c[j];
            }
        const double sigma = params.a + params.b - 2 + c_excess - 0.5 * (active - 1);
        const bool divergent = out.domain == convergence_domain::outside
                               || (out.domain == convergence_domain::boundary && sigma >= -1);
        if (!divergent) {
            const double log_rho =
                out.domain == convergence_domain::boundary || active == 0
                    ? 0.0
                    : 2 * std::log(root_sum);
            detail::shell_convolution conv(d, [&](int j, std::uint64_t k) {
                const double dk = static_cast<double>(k);
                if (k == 0)
                    return 0.0;
                if (params.x[j] == 0)
                    return -std::numeric_limits<double>::infinity();
                return dk * std::log(params.x[j]) - specfun::log_pochhammer(params.c[j], k)
                       - specfun::log_gamma(dk + 1);
            });
            double la = 0, lb = 0;
            auto term = [&](std::uint64_t n) {
                if (n > 0) {
                    la += std::log(params.a + static_cast<double>(n) - 1);
                    lb += std::log(params.b + static_cast<double>(n) - 1);
                }
                return la + lb + conv.next();
            };
            const bool boundary = out.domain == convergence_domain::boundary;
            const double effective_sigma = active == 0 ? -2.0 : sigma;
            auto s = detail::sum_power_tail_series(term, effective_sigma,
                                                   boundary ? 0.0 : log_rho, cfg);
            out.value = s.value;
            out.partial_sum = s.partial;
            out.tail_added = s.tail;
            out.last_shell = s.last_term;
            out.error_estimate = s.error;
            out.shells = s.last_index + 1;
            if (boundary)
                out.note = "boundary of the convergence domain: algebraic convergence, tail extrapolated";
            return out;
        }
    }

    // General signed series: shells summed term by term with sign tracking.
    struct signed_weights
    {
        std::vector<std::vector<signed_log>> w;
        std::vector<std::vector<signed_log>> rows;
    } conv;
    conv.w.resize(d);
    conv.rows.resize(d);
    std::vector<signed_log> scratch;
    auto next_shell = [&](std::uint64_t n) {
        for (int j = 0; j < d; ++j) {
            signed_log v;
            if (n == 0) {
                v = {0.0, 1};
            } else {
                const auto& prev = conv.w[j].back();
                const double cjk = params.c[j] + static_cast<double>(n) - 1;
                v = prev * signed_log::from_linear(params.x[j])
                    * signed_log{-std::log(std::fabs(cjk)), cjk > 0 ? 1 : -1}
                    * signed_log{-std::log(static_cast<double>(n)), 1};
            }
            conv.w[j].push_back(v);
        }
        conv.rows[0].push_back(conv.w[0][n]);
        for (int j = 1; j < d; ++j) {
            scratch.resize(n + 1);
            for (std::uint64_t i = 0; i <= n; ++i)
                scratch[i] = conv.rows[j - 1][i] * conv.w[j][n - i];
            conv.rows[j].push_back(log_sum_exp(std::span<const signed_log>(scratch)));
        }
        return conv.rows[d - 1].back();
    };

    const bool converging = out.domain == convergence_domain::inside || terminating;
    const std::uint64_t cap =
        converging ? degree_cap : std::min(degree_cap, detail::divergent_shell_cap);
    signed_log num{0.0, 1};
    compensated_sum partial;
    double best_partial = 0, best_term = std::numeric_limits<double>::infinity();
    std::uint64_t best_n = 0;
    double prev_abs = std::numeric_limits<double>::infinity();
    int quiet = 0;
    std::uint64_t n = 0;
    for (;; ++n) {
        if (n > 0)
            num = num * signed_log::from_linear(params.a + static_cast<double>(n) - 1)
                  * signed_log::from_linear(params.b + static_cast<double>(n) - 1);
        const double t = (num * next_shell(n)).to_linear();
        partial += t;
        const double at = std::fabs(t);
        if (!converging && at < best_term) {
            best_term = at;
            best_partial = partial.value();
            best_n = n;
        }
        out.last_shell = at;
        if (n >= cap)
            break;
        if (converging && n >= 8) {
            const double ratio = prev_abs > 0 ? std::min(at / prev_abs, 0.999) : 0.0;
            const double rho = std::max(ratio, root_sum * root_sum);
            const double rest = rho < 1 ? at * rho / (1 - rho) : at;
            quiet = rest <= cfg.tolerance * std::fabs(partial.value()) && at <= prev_abs ? quiet + 1 : 0;
            if (quiet >= 3)
                break;
        }
        prev_abs = at;
    }
    if (converging) {
        out.partial_sum = out.value = partial.value();
        out.shells = n + 1;
        out.error_estimate = terminating ? 4e-16 * std::fabs(out.value) : out.last_shell;
    } else {
        out.partial_sum = out.value = best_partial;
        out.shells = best_n + 1;
        out.last_shell = best_term;
        out.error_estimate = best_term;
        out.note = "series diverges here; truncated at its smallest term";
    }
    return out;
}

// Direct evaluation of the multi-index sum over all k with |k| <= total_degree.
// Cost grows like total_degree^d; limited to d <= 6.
inline double lauricella_fc_naive(const lauricella_params& params, int total_degree)
{
    params.validate();
    const int d = params.dimension();
    if (d > 6)
        throw argument_error("lauricella_fc_naive: dimension above 6 is not supported");
    if (total_degree < 0)
        throw argument_error("lauricella_fc_naive: total degree must be nonnegative");
    const auto n_terms = static_cast<std::size_t>(total_degree) + 1;

    std::vector<double> numerator(n_terms);
    numerator[0] = 1;
    for (std::size_t n = 1; n < n_terms; ++n)
        numerator[n] = numerator[n - 1] * (params.a + n - 1) * (params.b + n - 1);
    std::vector<std::vector<double>> weight(d, std::vector<double>(n_terms));
    for (int j = 0; j < d; ++j) {
        weight[j][0] = 1;
        for (std::size_t k = 1; k < n_terms; ++k)
            weight[j][k] = weight[j][k - 1] * params.x[j] / ((params.c[j] + k - 1) * k);
    }

    compensated_sum total;
    std::vector<std::size_t> k(d, 0);
    std::function<void(int, std::size_t, double)> visit = [&](int j, std::size_t used, double w) {
        if (j == d) {
            total += numerator[used] * w;
            return;
        }
        for (std::size_t kj = 0; used + kj < n_terms; ++kj)
            visit(j + 1, used + kj, w * weight[j][kj]);
    };
    visit(0, 0, 1.0);
    return total.value();
}

} // namespace polya::series

#endif
