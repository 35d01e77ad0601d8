#ifndef POLYA_QUADRATURE_HPP
#define POLYA_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "summation.hpp"

namespace polya::quadrature {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], by Newton
// iteration on the three-term recurrence.
struct gauss_legendre_rule
{
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit gauss_legendre_rule(int n) : nodes(n), weights(n)
    {
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-16)
                    break;
            }
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const double w = 2 / ((1 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = weights[n - 1 - i] = w;
        }
        if (n % 2 == 1)
            nodes[n / 2] = 0;
    }

    template <class F>
    double apply(F& f, double lo, double hi) const
    {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        compensated_sum s;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += weights[i] * f(mid + half * nodes[i]);
        return half * s.value();
    }
};

inline const gauss_legendre_rule& rule20()
{
    static const gauss_legendre_rule r(20);
    return r;
}

inline const gauss_legendre_rule& rule10()
{
    static const gauss_legendre_rule r(10);
    return r;
}

struct adaptive_result
{
    double value = 0;
    double error = 0;
    int panels = 0;
};

// Adaptive bisection on [lo, hi]: each panel is integrated with the 20-point
// rule, and |G20 - G10| serves as its error indicator. The panel with the
// largest indicator is split until the summed indicator meets
// max(abs_tol, rel_tol * |value|) or the panel budget is spent. The final
// sum runs over panels ordered by position, so it does not depend on the
// refinement history.
template <class F>
adaptive_result integrate_adaptive(F&& f, double lo, double hi, double rel_tol, double abs_tol,
                                   int max_panels, int initial_panels = 8)
{
    struct panel
    {
        double lo, hi, value, error;
        bool operator<(const panel& o) const { return error < o.error; }
    };
    auto eval = [&](double a, double b) {
        const double g20 = rule20().apply(f, a, b);
        const double g10 = rule10().apply(f, a, b);
        return panel{a, b, g20, std::fabs(g20 - g10)};
    };

    std::priority_queue<panel> queue;
    initial_panels = std::max(1, std::min(initial_panels, max_panels));
    const double width = (hi - lo) / initial_panels;
    double total_error = 0, total_value = 0;
    for (int i = 0; i < initial_panels; ++i) {
        const double a = lo + i * width;
        const double b = i + 1 == initial_panels ? hi : lo + (i + 1) * width;
        const panel p = eval(a, b);
        total_error += p.error;
        total_value += p.value;
        queue.push(p);
    }
    int count = initial_panels;
    while (count < max_panels && total_error > std::max(abs_tol, rel_tol * std::fabs(total_value))) {
        const panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const panel left = eval(worst.lo, mid);
        const panel right = eval(mid, worst.hi);
        total_error += left.error + right.error - worst.error;
        total_value += left.value + right.value - worst.value;
        queue.push(left);
        queue.push(right);
        ++count;
    }

    std::vector<panel> all;
    all.reserve(queue.size());
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const panel& a, const panel& b) { return a.lo < b.lo; });
    compensated_sum value, error;
    for (const auto& p : all) {
        value += p.value;
        error += p.error;
    }
    return {value.value(), error.value(), count};
}

} // namespace polya::quadrature

#endif
