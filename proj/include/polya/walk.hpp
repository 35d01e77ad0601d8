#ifndef POLYA_WALK_HPP
#define POLYA_WALK_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/random/binomial_distribution.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace polya::walk {

struct walk_config
{
    int d = 3;
    std::uint64_t walks = 1'000'000;
    std::uint64_t horizon = 1'000'000; // steps per walk
    std::uint64_t seed = 0;
    unsigned workers = 1;
    double step_budget = 1e13; // walks * horizon may not exceed this

    void validate() const
    {
        if (d < 1 || d > 64)
            throw argument_error("walk_config: d must lie in 1..64");
        if (walks < 1)
            throw argument_error("walk_config: walks must be at least 1");
        if (horizon < 2)
            throw argument_error("walk_config: horizon must be at least 2 (a return takes two steps)");
        if (workers < 1)
            throw argument_error("walk_config: workers must be at least 1");
        if (static_cast<double>(walks) * static_cast<double>(horizon) > step_budget)
            throw resource_error("walks x horizon = "
                                 + std::to_string(static_cast<double>(walks) * static_cast<double>(horizon))
                                 + " exceeds the step budget of " + std::to_string(step_budget));
    }
};

struct walk_estimate
{
    double p_hat = 0;
    double std_err = 0;
    std::pair<double, double> ci95{0, 0};
    std::uint64_t returned = 0;
    std::uint64_t truncated = 0; // reached the horizon without returning
    std::uint64_t walks = 0;
};

struct walk_outcome
{
    bool returned = false;
    std::uint64_t return_step = 0; // first return time, 0 if none within the horizon
    std::uint64_t steps = 0;       // steps simulated
};

namespace detail {

// Below this L1 distance, moves are drawn one step at a time.
inline constexpr std::int64_t single_step_limit = 48;

// Uniform integer in [0, range) by multiply-shift with rejection (Lemire).
class bounded_draw
{
public:
    explicit bounded_draw(rng::philox_stream& gen) : gen_(gen) {}

    std::uint32_t operator()(std::uint32_t range)
    {
        std::uint64_t m = static_cast<std::uint64_t>(next32()) * range;
        auto low = static_cast<std::uint32_t>(m);
        if (low < range) {
            const std::uint32_t threshold = (0u - range) % range;
            while (low < threshold) {
                m = static_cast<std::uint64_t>(next32()) * range;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

private:
    std::uint32_t next32()
    {
        if (!have_) {
            buf_ = gen_();
            have_ = true;
            return static_cast<std::uint32_t>(buf_);
        }
        have_ = false;
        return static_cast<std::uint32_t>(buf_ >> 32);
    }

    rng::philox_stream& gen_;
    std::uint64_t buf_ = 0;
    bool have_ = false;
};

// Binomial(n, 1/2) as the number of set bits among n random bits; cheaper
// than the general sampler while n is a few hundred.
template <class Gen>
std::int64_t binomial_half(Gen& gen, std::int64_t n)
{
    if (n > 512) {
        boost::random::binomial_distribution<std::int64_t, double> b(n, 0.5);
        return b(gen);
    }
    std::int64_t c = 0;
    for (; n >= 64; n -= 64)
        c += std::popcount(gen());
    if (n > 0)
        c += std::popcount(gen() & ((std::uint64_t{1} << n) - 1));
    return c;
}

template <class Gen>
std::int64_t binomial(Gen& gen, std::int64_t n, int inverse_p)
{
    if (n == 0)
        return 0;
    if (inverse_p == 2)
        return binomial_half(gen, n);
    boost::random::binomial_distribution<std::int64_t, double> b(n, 1.0 / inverse_p);
    return b(gen);
}

} // namespace detail

// One walk on Z^d, keyed by (seed, index). From L1 distance r the origin
// cannot be reached in fewer than r steps, so the walk advances r steps at a
// time: the r-step displacement is drawn exactly (a multinomial split over the
// axes, then a binomial sign split per axis) and the origin is checked at the
// landing point. Short distances use single uniform steps in [0, 2d). The draw
// sequence does not depend on the horizon, so a walk returning within H
// returns at the same step for every horizon >= H.
inline walk_outcome simulate_walk(int d, std::uint64_t horizon, std::uint64_t seed, std::uint64_t index)
{
    rng::philox_stream gen(rng::mix64(seed), index);
    detail::bounded_draw draw(gen);
    std::vector<std::int64_t> x(static_cast<std::size_t>(d), 0);
    std::vector<std::int64_t> per_axis(static_cast<std::size_t>(d), 0);
    const auto two_d = static_cast<std::uint32_t>(2 * d);

    auto single_step = [&] {
        const std::uint32_t k = draw(two_d);
        x[k >> 1] += (k & 1) ? 1 : -1;
    };

    walk_outcome out;
    single_step();
    std::uint64_t t = 1;
    std::int64_t r = 1;
    for (;;) {
        if (t + static_cast<std::uint64_t>(r) > horizon)
            break;
        if (r < detail::single_step_limit) {
            for (std::int64_t i = 0; i < r; ++i)
                single_step();
        } else {
            std::int64_t left = r;
            for (int j = 0; j < d - 1; ++j) {
                per_axis[j] = detail::binomial(gen, left, d - j);
                left -= per_axis[j];
            }
            per_axis[d - 1] = left;
            for (int j = 0; j < d; ++j)
                x[j] += 2 * detail::binomial_half(gen, per_axis[j]) - per_axis[j];
        }
        t += static_cast<std::uint64_t>(r);
        r = 0;
        for (std::int64_t v : x)
            r += std::llabs(v);
        if (r == 0) {
            out.returned = true;
            out.return_step = t;
            break;
        }
    }
    out.steps = t;
    return out;
}

// Monte Carlo estimate of the return probability within cfg.horizon steps.
// Walks are split into contiguous index ranges across workers; each walk owns
// its random stream, so the counts do not depend on the worker count. The
// estimate is biased low by the returns that happen after the horizon.
inline walk_estimate estimate_return(const walk_config& cfg)
{
    cfg.validate();
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, cfg.walks));
    std::vector<std::uint64_t> counts(workers, 0);
    auto run = [&](unsigned w) {
        const std::uint64_t lo = cfg.walks * w / workers;
        const std::uint64_t hi = cfg.walks * (w + 1) / workers;
        std::uint64_t c = 0;
        for (std::uint64_t i = lo; i < hi; ++i)
            c += simulate_walk(cfg.d, cfg.horizon, cfg.seed, i).returned;
        counts[w] = c;
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
        for (auto& t : pool)
            t.join();
    }

    walk_estimate e;
    e.walks = cfg.walks;
    for (auto c : counts)
        e.returned += c;
    e.truncated = e.walks - e.returned;
    const double n = static_cast<double>(e.walks);
    e.p_hat = static_cast<double>(e.returned) / n;
    e.std_err = std::sqrt(e.p_hat * (1 - e.p_hat) / n);
    e.ci95 = {std::max(0.0, e.p_hat - 1.96 * e.std_err), std::min(1.0, e.p_hat + 1.96 * e.std_err)};
    return e;
}

} // namespace polya::walk

#endif
