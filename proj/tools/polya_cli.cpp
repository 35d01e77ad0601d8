// polya: return probabilities of the simple random walk on Z^d and the
// numerical checks behind them.
//
// Exit codes: 0 success, 1 usage, 2 constraint or domain error,
// 3 tolerance breach, 4 resource limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polya/polya.hpp"

namespace {

namespace out = polya::output;

enum exit_code : int
{
    exit_ok = 0,
    exit_usage = 1,
    exit_constraint = 2,
    exit_tolerance = 3,
    exit_resource = 4
};

struct usage_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Wall-clock milliseconds, or 0 so that repeated runs print identical bytes.
class stopwatch
{
public:
    explicit stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}

    double ms() const
    {
        if (!enabled_)
            return 0;
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

out::format parse_format(const std::string& s) { return s == "json" ? out::format::json : out::format::csv; }

// "7" or "3..10", inclusive.
std::pair<int, int> parse_range(const std::string& s)
{
    auto to_int = [&](const std::string& t) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (t.empty() || used != t.size())
            throw usage_error("--d: expected an integer or a range like 3..10, got '" + s + "'");
        return v;
    };
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const int d = to_int(s);
        return {d, d};
    }
    const int lo = to_int(s.substr(0, dots));
    const int hi = to_int(s.substr(dots + 2));
    if (lo > hi)
        throw usage_error("--d: empty range '" + s + "'");
    return {lo, hi};
}

void require_table_dimension(int d)
{
    if (d < 3)
        throw polya::divergence_error(d);
    if (d > 64)
        throw usage_error("--d: dimensions above 64 are not supported (got " + std::to_string(d) + ")");
}

std::string fields_line(const std::vector<out::field>& fields, out::format fmt)
{
    if (fmt == out::format::json)
        return out::json_object(fields);
    std::vector<std::string> cells;
    for (const auto& f : fields)
        cells.push_back(f.second.front() == '"' ? f.second.substr(1, f.second.size() - 2) : f.second);
    return out::csv_line(cells);
}

std::string fields_header(const std::vector<out::field>& fields)
{
    std::vector<std::string> names;
    for (const auto& f : fields)
        names.push_back(f.first);
    return out::csv_line(names);
}

void emit_fields(const std::vector<out::field>& fields, out::format fmt)
{
    if (fmt == out::format::csv)
        std::cout << fields_header(fields) << "\n";
    std::cout << fields_line(fields, fmt) << "\n";
}

// ---- pd ----------------------------------------------------------------

struct pd_options
{
    std::string d = "3";
    std::string method = "series";
    double tolerance = 1e-10;
    std::string format = "csv";
    bool timing = false;
};

// u(d) by quadrature with the split point doubled until the reported error
// meets rel_target.
polya::quad::quadrature_result quadrature_to(int d, double rel_target)
{
    polya::quad::quadrature_config cfg;
    cfg.rel_tol = std::min(1e-13, rel_target / 10);
    double m = polya::quad::default_split_point(d);
    polya::quad::quadrature_result r;
    for (int k = 0; k < 6; ++k, m *= 2) {
        cfg.split_point = m;
        r = polya::quad::u_quadrature(d, cfg);
        if (r.error_estimate <= rel_target * r.value)
            break;
    }
    return r;
}

// The shell convolution costs O(n^2); 2e4 terms reach about 1e-12 relative at
// d = 3 in a few seconds. Tighter requests report the error actually reached.
constexpr std::uint64_t series_term_cap = 20000;

int run_pd(const pd_options& o)
{
    const auto [lo, hi] = parse_range(o.d);
    for (int d : {lo, hi})
        require_table_dimension(d);
    if (!(o.tolerance > 0 && o.tolerance < 1))
        throw usage_error("--tolerance must lie in (0, 1)");
    const bool all = o.method == "all";
    const auto fmt = parse_format(o.format);

    std::vector<out::output_record> records;
    bool breach = false;
    for (int d = lo; d <= hi; ++d) {
        std::vector<std::string> methods;
        if (all) {
            methods = {"series", "quad"};
            if (d == 3)
                methods.push_back("gamma");
        } else {
            if (o.method == "gamma" && d != 3)
                throw usage_error("--method gamma is only available for d = 3");
            methods = {o.method};
        }
        // p = 1 - 1/u has relative error (du/u)/(u - 1), and u - 1 >= 1/(2d).
        const double u_target = o.tolerance / (4.0 * d);
        const std::size_t first = records.size();
        for (const auto& m : methods) {
            stopwatch clock(o.timing);
            double u = 0, u_err = 0;
            if (m == "series") {
                polya::series::series_config cfg;
                cfg.tolerance = u_target;
                cfg.n_max = series_term_cap;
                const auto v = polya::series::u_series(d, cfg);
                u = v.value;
                u_err = v.error_estimate;
            } else if (m == "quad") {
                const auto v = quadrature_to(d, u_target);
                u = v.value;
                u_err = v.error_estimate;
            } else {
                const auto v = polya::series::return_probability(d, polya::series::method::gamma_product);
                u = v.u;
                u_err = v.error_estimate * u * u;
            }
            out::output_record r;
            r.d = d;
            r.method = m;
            r.value = 1 - 1 / u;
            r.error_estimate = u_err / (u * u);
            r.elapsed_ms = clock.ms();
            records.push_back(r);
        }
        if (all) {
            double worst = 0;
            for (std::size_t i = first; i < records.size(); ++i)
                for (std::size_t j = first; j < records.size(); ++j)
                    if (i != j)
                        worst = std::max(worst, std::fabs(records[i].value - records[j].value)
                                                    / std::fabs(records[j].value));
            for (std::size_t i = first; i < records.size(); ++i)
                records[i].max_rel_diff = worst;
            if (worst > 10 * o.tolerance) {
                breach = true;
                std::cerr << "pd: methods disagree at d = " << d << ": max relative difference "
                          << out::number(worst) << " exceeds " << out::number(10 * o.tolerance) << "\n";
            }
        }
    }
    std::cout << out::render(records, fmt, all);
    return breach ? exit_tolerance : exit_ok;
}

// ---- fc ----------------------------------------------------------------

struct fc_options
{
    double a = 0, b = 0;
    std::vector<double> c, x;
    std::uint64_t nmax = 200000;
    double tolerance = 1e-10;
    std::string format = "csv";
};

const char* domain_name(polya::series::convergence_domain d)
{
    switch (d) {
    case polya::series::convergence_domain::inside: return "inside";
    case polya::series::convergence_domain::boundary: return "boundary";
    case polya::series::convergence_domain::outside: return "outside";
    }
    return "?";
}

int run_fc(const fc_options& o)
{
    if (o.c.size() != o.x.size())
        throw usage_error("fc: --c has " + std::to_string(o.c.size()) + " entries but --x has "
                          + std::to_string(o.x.size()));
    if (!(o.tolerance > 0 && o.tolerance < 1))
        throw usage_error("--tolerance must lie in (0, 1)");
    polya::series::series_config cfg;
    cfg.n_max = o.nmax;
    cfg.tolerance = o.tolerance;
    const polya::series::lauricella_params params{o.a, o.b, o.c, o.x};
    const auto r = polya::series::lauricella_fc(params, cfg);
    if (r.warning)
        std::cerr << "warning: sum sqrt|x_j| = " << out::number(params.root_sum())
                  << " is not below 1 (" << domain_name(r.domain) << " of the convergence domain)"
                  << (r.note.empty() ? "" : "; " + r.note) << "\n";
    emit_fields({{"value", out::json_number(r.value)},
                 {"error_estimate", out::json_number(r.error_estimate)},
                 {"last_shell", out::json_number(r.last_shell)},
                 {"shells", std::to_string(r.shells)},
                 {"domain", out::json_string(domain_name(r.domain))}},
                parse_format(o.format));
    return exit_ok;
}

// ---- laplace-check -----------------------------------------------------

struct laplace_options
{
    std::uint64_t count = 50;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    double tolerance = 1e-6;
    std::string format = "csv";
    bool timing = false;
};

int run_laplace(const laplace_options& o)
{
    stopwatch clock(o.timing);
    const auto r = polya::laplace::verify_lemma1(o.count, o.seed, o.workers);
    emit_fields({{"count", std::to_string(o.count)},
                 {"seed", std::to_string(o.seed)},
                 {"max_rel_diff", out::json_number(r.max_rel_diff)},
                 {"mean_rel_diff", out::json_number(r.mean_rel_diff)},
                 {"worst_index", std::to_string(r.worst_index)},
                 {"elapsed_ms", out::json_number(clock.ms())}},
                parse_format(o.format));
    if (!(r.max_rel_diff < o.tolerance)) {
        std::cerr << "laplace-check: max relative difference " << out::number(r.max_rel_diff)
                  << " is not below " << out::number(o.tolerance) << "\n";
        return exit_tolerance;
    }
    return exit_ok;
}

// ---- mc ----------------------------------------------------------------

struct mc_options
{
    int d = 3;
    std::uint64_t walks = 1'000'000;
    std::uint64_t horizon = 1'000'000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::optional<double> tolerance;
    std::string format = "csv";
    bool timing = false;
};

int run_mc(const mc_options& o)
{
    polya::walk::walk_config cfg;
    cfg.d = o.d;
    cfg.walks = o.walks;
    cfg.horizon = o.horizon;
    cfg.seed = o.seed;
    cfg.workers = o.workers;
    stopwatch clock(o.timing);
    const auto e = polya::walk::estimate_return(cfg);
    out::output_record rec;
    rec.d = o.d;
    rec.method = "mc";
    rec.value = e.p_hat;
    rec.error_estimate = e.std_err;
    rec.elapsed_ms = clock.ms();
    std::cout << out::render({rec}, parse_format(o.format), false);
    std::cerr << "mc: returned " << e.returned << " of " << e.walks << " walks, " << e.truncated
              << " still out at the horizon; 95% interval [" << out::number(e.ci95.first) << ", "
              << out::number(e.ci95.second) << "]\n";
    if (o.tolerance) {
        const double exact = o.d < 3 ? 1.0 : polya::series::return_probability(o.d, polya::series::method::series).p;
        if (!(std::fabs(e.p_hat - exact) < *o.tolerance)) {
            std::cerr << "mc: |p_hat - p(" << o.d << ")| = " << out::number(std::fabs(e.p_hat - exact))
                      << " is not below " << out::number(*o.tolerance) << "\n";
            return exit_tolerance;
        }
    }
    return exit_ok;
}

// ---- watson ------------------------------------------------------------

struct watson_options
{
    int d = 3;
    std::uint64_t samples = 10'000'000;
    std::uint64_t seed = 1;
    bool normalize = true;
    std::optional<double> tolerance;
    std::string format = "csv";
    bool timing = false;
};

int run_watson(const watson_options& o)
{
    require_table_dimension(o.d);
    polya::quad::lattice_config cfg;
    cfg.samples = o.samples;
    cfg.normalize = o.normalize;
    stopwatch clock(o.timing);
    const auto r = polya::quad::lattice_green_integral(o.d, cfg, o.seed);
    out::output_record rec;
    rec.d = o.d;
    rec.method = o.normalize ? "watson" : "watson-raw";
    rec.value = r.value;
    rec.error_estimate = r.error_estimate;
    rec.elapsed_ms = clock.ms();
    std::cout << out::render({rec}, parse_format(o.format), false);
    if (o.tolerance) {
        double target = polya::series::u_series(o.d).value;
        if (!o.normalize)
            target *= std::pow(2 * std::numbers::pi, o.d) / o.d;
        if (!(std::fabs(r.value - target) < *o.tolerance)) {
            std::cerr << "watson: |value - target| = " << out::number(std::fabs(r.value - target))
                      << " is not below " << out::number(*o.tolerance) << "\n";
            return exit_tolerance;
        }
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Return probabilities of the simple random walk on Z^d"};
    app.require_subcommand(1);
    const auto formats = CLI::IsMember({"csv", "json"});

    pd_options pd;
    auto* pd_cmd = app.add_subcommand("pd", "p(d) = 1 - 1/u(d) by series, quadrature or the d = 3 gamma product");
    pd_cmd->add_option("--d", pd.d, "dimension or inclusive range, e.g. 3..10")->required();
    pd_cmd->add_option("--method", pd.method)->check(CLI::IsMember({"series", "quad", "gamma", "all"}))->capture_default_str();
    pd_cmd->add_option("--tolerance", pd.tolerance, "target relative error of p(d)")->capture_default_str();
    pd_cmd->add_option("--format", pd.format)->check(formats)->capture_default_str();
    pd_cmd->add_flag("--timing", pd.timing, "report elapsed_ms (otherwise 0)");

    fc_options fc;
    auto* fc_cmd = app.add_subcommand("fc", "Lauricella F_C(a, b; c; x)");
    fc_cmd->add_option("--a", fc.a)->required();
    fc_cmd->add_option("--b", fc.b)->required();
    fc_cmd->add_option("--c", fc.c, "comma-separated")->required()->delimiter(',');
    fc_cmd->add_option("--x", fc.x, "comma-separated")->required()->delimiter(',');
    fc_cmd->add_option("--nmax", fc.nmax)->capture_default_str();
    fc_cmd->add_option("--tolerance", fc.tolerance)->capture_default_str();
    fc_cmd->add_option("--format", fc.format)->check(formats)->capture_default_str();

    laplace_options lc;
    auto* lc_cmd = app.add_subcommand("laplace-check", "random cross-check of the Laplace transform identity");
    lc_cmd->add_option("--count", lc.count)->check(CLI::PositiveNumber)->capture_default_str();
    lc_cmd->add_option("--seed", lc.seed)->capture_default_str();
    lc_cmd->add_option("--workers", lc.workers)->check(CLI::PositiveNumber)->capture_default_str();
    lc_cmd->add_option("--tolerance", lc.tolerance)->capture_default_str();
    lc_cmd->add_option("--format", lc.format)->check(formats)->capture_default_str();
    lc_cmd->add_flag("--timing", lc.timing);

    mc_options mc;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate of the return probability");
    mc_cmd->add_option("--d", mc.d)->required()->check(CLI::Range(1, 64));
    mc_cmd->add_option("--walks", mc.walks)->check(CLI::PositiveNumber)->capture_default_str();
    mc_cmd->add_option("--horizon", mc.horizon)->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62))->capture_default_str();
    mc_cmd->add_option("--seed", mc.seed)->capture_default_str();
    mc_cmd->add_option("--workers", mc.workers)->check(CLI::PositiveNumber)->capture_default_str();
    mc_cmd->add_option("--tolerance", mc.tolerance, "fail unless |p_hat - p(d)| is below this");
    mc_cmd->add_option("--format", mc.format)->check(formats)->capture_default_str();
    mc_cmd->add_flag("--timing", mc.timing);

    watson_options wa;
    auto* wa_cmd = app.add_subcommand("watson", "quasi-Monte-Carlo lattice Green function integral");
    wa_cmd->add_option("--d", wa.d)->required();
    wa_cmd->add_option("--samples", wa.samples)->check(CLI::PositiveNumber)->capture_default_str();
    wa_cmd->add_option("--seed", wa.seed)->capture_default_str();
    wa_cmd->add_flag("--normalize,!--no-normalize", wa.normalize, "apply the d/(2 pi)^d prefactor (default on)");
    wa_cmd->add_option("--tolerance", wa.tolerance, "fail unless |value - target| is below this");
    wa_cmd->add_option("--format", wa.format)->check(formats)->capture_default_str();
    wa_cmd->add_flag("--timing", wa.timing);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*pd_cmd)
            return run_pd(pd);
        if (*fc_cmd)
            return run_fc(fc);
        if (*lc_cmd)
            return run_laplace(lc);
        if (*mc_cmd)
            return run_mc(mc);
        return run_watson(wa);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const polya::divergence_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const polya::resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return exit_resource;
    } catch (const polya::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return exit_constraint;
    } catch (const polya::argument_error& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return exit_constraint;
    } catch (const polya::overflow_error& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return exit_constraint;
    }
}
