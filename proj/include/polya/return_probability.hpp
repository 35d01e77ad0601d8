#ifndef POLYA_RETURN_PROBABILITY_HPP
#define POLYA_RETURN_PROBABILITY_HPP

#include <string>

#include "errors.hpp"
#include "quad.hpp"
#include "series.hpp"
#include "specfun.hpp"

namespace polya::series {

enum class method
{
    series,
    quadrature,
    gamma_product // closed form, d = 3 only
};

inline const char* method_name(method m) noexcept
{
    switch (m) {
    case method::series: return "series";
    case method::quadrature: return "quad";
    case method::gamma_product: return "gamma";
    }
    return "?";
}

struct return_probability_result
{
    int d = 0;
    double p = 0;
    method how = method::series;
    double u = 0;
    double error_estimate = 0; // on p, propagated from u as err(u)/u^2
};

// p(d) = 1 - 1/u(d).
inline return_probability_result return_probability(int d, method how,
                                                    const series_config& scfg = {},
                                                    const quad::quadrature_config& qcfg = {})
{
    require_transient_dimension(d);
    double u = 0, u_err = 0;
    switch (how) {
    case method::series: {
        const auto v = u_series(d, scfg);
        u = v.value;
        u_err = v.error_estimate;
        break;
    }
    case method::quadrature: {
        const auto v = quad::u_quadrature(d, qcfg);
        u = v.value;
        u_err = v.error_estimate;
        break;
    }
    case method::gamma_product:
        if (d != 3)
            throw argument_error("gamma_product is only available for d = 3 (got d = " + std::to_string(d) + ")");
        u = specfun::gamma_product_u3();
        u_err = 4e-16 * u;
        break;
    }
    return {d, 1 - 1 / u, how, u, u_err / (u * u)};
}

} // namespace polya::series

#endif
