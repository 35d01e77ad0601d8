#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "polya/laplace.hpp"
#include "polya/quad.hpp"
#include "polya/rng.hpp"
#include "polya/series.hpp"
#include "reference_values.hpp"

namespace pl = polya::laplace;
namespace ref = polya::reference;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

pl::laplace_spec symmetric(int d, double p)
{
    return {0, std::vector<double>(d, 0.0), std::vector<double>(d, 1.0 / d), p};
}

template <class F>
pl::constraint violated(F&& f)
{
    try {
        f();
    } catch (const pl::constraint_error& e) {
        return e.which();
    }
    ADD_FAILURE() << "no constraint error";
    return pl::constraint::boundary_case;
}

} // namespace

TEST(LaplaceRhs, ClassicalTransformOfI0)
{
    // L_p[I0(a x)] = 1/sqrt(p^2 - a^2).
    for (double a : {0.1, 0.3, 0.7}) {
        for (double p : {1.0, 1.5}) {
            const pl::laplace_spec s{0, {0}, {a}, p};
            const double expected = 1 / std::sqrt(p * p - a * a);
            EXPECT_LT(rel(pl::laplace_rhs(s), expected), 1e-12) << a << " " << p;
            EXPECT_LT(rel(pl::laplace_lhs(s).value, expected), 1e-11) << a << " " << p;
        }
    }
}

TEST(LaplaceRhs, ZeroScaleGivesGammaIntegral)
{
    for (double lambda : {-0.5, 0.0, 1.3, 2.0}) {
        const pl::laplace_spec s{lambda, {0, 0}, {0, 0}, 1.7};
        const double expected = std::exp(std::lgamma(lambda + 1) - (lambda + 1) * std::log(1.7));
        EXPECT_LT(rel(pl::laplace_rhs(s), expected), 1e-14) << lambda;
    }
    const pl::laplace_spec two{2, {0}, {0}, 2.0};
    EXPECT_LT(rel(pl::laplace_rhs(two), 2 / 8.0), 1e-15);
    EXPECT_LT(rel(pl::laplace_lhs(two).value, 2 / 8.0), 1e-12);
}

TEST(LaplaceRhs, VanishingFactor)
{
    const pl::laplace_spec s{0.5, {1.5, 0}, {0, 0.2}, 1.0};
    EXPECT_EQ(pl::laplace_rhs(s), 0.0);
    EXPECT_EQ(pl::laplace_lhs(s).value, 0.0);
}

TEST(LaplaceRhs, SpecialisationReproducesU)
{
    for (int d = 3; d <= 10; ++d) {
        const double rhs = pl::laplace_rhs(symmetric(d, 1.0));
        EXPECT_LT(rel(rhs, polya::series::u_series(d).value), 1e-10) << d;
        EXPECT_LT(rel(rhs, ref::u_by_dimension[d]), 1e-9) << d;
    }
}

TEST(LaplaceRhs, Homogeneity)
{
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto s = pl::random_spec(77, i);
        for (double k : {0.37, 2.9}) {
            auto t = s;
            for (double& a : t.a)
                a *= k;
            t.p *= k;
            EXPECT_LT(rel(pl::laplace_rhs(t), std::pow(k, -(s.lambda + 1)) * pl::laplace_rhs(s)), 1e-11)
                << i << " " << k;
        }
    }
}

TEST(LaplaceRhs, DimensionCollapse)
{
    const pl::laplace_spec small{0.7, {0.4, 1.2}, {0.3, 0.5}, 1.4};
    const pl::laplace_spec extended{0.7, {0.4, 1.2, 0.0}, {0.3, 0.5, 1e-8}, 1.4};
    EXPECT_LT(rel(pl::laplace_rhs(extended), pl::laplace_rhs(small)), 1e-6);
    EXPECT_LT(rel(pl::laplace_lhs(extended).value, pl::laplace_lhs(small).value), 1e-6);
}

TEST(LaplaceLhs, CrossRouteAtThree)
{
    const auto s = symmetric(3, 1.2);
    const auto lhs = pl::laplace_lhs(s);
    const double rhs = pl::laplace_rhs(s);
    EXPECT_LT(rel(lhs.value, rhs), 1e-8);
    EXPECT_EQ(lhs.value, lhs.finite_part + lhs.tail_part);
    EXPECT_GE(lhs.error_estimate, 0.0);
}

TEST(LaplaceLhs, SingularOriginBehaviour)
{
    // lambda + nu close to -1: the integrand blows up like x^-0.95 at the origin.
    const pl::laplace_spec s{-0.45, {-0.5}, {0.6}, 1.3};
    EXPECT_LT(rel(pl::laplace_lhs(s).value, pl::laplace_rhs(s)), 1e-9);
    // I_{-1/2}(x) = sqrt(2/(pi x)) cosh x, so the transform is
    // sqrt(2/(pi a)) Gamma(0.05)/2 [(p-a)^-0.05 + (p+a)^-0.05].
    const double expected = std::sqrt(2 / (std::numbers::pi * 0.6)) * std::tgamma(0.05) / 2
                            * (std::pow(0.7, -0.05) + std::pow(1.9, -0.05));
    EXPECT_LT(rel(pl::laplace_rhs(s), expected), 1e-10);
}

TEST(LaplaceConstraints, NamedViolations)
{
    EXPECT_EQ(violated([] { pl::laplace_rhs({0, {-1.0}, {0.2}, 1}); }), pl::constraint::order_bound);
    EXPECT_EQ(violated([] { pl::laplace_rhs({-0.8, {-0.5}, {0.2}, 1}); }), pl::constraint::exponent_bound);
    EXPECT_EQ(violated([] { pl::laplace_rhs({0, {0, 0}, {0.6, 0.5}, 1}); }), pl::constraint::convergence_bound);
    // Boundary is fine on the series side when lambda < d/2 - 1, but not for quadrature.
    EXPECT_NO_THROW(pl::laplace_rhs(symmetric(3, 1.0)));
    EXPECT_EQ(violated([] { pl::laplace_lhs(symmetric(3, 1.0)); }), pl::constraint::boundary_case);
    EXPECT_EQ(violated([] { pl::laplace_rhs({0.5, {0, 0, 0}, {0.5, 0.25, 0.25}, 1}); }),
              pl::constraint::convergence_bound);
    EXPECT_THROW(pl::laplace_rhs({0, {0, 0}, {0.1}, 1}), polya::argument_error);
    EXPECT_THROW(pl::laplace_rhs({0, {}, {}, 1}), polya::argument_error);
}

TEST(LaplaceConstraints, RandomViolatorsAreRejected)
{
    polya::rng::philox_stream gen(99, 0);
    auto u = [&](double lo, double hi) { return lo + (hi - lo) * gen.uniform(); };
    for (int i = 0; i < 60; ++i) {
        auto s = pl::random_spec(5, static_cast<std::uint64_t>(i));
        switch (i % 3) {
        case 0:
            s.nu[0] = u(-3, -1);
            EXPECT_EQ(violated([&] { pl::laplace_rhs(s); }), pl::constraint::order_bound);
            break;
        case 1:
            s.lambda = -1 - s.order_sum() - u(0, 1);
            EXPECT_EQ(violated([&] { pl::laplace_lhs(s); }), pl::constraint::exponent_bound);
            break;
        default:
            s.p = s.scale_sum() * u(0.1, 0.99);
            EXPECT_EQ(violated([&] { pl::laplace_rhs(s); }), pl::constraint::convergence_bound);
        }
    }
}

TEST(VerifyLemma, FiftySeededSpecs)
{
    const auto r = pl::verify_lemma1(50, 1);
    ASSERT_EQ(r.checks.size(), 50u);
    EXPECT_LT(r.max_rel_diff, 1e-6);
    EXPECT_LE(r.mean_rel_diff, r.max_rel_diff);
    for (const auto& c : r.checks) {
        EXPECT_GE(c.spec.p, 1.1 * c.spec.scale_sum() * (1 - 1e-15));
        EXPECT_GE(c.spec.dimension(), 1);
        EXPECT_LE(c.spec.dimension(), 4);
        EXPECT_GT(c.spec.lambda + c.spec.order_sum(), -1);
    }
}

TEST(VerifyLemma, DeterministicAcrossWorkers)
{
    const auto one = pl::verify_lemma1(12, 9, 1);
    const auto three = pl::verify_lemma1(12, 9, 3);
    EXPECT_EQ(one.max_rel_diff, three.max_rel_diff);
    EXPECT_EQ(one.mean_rel_diff, three.mean_rel_diff);
    for (std::size_t i = 0; i < 12; ++i)
        EXPECT_EQ(one.checks[i].lhs, three.checks[i].lhs);
}

TEST(VerifyLemma, ZeroCountRejected)
{
    EXPECT_THROW(pl::verify_lemma1(0, 1), polya::argument_error);
}

TEST(VerifyLemma, SymmetricThreeDimensionalPoint)
{
    // At the symmetric point p = sum a_j only the series side is defined; it
    // must meet both u(3) routes.
    const double rhs = pl::laplace_rhs(symmetric(3, 1.0));
    EXPECT_LT(rel(rhs, polya::series::u_series(3).value), 1e-10);
    EXPECT_LT(rel(rhs, polya::quad::u_quadrature(3).value), 1e-9);
    EXPECT_LT(rel(rhs, polya::specfun::gamma_product_u3()), 1e-9);
}
