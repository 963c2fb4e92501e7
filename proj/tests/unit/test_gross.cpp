#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsobolev/builtins.hpp"
#include "gsobolev/gross.hpp"
#include "gsobolev/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace gsobolev;

TEST_CASE("closed forms")
{
    CHECK(sharpness_closed_form(1, 2.0) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
    CHECK(sharpness_closed_form(4, 2.0) == doctest::Approx(0.636620).epsilon(1e-6));
    CHECK(sharpness_closed_form(4, 1.0) == doctest::Approx(1.595769).epsilon(1e-6));
    CHECK(sharpness_closed_form(4, 3.0) == doctest::Approx(8.0 / std::pow(2 * std::numbers::pi, 1.5) / 2.0).epsilon(1e-14));
    CHECK(sharpness_closed_form(4, 3.0) == doctest::Approx(0.253975).epsilon(1e-6));
    CHECK(sharpness_closed_form(16, 1.0) / sharpness_closed_form(4, 1.0) == doctest::Approx(2.0));
    CHECK(sharpness_closed_form(1, 2.0, 1.0) == doctest::Approx(2.0 / std::numbers::pi * std::exp(-1.0)));
    CHECK_THROWS_AS(sharpness_closed_form(0, 2.0), std::invalid_argument);
}

TEST_CASE("constant and indicator convolutions")
{
    const auto w = WeightSequence::standard(8);
    const Point x0(8, 0.0);
    const McBudget b{100000, {1, 0}};
    const auto one = gross_gradient(constant(8, 1.0), x0, w, b);
    CHECK(one.value.value == 1.0);
    for (const auto& g : one.grad)
        CHECK(std::abs(g.value) <= 4 * g.std_error);

    const auto chi = builtin::indicator_halfspace(8);
    const auto c = gross_gradient(chi, x0, w, b);
    CHECK(std::abs(c.value.value - 0.5) <= 4 * c.value.std_error);
    const double d1 = 1.0 / (w[0] * std::sqrt(2 * std::numbers::pi));
    CHECK(std::abs(c.grad[0].value - d1) <= 4 * c.grad[0].std_error);
    for (int i = 1; i < 8; ++i)
        CHECK(std::abs(c.grad[static_cast<std::size_t>(i)].value) <= 4 * c.grad[static_cast<std::size_t>(i)].std_error);
    CHECK(hs_bound_check(chi, x0, w, b).pass);
}

TEST_CASE("sgn(x1/a1): folded moment")
{
    const auto w = WeightSequence::standard(8);
    const auto f = builtin::sgn_sum(w, 1);
    const auto c = gross_gradient(f, Point(8, 0.0), w, McBudget{200000, {2, 0}});
    const double exact = std::sqrt(2.0 / std::numbers::pi) / w[0];
    CHECK(exact == doctest::Approx(3.1915).epsilon(1e-4));
    CHECK(std::abs(c.grad[0].value - exact) <= 4 * c.grad[0].std_error);
    const auto hs = hs_bound_check(builtin::sgn_sum(w, 4), Point(8, 0.0), w, McBudget{100000, {2, 0}});
    CHECK(hs.pass);
    CHECK(std::abs(hs.lhs.value - 2.0 / std::numbers::pi) <= 4 * hs.lhs.std_error);
    CHECK(hs.rhs.value == 1.0);
}

TEST_CASE("smooth bump: value and gradient against quadrature")
{
    const auto w = WeightSequence::standard(3);
    const auto mu = ProductGaussian::P(w);
    const auto f = builtin::gaussian_bump(3, {0.05, -0.1, 0.02}, 0.2, 3);
    const Point x{0.1, -0.05, 0.03};
    const auto c = gross_gradient(f, x, w, McBudget{200000, {3, 0}});
    auto shifted = [&](std::span<const double> y) {
        Point z{x[0] + y[0], x[1] + y[1], x[2] + y[2]};
        return z;
    };
    const double q0 = quadrature_oracle([&](std::span<const double> y) { return f(shifted(y)); }, mu, 40);
    CHECK(std::abs(c.value.value - q0) <= 4 * c.value.std_error);
    CHECK(gross_value(f, x, w, McBudget{200000, {3, 0}}).value == c.value.value);
    for (int i = 0; i < 3; ++i) {
        const double qi = quadrature_oracle([&](std::span<const double> y) { return f.partial({i}, shifted(y)); }, mu, 40);
        CHECK(std::abs(c.grad[static_cast<std::size_t>(i)].value - qi) <= 4 * c.grad[static_cast<std::size_t>(i)].std_error);
    }
}

TEST_CASE("unbounded functions are rejected")
{
    const auto w = WeightSequence::standard(4);
    CHECK_THROWS_AS(gross_value(builtin::monomial(4, {0}), Point(4, 0.0), w, McBudget{10, {}}), std::invalid_argument);
    CHECK_THROWS_AS(gross_gradient(builtin::exp_coord(4, 0, 1.0), Point(4, 0.0), w, McBudget{10, {}}), std::invalid_argument);
}

TEST_CASE("sharpness at p = 2 is n-invariant")
{
    const auto w = WeightSequence::standard(16);
    const auto rows = sharpness_experiment({1, 4, 16}, {1.0, 2.0}, w, McBudget{100000, {4, 0}});
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
        CHECK(std::abs(r.mc.value - r.closed_form) <= 4 * r.mc.std_error);
        if (r.p == 2.0)
            CHECK(r.closed_form == doctest::Approx(2.0 / std::numbers::pi));
    }
    CHECK(rows[5].ratio_to_prev_n == doctest::Approx(1.0).epsilon(0.05));
    CHECK_THROWS_AS(sharpness_experiment({17}, {1.0}, w, McBudget{10, {}}), std::invalid_argument);
}

TEST_CASE("sharpness at random points uses the shifted closed form")
{
    const auto w = WeightSequence::standard(8);
    const auto rows = sharpness_experiment({4}, {1.0}, w, McBudget{100000, {5, 0}}, 3);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows)
        CHECK(std::abs(r.mc.value - r.closed_form) <= 4 * r.mc.std_error);
}

TEST_CASE("law of large numbers collapse")
{
    const auto w = WeightSequence::standard(16);
    const auto rows = lln_collapse_check({1, 4, 16}, w, McBudget{100000, {6, 0}});
    for (const auto& r : rows)
        CHECK(r.pass);
    CHECK(rows[2].exp_factor.value > rows[0].exp_factor.value);
}
