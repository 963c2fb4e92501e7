#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsobolev/builtins.hpp"
#include "gsobolev/quadrature.hpp"
#include "gsobolev/sobolev.hpp"

#include <cmath>
#include <random>

using namespace gsobolev;

TEST_CASE("norm of x1 in W^{1,2} is sqrt(2) a_1")
{
    const auto w = WeightSequence::standard(8);
    const auto f = builtin::monomial(8, {0});
    const auto r = sobolev_norm(f, 1, 2.0, w, {}, McBudget{40000, {1, 0}});
    CHECK(std::abs(r.per_order[0] - 0.0625) <= 4 * r.per_order_stderr[0]);
    CHECK(r.per_order[1] == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(std::abs(r.total - std::sqrt(0.125)) <= 4 * r.estimator_error);
}

TEST_CASE("norm of a gaussian bump against the closed form")
{
    // int exp(-x^2/w^2) dN(0,s^2) = (1 + 2 s^2/w^2)^{-1/2}
    const auto w = WeightSequence::standard(6);
    const double wd = 0.3;
    const auto f = builtin::gaussian_bump(6, {}, wd, 2);
    const auto r = sobolev_norm(f, 0, 2.0, w, {}, McBudget{50000, {2, 0}});
    const double exact = 1.0 / std::sqrt((1 + 2 * w[0] * w[0] / (wd * wd)) * (1 + 2 * w[1] * w[1] / (wd * wd)));
    CHECK(std::abs(r.per_order[0] - exact) <= 4 * r.per_order_stderr[0]);
}

TEST_CASE("norm against tensor quadrature in low dimension")
{
    const auto w = WeightSequence::standard(3);
    const auto f = product(builtin::monomial(3, {0, 1}), builtin::gaussian_bump(3, {0.1}, 0.4, 3));
    const auto mu = ProductGaussian::P(w);
    for (double p : {2.0, 4.0}) {
        const auto r = sobolev_norm(f, 2, p, w, {}, McBudget{40000, {3, 0}});
        for (int k = 0; k <= 2; ++k) {
            const double q = quadrature_oracle(
                [&](std::span<const double> x) {
                    double s = 0.0;
                    if (k == 0)
                        return std::pow(std::abs(f(x)), p);
                    for (int i = 0; i < 3; ++i) {
                        if (k == 1) {
                            s += std::pow(w[i] * std::abs(f.partial({i}, x)), p);
                            continue;
                        }
                        for (int j = 0; j < 3; ++j)
                            s += std::pow(w[i] * w[j] * std::abs(f.partial({i, j}, x)), p);
                    }
                    return s;
                },
                mu, 40);
            CHECK(std::abs(r.per_order[static_cast<std::size_t>(k)] - q) <= 4 * r.per_order_stderr[static_cast<std::size_t>(k)] + 1e-12);
        }
    }
}

TEST_CASE("symmetric collapse equals the full tuple sum")
{
    const int d = 4;
    const auto w = WeightSequence::standard(d);
    const auto f = builtin::radial_bump(d, {0.05, 0.02}, 0.1, 0.5);
    const Point x{0.1, -0.2, 0.05, 0.1};
    for (int k : {3, 4}) {
        for (double q : {1.0, 2.0}) {
            double brute = 0.0;
            std::vector<int> idx(static_cast<std::size_t>(k), 0);
            while (true) {
                double a = 1.0;
                for (int i : idx)
                    a *= w[i];
                brute += std::pow(a * std::abs(f.partial(MultiIndex(std::span<const int>(idx)), x)), q);
                int j = 0;
                while (j < k && ++idx[static_cast<std::size_t>(j)] == d)
                    idx[static_cast<std::size_t>(j++)] = 0;
                if (j == k)
                    break;
            }
            CHECK(weighted_derivative_sum(f, k, q, w, x) == doctest::Approx(brute).epsilon(1e-12));
        }
    }
}

TEST_CASE("homogeneity and triangle inequality on shared samples")
{
    const auto w = WeightSequence::standard(8);
    const auto f = builtin::radial_bump(8, {0.1}, 0.1, 0.5);
    const auto g = product(builtin::monomial(8, {1}), builtin::gaussian_bump(8, {}, 0.3, 3));
    const McBudget b{5000, {4, 0}};
    for (double p : {1.0, 2.0, 3.5}) {
        const double nf = sobolev_norm(f, 2, p, w, {}, b).total;
        const double ng = sobolev_norm(g, 2, p, w, {}, b).total;
        CHECK(sobolev_norm(-2.5 * f, 2, p, w, {}, b).total == doctest::Approx(2.5 * nf).epsilon(1e-12));
        CHECK(sobolev_norm(f + g, 2, p, w, {}, b).total <= nf + ng + 1e-12);
    }
}

TEST_CASE("order beyond max_order is refused")
{
    const auto w = WeightSequence::standard(8);
    CHECK_THROWS_AS(sobolev_norm(builtin::sgn_sum(w, 2), 1, 2.0, w, {}, McBudget{100, {}}), std::domain_error);
    CHECK_THROWS_AS(sobolev_norm(builtin::monomial(8, {0}), 1, 0.5, w, {}, McBudget{100, {}}), std::invalid_argument);
}

TEST_CASE("region restricts the integral")
{
    const auto w = WeightSequence::standard(4);
    const auto f = constant(4, 1.0);
    const auto r = sobolev_norm(f, 0, 1.0, w, [](std::span<const double> x) { return x[0] > 0; }, McBudget{40000, {6, 0}});
    CHECK(std::abs(r.total - 0.5) <= 4 * r.estimator_error);
}

TEST_CASE("winf norm of x1 on probes")
{
    const auto w = WeightSequence::standard(4);
    const auto f = builtin::monomial(4, {0});
    const std::vector<Point> probes{{0.1, 0, 0, 0}, {-0.4, 0.2, 0, 0}, {5, 0, 0, 0}};
    CHECK(winf_norm(f, 1, w, {}, probes) == doctest::Approx(5.0));
    CHECK(winf_norm(f, 1, w, [](std::span<const double> x) { return x[0] < 1; }, probes) == doctest::Approx(0.4));
    CHECK(winf_norm(f, 1, w, [](std::span<const double> x) { return std::abs(x[0]) < 0.05; },
                    {{0.01, 0, 0, 0}}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(winf_norm(f, 1, w, [](std::span<const double>) { return false; }, probes), std::invalid_argument);
}

TEST_CASE("weak derivative residuals separate true and perturbed derivatives")
{
    const int d = 4;
    const auto w = WeightSequence::standard(d);
    const auto tests = standard_test_battery(d);
    REQUIRE(tests.size() == 12);
    const auto f = product(builtin::monomial(d, {0}), builtin::gaussian_bump(d, {}, 0.4, 2));
    const McBudget b{50000, {8, 0}};
    for (const MultiIndex mi : {MultiIndex{0}, MultiIndex{1}, MultiIndex{0, 1}}) {
        const auto g = derivative(f, mi);
        CHECK(weak_derivative_residual(f, g, mi, tests, w, {}, b).all_pass);
        CHECK_FALSE(weak_derivative_residual(f, g + constant(d, 0.1), mi, tests, w, {}, b).all_pass);
    }
}

TEST_CASE("translation pushforward identity")
{
    const auto w = WeightSequence::standard(6);
    const auto f = builtin::gaussian_bump(6, {0.1, 0.05}, 0.25, 3);
    for (double t : {0.1, 0.25, -0.25}) {
        const auto c = translation_pushforward_check(f, t, 2.0, w, McBudget{40000, {9, 0}});
        CHECK(c.pass);
    }
    CHECK_THROWS_AS(translation_pushforward_check(f, 2.0, 2.0, w, McBudget{100, {}}), std::invalid_argument);
}

TEST_CASE("translation norm ratio")
{
    const auto w = WeightSequence::standard(6);
    const auto u = builtin::gaussian_bump(6, {0.1}, 0.15, 1);
    const auto r0 = translation_norm_ratio(u, 0.0, 2.0, w, McBudget{2000, {1, 1}});
    CHECK(r0.value == 1.0);
    // int exp(-(x - mu)^2/wd^2) dN(0, a^2) = (1 + 2a^2/wd^2)^{-1/2} exp(-mu^2/(wd^2 + 2a^2))
    const double a = w[0], wd = 0.15, t = 0.25;
    auto sq = [&](double mu) { return std::exp(-mu * mu / (wd * wd + 2 * a * a)); };
    double prev = 0.0;
    for (double c : {-0.3, 0.0, 0.3}) {
        const auto r = translation_norm_ratio(builtin::gaussian_bump(6, {c}, wd, 1), t, 2.0, w, McBudget{40000, {1, 1}}, 0);
        const double exact = std::sqrt(sq(c - t) / sq(c));
        CHECK(std::abs(r.value - exact) <= 4 * r.std_error);
        CHECK(r.value > prev);
        prev = r.value;
    }
}

TEST_CASE("Bogachev comparison directions")
{
    const auto w = WeightSequence::standard(8);
    const auto f = product(builtin::radial_bump(8, {}, 0.1, 0.6), builtin::monomial(8, {0}) + constant(8, 0.5));
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
        const auto c = bogachev_norm_compare(f, 2, p, w, McBudget{10000, {10, 0}});
        CHECK(c.verdict);
        if (p <= 2.0)
            CHECK(c.mixed_inside.value <= c.intermediate.value + 1e-12);
    }
    const auto c2 = bogachev_norm_compare(f, 1, 2.0, w, McBudget{10000, {10, 0}});
    CHECK(c2.mixed_inside.value == doctest::Approx(c2.intermediate.value).epsilon(1e-12));
}
