#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsobolev/builtins.hpp"
#include "gsobolev/function.hpp"
#include "gsobolev/quadrature.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace gsobolev;

namespace {

// Fourth-order central difference of g along coordinate i.
template <class G>
double fd(const G& g, Point x, int i, double h = 1e-3)
{
    auto at = [&](double s) {
        Point y = x;
        y[static_cast<std::size_t>(i)] += s;
        return g(y);
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

Point random_point(int d, std::mt19937_64& eng, double scale)
{
    std::normal_distribution<double> nd;
    Point x(static_cast<std::size_t>(d));
    for (auto& v : x)
        v = scale * nd(eng);
    return x;
}

// Checks every partial of order k+1 against a difference of the analytic
// order-k partial.
void check_partials(const FunctionRep& f, int max_k, const Point& x, double tol)
{
    const int d = f.dim();
    std::vector<MultiIndex> level{MultiIndex{}};
    for (int k = 0; k < max_k; ++k) {
        std::vector<MultiIndex> next;
        for (const auto& mi : level) {
            for (int j = 0; j < d; ++j) {
                const auto up = mi.plus(j);
                const double analytic = f.partial(up, x);
                const double numeric = fd([&](const Point& y) { return f.partial(mi, y); }, x, j);
                CHECK(std::abs(analytic - numeric) <= tol * (1.0 + std::abs(analytic)));
                if (k + 1 < max_k && (mi.order() == 0 || j >= mi[mi.order() - 1]))
                    next.push_back(up);
            }
        }
        level = next;
    }
}

} // namespace

TEST_CASE("set partitions follow the Bell numbers")
{
    const int bell[] = {1, 1, 2, 5, 15, 52, 203};
    for (int k = 0; k <= kMaxOrder; ++k)
        CHECK(set_partitions(k).size() == static_cast<std::size_t>(bell[k]));
}

TEST_CASE("smooth step: shape and derivative bounds")
{
    CHECK(smooth_step_unit(0.0) == 0.0);
    CHECK(smooth_step_unit(1.0) == 1.0);
    CHECK(smooth_step_unit(0.5) == doctest::Approx(0.5));
    CHECK(smooth_step_unit(-3.0) == 0.0);
    double d1max = 0, d2max = 0;
    std::array<double, kProfileOrder + 1> d{};
    for (int i = 1; i < 2000; ++i) {
        const double u = i / 2000.0;
        smooth_step_unit_derivatives(u, 2, d);
        d1max = std::max(d1max, std::abs(d[1]));
        d2max = std::max(d2max, std::abs(d[2]));
        // jet derivatives against differences of the closed form
        if (u > 0.02 && u < 0.98) {
            CHECK(d[1] == doctest::Approx(fd([](const Point& p) { return smooth_step_unit(p[0]); }, {u}, 0, 1e-4)).epsilon(1e-7));
        }
    }
    CHECK(d1max == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(d2max == doctest::Approx(9.84).epsilon(5e-3));
}

TEST_CASE("profiles: derivatives against differences")
{
    const ProfilePtr ps[] = {profile::gaussian(0.1, 0.3), profile::power(3), profile::exponential(-1.5),
                             profile::step_up(-0.2, 0.4), profile::step_down(0.1, 0.5), profile::reciprocal(),
                             profile::real_power(0.5)};
    for (const auto& p : ps) {
        for (double t : {0.13, 0.27, 0.35}) {
            std::array<double, kProfileOrder + 1> d{};
            p->eval(t, 4, d);
            for (int k = 0; k < 4; ++k) {
                const double num = fd([&](const Point& y) { return p->derivative(y[0], k); }, {t}, 0, 1e-4);
                CHECK(d[static_cast<std::size_t>(k + 1)] == doctest::Approx(num).epsilon(1e-6));
            }
        }
    }
    CHECK_THROWS_AS(profile::reciprocal()->value(0.0), std::domain_error);
}

TEST_CASE("monomials: exact partials")
{
    const auto f = builtin::monomial(4, {0, 0, 1}, 2.0); // 2 x1^2 x2
    const Point x{0.3, -0.7, 1.0, 2.0};
    CHECK(f(x) == doctest::Approx(2 * 0.09 * -0.7));
    CHECK(f.partial({0}, x) == doctest::Approx(4 * 0.3 * -0.7));
    CHECK(f.partial({0, 0}, x) == doctest::Approx(4 * -0.7));
    CHECK(f.partial({0, 1}, x) == doctest::Approx(4 * 0.3));
    CHECK(f.partial({0, 0, 0}, x) == 0.0);
    CHECK(f.partial({2}, x) == 0.0);
    CHECK(f.depends_on() == std::vector<int>{0, 1});
    CHECK_FALSE(f.bounded());
}

TEST_CASE("composite functions: analytic partials match differences")
{
    std::mt19937_64 eng(3);
    const int d = 5;
    const auto bump = builtin::radial_bump(d, {0.1, -0.05}, 0.1, 0.6);
    const auto gb = builtin::gaussian_bump(d, {0.05, 0.0, 0.1}, 0.3, 3);
    const auto prod = product(builtin::monomial(d, {0, 1}), gb);
    const auto sum = linear_combination({0.5, -2.0}, {bump, builtin::exp_coord(d, 2, 0.7)});
    const auto tr = translated(gb, 0.2);
    for (int rep = 0; rep < 4; ++rep) {
        const Point x = random_point(d, eng, 0.2);
        check_partials(bump, 3, x, 1e-6);
        check_partials(gb, 3, x, 1e-6);
        check_partials(prod, 3, x, 1e-6);
        check_partials(sum, 2, x, 1e-6);
        check_partials(tr, 2, x, 1e-6);
    }
}

TEST_CASE("value_gradient agrees with first partials")
{
    std::mt19937_64 eng(8);
    const int d = 6;
    const auto f = product(builtin::radial_bump(d, {}, 0.2, 0.7),
                           linear_combination({1.0, 0.3}, {builtin::monomial(d, {0, 2}), builtin::gaussian_bump(d, {}, 0.4, 2)}));
    std::vector<double> g(d);
    for (int rep = 0; rep < 5; ++rep) {
        const Point x = random_point(d, eng, 0.25);
        const double v = f.value_gradient(x, g);
        CHECK(v == doctest::Approx(f(x)).epsilon(1e-14));
        for (int i = 0; i < d; ++i)
            CHECK(g[static_cast<std::size_t>(i)] == doctest::Approx(f.partial({i}, x)).epsilon(1e-12));
    }
}

TEST_CASE("max_order and depends_on are enforced")
{
    const auto w = WeightSequence::standard(8);
    const auto s = builtin::sgn_sum(w, 3);
    const Point x(8, 0.1);
    CHECK(s.max_order() == 0);
    CHECK_THROWS_AS(s.partial({0}, x), std::domain_error);
    CHECK(s(x) == 1.0);
    CHECK(s(Point(8, 0.0)) == 0.0);
    CHECK(s.depends_on() == std::vector<int>{0, 1, 2});
    const auto b = builtin::gaussian_bump(8, {}, 0.3, 3);
    CHECK(b.partial({5}, x) == 0.0);
    CHECK(b.partial({0, 5}, x) == 0.0);
    CHECK_THROWS_AS(MultiIndex({0, 0, 0, 0, 0, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(b.partial({9}, x), std::invalid_argument);
    CHECK_THROWS_AS(dstar(builtin::indicator_halfspace(8), 0, w), std::domain_error);
}

TEST_CASE("declared support is honest")
{
    const int d = 8;
    const Point c{0.2, 0.1};
    const auto b = builtin::radial_bump(d, c, 0.1, 0.3);
    std::mt19937_64 eng(5);
    int outside = 0, nonzero = 0;
    while (outside < 10000) {
        const Point x = random_point(d, eng, 0.3);
        if (b.support().contains(x))
            continue;
        ++outside;
        nonzero += b(x) != 0.0;
    }
    CHECK(nonzero == 0);
}

TEST_CASE("dstar: closed form and adjoint identity by quadrature")
{
    const auto w = WeightSequence::standard(3);
    const auto mu = ProductGaussian::P(w);
    const auto phi = builtin::gaussian_bump(3, {0.05, -0.02, 0.0}, 0.2, 3);
    const auto ds = dstar(phi, 1, w);
    const Point x{0.1, 0.2, -0.05};
    CHECK(ds(x) == doctest::Approx(-phi.partial({1}, x) + x[1] / (w[1] * w[1]) * phi(x)).epsilon(1e-14));
    check_partials(ds, 2, x, 1e-6);

    // int D_i u phi dP == int u D*_i phi dP for smooth u
    const auto u = product(builtin::monomial(3, {0, 1}), builtin::exp_coord(3, 2, 0.5));
    for (int i = 0; i < 3; ++i) {
        const auto dsi = dstar(phi, i, w);
        const double lhs = quadrature_oracle([&](std::span<const double> y) { return u.partial({i}, y) * phi(y); }, mu, 40);
        const double rhs = quadrature_oracle([&](std::span<const double> y) { return u(y) * dsi(y); }, mu, 40);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
    const MultiIndex mi{0, 1};
    const auto chain = dstar_chain(phi, mi, w);
    const auto manual = dstar(dstar(phi, 0, w), 1, w);
    CHECK(chain(x) == manual(x));
    CHECK(chain.max_order() == kMaxOrder - 2);
    const double lhs = quadrature_oracle([&](std::span<const double> y) { return u.partial(mi, y) * phi(y); }, mu, 40);
    const double rhs = quadrature_oracle([&](std::span<const double> y) { return u(y) * chain(y); }, mu, 40);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("builtin registry")
{
    const auto w = WeightSequence::standard(8);
    const auto f = builtin::make("radial_bump:r1=0.1,r2=0.4,c1=0.2", w);
    CHECK(f.dim() == 8);
    CHECK(f(Point{0.2, 0, 0, 0, 0, 0, 0, 0}) == 1.0);
    CHECK(builtin::make("monomial:coords=1x2", w)(Point{2, 3, 0, 0, 0, 0, 0, 0}) == 6.0);
    CHECK_THROWS_AS(builtin::make("nope", w), std::invalid_argument);
    for (const auto& fam : builtin::families())
        CHECK_NOTHROW(builtin::make(fam, w));
}
