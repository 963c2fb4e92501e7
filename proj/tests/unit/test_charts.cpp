#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsobolev/builtins.hpp"
#include "gsobolev/charts.hpp"

#include <cmath>

using namespace gsobolev;

namespace {

Point unit(int d, int i, double s)
{
    Point p(static_cast<std::size_t>(d), 0.0);
    p[static_cast<std::size_t>(i)] = s;
    return p;
}

// translated unit ball through 0.1 e_{i+1}
BoundaryChart ball_chart(int d, int i)
{
    const auto w = WeightSequence::standard(d);
    return BoundaryChart::make(Domain::ball(unit(d, i, -0.9), 1.0), unit(d, i, 0.1), w);
}

BoundaryChart annulus_chart(int d)
{
    const auto w = WeightSequence::standard(d);
    return BoundaryChart::make(Domain::annulus(Point(static_cast<std::size_t>(d), 0.0), 0.3, 0.9), unit(d, 0, 0.3), w,
                               0.2, 0.18);
}

} // namespace

TEST_CASE("domains")
{
    const int d = 4;
    const auto H = Domain::half_space(d);
    CHECK(H.contains(Point{0.1, -5, 0, 0}));
    CHECK_FALSE(H.contains(Point{0.0, 1, 0, 0}));
    const auto B = Domain::ball(Point{0.5, 0, 0, 0}, 1.0);
    CHECK(B.g(Point{0.5, 0, 0, 0}) == doctest::Approx(1.0));
    CHECK(B.g(Point{1.5, 0, 0, 0}) == doctest::Approx(0.0));
    CHECK_FALSE(B.contains(Point{1.6, 0, 0, 0}));
    const auto A = Domain::annulus(Point(4, 0.0), 0.3, 0.9);
    CHECK_FALSE(A.contains(Point(4, 0.0)));
    CHECK(A.contains(Point{0.5, 0.1, 0, 0}));
    CHECK_FALSE(A.contains(Point{1.0, 0, 0, 0}));

    // closed-form derivatives against the composed function
    const Point x{0.3, -0.2, 0.4, 0.1};
    for (const Domain* D : {&H, &B, &A}) {
        const FunctionRep g = D->boundary_function();
        CHECK(g.value(x) == doctest::Approx(D->g(x)).epsilon(1e-13));
        std::vector<double> grad(d);
        D->g_gradient(x, grad);
        for (int i = 0; i < d; ++i) {
            CHECK(g.partial({i}, x) == doctest::Approx(grad[static_cast<std::size_t>(i)]).epsilon(1e-12));
            for (int j = 0; j < d; ++j)
                CHECK(g.partial({i, j}, x) == doctest::Approx(D->g_partial2(x, i, j)).epsilon(1e-12).scale(1.0));
        }
    }
    // inverse profile
    for (double s : {0.1, 0.2, 0.6, 0.7}) {
        const double v = A.profile(s, 0);
        CHECK(A.profile_inverse(v, s, 0) == doctest::Approx(s).epsilon(1e-12));
        CHECK(A.profile_inverse(v, s, 1) * A.profile(s, 1) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(B.profile_inverse(B.profile(s, 0), s, 0) == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("half-space chart is the identity")
{
    const int d = 6;
    const auto w = WeightSequence::standard(d);
    Point x0(d, 0.0);
    x0[2] = 0.3;
    const auto ch = BoundaryChart::make(Domain::half_space(d), x0, w, 0.5);
    CHECK(ch.i0() == 0);
    CHECK(ch.bounds().delta == doctest::Approx(std::max(1.5, 0.8 * 0.8 + w[0] * w[0])));
    for (const Point& x : ch.sample_ball(0.45, 200, {1, 0})) {
        const Point xh = ch.psi(x);
        CHECK(xh == x);
        CHECK(ch.tau(xh) == x);
        CHECK(ch.h(xh) == xh[0]);
        CHECK(ch.log_jacobian(xh) == 0.0);
        CHECK(ch.log_jacobian1(x) == 0.0);
    }
    const auto f = builtin::gaussian_bump(d, x0, 0.3, d);
    const auto c = change_of_variables_check(ch, f, McBudget{20000, {2, 0}});
    CHECK(c.lhs.value == c.rhs.value);
    CHECK(c.pass);
    const auto p0 = ch.sample_ball(0.3, 20, {3, 0});
    CHECK(chain_rule_check(ch, f, {0}, p0).max_rel_error <= 1e-8);
    const auto ne = norm_equivalence_check(ch, f, 1, 2.0, McBudget{20000, {4, 0}});
    CHECK(ne.norm_O.total == ne.norm_H.total);
    CHECK(ne.verdict);
    CHECK(ne.log_C_tilde >= 0.0);
}

TEST_CASE("ball chart: fixed point, inverse pair, Jacobians")
{
    const int d = 8;
    for (int i : {0, 1}) {
        const auto ch = ball_chart(d, i);
        INFO("pivot " << i);
        CHECK(ch.i0() == i);
        CHECK(ch.r0() == doctest::Approx(1.0 / 3.0));
        CHECK(ch.h(ch.psi(ch.x0())) == doctest::Approx(0.1).epsilon(1e-12));
        const auto jb = jacobian_bounds_check(ch, 1000, {5, 0});
        CHECK(jb.max_roundtrip <= 1e-8);
        CHECK(jb.max_product_error <= 1e-8);
        CHECK(jb.halfspace_transport);
        CHECK(jb.pass);
        CHECK(std::isfinite(ch.bounds().log_C2));
        CHECK(ch.bounds().dg_min > 0.0);
    }
}

TEST_CASE("h derivatives against finite differences")
{
    const int d = 5;
    for (const auto& ch : {ball_chart(d, 0), ball_chart(d, 2), annulus_chart(d)}) {
        for (const Point& x : ch.sample_ball(0.6 * ch.r1(), 10, {6, 0})) {
            const Point xh = ch.psi(x);
            const double e = 1e-5;
            for (int k = 0; k < d; ++k) {
                Point p = xh, m = xh;
                p[static_cast<std::size_t>(k)] += e;
                m[static_cast<std::size_t>(k)] -= e;
                CHECK(ch.h_partial(xh, k) == doctest::Approx((ch.h(p) - ch.h(m)) / (2 * e)).epsilon(1e-6).scale(1.0));
                for (int l = 0; l < d; ++l) {
                    const double fd = (ch.h_partial(p, l) - ch.h_partial(m, l)) / (2 * e);
                    CHECK(ch.h_partial2(xh, k, l) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
                }
            }
        }
    }
}

TEST_CASE("change of variables on ball and annulus charts")
{
    const int d = 8;
    const McBudget b{100000, {7, 0}};
    for (int i : {0, 1}) {
        const auto ch = ball_chart(d, i);
        const int other = i == 0 ? 1 : 0;
        for (const auto& f : {constant(d, 1.0), builtin::monomial(d, {other}),
                              builtin::gaussian_bump(d, ch.x0(), 0.2, d)}) {
            const auto c = change_of_variables_check(ch, f, b);
            INFO("pivot " << i << " " << f.name() << " lhs " << c.lhs.value << " rhs " << c.rhs.value << " +- "
                          << c.difference.std_error);
            CHECK(c.pass);
            CHECK(c.acceptance > 0.05);
        }
    }
    const auto ca = annulus_chart(d);
    const auto c = change_of_variables_check(ca, constant(d, 1.0), b);
    INFO("annulus lhs " << c.lhs.value << " rhs " << c.rhs.value << " +- " << c.difference.std_error);
    CHECK(c.pass);
    CHECK(jacobian_bounds_check(ca, 1000, {8, 0}).pass);

    // B_1 about the origin puts almost no mass in any chart ball
    const auto w = WeightSequence::standard(d);
    const auto deg = BoundaryChart::make(Domain::ball(Point(d, 0.0), 1.0), unit(d, 0, 1.0), w);
    CHECK_THROWS_AS(change_of_variables_check(deg, constant(d, 1.0), McBudget{20000, {9, 0}}), std::runtime_error);
}

TEST_CASE("chain rule through tau")
{
    const int d = 6;
    for (const auto& ch : {ball_chart(d, 0), ball_chart(d, 1), annulus_chart(d)}) {
        Point c = ch.x0();
        c[2] += 0.05;
        const auto f = builtin::gaussian_bump(d, c, 0.3, d) + builtin::monomial(d, {0, 1});
        const auto probes = ch.sample_ball(0.7 * ch.r1(), 20, {10, 0});
        std::vector<Point> hat;
        for (const Point& x : probes)
            hat.push_back(ch.psi(x));
        for (int k = 0; k < d; ++k) {
            const auto r1 = chain_rule_check(ch, f, {k}, hat);
            CHECK(r1.used == hat.size());
            CHECK(r1.max_rel_error <= 1e-5);
        }
        for (const MultiIndex& mi : {MultiIndex{0, 0}, MultiIndex{0, 1}, MultiIndex{1, 1}, MultiIndex{2, 3}})
            CHECK(chain_rule_check(ch, f, mi, hat).max_rel_error <= 1e-4);
        // composing back through psi recovers f on U0
        const auto back = ch.compose_psi(ch.compose_tau(f));
        for (const Point& x : probes) {
            CHECK(back.value(x) == doctest::Approx(f.value(x)).epsilon(1e-10));
            for (int k = 0; k < d; ++k) {
                CHECK(back.partial({k}, x) == doctest::Approx(f.partial({k}, x)).epsilon(1e-8).scale(1.0));
                CHECK(back.partial({k, 1}, x) == doctest::Approx(f.partial({k, 1}, x)).epsilon(1e-7).scale(1.0));
            }
        }
    }
}

TEST_CASE("norm equivalence with the computed constant")
{
    const int d = 8;
    const auto ch = ball_chart(d, 0);
    const auto f = builtin::radial_bump(d, ch.x0(), 0.05, 0.2);
    const McBudget b{20000, {11, 0}};
    const auto r = norm_equivalence_check(ch, f, 1, 2.0, b);
    CHECK(r.upper);
    CHECK(r.lower);
    CHECK(r.norm_O.total > 0.0);
    CHECK(r.norm_H.total > 0.0);
    const auto r10 = norm_equivalence_check(ch, 10.0 * f, 1, 2.0, b);
    CHECK(r10.norm_O.total == doctest::Approx(10 * r.norm_O.total).epsilon(1e-12));
    CHECK(r10.norm_H.total / r10.norm_O.total == doctest::Approx(r.norm_H.total / r.norm_O.total).epsilon(1e-12));
    CHECK(norm_equivalence_check(ch, f, 2, 2.0, McBudget{5000, {12, 0}}).verdict);
}

TEST_CASE("half-space extension")
{
    const int d = 8;
    const auto w = WeightSequence::standard(d);
    const auto H = Domain::half_space(d);
    const Point x0(d, 0.0);
    const auto zero = halfspace_extend(constant(d, 0.0), H, x0, 0.5, 0.8);
    CHECK(zero.value(Point(d, 0.1)) == 0.0);

    const auto f = builtin::radial_bump(d, x0, 0.1, 0.4);
    const auto ext = halfspace_extend(f, H, x0, 0.5, 0.8);
    Point in(d, 0.0), out(d, 0.0);
    in[0] = 0.1;
    out[0] = -0.1;
    CHECK(ext.value(in) == f.value(in));
    CHECK(ext.value(out) == 0.0);
    const auto tests = halfspace_tests(standard_test_battery(d), 0.02);
    const Region hs = H.region();
    for (int i : {0, 1, 3}) {
        const auto res = weak_derivative_residual(ext, derivative(ext, {i}), {i}, tests, w, hs, McBudget{20000, {13, 0}});
        CHECK(res.all_pass);
    }
    CHECK_THROWS_AS(halfspace_extend(builtin::radial_bump(d, x0, 0.1, 0.55), H, x0, 0.5, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(halfspace_extend(f, H, Point(d, 0.1), 0.5, 0.8), std::invalid_argument);
    // B_r2(x0) cap H must lie in O
    const auto B = Domain::ball(Point(d, 0.0), 0.6);
    CHECK_THROWS_AS(halfspace_extend(f, B, x0, 0.5, 0.8), std::invalid_argument);
}

TEST_CASE("annulus is not convex")
{
    const auto A = Domain::annulus(Point(6, 0.0), 0.3, 0.9);
    const auto wit = annulus_nonconvexity(A);
    CHECK(wit.plus[0] == doctest::Approx(0.6));
    CHECK(wit.pass);
    CHECK_THROWS_AS(annulus_nonconvexity(Domain::half_space(6)), std::invalid_argument);
}

TEST_CASE("chart preconditions")
{
    const int d = 4;
    const auto w = WeightSequence::standard(d);
    const auto B = Domain::ball(Point(d, 0.0), 1.0);
    CHECK_THROWS_AS(BoundaryChart::make(B, unit(d, 0, 0.9), w), std::invalid_argument);
    CHECK_THROWS_AS(BoundaryChart::make(B, unit(d, 0, 1.0), w, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(BoundaryChart::make(B, unit(d, 0, 1.0), w, 0.3, 0.3), std::invalid_argument);
    const auto A = Domain::annulus(Point(d, 0.0), 0.3, 0.9);
    CHECK_THROWS_AS(BoundaryChart::make(A, unit(d, 0, 0.3), w, 0.31), std::invalid_argument);
    CHECK_THROWS_AS(BoundaryChart::make(A, unit(d, 0, 0.9), w, 0.27), std::invalid_argument);
    CHECK_NOTHROW(BoundaryChart::make(A, unit(d, 0, 0.9), w, 0.2));
    const auto ch = BoundaryChart::make(B, unit(d, 0, 1.0), w);
    CHECK_THROWS_AS(ch.tau(Point{5.0, 0, 0, 0}), std::domain_error);
    CHECK_FALSE(ch.in_psi_U0(Point{0.0, 0.9, 0, 0}));
}
