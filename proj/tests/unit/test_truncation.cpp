#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsobolev/builtins.hpp"
#include "gsobolev/truncation.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace gsobolev;

namespace {

double Phi(double z)
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double phi(double z)
{
    return std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
}

// g_m(x) in d = 2 by a 1D integral over y_1 (composite Simpson).
double g2_oracle(const WeightSequence& w, double m, double x1, double x2)
{
    const double c1 = std::sqrt(w[0]), c2 = std::sqrt(w[1]);
    const double s1 = std::sqrt(w[0]), s2 = std::sqrt(w[1]);
    const double half = m * std::sqrt(c1);
    const double lo = -half - x1, hi = half - x1;
    const int n = 20000;
    const double h = (hi - lo) / n;
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double y1 = lo + k * h;
        const double u = x1 + y1;
        const double r = std::sqrt(std::max(0.0, c2 * (m * m - u * u / c1)));
        const double v = phi(y1 / s1) / s1 * (Phi((r - x2) / s2) - Phi((-r - x2) / s2));
        s += v * (k == 0 || k == n ? 1.0 : (k % 2 ? 4.0 : 2.0));
    }
    return s * h / 3.0;
}

} // namespace

TEST_CASE("compact family")
{
    const auto w = WeightSequence::standard(4);
    const CompactFamily K(w);
    CHECK(K.c()[0] == doctest::Approx(0.5));
    CHECK(K.c()[1] == doctest::Approx(std::sqrt(0.125)));
    const Point x{0.5, 0.0, 0.0, 0.0};
    CHECK(K.norm_sq(x) == doctest::Approx(0.5));
    CHECK(K.contains(x, 1.0));
    CHECK_FALSE(K.contains(x, 0.7));
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        s += std::sqrt(w[i]);
    CHECK(K.sum_a_over_c() == doctest::Approx(s));
}

TEST_CASE("truncation step")
{
    std::array<double, 4> h{};
    truncation_step(0.2, 3, h);
    CHECK(h[0] == 0.0);
    CHECK(h[1] == 0.0);
    truncation_step(0.8, 3, h);
    CHECK(h[0] == 1.0);
    truncation_step(0.5, 3, h);
    CHECK(h[0] == doctest::Approx(0.5));
    const double e = 1e-5;
    std::array<double, 4> hp{}, hm{};
    for (double v : {0.3, 0.45, 0.6, 0.7}) {
        truncation_step(v, 3, h);
        truncation_step(v + e, 3, hp);
        truncation_step(v - e, 3, hm);
        for (int k = 0; k < 3; ++k)
            CHECK((hp[static_cast<std::size_t>(k)] - hm[static_cast<std::size_t>(k)]) / (2 * e) ==
                  doctest::Approx(h[static_cast<std::size_t>(k + 1)]).epsilon(1e-5).scale(1.0));
    }
    CHECK_THROWS_AS(truncation_step(0.5, 4, std::span<double>(h)), std::domain_error);
}

TEST_CASE("d = 1: mass, calibration, value and scores against erf")
{
    const auto w = WeightSequence::from_values({0.25});
    auto seq = TruncationSequence::create(w, 200000, {11, 0});
    const double sigma = 0.5, c = 0.5;
    const auto mass = seq->pprime_mass(3);
    for (int n = 1; n <= 3; ++n) {
        const double exact = std::erf(n * std::sqrt(c) / (sigma * std::numbers::sqrt2));
        const auto& e = mass[static_cast<std::size_t>(n - 1)];
        CHECK(std::abs(e.value - exact) <= 4 * e.std_error + 1e-12);
    }
    CHECK(seq->calibrate() == 1);
    for (double x : {0.0, 0.4, -0.9, 1.3}) {
        const double m = 1.7;
        const double r = m * std::sqrt(c);
        const double a = (r - x) / sigma, b = (-r - x) / sigma;
        const double g = Phi(a) - Phi(b);
        const double g1 = (phi(b) - phi(a)) / sigma;
        const double g2 = (b * phi(b) - a * phi(a)) / (sigma * sigma);
        const Point p{x};
        const McResult res = seq->g_moments(m, p, 2);
        REQUIRE(res.width() == 3);
        const auto e0 = res.estimate(0), e1 = res.estimate(1), e2 = res.estimate(2);
        CHECK(std::abs(e0.value - g) <= 4 * e0.std_error + 1e-12);
        CHECK(std::abs(e1.value - g1) <= 4 * e1.std_error + 1e-12);
        CHECK(std::abs(e2.value - g2) <= 4 * e2.std_error + 1e-12);
    }
}

TEST_CASE("d = 2: cross score against integral oracle")
{
    const auto w = WeightSequence::from_values({0.3, 0.2});
    auto seq = TruncationSequence::create(w, 400000, {12, 0});
    const double m = 1.5, h = 1e-3;
    for (const Point& x : {Point{0.2, -0.1}, Point{0.5, 0.3}}) {
        const McResult res = seq->g_moments(m, x, 2);
        REQUIRE(res.width() == 6);
        const double g = g2_oracle(w, m, x[0], x[1]);
        const double gx = (g2_oracle(w, m, x[0] + h, x[1]) - g2_oracle(w, m, x[0] - h, x[1])) / (2 * h);
        const double gy = (g2_oracle(w, m, x[0], x[1] + h) - g2_oracle(w, m, x[0], x[1] - h)) / (2 * h);
        const double gxy = (g2_oracle(w, m, x[0] + h, x[1] + h) - g2_oracle(w, m, x[0] + h, x[1] - h) -
                            g2_oracle(w, m, x[0] - h, x[1] + h) + g2_oracle(w, m, x[0] - h, x[1] - h)) /
                           (4 * h * h);
        const double gyy = (g2_oracle(w, m, x[0], x[1] + h) - 2 * g + g2_oracle(w, m, x[0], x[1] - h)) / (h * h);
        const double oracle[6] = {g, gx, gy, 0.0, gxy, gyy};
        for (std::size_t k : {0UL, 1UL, 2UL, 4UL, 5UL}) {
            const auto e = res.estimate(k);
            INFO("component " << k << " est " << e.value << " oracle " << oracle[k]);
            CHECK(std::abs(e.value - oracle[k]) <= 4 * e.std_error + 1e-4);
        }
    }
}

TEST_CASE("calibration on the standard weights")
{
    const auto w = WeightSequence::standard(16);
    auto seq = TruncationSequence::create(w, 100000, {13, 0});
    const auto mass = seq->pprime_mass(3);
    CHECK(mass[0].value == doctest::Approx(0.259).epsilon(0.05));
    CHECK(mass[1].value == doctest::Approx(0.967).epsilon(0.01));
    CHECK(seq->calibrate() == 2);
    CHECK(seq->N1() == 2);
    auto fresh = TruncationSequence::create(w, 1000, {13, 0});
    CHECK_THROWS_AS(fresh->N1(), std::logic_error);
    CHECK_THROWS_AS(fresh->xn(1, Point(16, 0.0), 0), std::logic_error);
}

TEST_CASE("plateaus are exact and agree with the estimator")
{
    const int d = 8;
    const auto w = WeightSequence::standard(d);
    auto seq = TruncationSequence::create(w, 50000, {14, 0});
    const int n1 = seq->calibrate();
    const int n = 2;
    const auto ev = seq->xn(n, Point(d, 0.0), 2);
    CHECK(ev.path == XnEval::Path::Interior);
    CHECK(ev.value == 1.0);
    for (double g : ev.grad)
        CHECK(g == 0.0);
    Point far(d, 0.0);
    far[0] = (n + 2 * n1 + 0.01) * std::sqrt(seq->family().c()[0]);
    CHECK(seq->xn(n, far, 1).path == XnEval::Path::Exterior);
    CHECK(seq->xn_value(n, far) == 0.0);

    // just inside K_n and just outside K_{n+2N1} the estimated H(g) agrees
    std::array<double, 4> h{};
    for (int i = 0; i < d; ++i) {
        Point x(d, 0.0);
        const double ci = std::sqrt(seq->family().c()[static_cast<std::size_t>(i)]);
        x[static_cast<std::size_t>(i)] = (n - 1e-9) * ci;
        truncation_step(seq->g_value(n + n1, x).value, 0, h);
        CHECK(h[0] == 1.0);
        x[static_cast<std::size_t>(i)] = -(n + 2 * n1 + 1e-9) * ci;
        truncation_step(seq->g_value(n + n1, x).value, 0, h);
        CHECK(h[0] == 0.0);
    }
}

TEST_CASE("X_n as a function")
{
    const int d = 4;
    const auto w = WeightSequence::standard(d);
    auto seq = TruncationSequence::create(w, 50000, {15, 0});
    seq->calibrate();
    const FunctionRep X = seq->xn_function(1);
    CHECK(X.max_order() == 2);
    CHECK(X.bounded());
    const auto probes = seq->shell_probes(1, {0.5}, {Point{1.0, 0.0, 0.0, 0.0}, Point{1.0, 1.0, 1.0, 1.0}});
    REQUIRE(probes.size() == 2);
    for (const Point& x : probes) {
        const XnEval ev = seq->xn(1, x, 2);
        CHECK(ev.path == XnEval::Path::Estimated);
        CHECK(std::abs(ev.g.value - 0.5) < 0.02);
        CHECK(X.value(x) == ev.value);
        std::vector<double> grad(d);
        CHECK(X.value_gradient(x, grad) == ev.value);
        for (int i = 0; i < d; ++i) {
            CHECK(grad[static_cast<std::size_t>(i)] == ev.grad[static_cast<std::size_t>(i)]);
            for (int j = 0; j < d; ++j)
                CHECK(X.partial({i, j}, x) == ev.hess[static_cast<std::size_t>(i * d + j)]);
        }
        CHECK_THROWS_AS(X.partial({0, 0, 0}, x), std::domain_error);
    }
}

TEST_CASE("derivative bound: first order at shell probes")
{
    const int d = 8;
    const auto w = WeightSequence::standard(d);
    auto seq = TruncationSequence::create(w, 100000, {16, 0});
    seq->calibrate();
    const auto probes = seq->shell_probes(1, {0.3, 0.5, 0.7}, {Point{1, 0, 0, 0, 0, 0, 0, 0}, Point(d, 1.0)});
    for (std::size_t j = 0; j < probes.size(); ++j)
        for (double p : {1.0, 2.0}) {
            const auto row = seq->derivative_bound(1, 1, p, probes[j], j);
            INFO("probe " << j << " p " << p << " lhs " << row.lhs << " se " << row.lhs_stderr);
            CHECK(row.verdict == "PASS");
            CHECK(row.rhs == 1.0);
        }
    const auto in = seq->derivative_bound(1, 2, 1.0, Point(d, 0.0), 7);
    CHECK(in.verdict == "PASS");
    CHECK(in.lhs == 0.0);
    CHECK(in.xn == 1.0);
    CHECK(in.rhs == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("bound statistic for g and the chain-rule factor")
{
    const int d = 8;
    const auto w = WeightSequence::standard(d);
    auto seq = TruncationSequence::create(w, 100000, {16, 0});
    seq->calibrate();
    const auto probes = seq->shell_probes(1, {0.3, 0.5, 0.7}, {Point{1, 0, 0, 0, 0, 0, 0, 0}, Point(d, 1.0)});
    for (std::size_t j = 0; j < probes.size(); ++j) {
        const auto g1 = seq->derivative_bound(1, 1, 1.0, probes[j], j, true);
        const auto x1 = seq->derivative_bound(1, 1, 1.0, probes[j], j);
        std::array<double, 4> h{};
        truncation_step(g1.g_estimate, 3, h);
        INFO("probe " << j << " g " << g1.g_estimate);
        CHECK(g1.verdict == "PASS");
        // k = 1, p = 1: the X statistic is |H'(g)| times the g statistic
        CHECK(x1.lhs == doctest::Approx(std::abs(h[1]) * g1.lhs).epsilon(1e-12));
        CHECK(seq->derivative_bound(1, 2, 1.0, probes[j], j, true).verdict == "PASS");
    }
}

TEST_CASE("delta-method error of the bound statistic")
{
    const auto w = WeightSequence::from_values({0.3, 0.2});
    auto ref = TruncationSequence::create(w, 200000, {17, 0});
    ref->calibrate();
    const Point x = ref->shell_probes(1, {0.5}, {Point{1.0, 0.5}})[0];
    for (int k : {1, 2}) {
        std::vector<double> vals;
        double se = 0.0;
        const int reps = 24;
        for (int r = 0; r < reps; ++r) {
            auto s = TruncationSequence::create(w, 20000, {100 + static_cast<std::uint64_t>(r), 0});
            s->calibrate();
            const auto row = s->derivative_bound(1, k, 2.0, x);
            vals.push_back(row.lhs);
            se += row.lhs_stderr / reps;
        }
        double mean = 0.0, var = 0.0;
        for (double v : vals)
            mean += v / reps;
        for (double v : vals)
            var += (v - mean) * (v - mean) / (reps - 1);
        INFO("k " << k << " spread " << std::sqrt(var) << " reported " << se);
        CHECK(std::sqrt(var) / se > 0.5);
        CHECK(std::sqrt(var) / se < 2.0);
    }
}

TEST_CASE("truncate_function: gaussian bump")
{
    const int d = 6;
    const auto w = WeightSequence::standard(d);
    auto seq = TruncationSequence::create(w, 20000, {18, 0});
    seq->calibrate();
    const auto f = builtin::gaussian_bump(d, Point(d, 0.0), 0.5, d);
    const auto rows = truncate_function(f, {1, 2, 3}, 1, 2.0, *seq, {}, McBudget{20000, {19, 0}});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].diff.total >= rows[1].diff.total);
    CHECK(rows[1].diff.total >= rows[2].diff.total);
    const auto norm = sobolev_norm(f, 1, 2.0, w, {}, McBudget{20000, {19, 0}});
    CHECK(rows[2].diff.total < 1e-2 * norm.total);
    CHECK_THROWS_AS(truncate_function(f, {1}, 3, 2.0, *seq, {}, McBudget{}), std::domain_error);
}
