#include "gsobolev/sobolev.hpp"
#include "gsobolev/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gsobolev {

namespace {

inline double powq(double v, double q)
{
    if (q == 1.0)
        return v;
    if (q == 2.0)
        return v * v;
    return std::pow(v, q);
}

double multinomial(const std::array<int, kMaxOrder>& tuple, int k)
{
    double r = 1.0;
    for (int i = 2; i <= k; ++i)
        r *= i;
    int run = 1;
    for (int j = 1; j <= k; ++j) {
        if (j < k && tuple[static_cast<std::size_t>(j)] == tuple[static_cast<std::size_t>(j - 1)]) {
            ++run;
            continue;
        }
        for (int i = 2; i <= run; ++i)
            r /= i;
        run = 1;
    }
    return r;
}

} // namespace

double weighted_derivative_sum(const FunctionRep& f, int k, double q, const WeightSequence& w,
                               std::span<const double> x)
{
    if (k == 0)
        return powq(std::abs(f.value(x)), q);
    if (k > f.max_order())
        throw std::domain_error(f.name() + ": derivative of order " + std::to_string(k) + " exceeds max_order " +
                                std::to_string(f.max_order()));
    const std::vector<int> deps = f.depends_on();
    double s = 0.0;
    if (k == 1) {
        std::array<double, kMaxDim> g{};
        f.value_gradient(x, g);
        for (int i : deps)
            s += powq(w[i] * std::abs(g[static_cast<std::size_t>(i)]), q);
        return s;
    }
    if (k == 2) {
        for (std::size_t a = 0; a < deps.size(); ++a) {
            const int i = deps[a];
            s += powq(w[i] * w[i] * std::abs(f.partial({i, i}, x)), q);
            for (std::size_t b = a + 1; b < deps.size(); ++b) {
                const int j = deps[b];
                s += 2.0 * powq(w[i] * w[j] * std::abs(f.partial({i, j}, x)), q);
            }
        }
        return s;
    }
    // non-decreasing tuples of positions into deps
    const int n = static_cast<int>(deps.size());
    if (n == 0)
        return 0.0;
    std::array<int, kMaxOrder> pos{};
    while (true) {
        std::array<int, kMaxOrder> tuple{};
        double wt = 1.0;
        for (int j = 0; j < k; ++j) {
            tuple[static_cast<std::size_t>(j)] = deps[static_cast<std::size_t>(pos[static_cast<std::size_t>(j)])];
            wt *= w[tuple[static_cast<std::size_t>(j)]];
        }
        const MultiIndex mi(std::span<const int>(tuple.data(), static_cast<std::size_t>(k)));
        s += multinomial(tuple, k) * powq(wt * std::abs(f.partial(mi, x)), q);
        int j = k - 1;
        while (j >= 0 && pos[static_cast<std::size_t>(j)] == n - 1)
            --j;
        if (j < 0)
            break;
        ++pos[static_cast<std::size_t>(j)];
        for (int l = j + 1; l < k; ++l)
            pos[static_cast<std::size_t>(l)] = pos[static_cast<std::size_t>(j)];
    }
    return s;
}

SobolevNormReport sobolev_norm(const FunctionRep& f, int m, double p, const WeightSequence& w, const Region& region,
                               const McBudget& budget)
{
    if (!(p >= 1.0))
        throw std::invalid_argument("sobolev_norm: p must be >= 1");
    if (m < 0 || m > f.max_order())
        throw std::domain_error("sobolev_norm: order m=" + std::to_string(m) + " exceeds max_order " +
                                std::to_string(f.max_order()) + " of " + f.name());
    const auto mu = ProductGaussian::P(w);
    const auto width = static_cast<std::size_t>(m + 1);
    auto r = integrate_vector(mu, budget, width, [&](std::span<const double> x, std::span<double> out) {
        if (!in_region(region, x))
            return;
        for (int k = 0; k <= m; ++k)
            out[static_cast<std::size_t>(k)] = weighted_derivative_sum(f, k, p, w, x);
    });
    SobolevNormReport rep;
    rep.m = m;
    rep.p = p;
    rep.n = r.n();
    double T = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
        rep.per_order.push_back(r.mean(k));
        rep.per_order_stderr.push_back(r.estimate(k).std_error);
        T += r.mean(k);
    }
    rep.total = std::pow(T, 1.0 / p);
    if (T > 0.0) {
        std::vector<double> g(width, std::pow(T, 1.0 / p - 1.0) / p);
        rep.estimator_error = r.stderr_of(g);
    }
    return rep;
}

double winf_norm(const FunctionRep& f, int m, const WeightSequence& w, const Region& region,
                 const std::vector<Point>& probes)
{
    double best = 0.0;
    std::size_t used = 0;
    for (const auto& x : probes) {
        if (!in_region(region, x))
            continue;
        ++used;
        for (int k = 0; k <= m; ++k)
            best = std::max(best, weighted_derivative_sum(f, k, 1.0, w, x));
    }
    if (used == 0)
        throw std::invalid_argument("winf_norm: no probe lies in the region");
    return best;
}

ResidualReport weak_derivative_residual(const FunctionRep& f, const FunctionRep& g, const MultiIndex& mi,
                                        const std::vector<FunctionRep>& tests, const WeightSequence& w,
                                        const Region& region, const McBudget& budget)
{
    if (tests.empty())
        throw std::invalid_argument("weak_derivative_residual: empty test battery");
    std::vector<FunctionRep> chains;
    for (const auto& t : tests)
        chains.push_back(dstar_chain(t, mi, w));
    // Antithetic reflections x_i -> -x_i in the differentiated coordinates
    // cancel the O(1/a_i) part of D*_i.
    std::vector<int> refl;
    for (int k = 0; k < mi.order(); ++k)
        if (std::find(refl.begin(), refl.end(), mi[k]) == refl.end())
            refl.push_back(mi[k]);
    const unsigned nrefl = 1U << refl.size();
    const auto mu = ProductGaussian::P(w);
    auto r = integrate_vector(mu, budget, tests.size(), [&](std::span<const double> x, std::span<double> out) {
        std::array<double, kMaxDim> y{};
        const std::span<const double> ys(y.data(), x.size());
        for (unsigned s = 0; s < nrefl; ++s) {
            std::copy(x.begin(), x.end(), y.begin());
            for (std::size_t k = 0; k < refl.size(); ++k)
                if ((s >> k) & 1U)
                    y[static_cast<std::size_t>(refl[k])] = -y[static_cast<std::size_t>(refl[k])];
            if (!in_region(region, ys))
                continue;
            const double fx = f.value(ys);
            const double gx = g.value(ys);
            for (std::size_t j = 0; j < tests.size(); ++j)
                out[j] += (gx * tests[j].value(ys) - fx * chains[j].value(ys)) / nrefl;
        }
    });
    ResidualReport rep;
    for (std::size_t j = 0; j < tests.size(); ++j) {
        const auto e = r.estimate(j);
        const bool ok = std::abs(e.value) <= 4.0 * e.std_error;
        rep.residuals.push_back(e);
        rep.pass.push_back(ok);
        rep.all_pass = rep.all_pass && ok;
    }
    return rep;
}

std::vector<FunctionRep> standard_test_battery(int d)
{
    using namespace builtin;
    const int n3 = std::min(d, 3);
    const int n2 = std::min(d, 2);
    std::vector<FunctionRep> t;
    t.push_back(gaussian_bump(d, {}, 0.3, n3));
    t.push_back(gaussian_bump(d, {0.1}, 0.2, n2));
    t.push_back(gaussian_bump(d, {-0.1, 0.05}, 0.25, n2));
    t.push_back(gaussian_bump(d, {}, 0.5, d));
    t.push_back(radial_bump(d, {}, 0.2, 0.6));
    t.push_back(radial_bump(d, {0.1, 0.05}, 0.1, 0.5));
    t.push_back(product(monomial(d, {0}), gaussian_bump(d, {}, 0.3, n3)));
    t.push_back(product(monomial(d, {std::min(1, d - 1)}), gaussian_bump(d, {}, 0.3, n3)));
    t.push_back(product(constant(d, 1.0) + monomial(d, {0, std::min(1, d - 1)}), radial_bump(d, {}, 0.3, 0.8)));
    t.push_back(gaussian_bump(d, {0.2, -0.1, 0.05}, 0.35, n3));
    t.push_back(product(step(d, 0, -0.3, 0.3), gaussian_bump(d, {}, 0.4, d)));
    t.push_back(product(monomial(d, {0, 0}), gaussian_bump(d, {}, 0.3, n2)));
    return t;
}

std::vector<FunctionRep> halfspace_tests(const std::vector<FunctionRep>& tests, double eps)
{
    std::vector<FunctionRep> r;
    for (const auto& t : tests)
        r.push_back(product(builtin::step(t.dim(), 0, eps, 2.0 * eps), t));
    return r;
}

namespace {

void check_tilt(double t, const WeightSequence& w)
{
    if (std::abs(t) > kMaxTiltOverA1 * w[0])
        throw std::invalid_argument("translation: |t| = " + std::to_string(std::abs(t)) +
                                    " exceeds the tilt bound " + std::to_string(kMaxTiltOverA1) + " a_1 = " +
                                    std::to_string(kMaxTiltOverA1 * w[0]) +
                                    "; the exponential weight would dominate the estimator variance");
}

} // namespace

TranslationCheck translation_pushforward_check(const FunctionRep& f, double t, double p, const WeightSequence& w,
                                               const McBudget& budget)
{
    check_tilt(t, w);
    const double a2 = w[0] * w[0];
    const double pref = std::exp(-t * t / (2.0 * a2));
    const auto mu = ProductGaussian::P(w);
    auto r = integrate_vector(mu, budget, 2, [&](std::span<const double> x, std::span<double> out) {
        const Point y = translate(x, t);
        out[0] = std::pow(std::abs(f.value(y)), p);
        out[1] = pref * std::pow(std::abs(f.value(x)), p) * std::exp(t * x[0] / a2);
    });
    TranslationCheck c;
    c.lhs = r.estimate(0);
    c.rhs = r.estimate(1);
    const double wdiff[] = {1.0, -1.0};
    c.difference = r.combination(wdiff);
    c.pass = std::abs(c.difference.value) <= 4.0 * c.difference.std_error;
    return c;
}

McEstimate translation_norm_ratio(const FunctionRep& u, double t, double p, const WeightSequence& w,
                                  const McBudget& budget, int m)
{
    check_tilt(t, w);
    const double a2 = w[0] * w[0];
    const double pref = std::exp(-t * t / (2.0 * a2));
    const auto mu = ProductGaussian::P(w);
    auto r = integrate_vector(mu, budget, 2, [&](std::span<const double> x, std::span<double> out) {
        double s = 0.0;
        for (int k = 0; k <= m; ++k)
            s += weighted_derivative_sum(u, k, p, w, x);
        out[0] = pref * s * std::exp(t * x[0] / a2);
        out[1] = s;
    });
    if (!(r.mean(1) > 0.0))
        throw std::invalid_argument("translation_norm_ratio: norm of u vanishes on the sample set");
    const double ratio = std::pow(r.mean(0) / r.mean(1), 1.0 / p);
    const double g[] = {ratio / (p * r.mean(0)), -ratio / (p * r.mean(1))};
    return {ratio, r.stderr_of(g), r.n()};
}

BogachevComparison bogachev_norm_compare(const FunctionRep& f, int m, double p, const WeightSequence& w,
                                         const McBudget& budget)
{
    if (!(p >= 1.0))
        throw std::invalid_argument("bogachev_norm_compare: p must be >= 1");
    if (m > f.max_order())
        throw std::domain_error("bogachev_norm_compare: m exceeds max_order of " + f.name());
    const auto mu = ProductGaussian::P(w);
    const auto K = static_cast<std::size_t>(m + 1);
    auto r = integrate_vector(mu, budget, 2 * K, [&](std::span<const double> x, std::span<double> out) {
        for (int k = 0; k <= m; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            out[kk] = std::pow(weighted_derivative_sum(f, k, 2.0, w, x), p / 2.0);
            out[K + kk] = weighted_derivative_sum(f, k, p, w, x);
        }
    });
    BogachevComparison c;
    std::vector<double> g_in(2 * K, 0.0), g_mid(2 * K, 0.0), g_out(2 * K, 0.0);
    double inside = 0.0, mid = 0.0, T = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double A = r.mean(k), B = r.mean(K + k);
        inside += std::pow(A, 1.0 / p);
        mid += std::pow(B, 1.0 / p);
        T += B;
        if (A > 0.0)
            g_in[k] = std::pow(A, 1.0 / p - 1.0) / p;
        if (B > 0.0)
            g_mid[K + k] = std::pow(B, 1.0 / p - 1.0) / p;
    }
    const double outside = std::pow(T, 1.0 / p);
    if (T > 0.0)
        for (std::size_t k = 0; k < K; ++k)
            g_out[K + k] = std::pow(T, 1.0 / p - 1.0) / p;
    c.mixed_inside = {inside, r.stderr_of(g_in), r.n()};
    c.intermediate = {mid, r.stderr_of(g_mid), r.n()};
    c.mixed_outside = {outside, r.stderr_of(g_out), r.n()};
    std::vector<double> g_diff(2 * K);
    if (p <= 2.0) {
        for (std::size_t k = 0; k < 2 * K; ++k)
            g_diff[k] = g_in[k] - (m + 1) * g_out[k];
        c.margin = (m + 1) * outside - inside;
    } else {
        for (std::size_t k = 0; k < 2 * K; ++k)
            g_diff[k] = g_in[k] - g_out[k];
        c.margin = inside - outside;
    }
    c.verdict = c.margin >= -4.0 * r.stderr_of(g_diff);
    return c;
}

} // namespace gsobolev
