#include "gsobolev/gross.hpp"
#include "gsobolev/builtins.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gsobolev {

namespace {

void require_bounded(const FunctionRep& f)
{
    if (!f.bounded())
        throw std::invalid_argument("gross: " + f.name() + " is not bounded; the convolution estimators need sup|f| < inf");
}

void require_point(std::span<const double> x, const WeightSequence& w)
{
    if (static_cast<int>(x.size()) != w.dim())
        throw std::invalid_argument("gross: point dimension does not match weights");
}

} // namespace

McEstimate gross_value(const FunctionRep& f, std::span<const double> x, const WeightSequence& w,
                       const McBudget& budget)
{
    require_bounded(f);
    require_point(x, w);
    const auto mu = ProductGaussian::P(w);
    return integrate(
        [&](std::span<const double> y) {
            std::array<double, kMaxDim> z{};
            for (std::size_t i = 0; i < y.size(); ++i)
                z[i] = x[i] + y[i];
            return f.value({z.data(), y.size()});
        },
        mu, budget);
}

ConvolutionEstimate gross_gradient(const FunctionRep& f, std::span<const double> x, const WeightSequence& w,
                                   const McBudget& budget)
{
    require_bounded(f);
    require_point(x, w);
    const int d = w.dim();
    const auto mu = ProductGaussian::P(w);
    auto r = integrate_vector(mu, budget, static_cast<std::size_t>(d + 1),
                              [&](std::span<const double> y, std::span<double> out) {
                                  std::array<double, kMaxDim> z{};
                                  for (std::size_t i = 0; i < y.size(); ++i)
                                      z[i] = x[i] + y[i];
                                  const double v = f.value({z.data(), y.size()});
                                  out[0] = v;
                                  for (int i = 0; i < d; ++i)
                                      out[static_cast<std::size_t>(i + 1)] = y[static_cast<std::size_t>(i)] / (w[i] * w[i]) * v;
                              });
    ConvolutionEstimate c;
    c.value = r.estimate(0);
    for (int i = 0; i < d; ++i)
        c.grad.push_back(r.estimate(static_cast<std::size_t>(i + 1)));
    c.x.assign(x.begin(), x.end());
    c.budget = r.n();
    return c;
}

HsCheck hs_bound_check(const FunctionRep& f, std::span<const double> x, const WeightSequence& w,
                       const McBudget& budget)
{
    require_bounded(f);
    require_point(x, w);
    const auto deps = f.depends_on();
    const std::size_t k = deps.size();
    const auto mu = ProductGaussian::P(w);
    // components: a_i D_i estimates for i in deps, then f^2
    auto r = integrate_vector(mu, budget, k + 1, [&](std::span<const double> y, std::span<double> out) {
        std::array<double, kMaxDim> z{};
        for (std::size_t i = 0; i < y.size(); ++i)
            z[i] = x[i] + y[i];
        const double v = f.value({z.data(), y.size()});
        for (std::size_t j = 0; j < k; ++j) {
            const int i = deps[j];
            out[j] = y[static_cast<std::size_t>(i)] / w[i] * v;
        }
        out[k] = v * v;
    });
    HsCheck c;
    double lhs = 0.0;
    std::vector<double> g_lhs(k + 1, 0.0), g_diff(k + 1, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        lhs += r.mean(j) * r.mean(j);
        g_lhs[j] = 2.0 * r.mean(j);
        g_diff[j] = g_lhs[j];
    }
    g_diff[k] = -1.0;
    c.lhs = {lhs, r.stderr_of(g_lhs), r.n()};
    c.rhs = r.estimate(k);
    c.pass = lhs - c.rhs.value <= 4.0 * r.stderr_of(g_diff);
    return c;
}

double sharpness_closed_form(int n, double p, double s)
{
    if (n < 1 || !(p > 0.0))
        throw std::invalid_argument("sharpness_closed_form: need n >= 1 and p > 0");
    return std::pow(2.0, p) / std::pow(2.0 * std::numbers::pi, p / 2.0) * std::pow(n, 1.0 - p / 2.0) *
           std::exp(-0.5 * p * s * s);
}

std::vector<SharpnessRow> sharpness_experiment(const std::vector<int>& n_list, const std::vector<double>& p_list,
                                               const WeightSequence& w, const McBudget& budget, int random_points)
{
    const int d = w.dim();
    for (int n : n_list)
        if (n < 1 || n > d)
            throw std::invalid_argument("sharpness: n = " + std::to_string(n) + " outside [1, d = " +
                                        std::to_string(d) + "]");
    const auto mu = ProductGaussian::P(w);
    std::vector<std::pair<std::string, Point>> points{{"0", Point(static_cast<std::size_t>(d), 0.0)}};
    if (random_points > 0) {
        const auto xs = sample(mu, budget.rng.substream(0x5eed), static_cast<std::size_t>(random_points));
        for (std::size_t j = 0; j < xs.size(); ++j)
            points.emplace_back("random" + std::to_string(j + 1), Point(xs.row(j).begin(), xs.row(j).end()));
    }
    std::vector<SharpnessRow> rows;
    for (const auto& [label, x] : points) {
        std::vector<double> prev(p_list.size(), 0.0);
        for (int n : n_list) {
            // evaluation point x / sqrt(n); c = sum_{j<=n} x_j/(a_j sqrt(n))
            const double rn = std::sqrt(static_cast<double>(n));
            double c = 0.0;
            for (int j = 0; j < n; ++j)
                c += x[static_cast<std::size_t>(j)] / (w[j] * rn);
            const double s = c / rn;
            const auto nn = static_cast<std::size_t>(n);
            // a_i D_i(p_1 f_n) = E[z_i sgn(c + sum z_j)], z_j = y_j / a_j
            auto r = integrate_vector(mu, budget, nn, [&](std::span<const double> y, std::span<double> out) {
                double t = c;
                for (int j = 0; j < n; ++j)
                    t += y[static_cast<std::size_t>(j)] / w[j];
                const double sg = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
                for (int i = 0; i < n; ++i)
                    out[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / w[i] * sg;
            });
            for (std::size_t k = 0; k < p_list.size(); ++k) {
                const double p = p_list[k];
                double v = 0.0;
                std::vector<double> g(nn);
                for (std::size_t i = 0; i < nn; ++i) {
                    const double m = r.mean(i);
                    v += std::pow(std::abs(m), p);
                    g[i] = p * std::pow(std::abs(m), p - 1.0) * (m >= 0.0 ? 1.0 : -1.0);
                }
                SharpnessRow row;
                row.n = n;
                row.p = p;
                row.point = label;
                row.s = s;
                row.mc = {v, r.stderr_of(g), r.n()};
                row.closed_form = sharpness_closed_form(n, p, s);
                row.ratio_to_prev_n = prev[k] > 0.0 ? v / prev[k] : 0.0;
                prev[k] = v;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<LlnRow> lln_collapse_check(const std::vector<int>& n_list, const WeightSequence& w,
                                       const McBudget& budget)
{
    const auto mu = ProductGaussian::P(w);
    std::vector<LlnRow> rows;
    for (int n : n_list) {
        if (n < 1 || n > w.dim())
            throw std::invalid_argument("lln_collapse_check: n outside [1, d]");
        auto r = integrate_vector(mu, budget, 3, [&](std::span<const double> x, std::span<double> out) {
            double s = 0.0;
            for (int j = 0; j < n; ++j)
                s += x[static_cast<std::size_t>(j)] / w[j];
            s /= n;
            out[0] = s;
            out[1] = s * s;
            out[2] = std::exp(-0.5 * s * s);
        });
        LlnRow row;
        row.n = n;
        row.mean = r.estimate(0);
        const double m1 = r.mean(0), m2 = r.mean(1);
        const double g[] = {-2.0 * m1, 1.0, 0.0};
        row.variance = {m2 - m1 * m1, r.stderr_of(g), r.n()};
        row.exp_factor = r.estimate(2);
        row.pass = std::abs(row.mean.value) <= 4.0 * row.mean.std_error &&
                   std::abs(row.variance.value - 1.0 / n) <= 4.0 * row.variance.std_error;
        rows.push_back(row);
    }
    return rows;
}

} // namespace gsobolev
