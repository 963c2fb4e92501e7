#include "gsobolev/truncation.hpp"
#include "gsobolev/summation.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gsobolev {

CompactFamily::CompactFamily(const WeightSequence& w) : c_(static_cast<std::size_t>(w.dim()))
{
    for (int i = 0; i < w.dim(); ++i) {
        c_[static_cast<std::size_t>(i)] = std::sqrt(w[i]);
        sum_a_over_c_ += w[i] / c_[static_cast<std::size_t>(i)];
    }
}

double CompactFamily::norm_sq(std::span<const double> x) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i)
        s += x[i] * x[i] / c_[i];
    return s;
}

void truncation_step(double v, int kmax, std::span<double> out)
{
    if (kmax > 3)
        throw std::domain_error("truncation_step: order above 3");
    smooth_step_unit_derivatives(2.0 * (v - 0.25), kmax, out);
    double s = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        s *= 2.0;
        out[static_cast<std::size_t>(k)] *= s;
    }
}

const char* to_string(XnEval::Path p)
{
    switch (p) {
    case XnEval::Path::Interior:
        return "interior";
    case XnEval::Path::Exterior:
        return "exterior";
    default:
        return "estimated";
    }
}

namespace {

inline std::size_t tri(std::size_t i, std::size_t j, std::size_t d)
{
    return i * d - i * (i - 1) / 2 + (j - i);
}

inline std::size_t width_for(std::size_t d, int order)
{
    std::size_t w = 1;
    if (order >= 1)
        w += d;
    if (order >= 2)
        w += d * (d + 1) / 2;
    return w;
}

inline double powq(double v, double q)
{
    if (q == 1.0)
        return v;
    if (q == 2.0)
        return v * v;
    return std::pow(v, q);
}

double factorial(int k)
{
    double r = 1.0;
    for (int i = 2; i <= k; ++i)
        r *= i;
    return r;
}

} // namespace

TruncationSequence::TruncationSequence(const WeightSequence& w, SampleSet y, std::size_t batches)
    : w_(w), family_(w), y_(std::move(y)), q_(y_.size())
{
    for (std::size_t j = 0; j < y_.size(); ++j)
        q_[j] = family_.norm_sq(y_.row(j));
    const std::size_t n = y_.size();
    const std::size_t nb = std::min(batches, n);
    batch_sizes_.resize(nb);
    for (std::size_t b = 0; b < nb; ++b)
        batch_sizes_[b] = n / nb + (b < n % nb ? 1 : 0);
}

std::shared_ptr<TruncationSequence> TruncationSequence::create(const WeightSequence& w, std::size_t inner_samples,
                                                               const RngStream& rng, std::size_t batches)
{
    if (inner_samples < 2 || batches < 2)
        throw std::invalid_argument("TruncationSequence: need at least 2 samples and 2 batches");
    SampleSet y = sample(ProductGaussian::Pprime(w), rng, inner_samples, batches);
    return std::shared_ptr<TruncationSequence>(new TruncationSequence(w, std::move(y), batches));
}

std::vector<McEstimate> TruncationSequence::pprime_mass(int n_max) const
{
    const std::size_t nb = batch_sizes_.size();
    const auto width = static_cast<std::size_t>(n_max);
    std::vector<double> sums(nb * width, 0.0);
    std::size_t j = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        for (std::size_t r = 0; r < batch_sizes_[b]; ++r, ++j) {
            const double nr = std::sqrt(q_[j]);
            for (int n = 1; n <= n_max; ++n)
                if (nr <= n)
                    sums[b * width + static_cast<std::size_t>(n - 1)] += 1.0;
        }
    }
    McResult res(width, batch_sizes_, std::move(sums));
    std::vector<McEstimate> out;
    for (std::size_t k = 0; k < width; ++k)
        out.push_back(res.estimate(k));
    return out;
}

int TruncationSequence::calibrate(int n_max)
{
    const auto mass = pprime_mass(n_max);
    for (int n = 1; n <= n_max; ++n) {
        const McEstimate& e = mass[static_cast<std::size_t>(n - 1)];
        if (e.value >= 0.8 + 4.0 * e.std_error) {
            n1_ = n;
            return n;
        }
        if (e.value >= 0.8 - 4.0 * e.std_error)
            throw std::runtime_error("calibrate: P'(K_" + std::to_string(n) + ") = " + std::to_string(e.value) +
                                     " +- " + std::to_string(e.std_error) +
                                     " cannot be separated from 4/5; increase inner samples");
    }
    throw std::runtime_error("calibrate: P'(K_n) below 4/5 up to n = " + std::to_string(n_max));
}

int TruncationSequence::N1() const
{
    if (n1_ <= 0)
        throw std::logic_error("TruncationSequence: calibrate() not called");
    return n1_;
}

McResult TruncationSequence::g_moments(double m, std::span<const double> x, int order) const
{
    const auto d = static_cast<std::size_t>(family_.dim());
    if (x.size() != d)
        throw std::invalid_argument("g_moments: point has dimension " + std::to_string(x.size()) + ", expected " +
                                    std::to_string(d));
    if (order < 0 || order > 2)
        throw std::domain_error("g_moments: order must be 0, 1 or 2");
    const std::size_t width = width_for(d, order);
    std::array<double, kMaxDim> xc{};
    std::array<double, kMaxDim> inv_a{};
    std::array<double, kMaxDim> inv_sa{};
    for (std::size_t i = 0; i < d; ++i) {
        xc[i] = x[i] / family_.c()[i];
        inv_a[i] = 1.0 / w_[static_cast<int>(i)];
        inv_sa[i] = std::sqrt(inv_a[i]);
    }
    const double xs = family_.norm_sq(x);
    const double r2 = m * m;
    const std::size_t nb = batch_sizes_.size();
    std::vector<double> sums(nb * width, 0.0);
    std::vector<CompensatedSum> acc(width);
    std::array<double, kMaxDim> z{};
    std::size_t j = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        std::fill(acc.begin(), acc.end(), CompensatedSum{});
        for (std::size_t r = 0; r < batch_sizes_[b]; ++r, ++j) {
            const auto y = y_.row(j);
            double t = xs + q_[j];
            for (std::size_t i = 0; i < d; ++i)
                t += 2.0 * xc[i] * y[i];
            if (t > r2)
                continue;
            acc[0].add(1.0);
            if (order == 0)
                continue;
            for (std::size_t i = 0; i < d; ++i) {
                z[i] = y[i] * inv_sa[i];
                acc[1 + i].add(z[i] * inv_sa[i]);
            }
            if (order == 1)
                continue;
            std::size_t k = 1 + d;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t l = i; l < d; ++l, ++k)
                    acc[k].add((z[i] * z[l] - (i == l ? 1.0 : 0.0)) * inv_sa[i] * inv_sa[l]);
        }
        for (std::size_t k = 0; k < width; ++k)
            sums[b * width + k] = acc[k].value();
    }
    return McResult(width, batch_sizes_, std::move(sums));
}

McEstimate TruncationSequence::g_value(double m, std::span<const double> x) const
{
    return g_moments(m, x, 0).estimate(0);
}

XnEval TruncationSequence::xn(int n, std::span<const double> x, int order) const
{
    const int n1 = N1();
    const auto d = static_cast<std::size_t>(family_.dim());
    XnEval ev;
    if (order >= 1)
        ev.grad.assign(d, 0.0);
    if (order >= 2)
        ev.hess.assign(d * d, 0.0);
    const double nsq = family_.norm_sq(x);
    if (nsq <= static_cast<double>(n) * n) {
        ev.path = XnEval::Path::Interior;
        ev.value = 1.0;
        ev.g = {1.0, 0.0, 0};
        return ev;
    }
    const double outer = n + 2.0 * n1;
    if (nsq > outer * outer) {
        ev.path = XnEval::Path::Exterior;
        ev.value = 0.0;
        ev.g = {0.0, 0.0, 0};
        return ev;
    }
    const McResult res = g_moments(n + n1, x, order);
    ev.g = res.estimate(0);
    std::array<double, 4> h{};
    truncation_step(ev.g.value, order, h);
    ev.value = h[0];
    if (order >= 1)
        for (std::size_t i = 0; i < d; ++i)
            ev.grad[i] = h[1] * res.mean(1 + i);
    if (order >= 2)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t l = i; l < d; ++l) {
                const double v = h[2] * res.mean(1 + i) * res.mean(1 + l) + h[1] * res.mean(1 + d + tri(i, l, d));
                ev.hess[i * d + l] = v;
                ev.hess[l * d + i] = v;
            }
    return ev;
}

namespace {

class TruncationNode final : public FunctionNode {
public:
    TruncationNode(std::shared_ptr<const TruncationSequence> seq, int n)
        : FunctionNode(seq->family().dim(), 2, all_coordinates(seq->family().dim()), "X_" + std::to_string(n),
                       support_for(*seq, n), true),
          seq_(std::move(seq)), n_(n)
    {
    }

    double value(std::span<const double> x) const override { return eval(x, 0).value; }

    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        const XnEval& ev = eval(x, 1);
        std::copy(ev.grad.begin(), ev.grad.end(), grad.begin());
        return ev.value;
    }

    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        const XnEval& ev = eval(x, mi.order());
        if (mi.order() == 1)
            return ev.grad[static_cast<std::size_t>(mi[0])];
        return ev.hess[static_cast<std::size_t>(mi[0]) * static_cast<std::size_t>(dim()) +
                       static_cast<std::size_t>(mi[1])];
    }

private:
    static SupportSpec support_for(const TruncationSequence& seq, int n)
    {
        std::vector<double> metric;
        for (double c : seq.family().c())
            metric.push_back(1.0 / c);
        return SupportSpec::ball(Point(static_cast<std::size_t>(seq.family().dim()), 0.0), n + 2.0 * seq.N1(),
                                 std::move(metric));
    }

    struct Cache {
        const void* owner = nullptr;
        Point x;
        int order = -1;
        XnEval ev;
    };

    const XnEval& eval(std::span<const double> x, int order) const
    {
        thread_local Cache cache;
        if (cache.owner == this && cache.order >= order && std::equal(x.begin(), x.end(), cache.x.begin(), cache.x.end()))
            return cache.ev;
        cache.ev = seq_->xn(n_, x, order);
        cache.owner = this;
        cache.x.assign(x.begin(), x.end());
        cache.order = order;
        return cache.ev;
    }

    std::shared_ptr<const TruncationSequence> seq_;
    int n_;
};

} // namespace

FunctionRep TruncationSequence::xn_function(int n) const
{
    N1();
    return FunctionRep(std::make_shared<TruncationNode>(shared_from_this(), n));
}

BoundRow TruncationSequence::derivative_bound(int n, int k, double p, std::span<const double> x,
                                              std::size_t probe_id, bool on_g) const
{
    if (k != 1 && k != 2)
        throw std::domain_error("derivative_bound: k must be 1 or 2");
    if (!(p >= 1.0))
        throw std::invalid_argument("derivative_bound: p must be >= 1");
    const int n1 = N1();
    const auto d = static_cast<std::size_t>(family_.dim());
    BoundRow row;
    row.n = n;
    row.probe_id = probe_id;
    row.k = k;
    row.p = p;
    row.rhs = std::pow(factorial(k), p / 2.0);
    const XnEval ev0 = xn(n, x, 0);
    if (!on_g && ev0.path != XnEval::Path::Estimated) {
        row.g_estimate = g_value(n + n1, x).value;
        row.xn = ev0.value;
        row.verdict = "PASS";
        return row;
    }
    const McResult res = g_moments(n + n1, x, k);
    std::array<double, 4> h{};
    if (on_g)
        h = {res.mean(0), 1.0, 0.0, 0.0};
    else
        truncation_step(res.mean(0), 3, h);
    row.g_estimate = res.mean(0);
    row.xn = h[0];
    std::vector<double> grad(res.width(), 0.0);
    double lhs = 0.0;
    if (k == 1) {
        for (std::size_t i = 0; i < d; ++i) {
            const double m = res.mean(1 + i);
            const double a = w_[static_cast<int>(i)];
            const double v = a * std::abs(h[1] * m);
            lhs += powq(v, p);
            if (v > 0.0) {
                const double dv = p * powq(v, p - 1.0) * a;
                const double sgn = (h[1] * m > 0.0) ? 1.0 : -1.0;
                grad[1 + i] += dv * sgn * h[1];
                grad[0] += dv * sgn * h[2] * m;
            }
        }
    } else {
        std::vector<double> D(d * d), G(d * d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t l = 0; l < d; ++l) {
                const std::size_t lo = std::min(i, l), hi = std::max(i, l);
                D[i * d + l] = h[2] * res.mean(1 + i) * res.mean(1 + l) + h[1] * res.mean(1 + d + tri(lo, hi, d));
            }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t l = 0; l < d; ++l) {
                const double aa = w_[static_cast<int>(i)] * w_[static_cast<int>(l)];
                const double v = aa * std::abs(D[i * d + l]);
                lhs += powq(v, p);
                if (v > 0.0)
                    G[i * d + l] = p * powq(v, p - 1.0) * aa * (D[i * d + l] > 0.0 ? 1.0 : -1.0);
            }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t l = 0; l < d; ++l) {
                const double g = G[i * d + l];
                if (g == 0.0)
                    continue;
                const double mi = res.mean(1 + i), ml = res.mean(1 + l);
                const std::size_t lo = std::min(i, l), hi = std::max(i, l);
                const double M = res.mean(1 + d + tri(lo, hi, d));
                grad[0] += g * (h[3] * mi * ml + h[2] * M);
                grad[1 + i] += g * h[2] * ml;
                grad[1 + l] += g * h[2] * mi;
                grad[1 + d + tri(lo, hi, d)] += g * h[1];
            }
    }
    row.lhs = lhs;
    row.lhs_stderr = res.stderr_of(grad);
    if (row.lhs_stderr > 0.1 * row.rhs)
        row.verdict = "INCONCLUSIVE";
    else
        row.verdict = lhs <= row.rhs + 4.0 * row.lhs_stderr ? "PASS" : "FAIL";
    return row;
}

std::vector<Point> TruncationSequence::shell_probes(int n, const std::vector<double>& levels,
                                                    const std::vector<Point>& directions) const
{
    const int n1 = N1();
    std::vector<Point> out;
    for (const Point& v0 : directions) {
        const double nv = std::sqrt(family_.norm_sq(v0));
        if (!(nv > 0.0))
            throw std::invalid_argument("shell_probes: zero direction");
        Point v(v0.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = v0[i] / nv;
        Point x(v.size());
        for (double level : levels) {
            double lo = n, hi = n + 2.0 * n1;
            for (int it = 0; it < 40; ++it) {
                const double mid = 0.5 * (lo + hi);
                for (std::size_t i = 0; i < v.size(); ++i)
                    x[i] = mid * v[i];
                if (g_value(n + n1, x).value > level)
                    lo = mid;
                else
                    hi = mid;
            }
            for (std::size_t i = 0; i < v.size(); ++i)
                x[i] = 0.5 * (lo + hi) * v[i];
            out.push_back(x);
        }
    }
    return out;
}

std::vector<TruncationDiffRow> truncate_function(const FunctionRep& f, const std::vector<int>& k_list, int m, double p,
                                                 const TruncationSequence& seq, const Region& region,
                                                 const McBudget& budget)
{
    if (m > 2)
        throw std::domain_error("truncate_function: X_n carries derivatives up to order 2");
    std::vector<TruncationDiffRow> out;
    for (int k : k_list) {
        const FunctionRep diff = product(seq.xn_function(k), f) - f;
        out.push_back({k, sobolev_norm(diff, m, p, seq.weights(), region, budget)});
    }
    return out;
}

} // namespace gsobolev
