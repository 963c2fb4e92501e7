#include "gsobolev/montecarlo.hpp"
#include "gsobolev/summation.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace gsobolev {

unsigned resolve_workers(unsigned requested)
{
    if (requested > 0)
        return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body)
{
    const unsigned w = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1));
    std::vector<std::exception_ptr> errors(n);
    auto run = [&](std::atomic<std::size_t>& next) {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::atomic<std::size_t> next{0};
    if (w <= 1) {
        run(next);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < w; ++t)
            pool.emplace_back([&] { run(next); });
        for (auto& t : pool)
            t.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

McResult::McResult(std::size_t width, std::vector<std::size_t> batch_sizes, std::vector<double> batch_sums)
    : width_(width), sizes_(std::move(batch_sizes)), batch_means_(std::move(batch_sums)), means_(width, 0.0)
{
    for (auto s : sizes_)
        n_ += s;
    std::vector<double> col(sizes_.size());
    for (std::size_t k = 0; k < width_; ++k) {
        for (std::size_t b = 0; b < sizes_.size(); ++b)
            col[b] = batch_means_[b * width_ + k];
        means_[k] = pairwise_sum(col) / static_cast<double>(n_);
    }
    for (std::size_t b = 0; b < sizes_.size(); ++b)
        for (std::size_t k = 0; k < width_; ++k)
            batch_means_[b * width_ + k] /= static_cast<double>(sizes_[b]);
}

double McResult::stderr_of(std::span<const double> w) const
{
    const std::size_t nb = sizes_.size();
    if (nb < 2)
        return std::numeric_limits<double>::infinity();
    double center = 0.0;
    for (std::size_t k = 0; k < width_; ++k)
        center += w[k] * means_[k];
    CompensatedSum ss;
    for (std::size_t b = 0; b < nb; ++b) {
        double c = 0.0;
        for (std::size_t k = 0; k < width_; ++k)
            c += w[k] * batch_means_[b * width_ + k];
        ss.add((c - center) * (c - center));
    }
    return std::sqrt(ss.value() / static_cast<double>(nb * (nb - 1)));
}

McEstimate McResult::estimate(std::size_t k) const
{
    std::vector<double> w(width_, 0.0);
    w[k] = 1.0;
    return {means_[k], stderr_of(w), n_};
}

McEstimate McResult::combination(std::span<const double> w) const
{
    double v = 0.0;
    for (std::size_t k = 0; k < width_; ++k)
        v += w[k] * means_[k];
    return {v, stderr_of(w), n_};
}

McResult integrate_vector(const ProductGaussian& mu, const McBudget& budget, std::size_t width,
                          const VectorIntegrand& f)
{
    const std::size_t n = budget.samples;
    if (n < 2)
        throw std::invalid_argument("integrate: budget must be at least 2 samples");
    if (width == 0)
        throw std::invalid_argument("integrate: integrand width must be positive");
    const std::size_t nb = std::min(std::max<std::size_t>(budget.batches, 2), n);
    std::vector<std::size_t> sizes(nb);
    std::vector<std::size_t> first(nb);
    std::size_t acc = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        sizes[b] = n / nb + (b < n % nb ? 1 : 0);
        first[b] = acc;
        acc += sizes[b];
    }
    std::vector<double> sums(nb * width, 0.0);
    const int d = mu.dim();
    parallel_for(nb, budget.workers, [&](std::size_t b) {
        auto eng = budget.rng.engine(b);
        std::normal_distribution<double> nd;
        std::vector<double> x(static_cast<std::size_t>(d));
        std::vector<double> out(width);
        std::vector<CompensatedSum> acc_b(width);
        for (std::size_t j = 0; j < sizes[b]; ++j) {
            mu.draw(eng, nd, x);
            std::fill(out.begin(), out.end(), 0.0);
            f(x, out);
            for (std::size_t k = 0; k < width; ++k) {
                if (!std::isfinite(out[k]))
                    throw std::runtime_error("integrate: non-finite integrand value at sample " +
                                             std::to_string(first[b] + j) + " (batch " + std::to_string(b) +
                                             ", index " + std::to_string(j) + ", component " + std::to_string(k) +
                                             ")");
                acc_b[k].add(out[k]);
            }
        }
        for (std::size_t k = 0; k < width; ++k)
            sums[b * width + k] = acc_b[k].value();
    });
    return McResult(width, std::move(sizes), std::move(sums));
}

McEstimate integrate(const ScalarIntegrand& f, const ProductGaussian& mu, const McBudget& budget)
{
    auto r = integrate_vector(mu, budget, 1, [&](std::span<const double> x, std::span<double> out) { out[0] = f(x); });
    return r.estimate(0);
}

} // namespace gsobolev
