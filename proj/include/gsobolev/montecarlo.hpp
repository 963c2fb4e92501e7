#pragma once

#include "gsobolev/measure.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gsobolev {

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

struct McBudget {
    std::size_t samples = 20000;
    RngStream rng{};
    std::size_t batches = 32;
    unsigned workers = 0; // 0: hardware concurrency

    McBudget with_stream(std::uint64_t stream) const
    {
        McBudget b = *this;
        b.rng = rng.substream(stream);
        return b;
    }
    McBudget with_samples(std::size_t n) const
    {
        McBudget b = *this;
        b.samples = n;
        return b;
    }
};

// Batch means of a vector integrand. All components share the sample points,
// so linear combinations get a correct joint standard error.
class McResult {
public:
    McResult(std::size_t width, std::vector<std::size_t> batch_sizes, std::vector<double> batch_sums);

    std::size_t width() const noexcept { return width_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t batches() const noexcept { return sizes_.size(); }

    double mean(std::size_t k) const { return means_[k]; }
    std::span<const double> means() const noexcept { return means_; }
    double batch_mean(std::size_t b, std::size_t k) const { return batch_means_[b * width_ + k]; }

    McEstimate estimate(std::size_t k) const;
    // sum_k w_k mean_k with its standard error.
    McEstimate combination(std::span<const double> w) const;
    // Standard error of sum_k w_k mean_k; with w the gradient of a smooth
    // statistic this is its delta-method error.
    double stderr_of(std::span<const double> w) const;

private:
    std::size_t width_;
    std::size_t n_ = 0;
    std::vector<std::size_t> sizes_;
    std::vector<double> batch_means_;
    std::vector<double> means_;
};

using VectorIntegrand = std::function<void(std::span<const double> x, std::span<double> out)>;
using ScalarIntegrand = std::function<double(std::span<const double> x)>;

// Runs f over budget.samples draws from mu. Throws std::runtime_error naming
// the batch and sample index if f produces a non-finite value.
McResult integrate_vector(const ProductGaussian& mu, const McBudget& budget, std::size_t width,
                          const VectorIntegrand& f);

McEstimate integrate(const ScalarIntegrand& f, const ProductGaussian& mu, const McBudget& budget);

// Deterministic parallel loop over [0, n); body(i) must only write slot i.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

unsigned resolve_workers(unsigned requested);

} // namespace gsobolev
