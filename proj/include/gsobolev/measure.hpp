#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gsobolev {

using Point = std::vector<double>;

// Square-summable, non-increasing weights a_1 >= a_2 >= ... > 0 with sum < 1,
// truncated to dimension d. Coordinates are 0-based: index 0 is x_1.
class WeightSequence {
public:
    static WeightSequence geometric(double ratio, double scale, int dim);
    static WeightSequence from_values(std::vector<double> a);
    // a_i = 2^{-(i+1)} in 1-based indexing, i.e. 1/4, 1/8, ...
    static WeightSequence standard(int dim);

    int dim() const noexcept { return static_cast<int>(a_.size()); }
    double operator[](int i) const { return a_[static_cast<std::size_t>(i)]; }
    std::span<const double> values() const noexcept { return a_; }
    double sum() const noexcept;
    double sum_squares() const noexcept;
    WeightSequence truncated(int dim) const;

private:
    explicit WeightSequence(std::vector<double> a);
    std::vector<double> a_;
};

// Deterministic random stream. Batch b of stream s under seed k is driven by
// an mt19937_64 seeded from splitmix64(k, s, b), so results do not depend on
// how batches are scheduled.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RngStream substream(std::uint64_t index) const;
    std::mt19937_64 engine(std::uint64_t batch) const;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Centered product Gaussian with per-coordinate standard deviations.
class ProductGaussian {
public:
    enum class Kind { P, PPrime, Marginal };

    // Covariance diag(a_i^2).
    static ProductGaussian P(const WeightSequence& w);
    // Covariance diag(a_i).
    static ProductGaussian Pprime(const WeightSequence& w);
    // Coordinates [first, last) of P.
    static ProductGaussian marginal(const WeightSequence& w, int first, int last);

    int dim() const noexcept { return static_cast<int>(sigma_.size()); }
    std::span<const double> sigma() const noexcept { return sigma_; }
    double variance(int i) const { return sigma_[static_cast<std::size_t>(i)] * sigma_[static_cast<std::size_t>(i)]; }
    Kind kind() const noexcept { return kind_; }
    std::string label() const;

    void draw(std::mt19937_64& eng, std::normal_distribution<double>& nd, std::span<double> out) const;

private:
    ProductGaussian(std::vector<double> sigma, Kind kind, int offset);
    std::vector<double> sigma_;
    Kind kind_;
    int offset_;
};

// Row-major block of sample points.
class SampleSet {
public:
    SampleSet() = default;
    SampleSet(int dim, std::size_t n) : dim_(dim), data_(static_cast<std::size_t>(dim) * n) {}

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / static_cast<std::size_t>(dim_); }
    std::span<const double> row(std::size_t j) const
    {
        return {data_.data() + j * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    std::span<double> row(std::size_t j)
    {
        return {data_.data() + j * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    std::vector<Point> to_points() const;

private:
    int dim_ = 0;
    std::vector<double> data_;
};

std::size_t default_batch_count();

// Draws exactly the points that an integration with the same stream, budget
// and batch count would visit, in the same order.
SampleSet sample(const ProductGaussian& mu, const RngStream& rng, std::size_t n, std::size_t batches = 32);

// tau_t: shift of the first coordinate.
Point translate(std::span<const double> x, double t);

} // namespace gsobolev
