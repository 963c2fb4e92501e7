#include "gsobolev/measure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gsobolev {

WeightSequence::WeightSequence(std::vector<double> a) : a_(std::move(a))
{
    if (a_.empty())
        throw std::invalid_argument("weights: dimension must be at least 1");
    double s = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (!(a_[i] > 0.0) || !std::isfinite(a_[i]))
            throw std::invalid_argument("weights: a_" + std::to_string(i + 1) + " must be positive and finite");
        if (i > 0 && a_[i] > a_[i - 1])
            throw std::invalid_argument("weights: sequence must be non-increasing (a_" + std::to_string(i + 1) +
                                        " > a_" + std::to_string(i) + ")");
        s += a_[i];
    }
    if (!(s < 1.0))
        throw std::invalid_argument("weights: sum of weights must be < 1, got " + std::to_string(s));
}

WeightSequence WeightSequence::geometric(double ratio, double scale, int dim)
{
    if (dim < 1)
        throw std::invalid_argument("weights: dimension must be at least 1");
    if (!(ratio > 0.0 && ratio <= 1.0))
        throw std::invalid_argument("weights: geometric ratio must lie in (0, 1]");
    std::vector<double> a(static_cast<std::size_t>(dim));
    double v = scale;
    for (auto& x : a) {
        x = v;
        v *= ratio;
    }
    return WeightSequence(std::move(a));
}

WeightSequence WeightSequence::from_values(std::vector<double> a)
{
    return WeightSequence(std::move(a));
}

WeightSequence WeightSequence::standard(int dim)
{
    return geometric(0.5, 0.25, dim);
}

double WeightSequence::sum() const noexcept
{
    double s = 0.0;
    for (double v : a_)
        s += v;
    return s;
}

double WeightSequence::sum_squares() const noexcept
{
    double s = 0.0;
    for (double v : a_)
        s += v * v;
    return s;
}

WeightSequence WeightSequence::truncated(int dim) const
{
    if (dim < 1 || dim > this->dim())
        throw std::invalid_argument("weights: truncation dimension out of range");
    return WeightSequence(std::vector<double>(a_.begin(), a_.begin() + dim));
}

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream RngStream::substream(std::uint64_t index) const
{
    return {seed, splitmix64(stream ^ splitmix64(index + 0x632be59bd9b4e019ULL))};
}

std::mt19937_64 RngStream::engine(std::uint64_t batch) const
{
    const std::uint64_t k = splitmix64(seed);
    const std::uint64_t s = splitmix64(k ^ stream);
    const std::uint64_t b = splitmix64(s ^ (batch * 0xd1b54a32d192ed03ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    return std::mt19937_64(seq);
}

ProductGaussian::ProductGaussian(std::vector<double> sigma, Kind kind, int offset)
    : sigma_(std::move(sigma)), kind_(kind), offset_(offset)
{
}

ProductGaussian ProductGaussian::P(const WeightSequence& w)
{
    return ProductGaussian({w.values().begin(), w.values().end()}, Kind::P, 0);
}

ProductGaussian ProductGaussian::Pprime(const WeightSequence& w)
{
    std::vector<double> s;
    for (double a : w.values())
        s.push_back(std::sqrt(a));
    return ProductGaussian(std::move(s), Kind::PPrime, 0);
}

ProductGaussian ProductGaussian::marginal(const WeightSequence& w, int first, int last)
{
    if (first < 0 || last > w.dim() || first >= last)
        throw std::invalid_argument("marginal: coordinate range out of bounds");
    return ProductGaussian({w.values().begin() + first, w.values().begin() + last}, Kind::Marginal, first);
}

std::string ProductGaussian::label() const
{
    switch (kind_) {
    case Kind::P:
        return "P";
    case Kind::PPrime:
        return "P'";
    case Kind::Marginal:
        return "P[" + std::to_string(offset_ + 1) + ".." + std::to_string(offset_ + dim()) + "]";
    }
    return "?";
}

void ProductGaussian::draw(std::mt19937_64& eng, std::normal_distribution<double>& nd, std::span<double> out) const
{
    for (std::size_t i = 0; i < sigma_.size(); ++i)
        out[i] = sigma_[i] * nd(eng);
}

std::vector<Point> SampleSet::to_points() const
{
    std::vector<Point> pts;
    pts.reserve(size());
    for (std::size_t j = 0; j < size(); ++j) {
        auto r = row(j);
        pts.emplace_back(r.begin(), r.end());
    }
    return pts;
}

std::size_t default_batch_count()
{
    return 32;
}

SampleSet sample(const ProductGaussian& mu, const RngStream& rng, std::size_t n, std::size_t batches)
{
    SampleSet out(mu.dim(), n);
    if (n == 0)
        return out;
    const std::size_t nb = std::min(batches, n);
    std::size_t j = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t size = n / nb + (b < n % nb ? 1 : 0);
        auto eng = rng.engine(b);
        std::normal_distribution<double> nd;
        for (std::size_t k = 0; k < size; ++k)
            mu.draw(eng, nd, out.row(j++));
    }
    return out;
}

Point translate(std::span<const double> x, double t)
{
    Point y(x.begin(), x.end());
    if (!y.empty())
        y[0] += t;
    return y;
}

} // namespace gsobolev
