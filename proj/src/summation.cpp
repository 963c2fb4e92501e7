#include "gsobolev/summation.hpp"

namespace gsobolev {

namespace {

constexpr std::size_t kLeaf = 8;

double reduce(const double* p, std::size_t n)
{
    if (n <= kLeaf) {
        CompensatedSum s;
        for (std::size_t i = 0; i < n; ++i)
            s.add(p[i]);
        return s.value();
    }
    const std::size_t h = n / 2;
    CompensatedSum s;
    s.add(reduce(p, h));
    s.add(reduce(p + h, n - h));
    return s.value();
}

} // namespace

double pairwise_sum(std::span<const double> v)
{
    return v.empty() ? 0.0 : reduce(v.data(), v.size());
}

} // namespace gsobolev
