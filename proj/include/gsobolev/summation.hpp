#pragma once

#include <cmath>
#include <span>

namespace gsobolev {

// Neumaier variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) noexcept
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Pairwise reduction with compensated leaves. Result depends only on the
// order of the input.
double pairwise_sum(std::span<const double> v);

} // namespace gsobolev
