#pragma once

#include <memory>
#include <span>
#include <string>

namespace gsobolev {

constexpr int kMaxOrder = 6;
constexpr int kProfileOrder = kMaxOrder + 1;

// Smooth function of one real variable with derivatives up to kProfileOrder.
class Profile {
public:
    virtual ~Profile() = default;
    // out[k] = k-th derivative at t, k = 0..kmax.
    virtual void eval(double t, int kmax, std::span<double> out) const = 0;
    virtual bool bounded() const { return false; }
    virtual std::string name() const = 0;

    double value(double t) const;
    double derivative(double t, int k) const;
};

using ProfilePtr = std::shared_ptr<const Profile>;

// exp(-1/u) glue: 0 for u <= 0, 1 for u >= 1, C-infinity in between.
double smooth_step_unit(double u);
// Derivatives of the unit step up to kmax <= kProfileOrder.
void smooth_step_unit_derivatives(double u, int kmax, std::span<double> out);

namespace profile {

// exp(-(t - c)^2 / (2 w^2))
ProfilePtr gaussian(double center, double width);
// t^k for integer k >= 0
ProfilePtr power(int k);
// t^alpha on t > 0
ProfilePtr real_power(double alpha);
ProfilePtr exponential(double rate);
// 0 below lo, 1 above hi
ProfilePtr step_up(double lo, double hi);
// 1 below lo, 0 above hi
ProfilePtr step_down(double lo, double hi);
ProfilePtr reciprocal();
ProfilePtr affine(double slope, double intercept);

} // namespace profile

} // namespace gsobolev
