#include "gsobolev/profile.hpp"
#include "gsobolev/jet.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gsobolev {

namespace {

constexpr double kGlueCut = 0.005;

void check_order(int kmax)
{
    if (kmax < 0 || kmax > kProfileOrder)
        throw std::domain_error("profile: derivative order " + std::to_string(kmax) + " not supported");
}

class GaussianProfile final : public Profile {
public:
    GaussianProfile(double c, double w) : c_(c), w_(w)
    {
        if (!(w > 0.0))
            throw std::invalid_argument("gaussian profile: width must be positive");
    }
    void eval(double t, int kmax, std::span<double> out) const override
    {
        check_order(kmax);
        const double u = (t - c_) / w_;
        const double g = std::exp(-0.5 * u * u);
        double hm1 = 0.0, h = 1.0, scale = 1.0;
        for (int k = 0; k <= kmax; ++k) {
            out[static_cast<std::size_t>(k)] = ((k % 2) ? -h : h) * g * scale;
            const double hn = u * h - k * hm1;
            hm1 = h;
            h = hn;
            scale /= w_;
        }
    }
    bool bounded() const override { return true; }
    std::string name() const override { return "gaussian"; }

private:
    double c_, w_;
};

class PowerProfile final : public Profile {
public:
    explicit PowerProfile(int k) : k_(k)
    {
        if (k < 0)
            throw std::invalid_argument("power profile: exponent must be >= 0");
    }
    void eval(double t, int kmax, std::span<double> out) const override
    {
        check_order(kmax);
        for (int j = 0; j <= kmax; ++j) {
            if (j > k_) {
                out[static_cast<std::size_t>(j)] = 0.0;
                continue;
            }
            double f = 1.0;
            for (int i = 0; i < j; ++i)
                f *= (k_ - i);
            out[static_cast<std::size_t>(j)] = f * std::pow(t, k_ - j);
        }
    }
    bool bounded() const override { return k_ == 0; }
    std::string name() const override { return "t^" + std::to_string(k_); }

private:
    int k_;
};

class RealPowerProfile final : public Profile {
public:
    explicit RealPowerProfile(double a) : a_(a) {}
    void eval(double t, int kmax, std::span<double> out) const override
    {
        check_order(kmax);
        if (!(t > 0.0))
            throw std::domain_error("real power profile: argument must be positive");
        double f = 1.0;
        for (int j = 0; j <= kmax; ++j) {
            out[static_cast<std::size_t>(j)] = f * std::pow(t, a_ - j);
            f *= (a_ - j);
        }
    }
    std::string name() const override { return "t^" + std::to_string(a_); }

private:
    double a_;
};

class ExponentialProfile final : public Profile {
public:
    explicit ExponentialProfile(double r) : r_(r) {}
    void eval(double t, int kmax, std::span<double> out) const override
    {
        check_order(kmax);
        double v = std::exp(r_ * t);
        for (int j = 0; j <= kmax; ++j) {
            out[static_cast<std::size_t>(j)] = v;
            v *= r_;
        }
    }
    bool bounded() const override { return r_ == 0.0; }
    std::string name() const override { return "exp"; }

private:
    double r_;
};

class StepProfile final : public Profile {
public:
    StepProfile(double lo, double hi, bool up) : lo_(lo), hi_(hi), up_(up)
    {
        if (!(hi > lo))
            throw std::invalid_argument("step profile: need lo < hi");
    }
    void eval(double t, int kmax, std::span<double> out) const override
    {
        check_order(kmax);
        const double len = hi_ - lo_;
        smooth_step_unit_derivatives((t - lo_) / len, kmax, out);
        double s = 1.0;
        for (int k = 1; k <= kmax; ++k) {
            s /= len;
            out[static_cast<std::size_t>(k)] *= s;
        }
        if (!up_) {
            out[0] = 1.0 - out[0];
            for (int k = 1; k <= kmax; ++k)
                out[static_cast<std::size_t>(k)] = -out[static_cast<std::size_t>(k)];
        }
    }
    bool bounded() const override { return true; }
    std::string name() const override { return up_ ? "step_up" : "step_down"; }

private:
    double lo_, hi_;
    bool up_;
};

class ReciprocalProfile final : public Profile {
public:
    void eval(double t, int kmax, std::span<double> out) const override
    {
        check_order(kmax);
        if (t == 0.0)
            throw std::domain_error("reciprocal profile: division by zero");
        double v = 1.0 / t;
        for (int j = 0; j <= kmax; ++j) {
            out[static_cast<std::size_t>(j)] = v;
            v *= -(j + 1) / t;
        }
    }
    std::string name() const override { return "1/t"; }
};

class AffineProfile final : public Profile {
public:
    AffineProfile(double s, double b) : s_(s), b_(b) {}
    void eval(double t, int kmax, std::span<double> out) const override
    {
        check_order(kmax);
        out[0] = s_ * t + b_;
        for (int j = 1; j <= kmax; ++j)
            out[static_cast<std::size_t>(j)] = j == 1 ? s_ : 0.0;
    }
    bool bounded() const override { return s_ == 0.0; }
    std::string name() const override { return "affine"; }

private:
    double s_, b_;
};

} // namespace

double Profile::value(double t) const
{
    std::array<double, kProfileOrder + 1> d{};
    eval(t, 0, d);
    return d[0];
}

double Profile::derivative(double t, int k) const
{
    std::array<double, kProfileOrder + 1> d{};
    eval(t, k, d);
    return d[static_cast<std::size_t>(k)];
}

double smooth_step_unit(double u)
{
    if (u <= 0.0)
        return 0.0;
    if (u >= 1.0)
        return 1.0;
    const double e1 = std::exp(-1.0 / u);
    const double e2 = std::exp(-1.0 / (1.0 - u));
    return e1 / (e1 + e2);
}

void smooth_step_unit_derivatives(double u, int kmax, std::span<double> out)
{
    check_order(kmax);
    for (int k = 0; k <= kmax; ++k)
        out[static_cast<std::size_t>(k)] = 0.0;
    if (u <= kGlueCut || u >= 1.0 - kGlueCut) {
        out[0] = smooth_step_unit(u);
        return;
    }
    using J = Jet<kProfileOrder + 1>;
    const J x = J::variable(u);
    const J one = J::constant(1.0);
    const J e1 = exp(-1.0 * (one / x));
    const J e2 = exp(-1.0 * (one / (1.0 - x)));
    const J s = e1 / (e1 + e2);
    for (int k = 0; k <= kmax; ++k)
        out[static_cast<std::size_t>(k)] = s.derivative(k);
}

namespace profile {

ProfilePtr gaussian(double center, double width)
{
    return std::make_shared<GaussianProfile>(center, width);
}
ProfilePtr power(int k)
{
    return std::make_shared<PowerProfile>(k);
}
ProfilePtr real_power(double alpha)
{
    return std::make_shared<RealPowerProfile>(alpha);
}
ProfilePtr exponential(double rate)
{
    return std::make_shared<ExponentialProfile>(rate);
}
ProfilePtr step_up(double lo, double hi)
{
    return std::make_shared<StepProfile>(lo, hi, true);
}
ProfilePtr step_down(double lo, double hi)
{
    return std::make_shared<StepProfile>(lo, hi, false);
}
ProfilePtr reciprocal()
{
    return std::make_shared<ReciprocalProfile>();
}
ProfilePtr affine(double slope, double intercept)
{
    return std::make_shared<AffineProfile>(slope, intercept);
}

} // namespace profile

} // namespace gsobolev
