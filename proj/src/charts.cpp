#include "gsobolev/charts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace gsobolev {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double dist(std::span<const double> x, std::span<const double> y)
{
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
}

// -s^2 + b s + c
class QuadraticProfile final : public Profile {
public:
    QuadraticProfile(double b, double c) : b_(b), c_(c) {}
    void eval(double t, int kmax, std::span<double> out) const override
    {
        for (int k = 0; k <= kmax; ++k)
            out[static_cast<std::size_t>(k)] = 0.0;
        out[0] = -t * t + b_ * t + c_;
        if (kmax >= 1)
            out[1] = -2.0 * t + b_;
        if (kmax >= 2)
            out[2] = -2.0;
    }
    std::string name() const override { return "quadratic"; }

private:
    double b_, c_;
};

double log_sum_exp(double a, double b)
{
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

} // namespace

// ---------------------------------------------------------------- Domain

Domain Domain::half_space(int dim)
{
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("half_space: bad dimension");
    return Domain(Kind::HalfSpace, Point(static_cast<std::size_t>(dim), 0.0), 0.0, 0.0);
}

Domain Domain::ball(Point center, double radius)
{
    if (center.empty() || center.size() > kMaxDim)
        throw std::invalid_argument("ball: bad dimension");
    if (!(radius > 0.0))
        throw std::invalid_argument("ball: radius must be positive");
    return Domain(Kind::Ball, std::move(center), radius, 0.0);
}

Domain Domain::annulus(Point center, double r_inner, double r_outer)
{
    if (center.empty() || center.size() > kMaxDim)
        throw std::invalid_argument("annulus: bad dimension");
    if (!(r_inner > 0.0 && r_inner < r_outer))
        throw std::invalid_argument("annulus: need 0 < r_inner < r_outer");
    return Domain(Kind::Annulus, std::move(center), r_inner, r_outer);
}

std::string Domain::name() const
{
    switch (kind_) {
    case Kind::HalfSpace:
        return "half_space";
    case Kind::Ball:
        return "ball(r=" + std::to_string(r1_) + ")";
    default:
        return "annulus(" + std::to_string(r1_) + "," + std::to_string(r2_) + ")";
    }
}

double Domain::squared_radius(std::span<const double> x) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < center_.size(); ++i)
        s += (x[i] - center_[i]) * (x[i] - center_[i]);
    return s;
}

double Domain::profile(double s, int k) const
{
    if (kind_ == Kind::Ball) {
        const double r = std::sqrt(s);
        switch (k) {
        case 0:
            return r1_ - r;
        case 1:
            return -0.5 / r;
        default:
            return 0.25 / (r * s);
        }
    }
    if (kind_ == Kind::Annulus) {
        const double a = r1_ * r1_, b = r2_ * r2_;
        switch (k) {
        case 0:
            return (s - a) * (b - s);
        case 1:
            return a + b - 2.0 * s;
        default:
            return -2.0;
        }
    }
    throw std::logic_error("profile: half-space has no radial profile");
}

double Domain::profile_inverse(double v, double s_ref, int k) const
{
    if (kind_ == Kind::Ball) {
        if (v > r1_)
            return kNaN;
        switch (k) {
        case 0:
            return (r1_ - v) * (r1_ - v);
        case 1:
            return -2.0 * (r1_ - v);
        default:
            return 2.0;
        }
    }
    if (kind_ == Kind::Annulus) {
        const double a = r1_ * r1_, b = r2_ * r2_;
        const double disc = (b - a) * (b - a) - 4.0 * v;
        if (!(disc > 0.0))
            return kNaN;
        const double beta = s_ref >= 0.5 * (a + b) ? 1.0 : -1.0;
        const double sq = std::sqrt(disc);
        switch (k) {
        case 0:
            return 0.5 * (a + b + beta * sq);
        case 1:
            return -beta / sq;
        default:
            return -2.0 * beta / (disc * sq);
        }
    }
    throw std::logic_error("profile_inverse: half-space has no radial profile");
}

double Domain::g(std::span<const double> x) const
{
    if (kind_ == Kind::HalfSpace)
        return x[0];
    return profile(squared_radius(x), 0);
}

void Domain::g_gradient(std::span<const double> x, std::span<double> grad) const
{
    const std::size_t d = center_.size();
    if (kind_ == Kind::HalfSpace) {
        std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(d), 0.0);
        grad[0] = 1.0;
        return;
    }
    const double g1 = profile(squared_radius(x), 1);
    for (std::size_t i = 0; i < d; ++i)
        grad[i] = 2.0 * g1 * (x[i] - center_[i]);
}

double Domain::g_partial2(std::span<const double> x, int i, int j) const
{
    if (kind_ == Kind::HalfSpace)
        return 0.0;
    const double s = squared_radius(x);
    const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
    double v = 4.0 * profile(s, 2) * (x[ui] - center_[ui]) * (x[uj] - center_[uj]);
    if (i == j)
        v += 2.0 * profile(s, 1);
    return v;
}

Region Domain::region() const
{
    Domain copy = *this;
    return [copy](std::span<const double> x) { return copy.contains(x); };
}

FunctionRep Domain::boundary_function() const
{
    const int d = dim();
    if (kind_ == Kind::HalfSpace)
        return separable(d, 1.0, {{0, profile::power(1)}}, "g=x1");
    const FunctionRep s = squared_distance(d, center_);
    if (kind_ == Kind::Ball)
        return compose(profile::affine(-1.0, r1_), compose(profile::real_power(0.5), s), "g=R-|x-c|");
    const double a = r1_ * r1_, b = r2_ * r2_;
    return compose(std::make_shared<QuadraticProfile>(a + b, -a * b), s, "g=(s-r1^2)(r2^2-s)");
}

// ---------------------------------------------------------------- chart

BoundaryChart BoundaryChart::make(const Domain& domain, Point x0, const WeightSequence& w, double r0, double r1,
                                  int order)
{
    const int d = domain.dim();
    if (static_cast<int>(x0.size()) != d || w.dim() != d)
        throw std::invalid_argument("make_chart: dimension mismatch");
    if (order < 1 || order > 2)
        throw std::domain_error("make_chart: bounds are available for order 1 or 2");
    if (std::abs(domain.g(x0)) > 1e-8)
        throw std::invalid_argument("make_chart: x0 is not on the boundary (g(x0) = " + std::to_string(domain.g(x0)) +
                                    ")");
    BoundaryChart c(domain, std::move(x0), w);
    c.order_ = order;
    if (domain.kind() == Domain::Kind::HalfSpace) {
        c.i0_ = 0;
        c.sigma_ = 1.0;
        c.r0_ = r0 > 0.0 ? r0 : 1.0;
    } else {
        int best = 0;
        for (int i = 1; i < d; ++i)
            if (std::abs(c.x0_[static_cast<std::size_t>(i)] - domain.center()[static_cast<std::size_t>(i)]) >
                std::abs(c.x0_[static_cast<std::size_t>(best)] - domain.center()[static_cast<std::size_t>(best)]))
                best = i;
        const double u0 = c.x0_[static_cast<std::size_t>(best)] - domain.center()[static_cast<std::size_t>(best)];
        std::vector<double> grad(static_cast<std::size_t>(d));
        domain.g_gradient(c.x0_, grad);
        if (std::abs(grad[static_cast<std::size_t>(best)]) < 1e-6)
            throw std::invalid_argument("make_chart: pivot derivative |D_{x_" + std::to_string(best + 1) +
                                        "} g| below threshold");
        c.i0_ = best;
        c.sigma_ = u0 > 0.0 ? 1.0 : -1.0;
        c.s_ref_ = domain.squared_radius(c.x0_);
        c.r0_ = r0 > 0.0 ? r0 : std::abs(u0) / 3.0;
    }
    c.r1_ = r1 > 0.0 ? r1 : 0.9 * c.r0_;
    if (!(c.r1_ < c.r0_))
        throw std::invalid_argument("make_chart: need r1 < r0");
    c.compute_bounds();
    return c;
}

void BoundaryChart::compute_bounds()
{
    const Domain& D = domain_;
    const auto i0 = static_cast<std::size_t>(i0_);
    const double a1 = w_[0], ai0 = w_[i0_];
    double sum_a = 0.0, sum_a2 = 0.0;
    for (int i = 0; i < w_.dim(); ++i) {
        sum_a += w_[i];
        sum_a2 += w_[i] * w_[i];
    }
    const double r = r1_;
    ChartBounds& b = bounds_;
    if (D.kind() == Domain::Kind::HalfSpace) {
        double nx0 = 0.0;
        for (double v : x0_)
            nx0 += v * v;
        nx0 = std::sqrt(nx0);
        b.delta = std::max(1.0 + r0_, (r0_ + nx0) * (r0_ + nx0) + a1 * a1);
        b.pivot_coord = r;
        b.first_coord = r;
        b.dg_min = b.dg_max = b.dh_min = b.dh_max = 1.0;
        b.g_winf = b.h_winf = std::max(a1, r);
    } else {
        const double rho0 = std::sqrt(D.squared_radius(x0_));
        const double u0 = std::abs(x0_[i0] - D.center()[i0]);
        if (!(u0 - r0_ > 0.0) || !(rho0 - r0_ > 0.0))
            throw std::invalid_argument("make_chart: radius r0 = " + std::to_string(r0_) +
                                        " reaches the pivot hyperplane; condition on |D g| fails");
        const double s_lo = (rho0 - r) * (rho0 - r), s_hi = (rho0 + r) * (rho0 + r);
        const double u_lo = u0 - r, u_hi = u0 + r;
        double gp_min, gp_max, gpp_max, g_abs;
        if (D.kind() == Domain::Kind::Ball) {
            gp_min = 0.5 / std::sqrt(s_hi);
            gp_max = 0.5 / std::sqrt(s_lo);
            gpp_max = 0.25 / (s_lo * std::sqrt(s_lo));
            g_abs = std::max(std::abs(D.profile(s_lo, 0)), std::abs(D.profile(s_hi, 0)));
        } else {
            const double a = D.r_inner() * D.r_inner(), bb = D.r_outer() * D.r_outer();
            const double v_lo = D.profile(s_lo, 1), v_hi = D.profile(s_hi, 1);
            if (v_lo * v_hi <= 0.0)
                throw std::invalid_argument("make_chart: U1 crosses the critical sphere of the annulus profile");
            gp_min = std::min(std::abs(v_lo), std::abs(v_hi));
            gp_max = std::max(std::abs(v_lo), std::abs(v_hi));
            gpp_max = 2.0;
            g_abs = std::max(std::abs(D.profile(s_lo, 0)), std::abs(D.profile(s_hi, 0)));
            const double sv = 0.5 * (a + bb);
            if (sv > s_lo && sv < s_hi)
                g_abs = std::max(g_abs, std::abs(D.profile(sv, 0)));
        }
        b.pivot_coord = std::abs(x0_[i0]) + r;
        b.first_coord = g_abs;
        b.dg_min = 2.0 * gp_min * u_lo;
        b.dg_max = 2.0 * gp_max * u_hi;
        b.dh_min = 1.0 / b.dg_max;
        b.dh_max = 1.0 / b.dg_min;
        const double sa2 = std::sqrt(sum_a2), rs = std::sqrt(s_hi);
        b.g_winf = std::max(g_abs, 2.0 * gp_max * sa2 * rs);
        if (order_ >= 2)
            b.g_winf = std::max(b.g_winf, 4.0 * gpp_max * sum_a2 * s_hi + 2.0 * gp_max * sum_a);
        const double sp_max = 1.0 / gp_min;
        const double spp_max = gpp_max / (gp_min * gp_min * gp_min);
        const double h_abs = std::abs(D.center()[i0]) + u_hi;
        b.h_winf = std::max(h_abs, a1 * sp_max / (2.0 * u_lo) + sa2 * rs / u_lo);
        if (order_ >= 2) {
            const double t1 = (a1 * a1 * spp_max + 2.0 * sum_a2) / (2.0 * u_lo);
            const double t2 = a1 * sp_max + 2.0 * sa2 * rs;
            b.h_winf = std::max(b.h_winf, t1 + t2 * t2 / (4.0 * u_lo * u_lo * u_lo));
        }
        b.delta = 1.000001 * std::max({1.0, b.pivot_coord, b.first_coord, b.dg_max, 1.0 / b.dg_min, b.dh_max,
                                       1.0 / b.dh_min, b.g_winf, b.h_winf});
    }
    // x_1 range on U0, which is also xhat_{i0} on psi(U0)
    double x1sq_max = 0.0;
    if (i0_ != 0) {
        const double lo = x0_[0] - r, hi = x0_[0] + r;
        x1sq_max = std::max(lo * lo, hi * hi);
    }
    const double kappa = 0.5 / (ai0 * ai0) - 0.5 / (a1 * a1);
    b.log_C2U0 = kappa * x1sq_max;
    b.log_C1U0 = -kappa * x1sq_max;
    const double amin = std::min(a1, ai0);
    b.log_C1 = b.log_C1U0 - std::log(b.delta) - b.delta * b.delta / (amin * amin);
    b.log_C2 = b.log_C2U0 + std::log(b.delta) + b.delta * b.delta / (amin * amin);
}

double BoundaryChart::log_norm_constant(double p, int m) const
{
    const double M = std::max(bounds_.g_winf, bounds_.h_winf);
    const double a1 = w_[0];
    const double lead = std::log(std::pow(2.0, m + 1) - 1.0) + (p * std::pow(2.0, m) + m) * std::log(2.0) +
                        m * std::log1p(std::pow(M, p));
    const double tail = p * m * std::log(a1);
    return (bounds_.log_C2 + log_sum_exp(lead, tail) - tail) / p;
}

bool BoundaryChart::in_U0(std::span<const double> x) const
{
    return dist(x, x0_) < r1_;
}

bool BoundaryChart::in_U1(std::span<const double> x) const
{
    return dist(x, x0_) < r0_;
}

Point BoundaryChart::psi(std::span<const double> x) const
{
    Point out(x.begin(), x.end());
    out[0] = domain_.g(x);
    if (i0_ != 0)
        out[static_cast<std::size_t>(i0_)] = x[0];
    return out;
}

double BoundaryChart::h_radicand(std::span<const double> xhat) const
{
    const double S = domain_.profile_inverse(xhat[0], s_ref_, 0);
    double q = 0.0;
    for (int k = 1; k < dim(); ++k) {
        const double y = xhat[static_cast<std::size_t>(k)] - domain_.center()[static_cast<std::size_t>(hat_to_orig(k))];
        q += y * y;
    }
    return S - q;
}

double BoundaryChart::h(std::span<const double> xhat) const
{
    if (domain_.kind() == Domain::Kind::HalfSpace)
        return xhat[0];
    const double R = h_radicand(xhat);
    if (!(R > 0.0))
        return kNaN;
    return domain_.center()[static_cast<std::size_t>(i0_)] + sigma_ * std::sqrt(R);
}

double BoundaryChart::h_partial(std::span<const double> xhat, int k) const
{
    if (domain_.kind() == Domain::Kind::HalfSpace)
        return k == 0 ? 1.0 : 0.0;
    const double u = std::sqrt(h_radicand(xhat));
    if (k == 0)
        return sigma_ * domain_.profile_inverse(xhat[0], s_ref_, 1) / (2.0 * u);
    const double y = xhat[static_cast<std::size_t>(k)] - domain_.center()[static_cast<std::size_t>(hat_to_orig(k))];
    return -sigma_ * y / u;
}

double BoundaryChart::h_partial2(std::span<const double> xhat, int k, int l) const
{
    if (domain_.kind() == Domain::Kind::HalfSpace)
        return 0.0;
    const double R = h_radicand(xhat);
    const double u = std::sqrt(R);
    auto dR = [&](int j) {
        if (j == 0)
            return domain_.profile_inverse(xhat[0], s_ref_, 1);
        return -2.0 * (xhat[static_cast<std::size_t>(j)] - domain_.center()[static_cast<std::size_t>(hat_to_orig(j))]);
    };
    double d2 = 0.0;
    if (k == l)
        d2 = k == 0 ? domain_.profile_inverse(xhat[0], s_ref_, 2) : -2.0;
    return sigma_ * (d2 / (2.0 * u) - dR(k) * dR(l) / (4.0 * u * R));
}

void BoundaryChart::h_gradient(std::span<const double> xhat, std::span<double> grad) const
{
    const int d = dim();
    if (domain_.kind() == Domain::Kind::HalfSpace) {
        std::fill(grad.begin(), grad.begin() + d, 0.0);
        grad[0] = 1.0;
        return;
    }
    const double u = std::sqrt(h_radicand(xhat));
    grad[0] = sigma_ * domain_.profile_inverse(xhat[0], s_ref_, 1) / (2.0 * u);
    for (int k = 1; k < d; ++k)
        grad[static_cast<std::size_t>(k)] =
            -sigma_ * (xhat[static_cast<std::size_t>(k)] - domain_.center()[static_cast<std::size_t>(hat_to_orig(k))]) / u;
}

bool BoundaryChart::tau(std::span<const double> xhat, std::span<double> out) const
{
    const double hv = h(xhat);
    if (!std::isfinite(hv))
        return false;
    std::copy(xhat.begin(), xhat.end(), out.begin());
    if (i0_ != 0)
        out[0] = xhat[static_cast<std::size_t>(i0_)];
    out[static_cast<std::size_t>(i0_)] = hv;
    return true;
}

Point BoundaryChart::tau(std::span<const double> xhat) const
{
    Point out(xhat.size());
    if (!tau(xhat, out))
        throw std::domain_error("tau: point outside the chart");
    return out;
}

bool BoundaryChart::in_psi_U0(std::span<const double> xhat) const
{
    std::array<double, kMaxDim> buf{};
    const std::span<double> x(buf.data(), xhat.size());
    return tau(xhat, x) && in_U0(x);
}

double BoundaryChart::log_jacobian(std::span<const double> xhat) const
{
    const double a1 = w_[0], ai = w_[i0_];
    const double hv = h(xhat);
    const double xi = xhat[static_cast<std::size_t>(i0_)];
    return std::log(std::abs(h_partial(xhat, 0))) + xhat[0] * xhat[0] / (2 * a1 * a1) - hv * hv / (2 * ai * ai) +
           xi * xi / (2 * ai * ai) - xi * xi / (2 * a1 * a1);
}

double BoundaryChart::log_jacobian1(std::span<const double> x) const
{
    const double a1 = w_[0], ai = w_[i0_];
    std::array<double, kMaxDim> grad{};
    domain_.g_gradient(x, grad);
    const double gv = domain_.g(x);
    const double xi = x[static_cast<std::size_t>(i0_)];
    return std::log(std::abs(grad[static_cast<std::size_t>(i0_)])) + xi * xi / (2 * ai * ai) - gv * gv / (2 * a1 * a1) +
           x[0] * x[0] / (2 * a1 * a1) - x[0] * x[0] / (2 * ai * ai);
}

double BoundaryChart::jacobian(std::span<const double> xhat) const
{
    return std::exp(log_jacobian(xhat));
}

double BoundaryChart::jacobian1(std::span<const double> x) const
{
    return std::exp(log_jacobian1(x));
}

Region BoundaryChart::U0_region() const
{
    Point c = x0_;
    const double r = r1_;
    return [c, r](std::span<const double> x) { return dist(x, c) < r; };
}

Region BoundaryChart::U0_in_domain() const
{
    BoundaryChart ch = *this;
    return [ch](std::span<const double> x) { return ch.in_U0(x) && ch.domain().contains(x); };
}

Region BoundaryChart::psi_U0_in_halfspace() const
{
    BoundaryChart ch = *this;
    return [ch](std::span<const double> x) { return x[0] > 0.0 && ch.in_psi_U0(x); };
}

std::vector<Point> BoundaryChart::sample_ball(double radius, std::size_t n, const RngStream& rng) const
{
    auto eng = rng.engine(0);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud;
    std::vector<Point> out;
    out.reserve(n);
    const auto d = static_cast<std::size_t>(dim());
    for (std::size_t j = 0; j < n; ++j) {
        Point v(d);
        double s = 0.0;
        for (auto& e : v) {
            e = nd(eng);
            s += e * e;
        }
        const double rho = radius * ud(eng) / std::sqrt(s);
        for (std::size_t i = 0; i < d; ++i)
            v[i] = x0_[i] + rho * v[i];
        out.push_back(std::move(v));
    }
    return out;
}

// ---------------------------------------------------------------- composed maps

namespace {

// F o Phi with Phi_sp = phi(x) and Phi_{perm[k]} = x_k for k != skip.
// Zero outside the chart's validity set.
class ChartMapNode final : public FunctionNode {
public:
    enum class Mode { Tau, Psi };

    ChartMapNode(FunctionRep F, BoundaryChart chart, Mode mode)
        : FunctionNode(F.dim(), std::min(2, F.max_order()), all_coordinates(F.dim()),
                       F.name() + (mode == Mode::Tau ? " o tau" : " o psi"),
                       mode == Mode::Psi ? SupportSpec::ball(chart.x0(), chart.r1()) : SupportSpec{}, F.bounded()),
          F_(std::move(F)), chart_(std::move(chart)), mode_(mode)
    {
        const int i0 = chart_.i0();
        if (mode_ == Mode::Tau) {
            sp_ = i0;
            skip_ = 0;
        } else {
            sp_ = 0;
            skip_ = i0;
        }
        perm_.resize(static_cast<std::size_t>(dim()));
        for (int k = 0; k < dim(); ++k)
            perm_[static_cast<std::size_t>(k)] = k;
        if (i0 != 0) {
            if (mode_ == Mode::Tau)
                perm_[static_cast<std::size_t>(i0)] = 0;
            else
                perm_[0] = i0;
        }
    }

    double value(std::span<const double> x) const override
    {
        std::array<double, kMaxDim> buf{};
        const std::span<double> y(buf.data(), x.size());
        if (!map(x, y))
            return 0.0;
        return F_.value(y);
    }

    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        std::array<double, kMaxDim> buf{};
        if (!map(x, std::span<double>(buf.data(), x.size())))
            return 0.0;
        const std::span<const double> y(buf.data(), x.size());
        const int k = mi[0];
        if (mi.order() == 1) {
            double v = F_.partial({sp_}, y) * phi1(x, k);
            if (k != skip_)
                v += F_.partial({perm(k)}, y);
            return v;
        }
        const int l = mi[1];
        const double pk = phi1(x, k), pl = phi1(x, l);
        double v = F_.partial({sp_, sp_}, y) * pk * pl + F_.partial({sp_}, y) * phi2(x, k, l);
        if (k != skip_ && l != skip_)
            v += F_.partial({perm(k), perm(l)}, y);
        if (k != skip_)
            v += F_.partial({perm(k), sp_}, y) * pl;
        if (l != skip_)
            v += F_.partial({sp_, perm(l)}, y) * pk;
        return v;
    }

    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        const auto d = static_cast<std::size_t>(dim());
        std::array<double, kMaxDim> buf{};
        const std::span<double> y(buf.data(), d);
        if (!map(x, y)) {
            std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(d), 0.0);
            return 0.0;
        }
        std::array<double, kMaxDim> fg{}, pg{};
        const double v = F_.value_gradient(y, fg);
        if (mode_ == Mode::Tau)
            chart_.h_gradient(x, pg);
        else
            chart_.domain().g_gradient(x, pg);
        const double fsp = fg[static_cast<std::size_t>(sp_)];
        for (std::size_t k = 0; k < d; ++k) {
            grad[k] = fsp * pg[k];
            if (static_cast<int>(k) != skip_)
                grad[k] += fg[static_cast<std::size_t>(perm(static_cast<int>(k)))];
        }
        return v;
    }

private:
    int perm(int k) const { return perm_[static_cast<std::size_t>(k)]; }

    bool map(std::span<const double> x, std::span<double> y) const
    {
        if (mode_ == Mode::Tau)
            return chart_.tau(x, y) && chart_.in_U0(y);
        if (!chart_.in_U0(x))
            return false;
        const Point p = chart_.psi(x);
        std::copy(p.begin(), p.end(), y.begin());
        return true;
    }

    double phi1(std::span<const double> x, int k) const
    {
        if (mode_ == Mode::Tau)
            return chart_.h_partial(x, k);
        std::array<double, kMaxDim> g{};
        chart_.domain().g_gradient(x, g);
        return g[static_cast<std::size_t>(k)];
    }

    double phi2(std::span<const double> x, int k, int l) const
    {
        if (mode_ == Mode::Tau)
            return chart_.h_partial2(x, k, l);
        return chart_.domain().g_partial2(x, k, l);
    }

    FunctionRep F_;
    BoundaryChart chart_;
    Mode mode_;
    int sp_ = 0, skip_ = 0;
    std::vector<int> perm_;
};

} // namespace

FunctionRep BoundaryChart::compose_tau(const FunctionRep& f) const
{
    return FunctionRep(std::make_shared<ChartMapNode>(f, *this, ChartMapNode::Mode::Tau));
}

FunctionRep BoundaryChart::compose_psi(const FunctionRep& F) const
{
    return FunctionRep(std::make_shared<ChartMapNode>(F, *this, ChartMapNode::Mode::Psi));
}

// ---------------------------------------------------------------- checks

ChangeOfVariables change_of_variables_check(const BoundaryChart& chart, const FunctionRep& f, const McBudget& budget)
{
    const auto mu = ProductGaussian::P(chart.weights());
    const auto d = static_cast<std::size_t>(chart.dim());
    const McResult res = integrate_vector(mu, budget, 5, [&](std::span<const double> x, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        if (chart.in_U0(x)) {
            out[0] = f.value(x);
            out[3] = chart.jacobian1(x);
            out[4] = 1.0;
        }
        std::array<double, kMaxDim> y{};
        const std::span<double> ys(y.data(), d);
        if (chart.tau(x, ys) && chart.in_U0(ys)) {
            out[1] = f.value(ys) * chart.jacobian(x);
            out[2] = 1.0;
        }
    });
    ChangeOfVariables c;
    c.acceptance = res.mean(4);
    if (c.acceptance < 0.01)
        throw std::runtime_error("change_of_variables_check: degenerate chart, " +
                                 std::to_string(100.0 * (1.0 - c.acceptance)) + "% of samples fall outside U0");
    c.lhs = res.estimate(0);
    c.rhs = res.estimate(1);
    const std::vector<double> w1{1.0, -1.0, 0.0, 0.0, 0.0};
    c.difference = res.combination(w1);
    c.reverse_lhs = res.estimate(2);
    c.reverse_rhs = res.estimate(3);
    const std::vector<double> w2{0.0, 0.0, 1.0, -1.0, 0.0};
    c.reverse_difference = res.combination(w2);
    c.pass = std::abs(c.difference.value) <= 4.0 * c.difference.std_error &&
             std::abs(c.reverse_difference.value) <= 4.0 * c.reverse_difference.std_error;
    return c;
}

ChainRuleCheck chain_rule_check(const BoundaryChart& chart, const FunctionRep& f, const MultiIndex& mi,
                                const std::vector<Point>& probes, double step)
{
    if (mi.order() < 1 || mi.order() > 2)
        throw std::domain_error("chain_rule_check: order 1 or 2");
    const FunctionRep ft = chart.compose_tau(f);
    const auto d = static_cast<std::size_t>(chart.dim());
    ChainRuleCheck out;
    const int k = mi[0];
    const int l = mi.order() == 2 ? mi[1] : -1;
    static constexpr double c1[4] = {1.0, -8.0, 8.0, -1.0};
    static constexpr int o1[4] = {-2, -1, 1, 2};
    for (const Point& x : probes) {
        bool ok = true;
        auto F = [&](double dk, double dl) {
            Point y = x;
            y[static_cast<std::size_t>(k)] += dk;
            if (l >= 0)
                y[static_cast<std::size_t>(l)] += dl;
            std::array<double, kMaxDim> t{};
            const std::span<double> ts(t.data(), d);
            if (!chart.tau(y, ts) || !chart.in_U0(ts)) {
                ok = false;
                return 0.0;
            }
            return f.value(ts);
        };
        double fd = 0.0;
        if (l < 0) {
            for (int a = 0; a < 4; ++a)
                fd += c1[a] * F(o1[a] * step, 0.0);
            fd /= 12.0 * step;
        } else if (k == l) {
            static constexpr double c2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
            for (int a = 0; a < 5; ++a)
                fd += c2[a] * F((a - 2) * step, 0.0);
            fd /= 12.0 * step * step;
        } else {
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    fd += c1[a] * c1[b] * F(o1[a] * step, o1[b] * step);
            fd /= 144.0 * step * step;
        }
        if (!ok) {
            ++out.rejected;
            continue;
        }
        const double an = ft.partial(mi, x);
        out.max_rel_error = std::max(out.max_rel_error, std::abs(fd - an) / std::max(std::abs(an), 1e-3));
        ++out.used;
    }
    if (out.used == 0)
        throw std::invalid_argument("chain_rule_check: every probe is too close to the chart edge");
    return out;
}

JacobianBoundsCheck jacobian_bounds_check(const BoundaryChart& chart, std::size_t n, const RngStream& rng)
{
    JacobianBoundsCheck c;
    c.log_j_min = c.log_j1_min = std::numeric_limits<double>::infinity();
    c.log_j_max = c.log_j1_max = -std::numeric_limits<double>::infinity();
    for (const Point& x : chart.sample_ball(chart.r1() * (1.0 - 1e-9), n, rng)) {
        const Point xh = chart.psi(x);
        const double lj = chart.log_jacobian(xh), lj1 = chart.log_jacobian1(x);
        c.log_j_min = std::min(c.log_j_min, lj);
        c.log_j_max = std::max(c.log_j_max, lj);
        c.log_j1_min = std::min(c.log_j1_min, lj1);
        c.log_j1_max = std::max(c.log_j1_max, lj1);
        c.max_product_error = std::max(c.max_product_error, std::abs(std::expm1(lj + lj1)));
    }
    for (const Point& x : chart.sample_ball(chart.r0() * (1.0 - 1e-9), n, rng.substream(1))) {
        const Point xh = chart.psi(x);
        Point back(x.size());
        if (!chart.tau(xh, back)) {
            c.max_roundtrip = std::numeric_limits<double>::infinity();
            continue;
        }
        double e = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            e += (back[i] - x[i]) * (back[i] - x[i]);
        c.max_roundtrip = std::max(c.max_roundtrip, std::sqrt(e));
        if (chart.domain().contains(x) != (xh[0] > 0.0))
            c.halfspace_transport = false;
    }
    const auto& b = chart.bounds();
    c.pass = c.log_j_min >= b.log_C1 && c.log_j_max <= b.log_C2 && c.log_j1_min >= b.log_C1 &&
             c.log_j1_max <= b.log_C2 && c.max_roundtrip <= 1e-8 && c.max_product_error <= 1e-8 &&
             c.halfspace_transport;
    return c;
}

NormEquivalence norm_equivalence_check(const BoundaryChart& chart, const FunctionRep& f, int m, double p,
                                       const McBudget& budget)
{
    if (m > 2)
        throw std::domain_error("norm_equivalence_check: m <= 2");
    NormEquivalence r;
    r.norm_O = sobolev_norm(f, m, p, chart.weights(), chart.U0_in_domain(), budget);
    r.norm_H = sobolev_norm(chart.compose_tau(f), m, p, chart.weights(), chart.psi_U0_in_halfspace(), budget);
    r.log_C_tilde = chart.log_norm_constant(p, m);
    auto le = [&](const SobolevNormReport& a, const SobolevNormReport& b) {
        const double lhs = a.total - 4.0 * a.estimator_error;
        const double rhs = b.total + 4.0 * b.estimator_error;
        if (lhs <= 0.0)
            return true;
        if (rhs <= 0.0)
            return false;
        return std::log(lhs) <= r.log_C_tilde + std::log(rhs);
    };
    r.upper = le(r.norm_H, r.norm_O);
    r.lower = le(r.norm_O, r.norm_H);
    r.verdict = r.upper && r.lower;
    return r;
}

namespace {

class ZeroExtensionNode final : public FunctionNode {
public:
    ZeroExtensionNode(FunctionRep f, Domain domain)
        : FunctionNode(f.dim(), f.max_order(), f.deps_mask(), f.name() + " extended by 0", f.support(), f.bounded()),
          f_(std::move(f)), domain_(std::move(domain))
    {
    }
    double value(std::span<const double> x) const override { return inside(x) ? f_.value(x) : 0.0; }
    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        return inside(x) ? f_.partial(mi, x) : 0.0;
    }
    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        if (!inside(x)) {
            std::fill(grad.begin(), grad.begin() + dim(), 0.0);
            return 0.0;
        }
        return f_.value_gradient(x, grad);
    }

private:
    bool inside(std::span<const double> x) const { return x[0] > 0.0 && domain_.contains(x); }
    FunctionRep f_;
    Domain domain_;
};

} // namespace

FunctionRep halfspace_extend(const FunctionRep& f, const Domain& domain, const Point& x0, double r1, double r2,
                             const RngStream& rng, std::size_t probes)
{
    const auto d = static_cast<std::size_t>(domain.dim());
    if (f.dim() != domain.dim() || x0.size() != d)
        throw std::invalid_argument("halfspace_extend: dimension mismatch");
    if (!(r1 > 0.0 && r1 < r2))
        throw std::invalid_argument("halfspace_extend: need 0 < r1 < r2");
    if (std::abs(x0[0]) > 1e-12)
        throw std::invalid_argument("halfspace_extend: x0 must lie on the boundary of the half-space");
    const auto& sup = f.support();
    if (sup.is_bounded() && sup.metric.empty() && dist(sup.center, x0) + sup.radius >= r1)
        throw std::invalid_argument("halfspace_extend: declared support of " + f.name() + " reaches the sphere of radius " +
                                    std::to_string(r1) + " about x0");
    auto eng = rng.engine(0);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud;
    Point y(d);
    for (std::size_t j = 0; j < probes; ++j) {
        double s = 0.0;
        for (auto& e : y) {
            e = nd(eng);
            s += e * e;
        }
        s = std::sqrt(s);
        const bool outer = j % 2 == 0;
        const double rho = outer ? r1 + (r2 - r1) * ud(eng) : r2 * ud(eng);
        for (std::size_t i = 0; i < d; ++i)
            y[i] = x0[i] + rho * y[i] / s;
        y[0] = std::abs(y[0]);
        if (y[0] == 0.0)
            continue;
        if (!domain.contains(y))
            throw std::invalid_argument("halfspace_extend: B_r2(x0) cap H is not contained in " + domain.name());
        if (outer && f.value(y) != 0.0)
            throw std::invalid_argument("halfspace_extend: " + f.name() + " is nonzero at distance " +
                                        std::to_string(rho) + " from x0, outside B_r1");
    }
    return FunctionRep(std::make_shared<ZeroExtensionNode>(f, domain));
}

NonConvexityWitness annulus_nonconvexity(const Domain& annulus)
{
    if (annulus.kind() != Domain::Kind::Annulus)
        throw std::invalid_argument("annulus_nonconvexity: not an annulus");
    NonConvexityWitness w;
    const double r = 0.5 * (annulus.r_inner() + annulus.r_outer());
    w.plus = annulus.center();
    w.minus = annulus.center();
    w.plus[0] += r;
    w.minus[0] -= r;
    Point sum = annulus.center();
    for (std::size_t i = 0; i < sum.size(); ++i)
        sum[i] = w.plus[i] + w.minus[i] - annulus.center()[i];
    w.plus_inside = annulus.contains(w.plus);
    w.minus_inside = annulus.contains(w.minus);
    w.sum_outside = !annulus.contains(sum);
    w.pass = w.plus_inside && w.minus_inside && w.sum_outside;
    return w;
}

} // namespace gsobolev
