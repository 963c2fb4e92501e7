#pragma once

#include "gsobolev/function.hpp"
#include "gsobolev/montecarlo.hpp"
#include "gsobolev/sobolev.hpp"

#include <string>
#include <vector>

namespace gsobolev {

// O = {g > 0}. Ball and annulus use g(x) = G(|x - c|^2).
class Domain {
public:
    enum class Kind { HalfSpace, Ball, Annulus };

    // {x_1 > 0}
    static Domain half_space(int dim);
    // G(s) = R - sqrt(s)
    static Domain ball(Point center, double radius);
    // G(s) = (s - r1^2)(r2^2 - s)
    static Domain annulus(Point center, double r_inner, double r_outer);

    Kind kind() const noexcept { return kind_; }
    int dim() const noexcept { return static_cast<int>(center_.size()); }
    const Point& center() const noexcept { return center_; }
    double r_inner() const noexcept { return r1_; }
    double r_outer() const noexcept { return r2_; }
    std::string name() const;

    double g(std::span<const double> x) const;
    void g_gradient(std::span<const double> x, std::span<double> grad) const;
    double g_partial2(std::span<const double> x, int i, int j) const;
    bool contains(std::span<const double> x) const { return g(x) > 0.0; }
    Region region() const;
    FunctionRep boundary_function() const;

    // Radial profile G^{(k)}(s), k <= 2.
    double profile(double s, int k) const;
    // Inverse of G on the branch through s_ref: S^{(k)}(v), k <= 2.
    double profile_inverse(double v, double s_ref, int k) const;
    double squared_radius(std::span<const double> x) const;

private:
    Domain(Kind kind, Point center, double r1, double r2) : kind_(kind), center_(std::move(center)), r1_(r1), r2_(r2) {}
    Kind kind_;
    Point center_;
    double r1_ = 0.0; // ball: radius
    double r2_ = 0.0;
};

struct ChartBounds {
    double delta = 0.0;
    double pivot_coord = 0.0; // sup |x_{i0}| on U0
    double first_coord = 0.0; // sup |xhat_1| on psi(U0)
    double dg_min = 0.0;      // bounds of |D_{i0} g| on U0
    double dg_max = 0.0;
    double dh_min = 0.0;      // bounds of |D_1 h| on psi(U0)
    double dh_max = 0.0;
    double g_winf = 0.0;      // W^{order,inf} bounds
    double h_winf = 0.0;
    double log_C1U0 = 0.0;
    double log_C2U0 = 0.0;
    double log_C1 = 0.0;
    double log_C2 = 0.0;
};

// Boundary-straightening chart at x0: psi puts g in coordinate 1 and x_1 in
// coordinate i0; tau is its inverse through h(xhat) = x_{i0}. U1 = B_{r0}(x0),
// U0 = B_{r1}(x0).
class BoundaryChart {
public:
    // Radii <= 0 pick defaults: r0 = |x0_{i0} - c_{i0}| / 3 (1 for the
    // half-space), r1 = 0.9 r0. Bounds are for derivatives up to order.
    static BoundaryChart make(const Domain& domain, Point x0, const WeightSequence& w, double r0 = 0.0,
                              double r1 = 0.0, int order = 2);

    const Domain& domain() const noexcept { return domain_; }
    const Point& x0() const noexcept { return x0_; }
    const WeightSequence& weights() const noexcept { return w_; }
    int dim() const noexcept { return domain_.dim(); }
    int i0() const noexcept { return i0_; }
    double r0() const noexcept { return r0_; }
    double r1() const noexcept { return r1_; }
    int order() const noexcept { return order_; }
    const ChartBounds& bounds() const noexcept { return bounds_; }

    bool in_U0(std::span<const double> x) const;
    bool in_U1(std::span<const double> x) const;

    Point psi(std::span<const double> x) const;
    // False where h is undefined.
    bool tau(std::span<const double> xhat, std::span<double> out) const;
    Point tau(std::span<const double> xhat) const;
    // tau(xhat) defined and in U0
    bool in_psi_U0(std::span<const double> xhat) const;

    double h(std::span<const double> xhat) const;
    double h_partial(std::span<const double> xhat, int k) const;
    double h_partial2(std::span<const double> xhat, int k, int l) const;
    void h_gradient(std::span<const double> xhat, std::span<double> grad) const;

    // Jacobian factors and their logarithms.
    double log_jacobian(std::span<const double> xhat) const;
    double log_jacobian1(std::span<const double> x) const;
    double jacobian(std::span<const double> xhat) const;
    double jacobian1(std::span<const double> x) const;

    // f o tau on psi(U0), zero elsewhere; derivatives up to 2.
    FunctionRep compose_tau(const FunctionRep& f) const;
    // F o psi on U0, zero elsewhere; derivatives up to 2.
    FunctionRep compose_psi(const FunctionRep& F) const;

    Region U0_region() const;
    Region U0_in_domain() const;
    Region psi_U0_in_halfspace() const;

    // Deterministic points of B_radius(x0).
    std::vector<Point> sample_ball(double radius, std::size_t n, const RngStream& rng) const;

    // log of the norm-equivalence constant for (p, m).
    double log_norm_constant(double p, int m) const;

private:
    BoundaryChart(Domain domain, Point x0, WeightSequence w) : domain_(std::move(domain)), x0_(std::move(x0)), w_(std::move(w)) {}
    void compute_bounds();
    // original coordinate carried by hat coordinate k != 0
    int hat_to_orig(int k) const { return (k == i0_) ? 0 : k; }
    double h_radicand(std::span<const double> xhat) const;

    Domain domain_;
    Point x0_;
    WeightSequence w_;
    int i0_ = 0;
    double r0_ = 0.0;
    double r1_ = 0.0;
    int order_ = 2;
    double sigma_ = 1.0; // sign of x0_{i0} - c_{i0}
    double s_ref_ = 0.0; // |x0 - c|^2, selects the inverse branch
    ChartBounds bounds_;
};

struct ChangeOfVariables {
    McEstimate lhs;        // int_{U0} f dP
    McEstimate rhs;        // int_{psi(U0)} f(tau) J dP
    McEstimate difference;
    McEstimate reverse_lhs; // P(psi(U0))
    McEstimate reverse_rhs; // int_{U0} J1 dP
    McEstimate reverse_difference;
    double acceptance = 0.0;
    bool pass = false;
};

ChangeOfVariables change_of_variables_check(const BoundaryChart& chart, const FunctionRep& f, const McBudget& budget);

struct ChainRuleCheck {
    double max_rel_error = 0.0;
    std::size_t used = 0;
    std::size_t rejected = 0;
};

// D^mi (f o tau) by 4th-order central differences (step) against the
// expanded chain rule, over probes in psi(U0).
ChainRuleCheck chain_rule_check(const BoundaryChart& chart, const FunctionRep& f, const MultiIndex& mi,
                                const std::vector<Point>& probes, double step = 1e-4);

struct JacobianBoundsCheck {
    double log_j_min = 0.0, log_j_max = 0.0;
    double log_j1_min = 0.0, log_j1_max = 0.0;
    double max_product_error = 0.0; // |J(psi x) J1(x) - 1|
    double max_roundtrip = 0.0;     // |tau(psi x) - x| over U1 points
    bool halfspace_transport = true;
    bool pass = false;
};

JacobianBoundsCheck jacobian_bounds_check(const BoundaryChart& chart, std::size_t n, const RngStream& rng);

struct NormEquivalence {
    SobolevNormReport norm_O;
    SobolevNormReport norm_H;
    double log_C_tilde = 0.0;
    bool upper = false; // norm_H <= C norm_O
    bool lower = false; // norm_O <= C norm_H
    bool verdict = false;
};

NormEquivalence norm_equivalence_check(const BoundaryChart& chart, const FunctionRep& f, int m, double p,
                                       const McBudget& budget);

// Zero extension of f from H cap O to H. Checks supp f in B_{r1}(x0) and
// B_{r2}(x0) cap H in O by sampling; throws std::invalid_argument otherwise.
FunctionRep halfspace_extend(const FunctionRep& f, const Domain& domain, const Point& x0, double r1, double r2,
                             const RngStream& rng = {}, std::size_t probes = 4000);

struct NonConvexityWitness {
    Point plus, minus;
    bool plus_inside = false, minus_inside = false, sum_outside = false;
    bool pass = false;
};

// +-((r1 + r2)/2) e_1 about the annulus center.
NonConvexityWitness annulus_nonconvexity(const Domain& annulus);

} // namespace gsobolev
