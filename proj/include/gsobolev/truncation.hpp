#pragma once

#include "gsobolev/function.hpp"
#include "gsobolev/montecarlo.hpp"
#include "gsobolev/sobolev.hpp"

#include <memory>
#include <string>
#include <vector>

namespace gsobolev {

// K_n = {x : sum x_i^2 / c_i <= n^2} with c_i = sqrt(a_i).
class CompactFamily {
public:
    explicit CompactFamily(const WeightSequence& w);

    int dim() const noexcept { return static_cast<int>(c_.size()); }
    std::span<const double> c() const noexcept { return c_; }
    double norm_sq(std::span<const double> x) const;
    bool contains(std::span<const double> x, double n) const { return norm_sq(x) <= n * n; }
    // sum a_i / c_i on the truncated range
    double sum_a_over_c() const noexcept { return sum_a_over_c_; }

private:
    std::vector<double> c_;
    double sum_a_over_c_ = 0.0;
};

// H(v) = 0 for v <= 1/4, 1 for v >= 3/4, exp-glue in between; out[k] is the
// k-th derivative, k <= 3.
void truncation_step(double v, int kmax, std::span<double> out);

struct XnEval {
    enum class Path { Interior, Exterior, Estimated };
    double value = 0.0;
    std::vector<double> grad; // size d when order >= 1
    std::vector<double> hess; // d*d row-major when order >= 2
    McEstimate g;             // estimate of g_{n+N1}(x); exact 1 or 0 on shortcuts
    Path path = Path::Estimated;
};

struct BoundRow {
    int n = 0;
    std::size_t probe_id = 0;
    int k = 1;
    double p = 2.0;
    double g_estimate = 0.0;
    double xn = 0.0;
    double lhs = 0.0;
    double lhs_stderr = 0.0;
    double rhs = 0.0;
    std::string verdict; // PASS, FAIL or INCONCLUSIVE
};

// X_n = H(g_{n+N1}) with g_m(x) = P'(K_m - x) estimated on one cached P'
// sample set. N1 is calibrated on the same set, which makes the plateau
// shortcuts (x in K_n gives 1, x outside K_{n+2N1} gives 0) exact for the
// estimator as well as for the exact function.
class TruncationSequence : public std::enable_shared_from_this<TruncationSequence> {
public:
    static std::shared_ptr<TruncationSequence> create(const WeightSequence& w, std::size_t inner_samples,
                                                      const RngStream& rng, std::size_t batches = 32);

    const WeightSequence& weights() const noexcept { return w_; }
    const CompactFamily& family() const noexcept { return family_; }
    std::size_t inner_samples() const noexcept { return y_.size(); }

    // Estimates of P'(K_n), n = 1..n_max.
    std::vector<McEstimate> pprime_mass(int n_max) const;
    // Smallest n with P'(K_n) >= 4/5 + 4 stderr.
    int calibrate(int n_max = 64);
    int N1() const;
    bool calibrated() const noexcept { return n1_ > 0; }

    // Moments of chi_{K_m}(x + y) under P': component 0 is g_m(x); order >= 1
    // adds the d first score terms, order 2 the d(d+1)/2 second ones (i <= j).
    McResult g_moments(double m, std::span<const double> x, int order) const;
    McEstimate g_value(double m, std::span<const double> x) const;

    XnEval xn(int n, std::span<const double> x, int order) const;
    double xn_value(int n, std::span<const double> x) const { return xn(n, x, 0).value; }
    // X_n as a function with derivatives up to order 2.
    FunctionRep xn_function(int n) const;

    // sum (a_{i_1}..a_{i_k})^p |D^k X_n(x)|^p against (k!)^{p/2}.
    // on_g: same statistic for g_{n+N1} itself.
    BoundRow derivative_bound(int n, int k, double p, std::span<const double> x, std::size_t probe_id = 0,
                              bool on_g = false) const;

    // Points x = rho v with g_{n+N1}(x) close to each level, along the given
    // directions (bisection in rho).
    std::vector<Point> shell_probes(int n, const std::vector<double>& levels, const std::vector<Point>& directions) const;

private:
    TruncationSequence(const WeightSequence& w, SampleSet y, std::size_t batches);

    WeightSequence w_;
    CompactFamily family_;
    SampleSet y_;
    std::vector<double> q_;      // sum y_i^2 / c_i per sample
    std::vector<std::size_t> batch_sizes_;
    int n1_ = 0;
};

struct TruncationDiffRow {
    int k = 0;
    SobolevNormReport diff; // ||X_k f - f||
};

// ||X_k f - f||_{W^{m,p}(region)} for each k on one outer sample set.
std::vector<TruncationDiffRow> truncate_function(const FunctionRep& f, const std::vector<int>& k_list, int m, double p,
                                                 const TruncationSequence& seq, const Region& region,
                                                 const McBudget& budget);

const char* to_string(XnEval::Path p);

} // namespace gsobolev
