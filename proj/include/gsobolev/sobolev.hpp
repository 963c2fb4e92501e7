#pragma once

#include "gsobolev/function.hpp"
#include "gsobolev/montecarlo.hpp"

#include <functional>
#include <span>
#include <vector>

namespace gsobolev {

// Indicator of a region; an empty function means the whole space.
using Region = std::function<bool(std::span<const double>)>;

inline bool in_region(const Region& r, std::span<const double> x)
{
    return !r || r(x);
}

// sum over index tuples (i_1..i_k) of (a_{i_1}...a_{i_k} |D^k f(x)|)^q.
// Tuples are enumerated directly for k <= 2 and by multiset with
// multinomial multiplicity above.
double weighted_derivative_sum(const FunctionRep& f, int k, double q, const WeightSequence& w,
                               std::span<const double> x);

struct SobolevNormReport {
    double total = 0.0;
    // per_order[k] = int_O sum (a^p |D^k f|^p) dP
    std::vector<double> per_order;
    std::vector<double> per_order_stderr;
    int m = 0;
    double p = 2.0;
    double estimator_error = 0.0;
    std::size_t n = 0;
};

SobolevNormReport sobolev_norm(const FunctionRep& f, int m, double p, const WeightSequence& w, const Region& region,
                               const McBudget& budget);

// Largest observed value over probes in the region; a lower bound for the
// W^{m,infinity}(region) norm.
double winf_norm(const FunctionRep& f, int m, const WeightSequence& w, const Region& region,
                 const std::vector<Point>& probes);

struct ResidualReport {
    std::vector<McEstimate> residuals;
    std::vector<bool> pass;
    bool all_pass = true;
};

// int_O g phi_j dP - int_O f D*_mi phi_j dP for each test phi_j. PASS for a
// test when |residual| <= 4 stderr.
ResidualReport weak_derivative_residual(const FunctionRep& f, const FunctionRep& g, const MultiIndex& mi,
                                        const std::vector<FunctionRep>& tests, const WeightSequence& w,
                                        const Region& region, const McBudget& budget);

// Twelve smooth, bounded test functions with Gaussian-integrable derivatives.
std::vector<FunctionRep> standard_test_battery(int dim);
// Multiplies each test by a smooth step in x_1 vanishing on x_1 <= eps, so the
// supports lie uniformly inside the half-space.
std::vector<FunctionRep> halfspace_tests(const std::vector<FunctionRep>& tests, double eps);

struct TranslationCheck {
    McEstimate lhs;
    McEstimate rhs;
    McEstimate difference;
    bool pass = false;
};

// Largest |t| accepted by the tilted estimators, in units of a_1.
constexpr double kMaxTiltOverA1 = 4.0;

// int |f(tau_t x)|^p dP against e^{-t^2/2a_1^2} int |f|^p e^{t x_1/a_1^2} dP
// on one sample set.
TranslationCheck translation_pushforward_check(const FunctionRep& f, double t, double p, const WeightSequence& w,
                                               const McBudget& budget);

// ||u(tau_t)||_{W^{m,p}} / ||u||_{W^{m,p}} with the numerator computed by the
// exponential tilt on the denominator's samples.
McEstimate translation_norm_ratio(const FunctionRep& u, double t, double p, const WeightSequence& w,
                                  const McBudget& budget, int m = 1);

struct BogachevComparison {
    // sum_k (int (sum a^2 |D^k f|^2)^{p/2})^{1/p}
    McEstimate mixed_inside;
    // sum_k (int sum a^p |D^k f|^p)^{1/p}
    McEstimate intermediate;
    // the W^{m,p} norm
    McEstimate mixed_outside;
    // p <= 2: inside <= (m+1) outside; p > 2: inside >= outside
    bool verdict = false;
    double margin = 0.0;
};

BogachevComparison bogachev_norm_compare(const FunctionRep& f, int m, double p, const WeightSequence& w,
                                         const McBudget& budget);

} // namespace gsobolev
