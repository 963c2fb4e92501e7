#pragma once

#include "gsobolev/function.hpp"
#include "gsobolev/montecarlo.hpp"

#include <string>
#include <vector>

namespace gsobolev {

struct ConvolutionEstimate {
    McEstimate value;
    // D_{x_i}(p_1 f)(x) for every coordinate, from one shared sample set.
    std::vector<McEstimate> grad;
    Point x;
    std::size_t budget = 0;
};

// (p_1 f)(x) = E f(x + y), y ~ P. f must be bounded.
McEstimate gross_value(const FunctionRep& f, std::span<const double> x, const WeightSequence& w,
                       const McBudget& budget);

// D_{x_i}(p_1 f)(x) = E[(y_i / a_i^2) f(x + y)]; entries outside depends_on(f)
// are estimated too (they vanish in expectation).
ConvolutionEstimate gross_gradient(const FunctionRep& f, std::span<const double> x, const WeightSequence& w,
                                   const McBudget& budget);

struct HsCheck {
    McEstimate lhs; // sum a_i^2 (D_i p_1 f)^2
    McEstimate rhs; // E f(x + y)^2
    bool pass = false;
};

// First-order Hilbert-Schmidt bound at x.
HsCheck hs_bound_check(const FunctionRep& f, std::span<const double> x, const WeightSequence& w,
                       const McBudget& budget);

// (2^p / (2 pi)^{p/2}) n^{1 - p/2} e^{-(p/2) s^2}
double sharpness_closed_form(int n, double p, double s = 0.0);

struct SharpnessRow {
    int n = 0;
    double p = 0.0;
    std::string point; // "0" or "random"
    double s = 0.0;
    McEstimate mc;
    double closed_form = 0.0;
    double ratio_to_prev_n = 0.0; // 0 for the first n
};

// sum_{i<=n} a_i^p |D_{x_i}(p_1 f_n)(x/sqrt(n))|^p for f_n = sgn(sum_{i<=n} x_i/a_i)
// at x = 0 and, if random_points > 0, at that many points x ~ P. One sample
// set is shared across all i and n. Terms with i > n vanish identically and
// are not estimated.
std::vector<SharpnessRow> sharpness_experiment(const std::vector<int>& n_list, const std::vector<double>& p_list,
                                               const WeightSequence& w, const McBudget& budget,
                                               int random_points = 0);

struct LlnRow {
    int n = 0;
    McEstimate mean;       // of s = (1/n) sum_{j<=n} x_j / a_j
    McEstimate variance;   // should be 1/n
    McEstimate exp_factor; // E e^{-s^2/2}
    bool pass = false;
};

std::vector<LlnRow> lln_collapse_check(const std::vector<int>& n_list, const WeightSequence& w,
                                       const McBudget& budget);

} // namespace gsobolev
