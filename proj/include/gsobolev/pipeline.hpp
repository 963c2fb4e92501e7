#pragma once

#include "gsobolev/charts.hpp"
#include "gsobolev/function.hpp"
#include "gsobolev/montecarlo.hpp"
#include "gsobolev/sobolev.hpp"
#include "gsobolev/truncation.hpp"

#include <string>
#include <vector>

namespace gsobolev {

// f_n(x) = mean_j f(x_1..x_n, y_j) over a frozen set of tail draws y_j from
// the marginal of P on coordinates n+1..d. Exact (no tail draws) when f does
// not depend on the tail.
FunctionRep projected(const FunctionRep& f, int n, const WeightSequence& w, std::size_t tail_samples,
                      const RngStream& rng);

struct ProjectionResult {
    int n = 0;
    FunctionRep fn;
    McEstimate lp_gap;       // ||f_n - f||_p
    McEstimate norm_f;       // ||f||_p
    McEstimate norm_fn;      // ||f_n||_p
    McEstimate norm_excess;  // ||f_n||_p - ||f||_p
    McEstimate moment_gap;   // int |f_n|^p - int |f|^p
    bool contraction = false;
};

ProjectionResult project(const FunctionRep& f, int n, double p, const WeightSequence& w, const McBudget& budget,
                         std::size_t tail_samples = 256);

// One outer sample set and one tail set for the whole grid.
std::vector<ProjectionResult> projection_convergence(const FunctionRep& f, const std::vector<int>& n_grid, double p,
                                                     const WeightSequence& w, const McBudget& budget,
                                                     std::size_t tail_samples = 256);

// Piecewise constant function on a uniform grid over 1 or 2 coordinates.
struct GridFunction {
    std::vector<int> coords;
    std::vector<double> lo, hi;
    std::vector<int> cells;
    std::vector<double> values; // first axis slowest

    int axes() const noexcept { return static_cast<int>(coords.size()); }
    double cell_width(int a) const;
    double center(int a, int c) const;
    // f evaluated at cell centers; f receives one value per axis.
    static GridFunction sample(std::vector<int> coords, std::vector<double> lo, std::vector<double> hi,
                               std::vector<int> cells, const std::function<double(std::span<const double>)>& f);
};

// Convolution with the kernel k_eps(u) = prod eps^{-1} k(u/eps), k the
// derivative of a smooth step on [-1, 1]. Cell integrals of the kernel are
// differences of the step, so constants are reproduced exactly. Throws if a
// cell on the grid edge is nonzero.
FunctionRep mollify_lowdim(const GridFunction& g, int dim, double width);

struct CoverElement {
    enum class Kind { Interior, Boundary, Exterior };
    Kind kind = Kind::Interior;
    Point center;
    // Interior/Boundary: bump is 1 on |x - c| <= plateau and 0 beyond radius.
    // Exterior: 0 on |x - c| <= plateau, 1 beyond radius.
    double plateau = 0.0;
    double radius = 0.0;
    int chart = -1; // index into the pipeline's chart list

    bool in_support(std::span<const double> x) const;
};

const char* to_string(CoverElement::Kind k);

struct PartitionOfUnity {
    std::vector<FunctionRep> pieces;
    std::vector<CoverElement> cover;
    FunctionRep bump_sum;

    // max |sum_i f_i(x) - 1| over points with positive bump sum
    double normalization_error(const std::vector<Point>& pts) const;
    // largest |f_i(x)| over points outside element i
    double support_leak(const std::vector<Point>& pts) const;
};

// Pieces b_i / sum_j b_j (zero where the sum vanishes). Draws probes from P
// and from balls around each element; throws std::runtime_error if a probe in
// overlap has sum_j b_j <= 1e-12.
PartitionOfUnity build_partition(int dim, const std::vector<CoverElement>& cover, const Region& overlap,
                                 const WeightSequence& w, const RngStream& rng, std::size_t probes = 4000);

struct StageGap {
    std::string name;
    double gap = 0.0;
    double std_error = 0.0;
};

struct PipelineStep {
    int k = 0;
    int n = 0;
    double gap = 0.0;
    double std_error = 0.0;
};

struct PipelineConfig {
    std::string name;
    Domain domain = Domain::half_space(1);
    FunctionRep f;
    WeightSequence w = WeightSequence::standard(1);
    std::vector<BoundaryChart> charts;
    std::vector<CoverElement> cover;
    Region overlap;
    int m = 1;
    double p = 2.0;
    double epsilon = 0.05; // relative to ||f||
    std::vector<int> schedule; // empty: 1..d
    std::size_t tail_samples = 48;
    std::size_t inner_samples = 20000;
    McBudget budget;
};

struct PipelineReport {
    std::string name;
    double norm_f = 0.0;
    std::vector<PipelineStep> sequence;
    std::vector<StageGap> stages; // at the last step
    double total_gap = 0.0;
    double total_stderr = 0.0;
    bool reached = false; // total_gap < epsilon ||f||
    bool monotone = false;
    int N1 = 0;
};

// Approximant for truncation index k and projection dimension n.
FunctionRep pipeline_approximant(const PipelineConfig& cfg, const PartitionOfUnity& pu, const TruncationSequence& seq,
                                 int k, int n);

PipelineReport approximate(const PipelineConfig& cfg);

// Half-space with f = x_1 times a Gaussian bump, one boundary chart at the
// origin, one interior ball and an exterior piece.
PipelineConfig golden_halfspace(int dim, const WeightSequence& w, std::uint64_t seed, std::size_t samples);
// Ball of radius 1 centred at -0.9 e_1 with a bump straddling the boundary
// point 0.1 e_1; three charts on the e_1-e_2 circle.
PipelineConfig golden_ball(int dim, const WeightSequence& w, std::uint64_t seed, std::size_t samples);
// Only an interior ball (and the exterior piece) on the whole space.
PipelineConfig interior_only(int dim, const WeightSequence& w, const FunctionRep& f, std::uint64_t seed,
                             std::size_t samples);

} // namespace gsobolev
