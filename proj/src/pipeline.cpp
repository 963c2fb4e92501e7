#include "gsobolev/pipeline.hpp"

#include "gsobolev/builtins.hpp"
#include "gsobolev/summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gsobolev {

namespace {

class ProjectedNode final : public FunctionNode {
public:
    ProjectedNode(FunctionRep f, int n, SampleSet tail)
        : FunctionNode(f.dim(), f.max_order(), f.deps_mask() & low_mask(n),
                       "E[" + f.name() + " | x_1..x_" + std::to_string(n) + "]", SupportSpec::whole_space(),
                       f.bounded()),
          f_(std::move(f)), n_(n), tail_(std::move(tail))
    {
    }

    double value(std::span<const double> x) const override
    {
        auto buf = head(x);
        const std::span<const double> y(buf.data(), x.size());
        CompensatedSum s;
        for (std::size_t j = 0; j < tail_.size(); ++j) {
            fill(buf, j);
            s.add(f_.value(y));
        }
        return s.value() / static_cast<double>(tail_.size());
    }

    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        auto buf = head(x);
        const std::span<const double> y(buf.data(), x.size());
        CompensatedSum s;
        for (std::size_t j = 0; j < tail_.size(); ++j) {
            fill(buf, j);
            s.add(f_.partial(mi, y));
        }
        return s.value() / static_cast<double>(tail_.size());
    }

    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        const std::size_t d = x.size();
        auto buf = head(x);
        const std::span<const double> y(buf.data(), d);
        std::array<double, kMaxDim> g{};
        std::array<CompensatedSum, kMaxDim> acc{};
        CompensatedSum v;
        for (std::size_t j = 0; j < tail_.size(); ++j) {
            fill(buf, j);
            v.add(f_.value_gradient(y, g));
            for (int i = 0; i < n_; ++i)
                acc[static_cast<std::size_t>(i)].add(g[static_cast<std::size_t>(i)]);
        }
        const double inv = 1.0 / static_cast<double>(tail_.size());
        for (std::size_t i = 0; i < d; ++i)
            grad[i] = static_cast<int>(i) < n_ ? acc[i].value() * inv : 0.0;
        return v.value() * inv;
    }

private:
    static std::uint64_t low_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1); }

    std::array<double, kMaxDim> head(std::span<const double> x) const
    {
        std::array<double, kMaxDim> buf{};
        std::copy(x.begin(), x.end(), buf.begin());
        return buf;
    }
    void fill(std::array<double, kMaxDim>& buf, std::size_t j) const
    {
        const auto r = tail_.row(j);
        std::copy(r.begin(), r.end(), buf.begin() + n_);
    }

    FunctionRep f_;
    int n_;
    SampleSet tail_;
};

double root_p(double m, double p)
{
    return m > 0.0 ? std::pow(m, 1.0 / p) : 0.0;
}

double droot_p(double m, double p)
{
    return m > 0.0 ? std::pow(m, 1.0 / p - 1.0) / p : 0.0;
}

} // namespace

FunctionRep projected(const FunctionRep& f, int n, const WeightSequence& w, std::size_t tail_samples,
                      const RngStream& rng)
{
    const int d = f.dim();
    if (n < 0 || n > d)
        throw std::invalid_argument("project: n must lie in [0, dim]");
    if (w.dim() != d)
        throw std::invalid_argument("project: weight and function dimensions differ");
    const std::uint64_t tail = f.deps_mask() & ~((n >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
    if (tail == 0)
        return f;
    if (tail_samples == 0)
        throw std::invalid_argument("project: need tail samples");
    return FunctionRep(std::make_shared<ProjectedNode>(
        f, n, sample(ProductGaussian::marginal(w, n, d), rng, tail_samples)));
}

namespace {

ProjectionResult evaluate_projection(const FunctionRep& f, const FunctionRep& fn, int n, double p,
                                     const WeightSequence& w, const McBudget& budget)
{
    const McResult r = integrate_vector(ProductGaussian::P(w), budget, 3, [&](std::span<const double> x, std::span<double> out) {
        const double a = f.value(x);
        const double b = fn.value(x);
        out[0] = std::pow(std::abs(b - a), p);
        out[1] = std::pow(std::abs(a), p);
        out[2] = std::pow(std::abs(b), p);
    });
    ProjectionResult res;
    res.n = n;
    res.fn = fn;
    auto norm = [&](std::size_t k) {
        const double m = r.mean(k);
        std::array<double, 3> g{};
        g[k] = droot_p(m, p);
        return McEstimate{root_p(m, p), r.stderr_of(g), r.n()};
    };
    res.lp_gap = norm(0);
    res.norm_f = norm(1);
    res.norm_fn = norm(2);
    const std::array<double, 3> ge{0.0, -droot_p(r.mean(1), p), droot_p(r.mean(2), p)};
    res.norm_excess = {res.norm_fn.value - res.norm_f.value, r.stderr_of(ge), r.n()};
    const std::array<double, 3> gm{0.0, -1.0, 1.0};
    res.moment_gap = r.combination(gm);
    res.contraction = res.norm_excess.value <= 4.0 * res.norm_excess.std_error;
    return res;
}

} // namespace

ProjectionResult project(const FunctionRep& f, int n, double p, const WeightSequence& w, const McBudget& budget,
                         std::size_t tail_samples)
{
    if (!(p >= 1.0))
        throw std::invalid_argument("project: p must be >= 1");
    const FunctionRep fn = projected(f, n, w, tail_samples, budget.rng.substream(0x7a11));
    return evaluate_projection(f, fn, n, p, w, budget);
}

std::vector<ProjectionResult> projection_convergence(const FunctionRep& f, const std::vector<int>& n_grid, double p,
                                                     const WeightSequence& w, const McBudget& budget,
                                                     std::size_t tail_samples)
{
    std::vector<ProjectionResult> out;
    for (int n : n_grid)
        out.push_back(project(f, n, p, w, budget, tail_samples));
    return out;
}

double GridFunction::cell_width(int a) const
{
    const auto k = static_cast<std::size_t>(a);
    return (hi[k] - lo[k]) / cells[k];
}

double GridFunction::center(int a, int c) const
{
    return lo[static_cast<std::size_t>(a)] + (c + 0.5) * cell_width(a);
}

GridFunction GridFunction::sample(std::vector<int> coords, std::vector<double> lo, std::vector<double> hi,
                                  std::vector<int> cells, const std::function<double(std::span<const double>)>& f)
{
    GridFunction g{std::move(coords), std::move(lo), std::move(hi), std::move(cells), {}};
    const int na = g.axes();
    if (na < 1 || na > 2 || g.lo.size() != g.coords.size() || g.hi.size() != g.coords.size() ||
        g.cells.size() != g.coords.size())
        throw std::invalid_argument("grid function: 1 or 2 axes with matching bounds and cell counts");
    const int n0 = g.cells[0];
    const int n1 = na == 2 ? g.cells[1] : 1;
    g.values.resize(static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1));
    std::array<double, 2> pt{};
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            pt[0] = g.center(0, i);
            if (na == 2)
                pt[1] = g.center(1, j);
            g.values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(j)] =
                f(std::span<const double>(pt.data(), static_cast<std::size_t>(na)));
        }
    return g;
}

namespace {

class MollifiedNode final : public FunctionNode {
public:
    MollifiedNode(int dim, GridFunction g, double eps)
        : FunctionNode(dim, kMaxOrder, coordinate_mask(g.coords), "mollified(" + std::to_string(eps) + ")",
                       SupportSpec::whole_space(), true),
          g_(std::move(g)), eps_(eps)
    {
    }

    double value(std::span<const double> x) const override
    {
        return eval(x, {0, 0});
    }

    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        std::array<int, 2> r{0, 0};
        for (int k = 0; k < mi.order(); ++k) {
            const auto it = std::find(g_.coords.begin(), g_.coords.end(), mi[k]);
            if (it == g_.coords.end())
                return 0.0;
            ++r[static_cast<std::size_t>(it - g_.coords.begin())];
        }
        return eval(x, r);
    }

private:
    // K^{(r)}(u) with K(u) = s((u + 1) / 2)
    static double kernel_cdf(double u, int r)
    {
        std::array<double, kProfileOrder + 1> s{};
        smooth_step_unit_derivatives(0.5 * (u + 1.0), r, s);
        return s[static_cast<std::size_t>(r)] * std::ldexp(1.0, -r);
    }

    void axis_weights(int a, double x, int r, std::vector<double>& out) const
    {
        const int n = g_.cells[static_cast<std::size_t>(a)];
        const double h = g_.cell_width(a);
        const double lo = g_.lo[static_cast<std::size_t>(a)];
        const double scale = std::pow(eps_, -r);
        out.assign(static_cast<std::size_t>(n), 0.0);
        double left = kernel_cdf((x - lo) / eps_, r);
        for (int c = 0; c < n; ++c) {
            const double right = kernel_cdf((x - (lo + (c + 1) * h)) / eps_, r);
            out[static_cast<std::size_t>(c)] = (left - right) * scale;
            left = right;
        }
    }

    double eval(std::span<const double> x, std::array<int, 2> r) const
    {
        std::vector<double> w0, w1;
        axis_weights(0, x[static_cast<std::size_t>(g_.coords[0])], r[0], w0);
        if (g_.axes() == 1) {
            CompensatedSum s;
            for (std::size_t c = 0; c < w0.size(); ++c)
                if (w0[c] != 0.0)
                    s.add(w0[c] * g_.values[c]);
            return s.value();
        }
        axis_weights(1, x[static_cast<std::size_t>(g_.coords[1])], r[1], w1);
        CompensatedSum s;
        for (std::size_t i = 0; i < w0.size(); ++i) {
            if (w0[i] == 0.0)
                continue;
            for (std::size_t j = 0; j < w1.size(); ++j)
                if (w1[j] != 0.0)
                    s.add(w0[i] * w1[j] * g_.values[i * w1.size() + j]);
        }
        return s.value();
    }

    GridFunction g_;
    double eps_;
};

} // namespace

FunctionRep mollify_lowdim(const GridFunction& g, int dim, double width)
{
    const int na = g.axes();
    if (na < 1 || na > 2)
        throw std::invalid_argument("mollify: grid must have 1 or 2 axes");
    if (!(width > 0.0))
        throw std::invalid_argument("mollify: kernel width must be positive");
    for (int c : g.coords)
        if (c < 0 || c >= dim)
            throw std::invalid_argument("mollify: grid coordinate outside the dimension");
    if (na == 2 && g.coords[0] == g.coords[1])
        throw std::invalid_argument("mollify: grid coordinates must differ");
    const int n0 = g.cells[0];
    const int n1 = na == 2 ? g.cells[1] : 1;
    if (g.values.size() != static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1))
        throw std::invalid_argument("mollify: value count does not match the grid");
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const bool edge = i == 0 || i == n0 - 1 || (na == 2 && (j == 0 || j == n1 - 1));
            if (edge && g.values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(j)] != 0.0)
                throw std::invalid_argument("mollify: support reaches the edge of the grid");
        }
    return FunctionRep(std::make_shared<MollifiedNode>(dim, g, width));
}

bool CoverElement::in_support(std::span<const double> x) const
{
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = i < center.size() ? center[i] : 0.0;
        r2 += (x[i] - c) * (x[i] - c);
    }
    if (kind == Kind::Exterior)
        return r2 > plateau * plateau;
    return r2 < radius * radius;
}

const char* to_string(CoverElement::Kind k)
{
    switch (k) {
    case CoverElement::Kind::Interior: return "interior";
    case CoverElement::Kind::Boundary: return "boundary";
    case CoverElement::Kind::Exterior: return "exterior";
    }
    return "?";
}

namespace {

class PieceNode final : public FunctionNode {
public:
    PieceNode(FunctionRep q, FunctionRep sum, std::string name, SupportSpec support)
        : FunctionNode(q.dim(), q.max_order(), q.deps_mask(), std::move(name), std::move(support), true),
          q_(std::move(q)), sum_(std::move(sum))
    {
    }
    double value(std::span<const double> x) const override { return covered(x) ? q_.value(x) : 0.0; }
    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        return covered(x) ? q_.partial(mi, x) : 0.0;
    }
    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        if (covered(x))
            return q_.value_gradient(x, grad);
        std::fill(grad.begin(), grad.begin() + dim(), 0.0);
        return 0.0;
    }

private:
    bool covered(std::span<const double> x) const { return sum_.value(x) > 0.0; }
    FunctionRep q_;
    FunctionRep sum_;
};

FunctionRep element_bump(int dim, const CoverElement& e)
{
    if (!(e.plateau >= 0.0 && e.radius > e.plateau))
        throw std::invalid_argument("partition: cover element needs 0 <= plateau < radius");
    const FunctionRep b = builtin::radial_bump(dim, e.center, e.plateau, e.radius);
    if (e.kind == CoverElement::Kind::Exterior)
        return constant(dim, 1.0) - b;
    return b;
}

} // namespace

double PartitionOfUnity::normalization_error(const std::vector<Point>& pts) const
{
    double worst = 0.0;
    for (const auto& x : pts) {
        if (!(bump_sum.value(x) > 0.0))
            continue;
        double s = 0.0;
        for (const auto& f : pieces)
            s += f.value(x);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

double PartitionOfUnity::support_leak(const std::vector<Point>& pts) const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (const auto& x : pts)
            if (!cover[i].in_support(x))
                worst = std::max(worst, std::abs(pieces[i].value(x)));
    return worst;
}

PartitionOfUnity build_partition(int dim, const std::vector<CoverElement>& cover, const Region& overlap,
                                 const WeightSequence& w, const RngStream& rng, std::size_t probes)
{
    if (cover.empty())
        throw std::invalid_argument("partition: empty cover");
    std::vector<FunctionRep> bumps;
    for (const auto& e : cover)
        bumps.push_back(element_bump(dim, e));
    PartitionOfUnity pu;
    pu.cover = cover;
    pu.bump_sum = linear_combination(std::vector<double>(bumps.size(), 1.0), bumps);
    const FunctionRep inv = compose(profile::reciprocal(), pu.bump_sum, "1/sum b");
    for (std::size_t i = 0; i < bumps.size(); ++i)
        pu.pieces.push_back(FunctionRep(std::make_shared<PieceNode>(
            product(bumps[i], inv), pu.bump_sum, std::string("piece_") + to_string(cover[i].kind) + std::to_string(i),
            cover[i].kind == CoverElement::Kind::Exterior ? SupportSpec::whole_space()
                                                          : SupportSpec::ball(cover[i].center, cover[i].radius))));

    // probes: P draws plus uniform-ish draws around each element
    std::vector<Point> pts = sample(ProductGaussian::P(w), rng, probes).to_points();
    auto eng = rng.substream(1).engine(0);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud;
    for (const auto& e : cover) {
        const double reach = 1.2 * e.radius;
        for (std::size_t j = 0; j < probes / 4; ++j) {
            Point x(static_cast<std::size_t>(dim));
            double nrm = 0.0;
            for (auto& v : x) {
                v = nd(eng);
                nrm += v * v;
            }
            const double rad = reach * std::pow(ud(eng), 1.0 / dim) / std::sqrt(nrm);
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = (i < e.center.size() ? e.center[i] : 0.0) + rad * x[i];
            pts.push_back(std::move(x));
        }
    }
    for (const auto& x : pts)
        if (in_region(overlap, x) && !(pu.bump_sum.value(x) > 1e-12)) {
            std::string where;
            for (double v : x)
                where += (where.empty() ? "" : ",") + std::to_string(v);
            throw std::runtime_error("partition: coverage gap at (" + where + ")");
        }
    return pu;
}

namespace {

struct Work {
    const PipelineConfig& cfg;
    const PartitionOfUnity& pu;
    FunctionRep xf; // X_k f
    std::vector<FunctionRep> local;   // f_i X_k f
    std::vector<FunctionRep> cutoff;  // boundary pieces only
};

Work prepare(const PipelineConfig& cfg, const PartitionOfUnity& pu, const TruncationSequence& seq, int k)
{
    Work wk{cfg, pu, product(seq.xn_function(k), cfg.f), {}, {}};
    const int d = cfg.f.dim();
    for (std::size_t i = 0; i < pu.cover.size(); ++i) {
        const auto& e = pu.cover[i];
        wk.local.push_back(product(pu.pieces[i], wk.xf));
        if (e.kind == CoverElement::Kind::Boundary) {
            const auto& ch = cfg.charts.at(static_cast<std::size_t>(e.chart));
            wk.cutoff.push_back(builtin::radial_bump(d, ch.x0(), e.radius, 0.5 * (e.radius + ch.r1())));
        } else {
            wk.cutoff.push_back({});
        }
    }
    return wk;
}

// Local piece i after straightening and projection to n coordinates; n < 0
// skips the projection.
FunctionRep piece_image(const Work& wk, std::size_t i, int n, const RngStream& rng)
{
    const auto& e = wk.pu.cover[i];
    const auto& cfg = wk.cfg;
    const RngStream r = rng.substream(1000 + i);
    if (e.kind == CoverElement::Kind::Interior)
        return n < 0 ? wk.local[i] : projected(wk.local[i], n, cfg.w, cfg.tail_samples, r);
    const auto& ch = cfg.charts.at(static_cast<std::size_t>(e.chart));
    // straighten; zero outside psi(U0) is the extension to the half-space
    FunctionRep F = ch.compose_tau(wk.local[i]);
    if (n >= 0)
        F = projected(F, n, cfg.w, cfg.tail_samples, r);
    return product(wk.cutoff[i], ch.compose_psi(F));
}

FunctionRep sum_of(const std::vector<FunctionRep>& fs, int dim)
{
    if (fs.empty())
        return constant(dim, 0.0);
    return linear_combination(std::vector<double>(fs.size(), 1.0), fs);
}

FunctionRep assemble(const Work& wk, int n, const RngStream& rng)
{
    std::vector<FunctionRep> parts;
    for (std::size_t i = 0; i < wk.pu.cover.size(); ++i)
        if (wk.pu.cover[i].kind != CoverElement::Kind::Exterior)
            parts.push_back(piece_image(wk, i, n, rng));
    return sum_of(parts, wk.cfg.f.dim());
}

StageGap gap_of(const std::string& name, const FunctionRep& diff, const PipelineConfig& cfg)
{
    const auto rep = sobolev_norm(diff, cfg.m, cfg.p, cfg.w, cfg.domain.region(), cfg.budget);
    return {name, rep.total, rep.estimator_error};
}

void validate(const PipelineConfig& cfg)
{
    if (!cfg.f)
        throw std::invalid_argument("pipeline: no function");
    if (cfg.m < 0 || cfg.m > 1)
        throw std::invalid_argument("pipeline: m must be 0 or 1");
    if (cfg.f.max_order() < cfg.m)
        throw std::invalid_argument("pipeline: f lacks derivatives of order m");
    if (cfg.domain.kind() == Domain::Kind::Annulus)
        throw std::invalid_argument("pipeline: domain must be a half-space or a ball");
    const int d = cfg.f.dim();
    if (cfg.w.dim() != d || cfg.domain.dim() != d)
        throw std::invalid_argument("pipeline: dimensions differ");
    for (const auto& e : cfg.cover) {
        if (e.kind == CoverElement::Kind::Boundary) {
            if (e.chart < 0 || static_cast<std::size_t>(e.chart) >= cfg.charts.size())
                throw std::invalid_argument("pipeline: boundary element without a chart");
            const auto& ch = cfg.charts[static_cast<std::size_t>(e.chart)];
            double dist = 0.0;
            for (std::size_t i = 0; i < ch.x0().size(); ++i)
                dist += std::pow((i < e.center.size() ? e.center[i] : 0.0) - ch.x0()[i], 2);
            if (std::sqrt(dist) + e.radius >= ch.r1())
                throw std::invalid_argument("pipeline: boundary element leaves its chart's U0");
        }
        if (e.kind == CoverElement::Kind::Interior) {
            // ball inside O: check the closest point to the boundary along rays
            Point x = e.center;
            x.resize(static_cast<std::size_t>(d), 0.0);
            if (!cfg.domain.contains(x))
                throw std::invalid_argument("pipeline: interior element centre outside the domain");
            for (int i = 0; i < d; ++i)
                for (double s : {-1.0, 1.0}) {
                    Point y = x;
                    y[static_cast<std::size_t>(i)] += s * e.radius;
                    if (!cfg.domain.contains(y))
                        throw std::invalid_argument("pipeline: interior element leaves the domain");
                }
            if (cfg.domain.kind() == Domain::Kind::Ball) {
                double dist = 0.0;
                for (int i = 0; i < d; ++i)
                    dist += std::pow(x[static_cast<std::size_t>(i)] - cfg.domain.center()[static_cast<std::size_t>(i)], 2);
                if (std::sqrt(dist) + e.radius >= cfg.domain.r_inner())
                    throw std::invalid_argument("pipeline: interior element leaves the domain");
            }
            if (cfg.domain.kind() == Domain::Kind::HalfSpace && x[0] - e.radius <= 0.0)
                throw std::invalid_argument("pipeline: interior element leaves the domain");
        }
    }
}

} // namespace

FunctionRep pipeline_approximant(const PipelineConfig& cfg, const PartitionOfUnity& pu, const TruncationSequence& seq,
                                 int k, int n)
{
    validate(cfg);
    const Work wk = prepare(cfg, pu, seq, k);
    return assemble(wk, n, cfg.budget.rng.substream(0xa99));
}

PipelineReport approximate(const PipelineConfig& cfg)
{
    validate(cfg);
    const int d = cfg.f.dim();
    PipelineReport rep;
    rep.name = cfg.name;

    std::vector<int> schedule = cfg.schedule;
    if (schedule.empty())
        for (int k = 1; k <= d; ++k)
            schedule.push_back(k);

    const auto fnorm = sobolev_norm(cfg.f, cfg.m, cfg.p, cfg.w, cfg.domain.region(), cfg.budget);
    rep.norm_f = fnorm.total;

    auto stage = [&](const std::string& name, auto&& body) {
        try {
            return body();
        } catch (const std::exception& e) {
            throw std::runtime_error("pipeline stage " + name + ": " + e.what());
        }
    };

    const auto seq = stage("truncation", [&] {
        auto s = TruncationSequence::create(cfg.w, cfg.inner_samples, cfg.budget.rng.substream(0x7c));
        s->calibrate();
        return s;
    });
    rep.N1 = seq->N1();
    const PartitionOfUnity pu = stage("partition", [&] {
        return build_partition(d, cfg.cover, cfg.overlap, cfg.w, cfg.budget.rng.substream(0x9a));
    });
    const RngStream tail_rng = cfg.budget.rng.substream(0xa99);

    for (int k : schedule) {
        const int n = std::min(k, d);
        const Work wk = prepare(cfg, pu, *seq, k);
        const FunctionRep phi = stage("projection", [&] { return assemble(wk, n, tail_rng); });
        const StageGap g = gap_of("total", phi - cfg.f, cfg);
        rep.sequence.push_back({k, n, g.gap, g.std_error});
    }

    const int k = schedule.back();
    const int n = std::min(k, d);
    const Work wk = prepare(cfg, pu, *seq, k);
    std::vector<FunctionRep> kept;
    for (std::size_t i = 0; i < pu.cover.size(); ++i)
        if (pu.cover[i].kind != CoverElement::Kind::Exterior)
            kept.push_back(wk.local[i]);
    const FunctionRep partitioned = sum_of(kept, d);
    const FunctionRep charted = stage("chart", [&] { return assemble(wk, -1, tail_rng); });
    const FunctionRep phi = assemble(wk, n, tail_rng);
    rep.stages.push_back(gap_of("truncation", wk.xf - cfg.f, cfg));
    rep.stages.push_back(gap_of("partition", partitioned - wk.xf, cfg));
    rep.stages.push_back(gap_of("chart", charted - partitioned, cfg));
    rep.stages.push_back(gap_of("projection", phi - charted, cfg));
    for (auto& s : rep.stages)
        if (!std::isfinite(s.gap))
            throw std::runtime_error("pipeline stage " + s.name + ": non-finite gap");

    rep.total_gap = rep.sequence.back().gap;
    rep.total_stderr = rep.sequence.back().std_error;
    rep.reached = rep.total_gap < cfg.epsilon * rep.norm_f;
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.sequence.size(); ++i) {
        const auto& a = rep.sequence[i - 1];
        const auto& b = rep.sequence[i];
        if (b.gap > a.gap + 4.0 * (a.std_error + b.std_error))
            rep.monotone = false;
    }
    return rep;
}

namespace {

Point axis_point(int d, std::initializer_list<double> head)
{
    Point x(static_cast<std::size_t>(d), 0.0);
    std::size_t i = 0;
    for (double v : head)
        x[i++] = v;
    return x;
}

} // namespace

PipelineConfig golden_halfspace(int dim, const WeightSequence& w, std::uint64_t seed, std::size_t samples)
{
    if (dim < 2)
        throw std::invalid_argument("golden half-space: dim >= 2");
    PipelineConfig c;
    c.name = "half_space";
    c.domain = Domain::half_space(dim);
    c.w = w;
    c.f = product(builtin::monomial(dim, {0}), builtin::gaussian_bump(dim, axis_point(dim, {0.2}), 0.3, dim));
    c.charts.push_back(BoundaryChart::make(c.domain, axis_point(dim, {}), w, 2.0, 1.8));
    c.cover.push_back({CoverElement::Kind::Boundary, axis_point(dim, {}), 1.2, 1.7, 0});
    c.cover.push_back({CoverElement::Kind::Interior, axis_point(dim, {0.5}), 0.2, 0.45, -1});
    c.cover.push_back({CoverElement::Kind::Exterior, axis_point(dim, {}), 1.4, 2.0, -1});
    c.epsilon = 0.05;
    c.budget.samples = samples;
    c.budget.rng = RngStream{seed, 0};
    return c;
}

PipelineConfig golden_ball(int dim, const WeightSequence& w, std::uint64_t seed, std::size_t samples)
{
    if (dim < 2)
        throw std::invalid_argument("golden ball: dim >= 2");
    PipelineConfig c;
    c.name = "ball";
    const Point center = axis_point(dim, {-0.9});
    c.domain = Domain::ball(center, 1.0);
    c.w = w;
    const Point x0 = axis_point(dim, {0.1});
    c.f = builtin::gaussian_bump(dim, x0, 0.08, dim);
    int chart = 0;
    for (double th : {0.0, 0.35, -0.35}) {
        const Point p = axis_point(dim, {-0.9 + std::cos(th), std::sin(th)});
        c.charts.push_back(BoundaryChart::make(c.domain, p, w));
        const double r1 = c.charts.back().r1();
        c.cover.push_back({CoverElement::Kind::Boundary, p, 0.45 * r1, 0.92 * r1, chart++});
    }
    c.cover.push_back({CoverElement::Kind::Interior, axis_point(dim, {-0.35}), 0.25, 0.4, -1});
    c.cover.push_back({CoverElement::Kind::Exterior, x0, 0.22, 0.45, -1});
    c.epsilon = 0.1;
    c.budget.samples = samples;
    c.budget.rng = RngStream{seed, 0};
    return c;
}

PipelineConfig interior_only(int dim, const WeightSequence& w, const FunctionRep& f, std::uint64_t seed,
                             std::size_t samples)
{
    PipelineConfig c;
    c.name = "interior_only";
    c.domain = Domain::ball(axis_point(dim, {}), 3.0);
    c.w = w;
    c.f = f;
    c.cover.push_back({CoverElement::Kind::Interior, axis_point(dim, {}), 2.0, 2.5, -1});
    c.cover.push_back({CoverElement::Kind::Exterior, axis_point(dim, {}), 2.2, 2.6, -1});
    c.budget.samples = samples;
    c.budget.rng = RngStream{seed, 0};
    return c;
}

} // namespace gsobolev
