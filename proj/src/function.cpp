#include "gsobolev/function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsobolev {

MultiIndex::MultiIndex(std::initializer_list<int> idx) : MultiIndex(std::span<const int>(idx.begin(), idx.size())) {}

MultiIndex::MultiIndex(std::span<const int> idx)
{
    if (idx.size() > static_cast<std::size_t>(kMaxOrder))
        throw std::domain_error("multi-index: order " + std::to_string(idx.size()) + " exceeds supported maximum " +
                                std::to_string(kMaxOrder));
    for (int i : idx) {
        if (i < 0 || i >= kMaxDim)
            throw std::invalid_argument("multi-index: coordinate " + std::to_string(i) + " out of range");
        idx_[static_cast<std::size_t>(n_++)] = static_cast<std::int16_t>(i);
    }
}

int MultiIndex::count(int i) const noexcept
{
    int c = 0;
    for (int k = 0; k < n_; ++k)
        c += idx_[static_cast<std::size_t>(k)] == i;
    return c;
}

MultiIndex MultiIndex::plus(int i) const
{
    if (n_ >= kMaxOrder)
        throw std::domain_error("multi-index: order exceeds supported maximum " + std::to_string(kMaxOrder));
    MultiIndex r = *this;
    r.idx_[static_cast<std::size_t>(r.n_++)] = static_cast<std::int16_t>(i);
    return r;
}

MultiIndex MultiIndex::minus_one(int i) const
{
    MultiIndex r;
    bool removed = false;
    for (int k = 0; k < n_; ++k) {
        const int v = idx_[static_cast<std::size_t>(k)];
        if (!removed && v == i) {
            removed = true;
            continue;
        }
        r.idx_[static_cast<std::size_t>(r.n_++)] = static_cast<std::int16_t>(v);
    }
    return r;
}

MultiIndex MultiIndex::subset(unsigned mask) const
{
    MultiIndex r;
    for (int k = 0; k < n_; ++k)
        if ((mask >> k) & 1U)
            r.idx_[static_cast<std::size_t>(r.n_++)] = idx_[static_cast<std::size_t>(k)];
    return r;
}

std::string MultiIndex::to_string() const
{
    std::string s;
    for (int k = 0; k < n_; ++k) {
        if (k)
            s += ",";
        s += std::to_string(idx_[static_cast<std::size_t>(k)] + 1);
    }
    return s;
}

bool operator==(const MultiIndex& a, const MultiIndex& b)
{
    if (a.n_ != b.n_)
        return false;
    std::array<std::int16_t, kMaxOrder> x = a.idx_, y = b.idx_;
    std::sort(x.begin(), x.begin() + a.n_);
    std::sort(y.begin(), y.begin() + b.n_);
    return std::equal(x.begin(), x.begin() + a.n_, y.begin());
}

SupportSpec SupportSpec::ball(Point center, double radius, std::vector<double> metric)
{
    SupportSpec s;
    s.kind = Kind::Ball;
    s.center = std::move(center);
    s.radius = radius;
    s.metric = std::move(metric);
    return s;
}

bool SupportSpec::contains(std::span<const double> x) const
{
    if (kind == Kind::WholeSpace)
        return true;
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = i < center.size() ? center[i] : 0.0;
        const double w = i < metric.size() ? metric[i] : 1.0;
        r2 += w * (x[i] - c) * (x[i] - c);
    }
    return r2 <= radius * radius;
}

FunctionNode::FunctionNode(int dim, int max_order, std::uint64_t deps, std::string name, SupportSpec support,
                           bool bounded)
    : dim_(dim), max_order_(max_order), deps_(deps), name_(std::move(name)), support_(std::move(support)),
      bounded_(bounded)
{
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("function: dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
    if (max_order < 0)
        throw std::invalid_argument("function: negative max_order");
}

double FunctionNode::value_gradient(std::span<const double> x, std::span<double> grad) const
{
    for (int i = 0; i < dim_; ++i)
        grad[static_cast<std::size_t>(i)] = ((deps_ >> i) & 1U) ? partial(MultiIndex{i}, x) : 0.0;
    return value(x);
}

double FunctionRep::partial(const MultiIndex& mi, std::span<const double> x) const
{
    if (mi.order() > node_->max_order())
        throw std::domain_error(node_->name() + ": derivative of order " + std::to_string(mi.order()) +
                                " exceeds max_order " + std::to_string(node_->max_order()));
    for (int k = 0; k < mi.order(); ++k) {
        const int i = mi[k];
        if (i >= node_->dim())
            throw std::invalid_argument(node_->name() + ": coordinate " + std::to_string(i + 1) +
                                        " exceeds dimension " + std::to_string(node_->dim()));
        if (!((node_->deps() >> i) & 1U))
            return 0.0;
    }
    if (mi.order() == 0)
        return node_->value(x);
    return node_->partial(mi, x);
}

double FunctionRep::value_gradient(std::span<const double> x, std::span<double> grad) const
{
    if (node_->max_order() < 1)
        throw std::domain_error(node_->name() + ": gradient requested but max_order is 0");
    return node_->value_gradient(x, grad);
}

std::vector<int> FunctionRep::depends_on() const
{
    std::vector<int> r;
    for (int i = 0; i < dim(); ++i)
        if (depends(i))
            r.push_back(i);
    return r;
}

std::uint64_t coordinate_mask(std::span<const int> coords)
{
    std::uint64_t m = 0;
    for (int i : coords) {
        if (i < 0 || i >= kMaxDim)
            throw std::invalid_argument("coordinate out of range");
        m |= std::uint64_t{1} << i;
    }
    return m;
}

std::uint64_t all_coordinates(int dim)
{
    return dim >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << dim) - 1);
}

const std::vector<std::vector<unsigned>>& set_partitions(int k)
{
    static const auto table = [] {
        std::vector<std::vector<std::vector<unsigned>>> t(kMaxOrder + 1);
        t[0] = {{}};
        for (int n = 1; n <= kMaxOrder; ++n) {
            const unsigned bit = 1U << (n - 1);
            for (const auto& p : t[static_cast<std::size_t>(n - 1)]) {
                for (std::size_t b = 0; b < p.size(); ++b) {
                    auto q = p;
                    q[b] |= bit;
                    t[static_cast<std::size_t>(n)].push_back(q);
                }
                auto q = p;
                q.push_back(bit);
                t[static_cast<std::size_t>(n)].push_back(q);
            }
        }
        return t;
    }();
    if (k < 0 || k > kMaxOrder)
        throw std::domain_error("set_partitions: unsupported size");
    return table[static_cast<std::size_t>(k)];
}

namespace {

using Scratch = std::array<double, kMaxDim>;

SupportSpec support_union(const SupportSpec& a, const SupportSpec& b)
{
    if (!a.is_bounded() || !b.is_bounded() || !a.metric.empty() || !b.metric.empty())
        return SupportSpec::whole_space();
    double dist2 = 0.0;
    const std::size_t n = std::max(a.center.size(), b.center.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double ca = i < a.center.size() ? a.center[i] : 0.0;
        const double cb = i < b.center.size() ? b.center[i] : 0.0;
        dist2 += (ca - cb) * (ca - cb);
    }
    return SupportSpec::ball(a.center, std::max(a.radius, std::sqrt(dist2) + b.radius));
}

SupportSpec support_intersection(const SupportSpec& a, const SupportSpec& b)
{
    if (!a.is_bounded())
        return b;
    if (!b.is_bounded())
        return a;
    return a.radius <= b.radius ? a : b;
}

class ConstantNode final : public FunctionNode {
public:
    ConstantNode(int dim, double c)
        : FunctionNode(dim, kMaxOrder, 0, "const(" + std::to_string(c) + ")",
                       c == 0.0 ? SupportSpec::ball({}, 0.0) : SupportSpec::whole_space(), true),
          c_(c)
    {
    }
    double value(std::span<const double>) const override { return c_; }
    double partial(const MultiIndex&, std::span<const double>) const override { return 0.0; }
    double value_gradient(std::span<const double>, std::span<double> grad) const override
    {
        std::fill(grad.begin(), grad.begin() + dim(), 0.0);
        return c_;
    }

private:
    double c_;
};

class SeparableNode final : public FunctionNode {
public:
    SeparableNode(int dim, double coef, std::vector<std::pair<int, ProfilePtr>> f, std::string name,
                  SupportSpec support, std::uint64_t deps, bool bounded)
        : FunctionNode(dim, kMaxOrder, deps, std::move(name), std::move(support), bounded), coef_(coef),
          f_(std::move(f))
    {
    }
    double value(std::span<const double> x) const override
    {
        double v = coef_;
        for (const auto& [i, p] : f_)
            v *= p->value(x[static_cast<std::size_t>(i)]);
        return v;
    }
    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        std::array<double, kProfileOrder + 1> d{};
        double v = coef_;
        for (const auto& [i, p] : f_) {
            const int c = mi.count(i);
            p->eval(x[static_cast<std::size_t>(i)], c, d);
            v *= d[static_cast<std::size_t>(c)];
        }
        return v;
    }
    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        std::fill(grad.begin(), grad.begin() + dim(), 0.0);
        const std::size_t n = f_.size();
        Scratch val{}, der{}, pre{}, suf{};
        std::array<double, kProfileOrder + 1> d{};
        for (std::size_t k = 0; k < n; ++k) {
            f_[k].second->eval(x[static_cast<std::size_t>(f_[k].first)], 1, d);
            val[k] = d[0];
            der[k] = d[1];
        }
        double acc = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            pre[k] = acc;
            acc *= val[k];
        }
        acc = 1.0;
        for (std::size_t k = n; k-- > 0;) {
            suf[k] = acc;
            acc *= val[k];
        }
        for (std::size_t k = 0; k < n; ++k)
            grad[static_cast<std::size_t>(f_[k].first)] = coef_ * pre[k] * der[k] * suf[k];
        return coef_ * acc;
    }

private:
    double coef_;
    std::vector<std::pair<int, ProfilePtr>> f_;
};

class SquaredDistanceNode final : public FunctionNode {
public:
    SquaredDistanceNode(int dim, Point c, std::vector<double> s, std::uint64_t deps)
        : FunctionNode(dim, kMaxOrder, deps, "sqdist", SupportSpec::whole_space(), false), c_(std::move(c)),
          s_(std::move(s))
    {
    }
    double value(std::span<const double> x) const override
    {
        double v = 0.0;
        for (int i = 0; i < dim(); ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const double u = x[ii] - c_[ii];
            v += s_[ii] * u * u;
        }
        return v;
    }
    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        const int i = mi[0];
        const auto ii = static_cast<std::size_t>(i);
        if (mi.order() == 1)
            return 2.0 * s_[ii] * (x[ii] - c_[ii]);
        if (mi.order() == 2 && mi[1] == i)
            return 2.0 * s_[ii];
        return 0.0;
    }
    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        double v = 0.0;
        for (int i = 0; i < dim(); ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const double u = x[ii] - c_[ii];
            v += s_[ii] * u * u;
            grad[ii] = 2.0 * s_[ii] * u;
        }
        return v;
    }

private:
    Point c_;
    std::vector<double> s_;
};

class ComposeNode final : public FunctionNode {
public:
    ComposeNode(ProfilePtr outer, FunctionRep inner, std::string name, SupportSpec support)
        : FunctionNode(inner.dim(), std::min(inner.max_order(), kMaxOrder), inner.deps_mask(), std::move(name),
                       std::move(support), outer->bounded()),
          outer_(std::move(outer)), inner_(std::move(inner))
    {
    }
    double value(std::span<const double> x) const override { return outer_->value(inner_.value(x)); }
    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        const int k = mi.order();
        const unsigned full = (1U << k) - 1;
        std::array<double, 1U << kMaxOrder> q{};
        for (unsigned m = 1; m <= full; ++m)
            q[m] = inner_.partial(mi.subset(m), x);
        std::array<double, kProfileOrder + 1> d{};
        outer_->eval(inner_.value(x), k, d);
        double total = 0.0;
        for (const auto& part : set_partitions(k)) {
            double t = d[part.size()];
            for (unsigned b : part)
                t *= q[b];
            total += t;
        }
        return total;
    }
    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        const double q = inner_.value_gradient(x, grad);
        std::array<double, kProfileOrder + 1> d{};
        outer_->eval(q, 1, d);
        for (int i = 0; i < dim(); ++i)
            grad[static_cast<std::size_t>(i)] *= d[1];
        return d[0];
    }

private:
    ProfilePtr outer_;
    FunctionRep inner_;
};

class ProductNode final : public FunctionNode {
public:
    ProductNode(FunctionRep f, FunctionRep g)
        : FunctionNode(f.dim(), std::min(f.max_order(), g.max_order()), f.deps_mask() | g.deps_mask(),
                       "(" + f.name() + ")*(" + g.name() + ")", support_intersection(f.support(), g.support()),
                       f.bounded() && g.bounded()),
          f_(std::move(f)), g_(std::move(g))
    {
        if (f_.dim() != g_.dim())
            throw std::invalid_argument("product: dimension mismatch");
    }
    double value(std::span<const double> x) const override
    {
        const double a = f_.value(x);
        return a == 0.0 ? 0.0 : a * g_.value(x);
    }
    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        const int k = mi.order();
        const unsigned full = (1U << k) - 1;
        double total = 0.0;
        for (unsigned m = 0; m <= full; ++m) {
            const double a = f_.partial(mi.subset(m), x);
            if (a == 0.0)
                continue;
            total += a * g_.partial(mi.subset(full ^ m), x);
        }
        return total;
    }
    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        Scratch gf{}, gg{};
        const double a = f_.value_gradient(x, gf);
        const double b = g_.value_gradient(x, gg);
        for (int i = 0; i < dim(); ++i) {
            const auto ii = static_cast<std::size_t>(i);
            grad[ii] = a * gg[ii] + b * gf[ii];
        }
        return a * b;
    }

private:
    FunctionRep f_, g_;
};

class SumNode final : public FunctionNode {
public:
    SumNode(std::vector<double> c, std::vector<FunctionRep> f, std::uint64_t deps, int order, std::string name,
            SupportSpec support, bool bounded)
        : FunctionNode(f.front().dim(), order, deps, std::move(name), std::move(support), bounded), c_(std::move(c)),
          f_(std::move(f))
    {
    }
    double value(std::span<const double> x) const override
    {
        double v = 0.0;
        for (std::size_t k = 0; k < f_.size(); ++k)
            v += c_[k] * f_[k].value(x);
        return v;
    }
    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        double v = 0.0;
        for (std::size_t k = 0; k < f_.size(); ++k)
            v += c_[k] * f_[k].partial(mi, x);
        return v;
    }
    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        Scratch g{};
        std::fill(grad.begin(), grad.begin() + dim(), 0.0);
        double v = 0.0;
        for (std::size_t k = 0; k < f_.size(); ++k) {
            v += c_[k] * f_[k].value_gradient(x, g);
            for (int i = 0; i < dim(); ++i)
                grad[static_cast<std::size_t>(i)] += c_[k] * g[static_cast<std::size_t>(i)];
        }
        return v;
    }

private:
    std::vector<double> c_;
    std::vector<FunctionRep> f_;
};

class TranslatedNode final : public FunctionNode {
public:
    TranslatedNode(FunctionRep f, double t, SupportSpec s)
        : FunctionNode(f.dim(), f.max_order(), f.deps_mask(), f.name() + "(tau_" + std::to_string(t) + ")",
                       std::move(s), f.bounded()),
          f_(std::move(f)), t_(t)
    {
    }
    double value(std::span<const double> x) const override
    {
        Scratch y{};
        return f_.value(shift(x, y));
    }
    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        Scratch y{};
        return f_.partial(mi, shift(x, y));
    }
    double value_gradient(std::span<const double> x, std::span<double> grad) const override
    {
        Scratch y{};
        return f_.value_gradient(shift(x, y), grad);
    }

private:
    std::span<const double> shift(std::span<const double> x, Scratch& y) const
    {
        std::copy(x.begin(), x.begin() + dim(), y.begin());
        y[0] += t_;
        return {y.data(), static_cast<std::size_t>(dim())};
    }
    FunctionRep f_;
    double t_;
};

class DStarNode final : public FunctionNode {
public:
    DStarNode(FunctionRep phi, int i, double a)
        : FunctionNode(phi.dim(), phi.max_order() - 1, phi.deps_mask() | (std::uint64_t{1} << i),
                       "D*_" + std::to_string(i + 1) + "(" + phi.name() + ")", phi.support(), false),
          phi_(std::move(phi)), i_(i), inv_a2_(1.0 / (a * a))
    {
    }
    double value(std::span<const double> x) const override
    {
        return -phi_.partial(MultiIndex{i_}, x) + x[static_cast<std::size_t>(i_)] * inv_a2_ * phi_.value(x);
    }
    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        double v = -phi_.partial(mi.plus(i_), x);
        double w = x[static_cast<std::size_t>(i_)] * phi_.partial(mi, x);
        const int c = mi.count(i_);
        if (c > 0)
            w += c * phi_.partial(mi.minus_one(i_), x);
        return v + inv_a2_ * w;
    }

private:
    FunctionRep phi_;
    int i_;
    double inv_a2_;
};

class DerivativeNode final : public FunctionNode {
public:
    DerivativeNode(FunctionRep f, MultiIndex mi)
        : FunctionNode(f.dim(), f.max_order() - mi.order(), f.deps_mask(), "D^{" + mi.to_string() + "}" + f.name(),
                       f.support(), f.bounded()),
          f_(std::move(f)), mi_(mi)
    {
    }
    double value(std::span<const double> x) const override { return f_.partial(mi_, x); }
    double partial(const MultiIndex& mi, std::span<const double> x) const override
    {
        MultiIndex all = mi_;
        for (int k = 0; k < mi.order(); ++k)
            all = all.plus(mi[k]);
        return f_.partial(all, x);
    }

private:
    FunctionRep f_;
    MultiIndex mi_;
};

class CallableNode final : public FunctionNode {
public:
    CallableNode(int dim, std::function<double(std::span<const double>)> f, std::string name, std::uint64_t deps,
                 bool bounded, SupportSpec support)
        : FunctionNode(dim, 0, deps, std::move(name), std::move(support), bounded), f_(std::move(f))
    {
    }
    double value(std::span<const double> x) const override { return f_(x); }
    double partial(const MultiIndex&, std::span<const double>) const override
    {
        throw std::domain_error(name() + ": no derivatives available");
    }

private:
    std::function<double(std::span<const double>)> f_;
};

} // namespace

FunctionRep constant(int dim, double c)
{
    return FunctionRep(std::make_shared<ConstantNode>(dim, c));
}

FunctionRep separable(int dim, double coef, std::vector<std::pair<int, ProfilePtr>> factors, std::string name,
                      SupportSpec support)
{
    std::uint64_t deps = 0;
    bool bounded = true;
    for (const auto& [i, p] : factors) {
        if (i < 0 || i >= dim)
            throw std::invalid_argument("separable: coordinate " + std::to_string(i + 1) + " out of range");
        const std::uint64_t bit = std::uint64_t{1} << i;
        if (deps & bit)
            throw std::invalid_argument("separable: coordinate " + std::to_string(i + 1) + " repeated");
        deps |= bit;
        bounded = bounded && p->bounded();
    }
    if (coef == 0.0)
        deps = 0;
    return FunctionRep(std::make_shared<SeparableNode>(dim, coef, std::move(factors), std::move(name),
                                                       std::move(support), deps, bounded));
}

FunctionRep squared_distance(int dim, Point center, std::vector<double> scale)
{
    center.resize(static_cast<std::size_t>(dim), 0.0);
    if (scale.empty())
        scale.assign(static_cast<std::size_t>(dim), 1.0);
    scale.resize(static_cast<std::size_t>(dim), 0.0);
    std::uint64_t deps = 0;
    for (int i = 0; i < dim; ++i)
        if (scale[static_cast<std::size_t>(i)] != 0.0)
            deps |= std::uint64_t{1} << i;
    return FunctionRep(std::make_shared<SquaredDistanceNode>(dim, std::move(center), std::move(scale), deps));
}

FunctionRep compose(ProfilePtr outer, const FunctionRep& inner, std::string name, SupportSpec support)
{
    if (name.empty())
        name = outer->name() + "(" + inner.name() + ")";
    return FunctionRep(std::make_shared<ComposeNode>(std::move(outer), inner, std::move(name), std::move(support)));
}

FunctionRep product(const FunctionRep& f, const FunctionRep& g)
{
    return FunctionRep(std::make_shared<ProductNode>(f, g));
}

FunctionRep linear_combination(std::vector<double> coef, std::vector<FunctionRep> fns)
{
    if (fns.empty() || coef.size() != fns.size())
        throw std::invalid_argument("linear_combination: need matching non-empty coefficient and function lists");
    std::uint64_t deps = 0;
    int order = kMaxOrder;
    bool bounded = true;
    SupportSpec support = fns.front().support();
    std::string name;
    for (std::size_t k = 0; k < fns.size(); ++k) {
        if (fns[k].dim() != fns.front().dim())
            throw std::invalid_argument("linear_combination: dimension mismatch");
        deps |= fns[k].deps_mask();
        order = std::min(order, fns[k].max_order());
        bounded = bounded && fns[k].bounded();
        if (k > 0)
            support = support_union(support, fns[k].support());
        name += (k ? " + " : "") + std::to_string(coef[k]) + "*" + fns[k].name();
    }
    return FunctionRep(std::make_shared<SumNode>(std::move(coef), std::move(fns), deps, order, std::move(name),
                                                 std::move(support), bounded));
}

FunctionRep operator+(const FunctionRep& f, const FunctionRep& g)
{
    return linear_combination({1.0, 1.0}, {f, g});
}

FunctionRep operator-(const FunctionRep& f, const FunctionRep& g)
{
    return linear_combination({1.0, -1.0}, {f, g});
}

FunctionRep operator*(double s, const FunctionRep& f)
{
    return linear_combination({s}, {f});
}

FunctionRep operator*(const FunctionRep& f, const FunctionRep& g)
{
    return product(f, g);
}

FunctionRep translated(const FunctionRep& f, double t)
{
    SupportSpec s = f.support();
    if (s.is_bounded()) {
        s.center.resize(static_cast<std::size_t>(f.dim()), 0.0);
        s.center[0] -= t;
    }
    return FunctionRep(std::make_shared<TranslatedNode>(f, t, std::move(s)));
}

FunctionRep dstar(const FunctionRep& phi, int i, const WeightSequence& w)
{
    if (i < 0 || i >= phi.dim() || i >= w.dim())
        throw std::invalid_argument("dstar: coordinate out of range");
    if (phi.max_order() < 1)
        throw std::domain_error("dstar: test function " + phi.name() + " has no derivatives");
    return FunctionRep(std::make_shared<DStarNode>(phi, i, w[i]));
}

FunctionRep dstar_chain(const FunctionRep& phi, const MultiIndex& mi, const WeightSequence& w)
{
    FunctionRep r = phi;
    for (int k = 0; k < mi.order(); ++k)
        r = dstar(r, mi[k], w);
    return r;
}

FunctionRep derivative(const FunctionRep& f, const MultiIndex& mi)
{
    if (mi.order() > f.max_order())
        throw std::domain_error(f.name() + ": derivative of order " + std::to_string(mi.order()) +
                                " exceeds max_order " + std::to_string(f.max_order()));
    for (int k = 0; k < mi.order(); ++k)
        if (!f.depends(mi[k]))
            return constant(f.dim(), 0.0);
    return FunctionRep(std::make_shared<DerivativeNode>(f, mi));
}

FunctionRep from_callable(int dim, std::function<double(std::span<const double>)> f, std::string name,
                          std::uint64_t deps, bool bounded, SupportSpec support)
{
    return FunctionRep(
        std::make_shared<CallableNode>(dim, std::move(f), std::move(name), deps, bounded, std::move(support)));
}

} // namespace gsobolev
