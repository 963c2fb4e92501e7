#pragma once

#include "gsobolev/measure.hpp"
#include "gsobolev/profile.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gsobolev {

constexpr int kMaxDim = 64;

// Unordered list of coordinates (0-based) to differentiate in.
class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<int> idx);
    explicit MultiIndex(std::span<const int> idx);

    int order() const noexcept { return n_; }
    int operator[](int k) const { return idx_[static_cast<std::size_t>(k)]; }
    int count(int i) const noexcept;
    MultiIndex plus(int i) const;
    MultiIndex minus_one(int i) const;
    // Positions selected by mask.
    MultiIndex subset(unsigned mask) const;
    // 1-based, comma separated.
    std::string to_string() const;

    friend bool operator==(const MultiIndex& a, const MultiIndex& b);

private:
    std::array<std::int16_t, kMaxOrder> idx_{};
    int n_ = 0;
};

// Declared support. Ball may be weighted: sum_i w_i (x_i - c_i)^2 <= r^2.
struct SupportSpec {
    enum class Kind { WholeSpace, Ball };
    Kind kind = Kind::WholeSpace;
    Point center;
    double radius = std::numeric_limits<double>::infinity();
    std::vector<double> metric; // empty: Euclidean

    static SupportSpec whole_space() { return {}; }
    static SupportSpec ball(Point center, double radius, std::vector<double> metric = {});
    bool contains(std::span<const double> x) const;
    bool is_bounded() const noexcept { return kind == Kind::Ball; }
};

class FunctionNode {
public:
    FunctionNode(int dim, int max_order, std::uint64_t deps, std::string name, SupportSpec support, bool bounded);
    virtual ~FunctionNode() = default;

    virtual double value(std::span<const double> x) const = 0;
    // Called with 1 <= order <= max_order and every index in depends_on.
    virtual double partial(const MultiIndex& mi, std::span<const double> x) const = 0;
    // Fills grad (size dim) and returns the value. Called when max_order >= 1.
    virtual double value_gradient(std::span<const double> x, std::span<double> grad) const;

    int dim() const noexcept { return dim_; }
    int max_order() const noexcept { return max_order_; }
    std::uint64_t deps() const noexcept { return deps_; }
    const std::string& name() const noexcept { return name_; }
    const SupportSpec& support() const noexcept { return support_; }
    bool bounded() const noexcept { return bounded_; }

private:
    int dim_;
    int max_order_;
    std::uint64_t deps_;
    std::string name_;
    SupportSpec support_;
    bool bounded_;
};

// Shared handle to an immutable function on R^d with analytic derivatives.
class FunctionRep {
public:
    FunctionRep() = default;
    explicit FunctionRep(std::shared_ptr<const FunctionNode> node) : node_(std::move(node)) {}

    double operator()(std::span<const double> x) const { return node_->value(x); }
    double value(std::span<const double> x) const { return node_->value(x); }
    // Throws std::domain_error above max_order; zero for coordinates outside
    // depends_on.
    double partial(const MultiIndex& mi, std::span<const double> x) const;
    double value_gradient(std::span<const double> x, std::span<double> grad) const;

    int dim() const noexcept { return node_->dim(); }
    int max_order() const noexcept { return node_->max_order(); }
    bool depends(int i) const noexcept { return (node_->deps() >> i) & 1U; }
    std::uint64_t deps_mask() const noexcept { return node_->deps(); }
    std::vector<int> depends_on() const;
    const SupportSpec& support() const noexcept { return node_->support(); }
    bool bounded() const noexcept { return node_->bounded(); }
    const std::string& name() const noexcept { return node_->name(); }
    explicit operator bool() const noexcept { return static_cast<bool>(node_); }
    const FunctionNode& node() const { return *node_; }

private:
    std::shared_ptr<const FunctionNode> node_;
};

std::uint64_t coordinate_mask(std::span<const int> coords);
std::uint64_t all_coordinates(int dim);

FunctionRep constant(int dim, double c);
// coef * prod_k profile_k(x_{coord_k}); coordinates must be distinct.
FunctionRep separable(int dim, double coef, std::vector<std::pair<int, ProfilePtr>> factors, std::string name,
                      SupportSpec support = {});
// sum_i s_i (x_i - c_i)^2 over the listed coordinates (all when empty).
FunctionRep squared_distance(int dim, Point center, std::vector<double> scale = {});
// outer(inner(x)); derivatives by Faa di Bruno over set partitions.
FunctionRep compose(ProfilePtr outer, const FunctionRep& inner, std::string name = {}, SupportSpec support = {});
FunctionRep product(const FunctionRep& f, const FunctionRep& g);
FunctionRep linear_combination(std::vector<double> coef, std::vector<FunctionRep> fns);
FunctionRep operator+(const FunctionRep& f, const FunctionRep& g);
FunctionRep operator-(const FunctionRep& f, const FunctionRep& g);
FunctionRep operator*(double s, const FunctionRep& f);
FunctionRep operator*(const FunctionRep& f, const FunctionRep& g);
// f(tau_t x)
FunctionRep translated(const FunctionRep& f, double t);

// Adjoint of D_i in L^2(P): D*_i phi = -D_i phi + (x_i / a_i^2) phi.
FunctionRep dstar(const FunctionRep& phi, int i, const WeightSequence& w);
// D*_{i_k} ... D*_{i_1} phi, applying i_1 first.
FunctionRep dstar_chain(const FunctionRep& phi, const MultiIndex& mi, const WeightSequence& w);

// x -> D^mi f(x), with max_order reduced by |mi|.
FunctionRep derivative(const FunctionRep& f, const MultiIndex& mi);

// Node evaluating a user callable; max_order 0.
FunctionRep from_callable(int dim, std::function<double(std::span<const double>)> f, std::string name,
                          std::uint64_t deps, bool bounded, SupportSpec support = {});

// Set partitions of {0..k-1}, each as a list of block bitmasks.
const std::vector<std::vector<unsigned>>& set_partitions(int k);

} // namespace gsobolev
