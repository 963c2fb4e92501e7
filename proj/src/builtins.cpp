#include "gsobolev/builtins.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gsobolev::builtin {

namespace {

Point padded(Point c, int dim)
{
    c.resize(static_cast<std::size_t>(dim), 0.0);
    return c;
}

double get(const Params& p, const std::string& k, double dflt)
{
    auto it = p.find(k);
    if (it == p.end())
        return dflt;
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size())
        throw std::invalid_argument("builtin: bad number for '" + k + "': " + it->second);
    return v;
}

Point center_from(const Params& p, int dim)
{
    Point c(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i)
        c[static_cast<std::size_t>(i)] = get(p, "c" + std::to_string(i + 1), 0.0);
    return c;
}

std::vector<int> parse_coords(const std::string& s)
{
    std::vector<int> r;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, 'x')) {
        if (tok.empty())
            continue;
        r.push_back(std::stoi(tok) - 1);
    }
    return r;
}

} // namespace

FunctionRep monomial(int dim, const std::vector<int>& coords, double coef)
{
    std::map<int, int> pw;
    for (int i : coords)
        ++pw[i];
    std::vector<std::pair<int, ProfilePtr>> f;
    std::string name;
    for (auto [i, k] : pw) {
        f.emplace_back(i, profile::power(k));
        name += "x" + std::to_string(i + 1) + (k > 1 ? "^" + std::to_string(k) : "");
    }
    if (coef != 1.0)
        name = std::to_string(coef) + "*" + name;
    return separable(dim, coef, std::move(f), name.empty() ? "1" : name);
}

FunctionRep gaussian_bump(int dim, Point center, double width, int n)
{
    if (n < 1 || n > dim)
        throw std::invalid_argument("gaussian_bump: coordinate count out of range");
    center = padded(std::move(center), dim);
    std::vector<std::pair<int, ProfilePtr>> f;
    for (int i = 0; i < n; ++i)
        f.emplace_back(i, profile::gaussian(center[static_cast<std::size_t>(i)], width));
    return separable(dim, 1.0, std::move(f), "gauss_bump(w=" + std::to_string(width) + ",n=" + std::to_string(n) + ")");
}

FunctionRep radial_bump(int dim, Point center, double r_inner, double r_outer)
{
    if (!(r_inner >= 0.0 && r_outer > r_inner))
        throw std::invalid_argument("radial_bump: need 0 <= r_inner < r_outer");
    center = padded(std::move(center), dim);
    return compose(profile::step_down(r_inner * r_inner, r_outer * r_outer), squared_distance(dim, center),
                   "radial_bump(" + std::to_string(r_inner) + "," + std::to_string(r_outer) + ")",
                   SupportSpec::ball(center, r_outer));
}

FunctionRep step(int dim, int coord, double lo, double hi)
{
    return separable(dim, 1.0, {{coord, profile::step_up(lo, hi)}},
                     "step_x" + std::to_string(coord + 1) + "(" + std::to_string(lo) + "," + std::to_string(hi) + ")");
}

FunctionRep exp_coord(int dim, int coord, double rate)
{
    return separable(dim, 1.0, {{coord, profile::exponential(rate)}},
                     "exp(" + std::to_string(rate) + "*x" + std::to_string(coord + 1) + ")");
}

FunctionRep sgn_sum(const WeightSequence& w, int n)
{
    if (n < 1 || n > w.dim())
        throw std::invalid_argument("sgn_sum: n must lie in [1, dim]");
    std::vector<double> inv;
    for (int i = 0; i < n; ++i)
        inv.push_back(1.0 / w[i]);
    std::vector<int> coords;
    for (int i = 0; i < n; ++i)
        coords.push_back(i);
    return from_callable(
        w.dim(),
        [inv](std::span<const double> x) {
            double s = 0.0;
            for (std::size_t i = 0; i < inv.size(); ++i)
                s += x[i] * inv[i];
            return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
        },
        "sgn_sum(n=" + std::to_string(n) + ")", coordinate_mask(coords), true);
}

FunctionRep indicator_halfspace(int dim, int coord, double threshold)
{
    const int c[] = {coord};
    return from_callable(
        dim, [coord, threshold](std::span<const double> x) { return x[static_cast<std::size_t>(coord)] > threshold ? 1.0 : 0.0; },
        "chi(x" + std::to_string(coord + 1) + ">" + std::to_string(threshold) + ")", coordinate_mask(c), true);
}

std::vector<std::string> families()
{
    return {"const", "monomial", "gaussian_bump", "radial_bump", "step", "exp", "sgn_sum", "indicator", "bump_x1"};
}

FunctionRep make(const std::string& spec, const WeightSequence& w)
{
    const int dim = w.dim();
    const auto colon = spec.find(':');
    const std::string fam = spec.substr(0, colon);
    Params p;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string kv;
        while (std::getline(ss, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("builtin: expected key=value, got '" + kv + "'");
            p[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    if (fam == "const")
        return constant(dim, get(p, "c", 1.0));
    if (fam == "monomial")
        return monomial(dim, parse_coords(p.count("coords") ? p.at("coords") : "1"), get(p, "coef", 1.0));
    if (fam == "gaussian_bump")
        return gaussian_bump(dim, center_from(p, dim), get(p, "w", 0.3), static_cast<int>(get(p, "n", dim)));
    if (fam == "radial_bump")
        return radial_bump(dim, center_from(p, dim), get(p, "r1", 0.2), get(p, "r2", 0.5));
    if (fam == "step")
        return step(dim, static_cast<int>(get(p, "i", 1)) - 1, get(p, "lo", -0.25), get(p, "hi", 0.25));
    if (fam == "exp")
        return exp_coord(dim, static_cast<int>(get(p, "i", 1)) - 1, get(p, "rate", 1.0));
    if (fam == "sgn_sum")
        return sgn_sum(w, static_cast<int>(get(p, "n", 1)));
    if (fam == "indicator")
        return indicator_halfspace(dim, static_cast<int>(get(p, "i", 1)) - 1, get(p, "t", 0.0));
    if (fam == "bump_x1")
        return product(monomial(dim, {0}),
                       gaussian_bump(dim, center_from(p, dim), get(p, "w", 0.3), static_cast<int>(get(p, "n", dim))));
    throw std::invalid_argument("builtin: unknown family '" + fam + "'");
}

} // namespace gsobolev::builtin
