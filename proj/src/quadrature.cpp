#include "gsobolev/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace gsobolev {

GaussHermiteRule gauss_hermite(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_hermite: need at least one node");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        J(k - 1, k) = std::sqrt(static_cast<double>(k));
        J(k, k - 1) = J(k - 1, k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussHermiteRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        r.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        r.weights[static_cast<std::size_t>(i)] = v * v;
    }
    return r;
}

std::vector<double> quadrature_oracle_vector(const VectorIntegrand& f, std::size_t width, const ProductGaussian& mu,
                                             int nodes_per_axis)
{
    const int d = mu.dim();
    if (d > 4)
        throw std::invalid_argument("quadrature_oracle: dimension must be <= 4");
    const auto rule = gauss_hermite(nodes_per_axis);
    const std::size_t m = rule.nodes.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<double> out(width), total(width, 0.0);
    while (true) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            x[ii] = mu.sigma()[ii] * rule.nodes[idx[ii]];
            w *= rule.weights[idx[ii]];
        }
        std::fill(out.begin(), out.end(), 0.0);
        f(x, out);
        for (std::size_t k = 0; k < width; ++k)
            total[k] += w * out[k];
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < m)
                break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i == d)
            break;
    }
    return total;
}

double quadrature_oracle(const ScalarIntegrand& f, const ProductGaussian& mu, int nodes_per_axis)
{
    return quadrature_oracle_vector(
        [&](std::span<const double> x, std::span<double> out) { out[0] = f(x); }, 1, mu, nodes_per_axis)[0];
}

} // namespace gsobolev
