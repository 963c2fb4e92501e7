#pragma once

#include "gsobolev/measure.hpp"
#include "gsobolev/montecarlo.hpp"

#include <vector>

namespace gsobolev {

struct GaussHermiteRule {
    std::vector<double> nodes;   // for N(0, 1)
    std::vector<double> weights; // sum to 1
};

// Probabilists' Gauss-Hermite rule from the eigen-decomposition of the
// Jacobi matrix.
GaussHermiteRule gauss_hermite(int n);

// Tensor Gauss-Hermite expectation of f under mu, for mu.dim() <= 4.
double quadrature_oracle(const ScalarIntegrand& f, const ProductGaussian& mu, int nodes_per_axis = 40);

// Tensor rule for vector integrands, same restrictions.
std::vector<double> quadrature_oracle_vector(const VectorIntegrand& f, std::size_t width, const ProductGaussian& mu,
                                             int nodes_per_axis = 40);

} // namespace gsobolev
