#pragma once

#include "gsobolev/function.hpp"

#include <map>
#include <string>
#include <vector>

namespace gsobolev::builtin {

// coef * prod_k x_{coords[k]}; repeated coordinates give powers.
FunctionRep monomial(int dim, const std::vector<int>& coords, double coef = 1.0);
// exp(-sum_{i < n} (x_i - c_i)^2 / (2 w^2))
FunctionRep gaussian_bump(int dim, Point center, double width, int n);
// 1 on |x - c| <= r_inner, 0 on |x - c| >= r_outer, exp-glue in |x - c|^2.
FunctionRep radial_bump(int dim, Point center, double r_inner, double r_outer);
// Smooth step in one coordinate: 0 below lo, 1 above hi.
FunctionRep step(int dim, int coord, double lo, double hi);
FunctionRep exp_coord(int dim, int coord, double rate);
// sgn(sum_{i < n} x_i / a_i), sgn(0) = 0; no derivatives.
FunctionRep sgn_sum(const WeightSequence& w, int n);
// 1 if x_coord > threshold else 0; no derivatives.
FunctionRep indicator_halfspace(int dim, int coord = 0, double threshold = 0.0);

using Params = std::map<std::string, std::string>;

// Parses "family:key=value,key=value". Coordinates in the text form are
// 1-based; center entries are c1, c2, ...
FunctionRep make(const std::string& spec, const WeightSequence& w);
std::vector<std::string> families();

} // namespace gsobolev::builtin
