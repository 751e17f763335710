#pragma once

#include <vector>

#include "roughvar/regularity.hpp"
#include "roughvar/sampled_path.hpp"
#include "roughvar/tensor.hpp"

namespace roughvar {

/// Young cross-integrals over [s, t], each a row-major d x d array.
struct CrossIntegrals {
    int dimension = 0;
    std::vector<double> x_dh;  ///< int x_{s,u} (x) dh_u
    std::vector<double> h_dx;  ///< int h_{s,u} (x) dx_u
    std::vector<double> h_dh;  ///< int h_{s,u} (x) dh_u
};

/// Exact for piecewise-linear x and h (both interpolated linearly between
/// their samples); the grids are merged before integrating.
CrossIntegrals young_cross_integrals(const SampledPath& x, const SampledPath& h, double s, double t);

/// T_h(y) for a step-2 path y and a piecewise-linear h with the same time
/// span, evaluated on the union of both grids. Between its own samples y is
/// interpolated along the exponential of the log-increment.
GroupPath translate(const GroupPath& y, const SampledPath& h);

struct TranslationBound {
    double lhs = 0.0;    ///< psi-variation norm of T_h(y)
    double rhs = 0.0;    ///< psi-variation norm of y plus rho-variation norm of h
    double ratio = 0.0;  ///< lhs / rhs; 1 when both vanish, +inf when only rhs does
};

TranslationBound translation_bound_ratio(const GroupPath& y, const SampledPath& h,
                                         const RegularityFunction& f, double rho);

/// (sum_k |dh_k|^2 / dt_k)^{1/2}, the Brownian Cameron-Martin norm of a
/// piecewise-linear h.
double cameron_martin_norm(const SampledPath& h);

/// |h|_{rho-var} over the whole grid.
double rho_variation_norm(const SampledPath& h, double rho);

}  // namespace roughvar
