#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <json.hpp>

#include "roughvar/regularity.hpp"
#include "roughvar/sampled_path.hpp"

namespace roughvar {

/// Optimal value of a grid-restricted variation functional.
struct DissectionValue {
    double value = 0.0;
    std::vector<std::size_t> indices;  ///< optimizing dissection, strictly increasing
    double mesh = 0.0;                 ///< largest time gap of the dissection

    nlohmann::json to_json() const;
};

/// Time window [a, b]; both ends must be grid times.
struct Window {
    double a;
    double b;
};

/// Re-evaluate sum_i f(d(t_i, t_{i+1})) over a dissection, accumulated from
/// the right so that it reproduces the optimizers bit for bit.
double dissection_sum(const PairwiseDistances& dist, const RegularityFunction& f,
                      const std::vector<std::size_t>& indices);

/// Exact sup over grid dissections by dynamic programming, O(n^2).
/// Ties resolve to the lexicographically smallest index set.
DissectionValue psi_variation(const PairwiseDistances& dist, const RegularityFunction& f);
DissectionValue psi_variation(const PairwiseDistances& dist, const RegularityFunction& f, Window window);
DissectionValue psi_variation(const SampledPath& path, const RegularityFunction& f);
DissectionValue psi_variation(const SampledPath& path, const RegularityFunction& f, Window window);

/// Exhaustive search over all subsets containing both endpoints (n <= 16).
DissectionValue psi_variation_bruteforce(const PairwiseDistances& dist, const RegularityFunction& f);
DissectionValue psi_variation_bruteforce(const SampledPath& path, const RegularityFunction& f);

inline constexpr std::size_t kBruteforceLimit = 16;

/// inf{eps > 0 : V_f(d / eps^degree) <= 1}. `degree` is 1 for distances that
/// are homogeneous of degree one and 2 for raw area magnitudes.
double psi_variation_norm(const PairwiseDistances& dist, const RegularityFunction& f, int degree = 1);
double psi_variation_norm(const SampledPath& path, const RegularityFunction& f);

/// sup over grid pairs of d(x_s, x_t) / phi(t - s).
double holder_norm(const SampledPath& path, const RegularityFunction& phi);

/// Largest distance inside [a, b]; off-grid ends snap outward to grid times.
double oscillation(const SampledPath& path, double a, double b);
double oscillation(const PairwiseDistances& dist, double a, double b);

/// DP restricted to jumps with t_j - t_i < delta. Throws InfeasibleError when
/// some consecutive grid gap is >= delta.
DissectionValue mesh_limited_variation(const PairwiseDistances& dist, const RegularityFunction& f,
                                       double delta);
DissectionValue mesh_limited_variation(const SampledPath& path, const RegularityFunction& f, double delta);

enum class RhoMode { full_grid, exhaustive };

/// 2D rho-variation of the rectangular increments of a covariance R on a grid.
/// full_grid uses the grid itself as both dissections; exhaustive maximizes
/// over all pairs of sub-dissections (at most 8 grid points).
double covariance_rho_variation(const std::function<double(double, double)>& covariance,
                                const std::vector<double>& grid, double rho,
                                RhoMode mode = RhoMode::full_grid);

inline constexpr std::size_t kExhaustiveRhoLimit = 8;

/// omega(s, t) tabulated over grid pairs s <= t.
class ControlFunction {
public:
    ControlFunction(std::vector<double> times, const std::function<double(std::size_t, std::size_t)>& omega);

    std::size_t size() const noexcept { return times_.size(); }
    const std::vector<double>& times() const noexcept { return times_; }
    double operator()(std::size_t i, std::size_t j) const { return table_[i * size() + j]; }

private:
    std::vector<double> times_;
    std::vector<double> table_;
};

struct SuperadditivityResult {
    double max_violation = 0.0;
    std::size_t s = 0, t = 0, u = 0;  ///< witness indices (meaningful when violation > 0)
};

/// max over grid triples s <= t <= u of omega(s,t) + omega(t,u) - omega(s,u), floored at 0.
SuperadditivityResult superadditivity_check(const ControlFunction& omega);

/// omega(s, t) = V_f over every grid window, O(n^3).
ControlFunction control_from_variation(const PairwiseDistances& dist, const RegularityFunction& f);

}  // namespace roughvar
