#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "roughvar/sampled_path.hpp"
#include "roughvar/tensor.hpp"

namespace roughvar {

/// Master seed plus replication index; every random stream is a pure function
/// of the pair (and an optional sub-stream tag).
struct RngSeed {
    std::uint64_t master = 0;
    std::uint64_t replication = 0;

    std::mt19937_64 engine(std::uint64_t stream = 0) const;
};

/// Covariance of a centered scalar Gaussian process on [0, 1]; vector
/// processes use independent copies per component.
class CovarianceModel {
public:
    static CovarianceModel bm();
    static CovarianceModel fbm(double hurst);
    /// "bm" or "fbm:H".
    static CovarianceModel parse(const std::string& spec);

    double operator()(double s, double t) const;
    bool is_brownian() const noexcept { return hurst_ == 0.5; }
    double hurst() const noexcept { return hurst_; }
    /// Finite rho-variation exponent 1 / (2H).
    double rho() const noexcept { return 1.0 / (2.0 * hurst_); }
    std::string name() const;

private:
    explicit CovarianceModel(double hurst, bool named_bm) : hurst_(hurst), named_bm_(named_bm) {}

    double hurst_;
    bool named_bm_;
};

/// Uniform grid t_j = j / (n - 1), j = 0..n-1.
std::vector<double> uniform_grid(std::size_t n);

/// Brownian motion on the uniform grid with n points, started at 0.
SampledPath sample_bm(std::size_t n, int dimension, RngSeed seed);

/// Fractional Brownian motion by Cholesky factorization of the increment
/// covariance (cached per (H, n)). Requires n <= kMaxFbmGrid.
SampledPath sample_fbm(double hurst, std::size_t n, int dimension, RngSeed seed);

SampledPath sample_path(const CovarianceModel& model, std::size_t n, int dimension, RngSeed seed);

inline constexpr std::size_t kMaxFbmGrid = 4096;

/// Number of factorizations that needed diagonal jitter since start-up.
std::size_t fbm_jitter_retries();

/// Step-N lift of a Euclidean sample. With substeps = 1 this is the
/// piecewise-linear lift; with substeps = 2^m each interval is refined by m
/// levels of Brownian-bridge midpoints (BM only) and the fine lift is read at
/// the coarse times. Refinement level l draws from sub-stream l of `seed`, so
/// coarser refinements are nested in finer ones.
GroupPath enhance_to_rough_path(const SampledPath& path, int level, int substeps,
                                const CovarianceModel& model, RngSeed seed);

}  // namespace roughvar
