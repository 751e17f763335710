#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace roughvar {

inline constexpr int kMaxDimension = 4;
inline constexpr int kMaxLevel = 5;

/// Element of the truncated tensor algebra T^N(R^d).
///
/// Coefficients are stored densely in one flat buffer, level by level, each
/// level in row-major multi-index order (level k holds d^k entries). Elements
/// built through the public factories and group operations have level-0
/// coefficient exactly 1, i.e. they live in the group of tensors with unit
/// scalar part, which contains G^N(R^d).
class TensorElement {
public:
    /// The identity (unit) element.
    TensorElement(int dimension, int level);

    static TensorElement identity(int dimension, int level) { return TensorElement(dimension, level); }

    /// `levels[k-1]` holds the d^k coefficients of level k, k = 1..N.
    static TensorElement from_levels(int dimension, std::span<const std::vector<double>> levels);

    int dimension() const noexcept { return dim_; }
    int level() const noexcept { return level_; }

    /// Coefficients of level k (k = 0 gives the scalar part).
    std::span<const double> coefficients(int k) const;
    /// Mutable access to levels k >= 1; the scalar part stays fixed at 1.
    std::span<double> coefficients(int k);

    /// The whole buffer, level 0 first.
    std::span<const double> data() const noexcept { return data_; }

    std::size_t level_size(int k) const;
    std::size_t level_offset(int k) const;

    /// Level-k entry for a multi-index given as digits in [0, d).
    double operator()(std::initializer_list<int> index) const;

    /// Adopt a flat buffer in the layout above; the scalar part must be 1.
    static TensorElement from_buffer(int dimension, int level, std::vector<double> data);

    friend bool operator==(const TensorElement&, const TensorElement&) = default;

private:
    TensorElement(int dimension, int level, std::vector<double> data);

    int dim_;
    int level_;
    std::vector<double> data_;
};

/// Truncated tensor product.
TensorElement multiply(const TensorElement& g, const TensorElement& h);

/// Inverse through the truncated Neumann series of (1 + (g - 1))^{-1}.
TensorElement inverse(const TensorElement& g);

/// Dilation: level k is scaled by lambda^k.
TensorElement dilate(const TensorElement& g, double lambda);

/// Homogeneous norm sum_k |g^k|^{1/k}, |.| Euclidean on each level.
double homogeneous_norm(const TensorElement& g);

/// max(||g^{-1} h||, ||h^{-1} g||) with the homogeneous norm above.
double cc_distance(const TensorElement& g, const TensorElement& h);

/// exp(v) = sum_{k<=N} v^{(x)k} / k!, the signature of a straight segment.
TensorElement segment_exponential(std::span<const double> v, int level);

/// Largest absolute coefficient difference over all levels.
double max_abs_difference(const TensorElement& a, const TensorElement& b);

/// Antisymmetric part of level 2, returned as a row-major d x d array.
std::vector<double> antisymmetric_level2(const TensorElement& g);

/// Path in the group sampled on a strictly increasing time grid.
class GroupPath {
public:
    GroupPath(std::vector<double> times, std::vector<TensorElement> points);

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<TensorElement>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return times_.size(); }
    int dimension() const noexcept { return points_.front().dimension(); }
    int level() const noexcept { return points_.front().level(); }

    /// x_{t_i, t_j} = x_{t_i}^{-1} (x) x_{t_j}.
    TensorElement increment(std::size_t i, std::size_t j) const;

    /// Increment between grid times; throws InputError for off-grid times.
    TensorElement increment_at(double s, double t) const;

    /// Index of a grid time; throws InputError if `t` is not on the grid.
    std::size_t index_of(double t) const;

private:
    std::vector<double> times_;
    std::vector<TensorElement> points_;
};

/// Step-N signature path of the piecewise-linear interpolation of
/// `values` (n rows of length d, row-major) at `times`, started at the
/// identity and built by Chen concatenation of segment exponentials.
GroupPath lift_piecewise_linear(std::span<const double> values, int dimension,
                                std::span<const double> times, int level);

/// Convenience overload taking one vector per sample.
GroupPath lift_piecewise_linear(const std::vector<std::vector<double>>& points,
                                std::span<const double> times, int level);

/// Antisymmetric part of level 2 of the increment over [s, t] (Levy area),
/// row-major d x d. `s` and `t` must be grid times with s < t.
std::vector<double> levy_area_increment(const GroupPath& path, double s, double t);

namespace detail {

/// Raw kernels on flat buffers in the TensorElement layout (level 0 first).
/// `out` must not alias the inputs.
void tensor_multiply(int d, int n, const double* a, const double* b, double* out);
void tensor_inverse(int d, int n, const double* g, double* out, double* scratch);
double tensor_homogeneous_norm(int d, int n, const double* g);
std::size_t tensor_size(int d, int n);

}  // namespace detail

}  // namespace roughvar
