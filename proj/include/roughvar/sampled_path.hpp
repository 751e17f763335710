#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "roughvar/tensor.hpp"

namespace roughvar {

/// How increments of a sampled path are measured.
///  - euclidean: |x_t - x_s| on R^d.
///  - cc: symmetrized homogeneous-norm distance on the group.
///  - area: sqrt|A_{s,t}|, the square root of the Levy-area magnitude of a
///    step >= 2 group path (|A| is the Euclidean norm over pairs i < j).
/// All three scale linearly under x -> x / eps (dilation for group values).
enum class Metric { euclidean, cc, area };

class SampledPath {
public:
    /// `values` holds n rows of length `dimension`, row-major.
    static SampledPath euclidean(std::vector<double> times, std::vector<double> values, int dimension);
    static SampledPath scalar(std::vector<double> times, std::vector<double> values);
    static SampledPath group(GroupPath path, Metric metric = Metric::cc);

    Metric metric() const noexcept { return metric_; }
    bool is_group() const noexcept { return group_.has_value(); }
    const std::vector<double>& times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    int dimension() const noexcept { return dim_; }

    /// Euclidean paths only.
    std::span<const double> point(std::size_t i) const;
    const std::vector<double>& values() const;
    /// Group paths only.
    const GroupPath& group_path() const;

    double distance(std::size_t i, std::size_t j) const;

    /// Same values at remapped times; `remap` must be strictly increasing.
    SampledPath reparametrized(const std::function<double(double)>& remap) const;
    /// Values scaled by c (dilation for group values); distances scale by |c|.
    SampledPath scaled(double c) const;

private:
    SampledPath() = default;

    Metric metric_ = Metric::euclidean;
    int dim_ = 0;
    std::vector<double> times_;
    std::vector<double> values_;
    std::optional<GroupPath> group_;
};

/// Symmetric pairwise distances d(i, j) over a time grid.
///
/// Stored packed upper-triangular. Large Euclidean paths can be kept lazy, in
/// which case distances are recomputed from the samples on every query.
class PairwiseDistances {
public:
    explicit PairwiseDistances(const SampledPath& path);
    /// Force caching on or off (lazy is only available for Euclidean paths).
    PairwiseDistances(const SampledPath& path, bool cache);
    /// Tabulate an arbitrary symmetric function of index pairs.
    PairwiseDistances(std::vector<double> times, const std::function<double(std::size_t, std::size_t)>& dist);

    std::size_t size() const noexcept { return times_.size(); }
    const std::vector<double>& times() const noexcept { return times_; }
    bool cached() const noexcept { return !packed_.empty() || times_.size() < 2; }

    double operator()(std::size_t i, std::size_t j) const;

    /// Row i of the packed table: distances to j = i+1, ..., n-1.
    std::span<const double> row(std::size_t i) const;

    double max_distance() const;

    /// Lazy Euclidean source (null when cached).
    const SampledPath* source() const noexcept { return source_ ? &*source_ : nullptr; }

private:
    std::size_t row_start(std::size_t i) const { return i * size() - i * (i + 1) / 2; }

    std::vector<double> times_;
    std::vector<double> packed_;
    std::optional<SampledPath> source_;
};

/// Paths up to this many points are cached by default.
inline constexpr std::size_t kDistanceCacheLimit = 4096;

}  // namespace roughvar
