#include "roughvar/sampled_path.hpp"

#include <algorithm>
#include <cmath>

#include "roughvar/errors.hpp"

namespace roughvar {

namespace {

void check_times(const std::vector<double>& times) {
    if (times.empty()) throw InputError("sampled path needs at least one time");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw InputError("times must be strictly increasing");
}

double euclidean_distance(const double* a, const double* b, int d) {
    if (d == 1) return std::abs(b[0] - a[0]);
    double sq = 0.0;
    for (int c = 0; c < d; ++c) sq += (b[c] - a[c]) * (b[c] - a[c]);
    return std::sqrt(sq);
}

// sqrt of |A_{s,t}| from the level-1/level-2 coefficients of both endpoints:
// A_{s,t} = A_t - A_s - 1/2 (x_s (x) x_t - x_t (x) x_s), restricted to i < j.
double area_distance(const TensorElement& gs, const TensorElement& gt) {
    const int d = gs.dimension();
    auto a = gs.coefficients(1);
    auto b = gt.coefficients(1);
    auto ms = gs.coefficients(2);
    auto mt = gt.coefficients(2);
    double sq = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const auto ij = static_cast<std::size_t>(i * d + j);
            const auto ji = static_cast<std::size_t>(j * d + i);
            const double area_t = 0.5 * (mt[ij] - mt[ji]);
            const double area_s = 0.5 * (ms[ij] - ms[ji]);
            const double cross = 0.5 * (a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] -
                                        b[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)]);
            const double v = area_t - area_s - cross;
            sq += v * v;
        }
    return std::sqrt(std::sqrt(sq));
}

}  // namespace

SampledPath SampledPath::euclidean(std::vector<double> times, std::vector<double> values, int dimension) {
    check_times(times);
    if (dimension < 1) throw DimensionError("path dimension must be positive");
    if (values.size() != times.size() * static_cast<std::size_t>(dimension))
        throw DimensionError("values must hold one row of length d per time");
    SampledPath p;
    p.metric_ = Metric::euclidean;
    p.dim_ = dimension;
    p.times_ = std::move(times);
    p.values_ = std::move(values);
    return p;
}

SampledPath SampledPath::scalar(std::vector<double> times, std::vector<double> values) {
    return euclidean(std::move(times), std::move(values), 1);
}

SampledPath SampledPath::group(GroupPath path, Metric metric) {
    if (metric == Metric::euclidean) throw InputError("group paths use the cc or area metric");
    if (metric == Metric::area && path.level() < 2) throw DimensionError("area metric needs step >= 2");
    SampledPath p;
    p.metric_ = metric;
    p.dim_ = path.dimension();
    p.times_ = path.times();
    p.group_ = std::move(path);
    return p;
}

std::span<const double> SampledPath::point(std::size_t i) const {
    if (group_) throw InputError("point() is only defined for Euclidean paths");
    const auto d = static_cast<std::size_t>(dim_);
    return {values_.data() + i * d, d};
}

const std::vector<double>& SampledPath::values() const {
    if (group_) throw InputError("values() is only defined for Euclidean paths");
    return values_;
}

const GroupPath& SampledPath::group_path() const {
    if (!group_) throw InputError("group_path() is only defined for group paths");
    return *group_;
}

double SampledPath::distance(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    switch (metric_) {
        case Metric::euclidean: {
            const auto d = static_cast<std::size_t>(dim_);
            return euclidean_distance(values_.data() + i * d, values_.data() + j * d, dim_);
        }
        case Metric::cc:
            return cc_distance(group_->points()[i], group_->points()[j]);
        case Metric::area:
            return area_distance(group_->points()[i], group_->points()[j]);
    }
    return 0.0;
}

SampledPath SampledPath::reparametrized(const std::function<double(double)>& remap) const {
    std::vector<double> times(times_.size());
    std::transform(times_.begin(), times_.end(), times.begin(), remap);
    if (group_) return group(GroupPath(std::move(times), group_->points()), metric_);
    return euclidean(std::move(times), values_, dim_);
}

SampledPath SampledPath::scaled(double c) const {
    if (group_) {
        std::vector<TensorElement> pts;
        pts.reserve(size());
        for (const auto& g : group_->points()) pts.push_back(dilate(g, c));
        return group(GroupPath(times_, std::move(pts)), metric_);
    }
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return euclidean(times_, std::move(v), dim_);
}

PairwiseDistances::PairwiseDistances(const SampledPath& path)
    : PairwiseDistances(path, path.is_group() || path.size() <= kDistanceCacheLimit) {}

PairwiseDistances::PairwiseDistances(const SampledPath& path, bool cache) : times_(path.times()) {
    const std::size_t n = path.size();
    if (!cache) {
        if (path.is_group()) throw InputError("lazy distances are only available for Euclidean paths");
        source_ = path;
        return;
    }
    if (n < 2) return;
    packed_.resize(n * (n - 1) / 2);
    if (path.metric() == Metric::cc) {
        // Precompute inverses once; each pair then costs two products.
        const auto& pts = path.group_path().points();
        const int d = path.dimension();
        const int level = path.group_path().level();
        const std::size_t size = pts.front().data().size();
        std::vector<double> inv(n * size);
        std::vector<double> scratch(3 * size);
        for (std::size_t i = 0; i < n; ++i)
            detail::tensor_inverse(d, level, pts[i].data().data(), inv.data() + i * size, scratch.data());
        std::vector<double> prod(size);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                detail::tensor_multiply(d, level, inv.data() + i * size, pts[j].data().data(), prod.data());
                const double fwd = detail::tensor_homogeneous_norm(d, level, prod.data());
                detail::tensor_multiply(d, level, inv.data() + j * size, pts[i].data().data(), prod.data());
                const double bwd = detail::tensor_homogeneous_norm(d, level, prod.data());
                packed_[k++] = std::max(fwd, bwd);
            }
        return;
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) packed_[k++] = path.distance(i, j);
}

PairwiseDistances::PairwiseDistances(std::vector<double> times,
                                     const std::function<double(std::size_t, std::size_t)>& dist)
    : times_(std::move(times)) {
    check_times(times_);
    const std::size_t n = times_.size();
    if (n < 2) return;
    packed_.resize(n * (n - 1) / 2);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = dist(i, j);
            if (!(v >= 0.0)) throw InputError("distances must be nonnegative");
            packed_[k++] = v;
        }
}

double PairwiseDistances::operator()(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    if (source_) return source_->distance(i, j);
    return packed_[row_start(i) + (j - i - 1)];
}

std::span<const double> PairwiseDistances::row(std::size_t i) const {
    if (source_) throw InputError("row access needs cached distances");
    const std::size_t n = size();
    if (i + 1 >= n) return {};
    return {packed_.data() + row_start(i), n - i - 1};
}

double PairwiseDistances::max_distance() const {
    if (!source_) return packed_.empty() ? 0.0 : *std::max_element(packed_.begin(), packed_.end());
    double m = 0.0;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m = std::max(m, source_->distance(i, j));
    return m;
}

}  // namespace roughvar
