#include "roughvar/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "roughvar/errors.hpp"

namespace roughvar {

namespace detail {

namespace {

std::size_t ipow(int d, int k) {
    std::size_t r = 1;
    for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(d);
    return r;
}

std::size_t offset(int d, int k) {
    std::size_t off = 0;
    for (int i = 0; i < k; ++i) off += ipow(d, i);
    return off;
}

}  // namespace

std::size_t tensor_size(int d, int n) { return offset(d, n + 1); }

void tensor_multiply(int d, int n, const double* a, const double* b, double* out) {
    for (int k = 0; k <= n; ++k) {
        double* o = out + offset(d, k);
        const std::size_t size_k = ipow(d, k);
        std::fill(o, o + size_k, 0.0);
        for (int i = 0; i <= k; ++i) {
            const double* ai = a + offset(d, i);
            const double* bj = b + offset(d, k - i);
            const std::size_t ni = ipow(d, i);
            const std::size_t nj = ipow(d, k - i);
            for (std::size_t p = 0; p < ni; ++p) {
                const double av = ai[p];
                if (av == 0.0) continue;
                double* row = o + p * nj;
                for (std::size_t q = 0; q < nj; ++q) row[q] += av * bj[q];
            }
        }
    }
}

void tensor_inverse(int d, int n, const double* g, double* out, double* scratch) {
    // (1 + x)^{-1} = sum_{m=0}^{N} (-x)^m, x = g - 1 has no scalar part.
    const std::size_t size = tensor_size(d, n);
    double* term = scratch;
    double* next = scratch + size;
    double* neg_x = scratch + 2 * size;
    for (std::size_t i = 0; i < size; ++i) neg_x[i] = -g[i];
    neg_x[0] = 0.0;
    std::fill(out, out + size, 0.0);
    std::fill(term, term + size, 0.0);
    out[0] = 1.0;
    term[0] = 1.0;
    for (int m = 1; m <= n; ++m) {
        tensor_multiply(d, n, term, neg_x, next);
        std::swap(term, next);
        for (std::size_t i = 1; i < size; ++i) out[i] += term[i];
    }
}

double tensor_homogeneous_norm(int d, int n, const double* g) {
    double total = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double* lk = g + offset(d, k);
        const std::size_t nk = ipow(d, k);
        double sq = 0.0;
        for (std::size_t i = 0; i < nk; ++i) sq += lk[i] * lk[i];
        if (sq == 0.0) continue;
        const double euclid = std::sqrt(sq);
        total += (k == 1) ? euclid : (k == 2 ? std::sqrt(euclid) : std::pow(euclid, 1.0 / k));
    }
    return total;
}

}  // namespace detail

namespace {

void check_shape(int dimension, int level) {
    if (dimension < 1 || dimension > kMaxDimension)
        throw DimensionError("tensor dimension must be in [1, " + std::to_string(kMaxDimension) +
                             "], got " + std::to_string(dimension));
    if (level < 1 || level > kMaxLevel)
        throw DimensionError("truncation level must be in [1, " + std::to_string(kMaxLevel) +
                             "], got " + std::to_string(level));
}

void check_same_shape(const TensorElement& g, const TensorElement& h) {
    if (g.dimension() != h.dimension() || g.level() != h.level())
        throw DimensionError("tensor shapes differ: (d=" + std::to_string(g.dimension()) +
                             ", N=" + std::to_string(g.level()) + ") vs (d=" +
                             std::to_string(h.dimension()) + ", N=" + std::to_string(h.level()) +
                             ")");
}

}  // namespace

TensorElement::TensorElement(int dimension, int level) : dim_(dimension), level_(level) {
    check_shape(dimension, level);
    data_.assign(detail::tensor_size(dimension, level), 0.0);
    data_[0] = 1.0;
}

TensorElement::TensorElement(int dimension, int level, std::vector<double> data)
    : dim_(dimension), level_(level), data_(std::move(data)) {}

TensorElement TensorElement::from_buffer(int dimension, int level, std::vector<double> data) {
    check_shape(dimension, level);
    if (data.size() != detail::tensor_size(dimension, level))
        throw DimensionError("buffer size does not match tensor shape");
    if (data[0] != 1.0) throw InputError("scalar part of a group element must equal 1");
    return TensorElement(dimension, level, std::move(data));
}

TensorElement TensorElement::from_levels(int dimension, std::span<const std::vector<double>> levels) {
    const int level = static_cast<int>(levels.size());
    TensorElement g(dimension, level);
    for (int k = 1; k <= level; ++k) {
        const auto& src = levels[static_cast<std::size_t>(k - 1)];
        if (src.size() != g.level_size(k))
            throw DimensionError("level " + std::to_string(k) + " expects " +
                                 std::to_string(g.level_size(k)) + " coefficients, got " +
                                 std::to_string(src.size()));
        std::copy(src.begin(), src.end(), g.coefficients(k).begin());
    }
    return g;
}

std::size_t TensorElement::level_size(int k) const { return detail::ipow(dim_, k); }
std::size_t TensorElement::level_offset(int k) const { return detail::offset(dim_, k); }

std::span<const double> TensorElement::coefficients(int k) const {
    if (k < 0 || k > level_) throw DimensionError("level index out of range");
    return {data_.data() + level_offset(k), level_size(k)};
}

std::span<double> TensorElement::coefficients(int k) {
    if (k < 1 || k > level_) throw DimensionError("mutable level index must be in [1, N]");
    return {data_.data() + level_offset(k), level_size(k)};
}

double TensorElement::operator()(std::initializer_list<int> index) const {
    const int k = static_cast<int>(index.size());
    std::size_t flat = 0;
    for (int digit : index) {
        if (digit < 0 || digit >= dim_) throw DimensionError("multi-index digit out of range");
        flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(digit);
    }
    return coefficients(k)[flat];
}

TensorElement multiply(const TensorElement& g, const TensorElement& h) {
    check_same_shape(g, h);
    std::vector<double> out(g.data().size());
    detail::tensor_multiply(g.dimension(), g.level(), g.data().data(), h.data().data(), out.data());
    return TensorElement::from_buffer(g.dimension(), g.level(), std::move(out));
}

TensorElement inverse(const TensorElement& g) {
    const std::size_t size = g.data().size();
    std::vector<double> out(size);
    std::vector<double> scratch(3 * size);
    detail::tensor_inverse(g.dimension(), g.level(), g.data().data(), out.data(), scratch.data());
    return TensorElement::from_buffer(g.dimension(), g.level(), std::move(out));
}

TensorElement dilate(const TensorElement& g, double lambda) {
    TensorElement r = g;
    double scale = 1.0;
    for (int k = 1; k <= g.level(); ++k) {
        scale *= lambda;
        for (double& c : r.coefficients(k)) c *= scale;
    }
    return r;
}

double homogeneous_norm(const TensorElement& g) {
    return detail::tensor_homogeneous_norm(g.dimension(), g.level(), g.data().data());
}

double cc_distance(const TensorElement& g, const TensorElement& h) {
    check_same_shape(g, h);
    if (g == h) return 0.0;
    const TensorElement forward = multiply(inverse(g), h);
    const TensorElement backward = multiply(inverse(h), g);
    return std::max(homogeneous_norm(forward), homogeneous_norm(backward));
}

TensorElement segment_exponential(std::span<const double> v, int level) {
    const int d = static_cast<int>(v.size());
    TensorElement r(d, level);
    // level k = level (k-1) (x) v / k
    for (int k = 1; k <= level; ++k) {
        const auto prev = std::as_const(r).coefficients(k - 1);
        const std::vector<double> prev_copy(prev.begin(), prev.end());
        auto cur = r.coefficients(k);
        const std::size_t nd = static_cast<std::size_t>(d);
        for (std::size_t p = 0; p < prev_copy.size(); ++p)
            for (std::size_t q = 0; q < nd; ++q) cur[p * nd + q] = prev_copy[p] * v[q] / k;
    }
    return r;
}

double max_abs_difference(const TensorElement& a, const TensorElement& b) {
    check_same_shape(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

std::vector<double> antisymmetric_level2(const TensorElement& g) {
    if (g.level() < 2) throw DimensionError("Levy area needs a step >= 2 element");
    const int d = g.dimension();
    auto m = g.coefficients(2);
    std::vector<double> a(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            a[static_cast<std::size_t>(i * d + j)] =
                0.5 * (m[static_cast<std::size_t>(i * d + j)] - m[static_cast<std::size_t>(j * d + i)]);
    return a;
}

GroupPath::GroupPath(std::vector<double> times, std::vector<TensorElement> points)
    : times_(std::move(times)), points_(std::move(points)) {
    if (times_.empty()) throw InputError("group path needs at least one point");
    if (times_.size() != points_.size()) throw InputError("times and points differ in length");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1])) throw InputError("times must be strictly increasing");
    for (const auto& p : points_)
        if (p.dimension() != points_.front().dimension() || p.level() != points_.front().level())
            throw DimensionError("group path points differ in shape");
}

TensorElement GroupPath::increment(std::size_t i, std::size_t j) const {
    return multiply(inverse(points_.at(i)), points_.at(j));
}

std::size_t GroupPath::index_of(double t) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    const double tol = 1e-12 * std::max(1.0, std::abs(t));
    if (it != times_.end() && std::abs(*it - t) <= tol) return static_cast<std::size_t>(it - times_.begin());
    if (it != times_.begin() && std::abs(*(it - 1) - t) <= tol)
        return static_cast<std::size_t>(it - times_.begin() - 1);
    throw InputError("time " + std::to_string(t) + " is not a grid time");
}

TensorElement GroupPath::increment_at(double s, double t) const {
    return increment(index_of(s), index_of(t));
}

GroupPath lift_piecewise_linear(std::span<const double> values, int dimension,
                                std::span<const double> times, int level) {
    if (level < 1) throw InputError("signature level must be >= 1");
    if (dimension < 1) throw DimensionError("path dimension must be positive");
    const std::size_t n = times.size();
    if (n == 0 || values.size() != n * static_cast<std::size_t>(dimension))
        throw DimensionError("values must hold one row of length d per time");
    for (std::size_t i = 1; i < n; ++i)
        if (!(times[i] > times[i - 1])) throw InputError("times must be strictly increasing");

    const std::size_t d = static_cast<std::size_t>(dimension);
    std::vector<TensorElement> points;
    points.reserve(n);
    points.emplace_back(dimension, level);
    std::vector<double> step(d);
    std::vector<double> buffer(detail::tensor_size(dimension, level));
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) step[c] = values[i * d + c] - values[(i - 1) * d + c];
        const TensorElement seg = segment_exponential(step, level);
        detail::tensor_multiply(dimension, level, points.back().data().data(), seg.data().data(),
                                buffer.data());
        points.push_back(TensorElement::from_buffer(dimension, level, buffer));
    }
    return GroupPath(std::vector<double>(times.begin(), times.end()), std::move(points));
}

GroupPath lift_piecewise_linear(const std::vector<std::vector<double>>& points,
                                std::span<const double> times, int level) {
    if (points.empty()) throw InputError("empty path");
    const std::size_t d = points.front().size();
    std::vector<double> flat;
    flat.reserve(points.size() * d);
    for (const auto& p : points) {
        if (p.size() != d) throw DimensionError("path points differ in dimension");
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return lift_piecewise_linear(flat, static_cast<int>(d), times, level);
}

std::vector<double> levy_area_increment(const GroupPath& path, double s, double t) {
    if (!(s < t)) throw InputError("Levy area increment needs s < t");
    return antisymmetric_level2(path.increment_at(s, t));
}

}  // namespace roughvar
