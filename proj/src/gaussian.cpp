#include "roughvar/gaussian.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "roughvar/errors.hpp"

namespace roughvar {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::atomic<std::size_t> jitter_retries{0};

using Factor = std::shared_ptr<const Eigen::MatrixXd>;

// Lower Cholesky factor of the covariance of the n-1 increments on the
// uniform grid, cached per (H, n).
Factor increment_factor(double hurst, std::size_t n) {
    static std::mutex mutex;
    static std::map<std::pair<double, std::size_t>, Factor> cache;
    const auto key = std::make_pair(hurst, n);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const Eigen::Index m = static_cast<Eigen::Index>(n - 1);
    const double h = 1.0 / static_cast<double>(n - 1);
    const double two_h = 2.0 * hurst;
    const double scale = std::pow(h, two_h);
    Eigen::VectorXd gamma(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const double kk = static_cast<double>(k);
        gamma(k) = 0.5 * scale *
                   (std::pow(kk + 1.0, two_h) + std::pow(std::abs(kk - 1.0), two_h) - 2.0 * std::pow(kk, two_h));
    }
    Eigen::MatrixXd cov(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) cov(i, j) = gamma(std::abs(i - j));
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        ++jitter_retries;
        cov.diagonal().array() += 1e-12;
        llt.compute(cov);
        if (llt.info() != Eigen::Success)
            throw Error("fBM increment covariance is not positive definite even with jitter");
    }
    auto factor = std::make_shared<const Eigen::MatrixXd>(llt.matrixL());
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(factor)).first->second;
}

void check_grid(std::size_t n, int dimension) {
    if (n < 2) throw InputError("grid needs at least two points");
    if (dimension < 1) throw DimensionError("dimension must be positive");
}

}  // namespace

std::mt19937_64 RngSeed::engine(std::uint64_t stream) const {
    const std::uint64_t a = splitmix64(master);
    const std::uint64_t b = splitmix64(a ^ splitmix64(replication + 0x632be59bd9b4e019ULL));
    const std::uint64_t c = splitmix64(b ^ splitmix64(stream + 0x2545f4914f6cdd1dULL));
    return std::mt19937_64(c);
}

CovarianceModel CovarianceModel::bm() { return CovarianceModel(0.5, true); }

CovarianceModel CovarianceModel::fbm(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw InputError("Hurst parameter must lie in (0, 1)");
    return CovarianceModel(hurst, false);
}

CovarianceModel CovarianceModel::parse(const std::string& spec) {
    if (spec == "bm") return bm();
    if (spec.rfind("fbm:", 0) == 0) {
        const std::string rest = spec.substr(4);
        try {
            std::size_t used = 0;
            const double h = std::stod(rest, &used);
            if (used == rest.size()) return fbm(h);
        } catch (const std::logic_error&) {
        }
    }
    throw InputError("covariance model must be 'bm' or 'fbm:H', got '" + spec + "'");
}

double CovarianceModel::operator()(double s, double t) const {
    if (named_bm_) return std::min(s, t);
    const double e = 2.0 * hurst_;
    return 0.5 * (std::pow(std::abs(s), e) + std::pow(std::abs(t), e) - std::pow(std::abs(t - s), e));
}

std::string CovarianceModel::name() const {
    if (named_bm_) return "bm";
    char buf[32];
    std::snprintf(buf, sizeof buf, "fbm:%g", hurst_);
    return buf;
}

std::vector<double> uniform_grid(std::size_t n) {
    std::vector<double> t(n);
    if (n == 1) return {0.0};
    for (std::size_t j = 0; j < n; ++j) t[j] = static_cast<double>(j) / static_cast<double>(n - 1);
    t.back() = 1.0;
    return t;
}

SampledPath sample_bm(std::size_t n, int dimension, RngSeed seed) {
    check_grid(n, dimension);
    auto rng = seed.engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(1.0 / static_cast<double>(n - 1));
    const auto d = static_cast<std::size_t>(dimension);
    std::vector<double> values(n * d, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t c = 0; c < d; ++c) values[i * d + c] = values[(i - 1) * d + c] + sd * normal(rng);
    return SampledPath::euclidean(uniform_grid(n), std::move(values), dimension);
}

SampledPath sample_fbm(double hurst, std::size_t n, int dimension, RngSeed seed) {
    check_grid(n, dimension);
    if (!(hurst > 0.0 && hurst < 1.0)) throw InputError("Hurst parameter must lie in (0, 1)");
    if (n > kMaxFbmGrid)
        throw InputError("fBM sampling supports at most " + std::to_string(kMaxFbmGrid) + " points");
    const Factor factor = increment_factor(hurst, n);
    auto rng = seed.engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto d = static_cast<std::size_t>(dimension);
    const Eigen::Index m = static_cast<Eigen::Index>(n - 1);
    std::vector<double> values(n * d, 0.0);
    Eigen::VectorXd z(m);
    for (std::size_t c = 0; c < d; ++c) {
        for (Eigen::Index k = 0; k < m; ++k) z(k) = normal(rng);
        const Eigen::VectorXd inc = factor->triangularView<Eigen::Lower>() * z;
        for (std::size_t i = 1; i < n; ++i)
            values[i * d + c] = values[(i - 1) * d + c] + inc(static_cast<Eigen::Index>(i - 1));
    }
    return SampledPath::euclidean(uniform_grid(n), std::move(values), dimension);
}

SampledPath sample_path(const CovarianceModel& model, std::size_t n, int dimension, RngSeed seed) {
    if (model.name() == "bm") return sample_bm(n, dimension, seed);
    return sample_fbm(model.hurst(), n, dimension, seed);
}

std::size_t fbm_jitter_retries() { return jitter_retries.load(); }

GroupPath enhance_to_rough_path(const SampledPath& path, int level, int substeps, const CovarianceModel& model,
                                RngSeed seed) {
    if (path.is_group()) throw InputError("enhancement needs a Euclidean sample");
    if (level < 2) throw InputError("enhancement level must be >= 2");
    if (substeps < 1 || (substeps & (substeps - 1)) != 0)
        throw InputError("substeps must be a power of two");
    if (substeps == 1) return lift_piecewise_linear(path.values(), path.dimension(), path.times(), level);
    if (!model.is_brownian())
        throw UnsupportedError("bridge refinement is only available for Brownian motion; use substeps = 1");

    const auto d = static_cast<std::size_t>(path.dimension());
    std::vector<double> times = path.times();
    std::vector<double> values = path.values();
    int refinement = 0;
    for (int s = substeps; s > 1; s /= 2) {
        ++refinement;
        auto rng = seed.engine(1000 + static_cast<std::uint64_t>(refinement));
        std::normal_distribution<double> normal(0.0, 1.0);
        const std::size_t n = times.size();
        std::vector<double> t2;
        std::vector<double> v2;
        t2.reserve(2 * n - 1);
        v2.reserve((2 * n - 1) * d);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            t2.push_back(times[i]);
            v2.insert(v2.end(), values.begin() + static_cast<std::ptrdiff_t>(i * d),
                      values.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
            const double h = times[i + 1] - times[i];
            const double sd = std::sqrt(h / 4.0);
            t2.push_back(0.5 * (times[i] + times[i + 1]));
            for (std::size_t c = 0; c < d; ++c)
                v2.push_back(0.5 * (values[i * d + c] + values[(i + 1) * d + c]) + sd * normal(rng));
        }
        t2.push_back(times.back());
        v2.insert(v2.end(), values.end() - static_cast<std::ptrdiff_t>(d), values.end());
        times = std::move(t2);
        values = std::move(v2);
    }
    const GroupPath fine = lift_piecewise_linear(values, path.dimension(), times, level);
    std::vector<TensorElement> coarse;
    coarse.reserve(path.size());
    for (std::size_t i = 0; i < path.size(); ++i)
        coarse.push_back(fine.points()[i * static_cast<std::size_t>(substeps)]);
    return GroupPath(path.times(), std::move(coarse));
}

}  // namespace roughvar
