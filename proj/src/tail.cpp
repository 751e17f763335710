#include "roughvar/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "roughvar/errors.hpp"

namespace roughvar {

namespace {

struct WeightedFit {
    Eigen::VectorXd coef;
    double sse = 0.0;
    double r2 = 0.0;
};

WeightedFit weighted_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& w) {
    const Eigen::VectorXd sw = w.array().sqrt();
    const Eigen::MatrixXd a = sw.asDiagonal() * design;
    const Eigen::VectorXd b = sw.asDiagonal() * y;
    WeightedFit fit;
    fit.coef = a.colPivHouseholderQr().solve(b);
    const Eigen::VectorXd resid = y - design * fit.coef;
    fit.sse = (w.array() * resid.array().square()).sum();
    const double mean = (w.array() * y.array()).sum() / w.sum();
    const double sst = (w.array() * (y.array() - mean).square()).sum();
    fit.r2 = sst > 0.0 ? std::clamp(1.0 - fit.sse / sst, 0.0, 1.0) : 0.0;
    return fit;
}

}  // namespace

std::string to_string(TailModel model) {
    switch (model) {
        case TailModel::gauss: return "gauss";
        case TailModel::exp: return "exp";
        case TailModel::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

nlohmann::json TailReport::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : tail) pts.push_back({{"x", p.x}, {"survival", p.survival}, {"count", p.count}});
    return {{"sample_count", sample_count},
            {"quantile_window", {q_lo, q_hi}},
            {"model", to_string(model)},
            {"exponent", exponent},
            {"raw_slope", raw_slope},
            {"quality", quality},
            {"r2_gauss", r2_gauss},
            {"r2_exp", r2_exp},
            {"sse_gauss", sse_gauss},
            {"sse_exp", sse_exp},
            {"tail", pts}};
}

void TailReport::write_survival_csv(std::ostream& out) const {
    out << "x,survival,count\n";
    char buf[96];
    for (const auto& p : tail) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu\n", p.x, p.survival, p.count);
        out << buf;
    }
}

TailReport fit_tail(std::span<const double> samples, double q_lo, double q_hi) {
    if (!(q_lo >= 0.8 && q_lo < q_hi && q_hi <= 0.999))
        throw InputError("quantile window must satisfy 0.8 <= q_lo < q_hi <= 0.999");
    const std::size_t n = samples.size();
    if (n < kMinTailSamples)
        throw InsufficientDataError("tail fit needs at least " + std::to_string(kMinTailSamples) + " samples, got " +
                                    std::to_string(n));
    std::vector<double> s(samples.begin(), samples.end());
    for (double v : s)
        if (!std::isfinite(v)) throw InputError("tail samples must be finite");
    std::sort(s.begin(), s.end());

    TailReport rep;
    rep.sample_count = n;
    rep.q_lo = q_lo;
    rep.q_hi = q_hi;
    const auto lo = static_cast<std::size_t>(std::floor(q_lo * static_cast<double>(n)));
    const auto hi = static_cast<std::size_t>(std::floor(q_hi * static_cast<double>(n)));
    for (std::size_t i = lo; i < hi; ++i) {
        if (i + 1 < n && s[i + 1] == s[i]) continue;  // keep the last of a tie run
        const std::size_t above = n - 1 - i;
        rep.tail.push_back({s[i], static_cast<double>(above + 1) / static_cast<double>(n + 1), above});
    }
    if (rep.tail.size() < kMinTailPoints || !(rep.tail.front().x > 0.0))
        throw InsufficientDataError("tail window holds " + std::to_string(rep.tail.size()) +
                                    " distinct positive points; at least " + std::to_string(kMinTailPoints) +
                                    " are needed");

    const auto m = static_cast<Eigen::Index>(rep.tail.size());
    Eigen::VectorXd x(m), y(m), w(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto& p = rep.tail[static_cast<std::size_t>(k)];
        x(k) = p.x;
        y(k) = std::log(p.survival);
        w(k) = p.survival / (1.0 - p.survival);
    }
    auto design = [&](const Eigen::VectorXd& feature, bool with_log) {
        Eigen::MatrixXd d(m, with_log ? 3 : 2);
        d.col(0) = feature;
        d.col(1).setOnes();
        if (with_log) d.col(2) = x.array().log();
        return d;
    };
    const Eigen::VectorXd x2 = x.array().square();
    const WeightedFit gauss = weighted_least_squares(design(x2, false), y, w);
    const WeightedFit expo = weighted_least_squares(design(x, false), y, w);
    rep.sse_gauss = gauss.sse;
    rep.sse_exp = expo.sse;
    rep.r2_gauss = gauss.r2;
    rep.r2_exp = expo.r2;

    if (gauss.sse <= kModelSseMargin * expo.sse)
        rep.model = TailModel::gauss;
    else if (expo.sse <= kModelSseMargin * gauss.sse)
        rep.model = TailModel::exp;
    else
        rep.model = TailModel::inconclusive;

    const bool use_gauss = rep.model != TailModel::exp && (rep.model == TailModel::gauss || gauss.sse <= expo.sse);
    const Eigen::VectorXd& feature = use_gauss ? x2 : x;
    const WeightedFit& plain = use_gauss ? gauss : expo;
    const WeightedFit corrected = weighted_least_squares(design(feature, true), y, w);
    rep.raw_slope = -plain.coef(0);
    rep.exponent = -corrected.coef(0) > 0.0 ? -corrected.coef(0) : rep.raw_slope;
    rep.quality = plain.r2;
    if (!(rep.exponent > 0.0)) rep.model = TailModel::inconclusive;
    return rep;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

HalfspaceCheck borell_halfspace_check(double a, double r, int n, std::size_t samples, RngSeed seed) {
    if (!(r >= 0.0)) throw InputError("enlargement radius must be >= 0");
    if (n < 1) throw DimensionError("dimension must be positive");
    if (samples == 0) throw InputError("need at least one sample");
    HalfspaceCheck out;
    out.exact_bound = normal_cdf(a + r);
    auto rng = seed.engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t inside = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double x1 = normal(rng);
        for (int c = 1; c < n; ++c) normal(rng);
        if (x1 <= a + r) ++inside;
    }
    const double m = static_cast<double>(samples);
    out.estimate = static_cast<double>(inside) / m;
    out.standard_error = std::sqrt(out.exact_bound * (1.0 - out.exact_bound) / m);
    const double band = 3.0 * out.standard_error;
    out.pass = std::abs(out.estimate - out.exact_bound) <= band && out.estimate + band >= out.exact_bound;
    return out;
}

GaussianSurrogate::GaussianSurrogate(Eigen::MatrixXd covariance) : covariance_(std::move(covariance)) {
    if (covariance_.rows() == 0 || covariance_.rows() != covariance_.cols())
        throw DimensionError("covariance must be a non-empty square matrix");
    const double scale = std::max(1.0, covariance_.cwiseAbs().maxCoeff());
    if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InputError("covariance must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance_);
    const Eigen::VectorXd lambda = eig.eigenvalues();
    const double top = std::max(lambda.maxCoeff(), 0.0);
    if (lambda.minCoeff() < -1e-10 * std::max(1.0, top)) throw InputError("covariance is not positive semidefinite");
    const Eigen::VectorXd clipped = lambda.cwiseMax(0.0);
    root_ = eig.eigenvectors() * clipped.cwiseSqrt().asDiagonal();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (clipped(i) > 1e-12 * top) inv(i) = 1.0 / clipped(i);
    pseudo_inverse_ = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::VectorXd GaussianSurrogate::sample(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(covariance_.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    return root_ * z;
}

double GaussianSurrogate::cameron_martin_norm(const Eigen::VectorXd& h) const {
    if (h.size() != covariance_.rows()) throw DimensionError("shift dimension does not match the covariance");
    // Components outside the range of the covariance have infinite norm.
    const Eigen::VectorXd projected = covariance_ * (pseudo_inverse_ * h);
    if ((projected - h).norm() > 1e-9 * std::max(1.0, h.norm())) return std::numeric_limits<double>::infinity();
    return std::sqrt(std::max(0.0, h.dot(pseudo_inverse_ * h)));
}

double fernique_sigma(const GaussianSurrogate& surrogate) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(surrogate.covariance(), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

ShiftProbe shift_condition_probe(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const GaussianSurrogate& surrogate, double c, std::size_t samples,
                                 const std::vector<Eigen::VectorXd>& shifts, RngSeed seed) {
    ShiftProbe out;
    const double sigma = fernique_sigma(surrogate);
    std::vector<double> shift_norms;
    shift_norms.reserve(shifts.size());
    for (const auto& h : shifts) shift_norms.push_back(surrogate.cameron_martin_norm(h));
    auto rng = seed.engine();
    for (std::size_t m = 0; m < samples; ++m) {
        const Eigen::VectorXd b = surrogate.sample(rng);
        const double fb = std::abs(f(b));
        for (std::size_t k = 0; k < shifts.size(); ++k) {
            const double v = fb - c * (std::abs(f(b - shifts[k])) + sigma * shift_norms[k]);
            if (v > out.max_violation) {
                out.max_violation = v;
                out.sample_index = m;
                out.shift_index = k;
            }
        }
    }
    return out;
}

}  // namespace roughvar
