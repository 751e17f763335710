#include "roughvar/translation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roughvar/errors.hpp"
#include "roughvar/variation.hpp"

namespace roughvar {

namespace {

constexpr double kTimeTol = 1e-12;

// Linear interpolation of a Euclidean path at time u (inside its span).
void interpolate(const SampledPath& p, double u, double* out) {
    const auto& t = p.times();
    const auto d = static_cast<std::size_t>(p.dimension());
    if (u <= t.front() + kTimeTol) {
        std::copy_n(p.point(0).data(), d, out);
        return;
    }
    if (u >= t.back() - kTimeTol) {
        std::copy_n(p.point(p.size() - 1).data(), d, out);
        return;
    }
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), u) - t.begin()) - 1;
    const double th = (u - t[k]) / (t[k + 1] - t[k]);
    const double* a = p.point(k).data();
    const double* b = p.point(k + 1).data();
    for (std::size_t c = 0; c < d; ++c) out[c] = a[c] + th * (b[c] - a[c]);
}

// Sorted union of the given times restricted to [s, t], with s and t included.
std::vector<double> merged_grid(const std::vector<double>& a, const std::vector<double>& b, double s, double t) {
    std::vector<double> all;
    all.reserve(a.size() + b.size() + 2);
    all.push_back(s);
    for (double u : a)
        if (u > s && u < t) all.push_back(u);
    for (double u : b)
        if (u > s && u < t) all.push_back(u);
    all.push_back(t);
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double u : all)
        if (out.empty() || u - out.back() > kTimeTol * std::max(1.0, std::abs(u))) out.push_back(u);
    out.back() = t;
    return out;
}

void check_span(const std::vector<double>& times, double s, double t, const char* what) {
    if (s < times.front() - kTimeTol || t > times.back() + kTimeTol)
        throw InputError(std::string(what) + " does not cover the integration window");
}

// y at time u: exact on the grid, otherwise along exp(theta log y_{t_k, t_{k+1}}).
TensorElement group_at(const GroupPath& y, double u) {
    const auto& t = y.times();
    auto it = std::lower_bound(t.begin(), t.end(), u);
    if (it != t.end() && std::abs(*it - u) <= kTimeTol) return y.points()[static_cast<std::size_t>(it - t.begin())];
    if (it != t.begin() && std::abs(*(it - 1) - u) <= kTimeTol)
        return y.points()[static_cast<std::size_t>(it - t.begin()) - 1];
    const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double th = (u - t[k]) / (t[k + 1] - t[k]);
    const TensorElement inc = y.increment(k, k + 1);
    const int d = y.dimension();
    const auto du = static_cast<std::size_t>(d);
    auto a = inc.coefficients(1);
    auto m = inc.coefficients(2);
    std::vector<std::vector<double>> levels(2);
    levels[0].resize(du);
    levels[1].resize(du * du);
    for (std::size_t i = 0; i < du; ++i) {
        levels[0][i] = th * a[i];
        for (std::size_t j = 0; j < du; ++j) {
            const double aa = a[i] * a[j];
            const double log2 = m[i * du + j] - 0.5 * aa;
            levels[1][i * du + j] = th * log2 + 0.5 * th * th * aa;
        }
    }
    return multiply(y.points()[k], TensorElement::from_levels(d, levels));
}

}  // namespace

CrossIntegrals young_cross_integrals(const SampledPath& x, const SampledPath& h, double s, double t) {
    if (x.is_group() || h.is_group()) throw InputError("cross integrals need Euclidean paths");
    if (x.dimension() != h.dimension()) throw DimensionError("x and h differ in dimension");
    if (!(s < t)) throw InputError("cross integrals need s < t");
    check_span(x.times(), s, t, "x");
    check_span(h.times(), s, t, "h");
    const auto d = static_cast<std::size_t>(x.dimension());
    const auto grid = merged_grid(x.times(), h.times(), s, t);

    CrossIntegrals out;
    out.dimension = x.dimension();
    out.x_dh.assign(d * d, 0.0);
    out.h_dx.assign(d * d, 0.0);
    out.h_dh.assign(d * d, 0.0);
    std::vector<double> x0(d), h0(d), xa(d), ha(d), xb(d), hb(d);
    interpolate(x, s, x0.data());
    interpolate(h, s, h0.data());
    xa = x0;
    ha = h0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        interpolate(x, grid[k], xb.data());
        interpolate(h, grid[k], hb.data());
        for (std::size_t i = 0; i < d; ++i) {
            const double dxi = xb[i] - xa[i];
            const double dhi = hb[i] - ha[i];
            const double xmid = xa[i] - x0[i] + 0.5 * dxi;
            const double hmid = ha[i] - h0[i] + 0.5 * dhi;
            for (std::size_t j = 0; j < d; ++j) {
                const double dxj = xb[j] - xa[j];
                const double dhj = hb[j] - ha[j];
                out.x_dh[i * d + j] += xmid * dhj;
                out.h_dx[i * d + j] += hmid * dxj;
                out.h_dh[i * d + j] += hmid * dhj;
            }
        }
        xa.swap(xb);
        ha.swap(hb);
    }
    return out;
}

GroupPath translate(const GroupPath& y, const SampledPath& h) {
    if (y.level() != 2) throw UnsupportedError("translation is only defined at step 2");
    if (h.is_group()) throw InputError("translation shift must be a Euclidean path");
    if (h.dimension() != y.dimension()) throw DimensionError("y and h differ in dimension");
    const double s = y.times().front();
    const double t = y.times().back();
    if (std::abs(h.times().front() - s) > kTimeTol || std::abs(h.times().back() - t) > kTimeTol)
        throw InputError("y and h must share the same time span");

    const int d = y.dimension();
    const auto du = static_cast<std::size_t>(d);
    const auto grid = merged_grid(y.times(), h.times(), s, t);
    std::vector<TensorElement> points;
    points.reserve(grid.size());
    TensorElement prev_y = group_at(y, grid[0]);
    points.push_back(prev_y);
    std::vector<double> ha(du), hb(du);
    interpolate(h, grid[0], ha.data());
    std::vector<std::vector<double>> levels(2, std::vector<double>());
    levels[0].resize(du);
    levels[1].resize(du * du);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const TensorElement cur_y = group_at(y, grid[k]);
        interpolate(h, grid[k], hb.data());
        const TensorElement inc = multiply(inverse(prev_y), cur_y);
        auto dy = inc.coefficients(1);
        auto m = inc.coefficients(2);
        for (std::size_t i = 0; i < du; ++i) {
            const double dhi = hb[i] - ha[i];
            levels[0][i] = dy[i] + dhi;
            for (std::size_t j = 0; j < du; ++j) {
                const double dhj = hb[j] - ha[j];
                levels[1][i * du + j] = m[i * du + j] + 0.5 * (dy[i] * dhj + dhi * dy[j] + dhi * dhj);
            }
        }
        points.push_back(multiply(points.back(), TensorElement::from_levels(d, levels)));
        prev_y = cur_y;
        ha.swap(hb);
    }
    return GroupPath(grid, std::move(points));
}

double cameron_martin_norm(const SampledPath& h) {
    if (h.is_group()) throw InputError("Cameron-Martin norm needs a Euclidean path");
    double total = 0.0;
    const auto& t = h.times();
    for (std::size_t k = 1; k < h.size(); ++k) {
        const double dist = h.distance(k - 1, k);
        total += dist * dist / (t[k] - t[k - 1]);
    }
    return std::sqrt(total);
}

double rho_variation_norm(const SampledPath& h, double rho) {
    if (!(rho >= 1.0)) throw InputError("rho must be >= 1");
    const double v = psi_variation(h, RegularityFunction::power(rho)).value;
    return std::pow(v, 1.0 / rho);
}

TranslationBound translation_bound_ratio(const GroupPath& y, const SampledPath& h, const RegularityFunction& f,
                                         double rho) {
    TranslationBound out;
    const GroupPath shifted = translate(y, h);
    out.lhs = psi_variation_norm(SampledPath::group(shifted), f);
    out.rhs = psi_variation_norm(SampledPath::group(y), f) + rho_variation_norm(h, rho);
    if (out.rhs == 0.0)
        out.ratio = out.lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    else
        out.ratio = out.lhs / out.rhs;
    return out;
}

}  // namespace roughvar
