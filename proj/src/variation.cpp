#include "roughvar/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "roughvar/errors.hpp"

namespace roughvar {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t grid_index(const std::vector<double>& times, double t) {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    const double tol = 1e-12 * std::max(1.0, std::abs(t));
    if (it != times.end() && std::abs(*it - t) <= tol) return static_cast<std::size_t>(it - times.begin());
    if (it != times.begin() && std::abs(*(it - 1) - t) <= tol)
        return static_cast<std::size_t>(it - times.begin()) - 1;
    throw InputError("window end " + std::to_string(t) + " is not a grid time");
}

double dissection_mesh(const std::vector<double>& times, const std::vector<std::size_t>& idx) {
    double mesh = 0.0;
    for (std::size_t k = 1; k < idx.size(); ++k) mesh = std::max(mesh, times[idx[k]] - times[idx[k - 1]]);
    return mesh;
}

// Backward recursion g[i] = max_{j > i, t_j - t_i < delta} (f_ij + g[j]),
// g[last] = 0, followed by a forward pass that keeps the smallest optimal j.
template <class Eval>
DissectionValue dissection_dp(const std::vector<double>& times, std::size_t first, std::size_t last,
                              const Eval& eval, double delta = kInf) {
    DissectionValue out;
    if (first == last) return out;
    const std::size_t m = last - first + 1;
    std::vector<double> g(m, kNegInf);
    g[m - 1] = 0.0;
    for (std::size_t i = last; i-- > first;) {
        double best = kNegInf;
        const double ti = times[i];
        for (std::size_t j = i + 1; j <= last; ++j) {
            if (!(times[j] - ti < delta)) break;
            const double v = eval(i, j) + g[j - first];
            if (v > best) best = v;
        }
        g[i - first] = best;
    }
    if (g[0] == kNegInf) throw InfeasibleError("no dissection satisfies the mesh constraint");
    out.value = g[0];
    std::size_t i = first;
    out.indices.push_back(i);
    while (i != last) {
        std::size_t next = last;
        for (std::size_t j = i + 1; j <= last; ++j) {
            if (!(times[j] - times[i] < delta)) break;
            if (eval(i, j) + g[j - first] == g[i - first]) {
                next = j;
                break;
            }
        }
        i = next;
        out.indices.push_back(i);
    }
    out.mesh = dissection_mesh(times, out.indices);
    return out;
}

struct PlainEval {
    const PairwiseDistances& dist;
    const RegularityFunction& f;
    double operator()(std::size_t i, std::size_t j) const { return f(dist(i, j)); }
};

// Evaluates f(d / eps^degree) for many eps over one fixed table. For the
// power and psi families the per-pair powers and logarithms are precomputed.
class ScaledVariation {
public:
    ScaledVariation(const PairwiseDistances& dist, const RegularityFunction& f, int degree)
        : dist_(dist), f_(f), degree_(degree) {
        fast_ = dist.cached() && (f.family() == Family::power || f.family() == Family::psi1 ||
                                  f.family() == Family::psi2);
        if (!fast_) return;
        const std::size_t n = dist.size();
        const double p = f.exponent();
        const std::size_t pairs = n * (n - 1) / 2;
        dp_.resize(pairs);
        log_inv_.resize(pairs);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (double d : dist.row(i)) {
                dp_[k] = std::pow(d, p);
                log_inv_[k] = d > 0.0 ? -std::log(d) : kInf;
                ++k;
            }
        row_start_.resize(n);
        for (std::size_t i = 0; i < n; ++i) row_start_[i] = i * n - i * (i + 1) / 2;
    }

    double operator()(double eps) const {
        const double log_eps = std::log(eps);
        const double scale = std::pow(eps, -static_cast<double>(degree_));
        if (!fast_) {
            auto eval = [&](std::size_t i, std::size_t j) { return f_(dist_(i, j) * scale); };
            return dissection_dp(dist_.times(), 0, dist_.size() - 1, eval).value;
        }
        const double p = f_.exponent();
        const double scale_p = std::pow(scale, p);
        const double shift = degree_ * log_eps;  // log(1/x) = log(1/d) + degree log eps
        const double half_p = 0.5 * p;
        const Family fam = f_.family();
        const double e = std::exp(1.0);
        auto eval = [&](std::size_t i, std::size_t j) {
            const std::size_t k = row_start_[i] + (j - i - 1);
            const double base = dp_[k] * scale_p;
            if (fam == Family::power || base == 0.0) return base;
            const double log_inv = log_inv_[k] + shift;
            if (log_inv > 690.7755278982137) return 0.0;  // x < 1e-300
            if (fam == Family::psi2) {
                if (log_inv < e) return base;
                const double ll = std::log(log_inv);
                return p == 2.0 ? base / ll : base / std::pow(ll, half_p);
            }
            if (log_inv < 1.0) return base;
            return p == 2.0 ? base / log_inv : base / std::pow(log_inv, half_p);
        };
        return dissection_dp(dist_.times(), 0, dist_.size() - 1, eval).value;
    }

private:
    const PairwiseDistances& dist_;
    const RegularityFunction& f_;
    int degree_;
    bool fast_ = false;
    std::vector<double> dp_;
    std::vector<double> log_inv_;
    std::vector<std::size_t> row_start_;
};

}  // namespace

nlohmann::json DissectionValue::to_json() const {
    return {{"value", value}, {"indices", indices}, {"mesh", mesh}};
}

double dissection_sum(const PairwiseDistances& dist, const RegularityFunction& f,
                      const std::vector<std::size_t>& indices) {
    double s = 0.0;
    for (std::size_t k = indices.size(); k-- > 1;) s = f(dist(indices[k - 1], indices[k])) + s;
    return s;
}

DissectionValue psi_variation(const PairwiseDistances& dist, const RegularityFunction& f) {
    if (dist.size() == 0) return {};
    return dissection_dp(dist.times(), 0, dist.size() - 1, PlainEval{dist, f});
}

DissectionValue psi_variation(const PairwiseDistances& dist, const RegularityFunction& f, Window window) {
    if (window.a > window.b) throw InputError("window must satisfy a <= b");
    const std::size_t first = grid_index(dist.times(), window.a);
    const std::size_t last = grid_index(dist.times(), window.b);
    return dissection_dp(dist.times(), first, last, PlainEval{dist, f});
}

DissectionValue psi_variation(const SampledPath& path, const RegularityFunction& f) {
    return psi_variation(PairwiseDistances(path), f);
}

DissectionValue psi_variation(const SampledPath& path, const RegularityFunction& f, Window window) {
    return psi_variation(PairwiseDistances(path), f, window);
}

DissectionValue psi_variation_bruteforce(const PairwiseDistances& dist, const RegularityFunction& f) {
    const std::size_t n = dist.size();
    if (n > kBruteforceLimit)
        throw InputError("exhaustive search refuses " + std::to_string(n) + " points (limit " +
                         std::to_string(kBruteforceLimit) + ")");
    DissectionValue best;
    if (n <= 1) return best;
    const std::size_t interior = n - 2;
    best.value = kNegInf;
    std::vector<std::size_t> idx;
    for (std::uint32_t mask = 0; mask < (1u << interior); ++mask) {
        idx.clear();
        idx.push_back(0);
        for (std::size_t k = 0; k < interior; ++k)
            if (mask & (1u << k)) idx.push_back(k + 1);
        idx.push_back(n - 1);
        const double v = dissection_sum(dist, f, idx);
        if (v > best.value || (v == best.value && std::lexicographical_compare(idx.begin(), idx.end(),
                                                                               best.indices.begin(),
                                                                               best.indices.end()))) {
            best.value = v;
            best.indices = idx;
        }
    }
    best.mesh = dissection_mesh(dist.times(), best.indices);
    return best;
}

DissectionValue psi_variation_bruteforce(const SampledPath& path, const RegularityFunction& f) {
    return psi_variation_bruteforce(PairwiseDistances(path), f);
}

double psi_variation_norm(const PairwiseDistances& dist, const RegularityFunction& f, int degree) {
    if (degree < 1) throw InputError("scaling degree must be >= 1");
    const double max_d = dist.max_distance();
    if (dist.size() < 2 || max_d == 0.0) return 0.0;
    const ScaledVariation variation(dist, f, degree);
    const double n = static_cast<double>(dist.size());
    const double root = 1.0 / degree;

    double lo = std::pow(max_d / f.inverse(1.0), root) / n;
    double hi = n * std::pow(max_d, root);
    double v_lo = variation(lo);
    double v_hi = variation(hi);
    for (int k = 0; k < 2000 && !(v_lo > 1.0); ++k) v_lo = variation(lo *= 0.5);
    for (int k = 0; k < 2000 && v_hi > 1.0; ++k) v_hi = variation(hi *= 2.0);
    if (!(v_lo > 1.0) || v_hi > 1.0) throw RangeError("could not bracket the variation norm");

    // Illinois regula falsi on (log eps, log V), V decreasing in eps.
    double u_lo = std::log(lo), u_hi = std::log(hi);
    double f_lo = std::log(v_lo), f_hi = v_hi > 0.0 ? std::log(v_hi) : kNegInf;
    int side = 0;
    double width_before = u_hi - u_lo;
    for (int iter = 0; iter < 500 && hi / lo - 1.0 > 1e-10; ++iter) {
        double u;
        const bool secant_ok = std::isfinite(f_lo) && std::isfinite(f_hi) && f_lo != f_hi;
        if (secant_ok && iter % 4 != 3) {
            u = (f_lo * u_hi - f_hi * u_lo) / (f_lo - f_hi);
            if (!(u > u_lo && u < u_hi)) u = 0.5 * (u_lo + u_hi);
        } else {
            u = 0.5 * (u_lo + u_hi);
        }
        const double eps = std::exp(u);
        if (!(eps > lo && eps < hi)) break;
        const double v = variation(eps);
        if (v > 1.0) {
            lo = eps;
            u_lo = u;
            f_lo = std::log(v);
            if (side == -1) f_hi *= 0.5;
            side = -1;
        } else {
            hi = eps;
            u_hi = u;
            f_hi = v > 0.0 ? std::log(v) : kNegInf;
            if (side == 1) f_lo *= 0.5;
            side = 1;
        }
        if (iter % 4 == 3) {
            if (u_hi - u_lo > 0.5 * width_before) {
                const double mid = 0.5 * (u_lo + u_hi);
                const double vm = variation(std::exp(mid));
                if (vm > 1.0) {
                    u_lo = mid; lo = std::exp(mid); f_lo = std::log(vm);
                } else {
                    u_hi = mid; hi = std::exp(mid); f_hi = vm > 0.0 ? std::log(vm) : kNegInf;
                }
            }
            width_before = u_hi - u_lo;
        }
    }
    return hi;
}

double psi_variation_norm(const SampledPath& path, const RegularityFunction& f) {
    return psi_variation_norm(PairwiseDistances(path), f, 1);
}

double holder_norm(const SampledPath& path, const RegularityFunction& phi) {
    const auto& t = path.times();
    double best = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i)
        for (std::size_t j = i + 1; j < path.size(); ++j) {
            const double denom = phi(t[j] - t[i]);
            if (!(denom > 0.0)) throw InputError("Holder modulus must be positive on positive lags");
            best = std::max(best, path.distance(i, j) / denom);
        }
    return best;
}

namespace {

std::pair<std::size_t, std::size_t> snap_window(const std::vector<double>& times, double a, double b) {
    if (!(a < b)) throw InputError("oscillation window needs a < b");
    const double tol = 1e-12;
    if (a < times.front() - tol || b > times.back() + tol) throw InputError("oscillation window leaves the grid");
    auto ia = std::upper_bound(times.begin(), times.end(), a + tol * std::max(1.0, std::abs(a)));
    auto ib = std::lower_bound(times.begin(), times.end(), b - tol * std::max(1.0, std::abs(b)));
    const std::size_t first = static_cast<std::size_t>(ia - times.begin()) - 1;
    const std::size_t last = std::min(static_cast<std::size_t>(ib - times.begin()), times.size() - 1);
    return {first, last};
}

}  // namespace

double oscillation(const SampledPath& path, double a, double b) {
    const auto [first, last] = snap_window(path.times(), a, b);
    double best = 0.0;
    for (std::size_t i = first; i <= last; ++i)
        for (std::size_t j = i + 1; j <= last; ++j) best = std::max(best, path.distance(i, j));
    return best;
}

double oscillation(const PairwiseDistances& dist, double a, double b) {
    const auto [first, last] = snap_window(dist.times(), a, b);
    double best = 0.0;
    for (std::size_t i = first; i <= last; ++i)
        for (std::size_t j = i + 1; j <= last; ++j) best = std::max(best, dist(i, j));
    return best;
}

DissectionValue mesh_limited_variation(const PairwiseDistances& dist, const RegularityFunction& f, double delta) {
    if (!(delta > 0.0)) throw InputError("mesh bound must be positive");
    const auto& t = dist.times();
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] - t[i - 1] < delta))
            throw InfeasibleError("mesh bound " + std::to_string(delta) + " is not above the grid gap " +
                                  std::to_string(t[i] - t[i - 1]));
    if (dist.size() == 0) return {};
    return dissection_dp(t, 0, dist.size() - 1, PlainEval{dist, f}, delta);
}

DissectionValue mesh_limited_variation(const SampledPath& path, const RegularityFunction& f, double delta) {
    return mesh_limited_variation(PairwiseDistances(path), f, delta);
}

double covariance_rho_variation(const std::function<double(double, double)>& covariance,
                                const std::vector<double>& grid, double rho, RhoMode mode) {
    if (!(rho >= 1.0)) throw InputError("rho must be >= 1");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw InputError("grid must be strictly increasing");
    const std::size_t n = grid.size();
    if (n < 2) return 0.0;
    std::vector<double> r(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i * n + j] = covariance(grid[i], grid[j]);
    auto rect = [&](std::size_t s0, std::size_t s1, std::size_t u0, std::size_t u1) {
        return r[s1 * n + u1] - r[s1 * n + u0] - r[s0 * n + u1] + r[s0 * n + u0];
    };
    auto double_sum = [&](const std::vector<std::size_t>& d1, const std::vector<std::size_t>& d2) {
        double s = 0.0;
        for (std::size_t a = 1; a < d1.size(); ++a)
            for (std::size_t b = 1; b < d2.size(); ++b)
                s += std::pow(std::abs(rect(d1[a - 1], d1[a], d2[b - 1], d2[b])), rho);
        return s;
    };
    if (mode == RhoMode::full_grid) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return std::pow(double_sum(all, all), 1.0 / rho);
    }
    if (n > kExhaustiveRhoLimit)
        throw InputError("exhaustive rho-variation refuses " + std::to_string(n) + " points (limit " +
                         std::to_string(kExhaustiveRhoLimit) + ")");
    std::vector<std::vector<std::size_t>> subsets;
    const std::size_t interior = n - 2;
    for (std::uint32_t mask = 0; mask < (1u << interior); ++mask) {
        std::vector<std::size_t> idx{0};
        for (std::size_t k = 0; k < interior; ++k)
            if (mask & (1u << k)) idx.push_back(k + 1);
        idx.push_back(n - 1);
        subsets.push_back(std::move(idx));
    }
    double best = 0.0;
    for (const auto& d1 : subsets)
        for (const auto& d2 : subsets) best = std::max(best, double_sum(d1, d2));
    return std::pow(best, 1.0 / rho);
}

ControlFunction::ControlFunction(std::vector<double> times,
                                 const std::function<double(std::size_t, std::size_t)>& omega)
    : times_(std::move(times)), table_(times_.size() * times_.size(), 0.0) {
    const std::size_t n = times_.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) table_[i * n + j] = omega(i, j);
}

SuperadditivityResult superadditivity_check(const ControlFunction& omega) {
    SuperadditivityResult out;
    const std::size_t n = omega.size();
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s + 1; t < n; ++t)
            for (std::size_t u = t + 1; u < n; ++u) {
                const double v = omega(s, t) + omega(t, u) - omega(s, u);
                if (v > out.max_violation) {
                    out.max_violation = v;
                    out.s = s;
                    out.t = t;
                    out.u = u;
                }
            }
    return out;
}

ControlFunction control_from_variation(const PairwiseDistances& dist, const RegularityFunction& f) {
    const std::size_t n = dist.size();
    std::vector<double> table(n * n, 0.0);
    std::vector<double> g(n);
    for (std::size_t last = 1; last < n; ++last) {
        g[last] = 0.0;
        for (std::size_t i = last; i-- > 0;) {
            double best = kNegInf;
            for (std::size_t j = i + 1; j <= last; ++j) best = std::max(best, f(dist(i, j)) + g[j]);
            g[i] = best;
            table[i * n + last] = best;
        }
    }
    return ControlFunction(dist.times(), [&](std::size_t i, std::size_t j) { return table[i * n + j]; });
}

}  // namespace roughvar
