#include "roughvar/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "roughvar/errors.hpp"

namespace roughvar {

namespace {

constexpr double kUnderflow = 1e-300;
const double kInvE = std::exp(-1.0);
const double kDoubleBreak = std::exp(-std::exp(1.0));

// Geometric scan of (1e-300, 1]; above 1 every built-in family is a pure power.
double scan_monotone_limit(const std::function<double(double)>& f) {
    constexpr int per_decade = 256;
    constexpr int decades = 300;
    double prev_x = 0.0;
    double prev_prev_x = 0.0;
    double prev = 0.0;
    bool started = false;
    for (int k = 0; k <= per_decade * decades; ++k) {
        const double x = std::pow(10.0, -decades + static_cast<double>(k) / per_decade);
        const double v = f(x);
        if (!started) {
            if (v > 0.0) {
                started = true;
                prev = v;
                prev_x = x;
                prev_prev_x = x;
            }
            continue;
        }
        if (!(v > prev)) return prev_prev_x;
        prev_prev_x = prev_x;
        prev_x = x;
        prev = v;
    }
    return std::numeric_limits<double>::infinity();
}

double cached_monotone_limit(Family family, double p, const std::function<double(double)>& f) {
    static std::mutex mutex;
    static std::map<std::pair<int, double>, double> cache;
    const auto key = std::make_pair(static_cast<int>(family), p);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const double limit = scan_monotone_limit(f);
    std::lock_guard lock(mutex);
    cache.emplace(key, limit);
    return limit;
}

std::string family_label(Family family, double p) {
    std::string s = to_string(family);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return s + "(p=" + buf + ")";
}

}  // namespace

std::string to_string(Family family) {
    switch (family) {
        case Family::phi1: return "phi1";
        case Family::phi2: return "phi2";
        case Family::psi1: return "psi1";
        case Family::psi2: return "psi2";
        case Family::power: return "power";
        case Family::custom: return "custom";
    }
    return "custom";
}

Family family_from_string(const std::string& name) {
    for (Family f : {Family::phi1, Family::phi2, Family::psi1, Family::psi2, Family::power, Family::custom})
        if (to_string(f) == name) return f;
    throw InputError("unknown regularity family '" + name + "'");
}

double log_single(double x) { return x <= kInvE ? std::log(1.0 / x) : 1.0; }

double log_double(double x) { return x <= kDoubleBreak ? std::log(std::log(1.0 / x)) : 1.0; }

RegularityFunction::RegularityFunction(Family family, double p) : family_(family), p_(p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("regularity exponent must be >= 1");
    name_ = family_label(family, p);
    if (family == Family::phi1 || family == Family::phi2)
        monotone_limit_ = cached_monotone_limit(family, p, [this](double x) { return raw(x); });
}

RegularityFunction RegularityFunction::phi1(double p) { return RegularityFunction(Family::phi1, p); }
RegularityFunction RegularityFunction::phi2(double p) { return RegularityFunction(Family::phi2, p); }
RegularityFunction RegularityFunction::psi1(double p) { return RegularityFunction(Family::psi1, p); }
RegularityFunction RegularityFunction::psi2(double p) { return RegularityFunction(Family::psi2, p); }
RegularityFunction RegularityFunction::power(double p) { return RegularityFunction(Family::power, p); }

RegularityFunction RegularityFunction::custom(std::string name, std::function<double(double)> rule,
                                              std::function<double(double)> inverse, double monotone_limit) {
    if (!rule) throw InputError("custom regularity function needs an evaluation rule");
    RegularityFunction f(Family::power, 1.0);
    f.family_ = Family::custom;
    f.p_ = 1.0;
    f.name_ = std::move(name);
    f.rule_ = std::make_shared<const std::function<double(double)>>(std::move(rule));
    if (inverse) f.inverse_ = std::make_shared<const std::function<double(double)>>(std::move(inverse));
    f.monotone_limit_ = monotone_limit;
    return f;
}

double RegularityFunction::raw(double x) const {
    if (x == 0.0) return 0.0;
    switch (family_) {
        case Family::power:
            return p_ == 2.0 ? x * x : std::pow(x, p_);
        case Family::phi1:
            return std::pow(x, 1.0 / p_) * std::sqrt(log_single(x));
        case Family::phi2:
            return std::pow(x, 1.0 / p_) * std::sqrt(log_double(x));
        case Family::psi1: {
            if (x < kUnderflow) return 0.0;
            const double base = x / std::sqrt(log_single(x));
            return p_ == 2.0 ? base * base : std::pow(base, p_);
        }
        case Family::psi2: {
            if (x < kUnderflow) return 0.0;
            if (p_ == 2.0) return x * x / log_double(x);
            return std::pow(x / std::sqrt(log_double(x)), p_);
        }
        case Family::custom:
            return (*rule_)(x);
    }
    return 0.0;
}

double RegularityFunction::operator()(double x) const {
    if (!(x >= 0.0)) throw InputError("regularity function argument must be >= 0");
    return raw(x);
}

double RegularityFunction::inverse(double y) const {
    if (!(y >= 0.0)) throw RangeError("inverse argument must be >= 0");
    if (y == 0.0) return 0.0;
    if (family_ == Family::power) return std::pow(y, 1.0 / p_);
    if (family_ == Family::custom && inverse_) return (*inverse_)(y);

    const double limit = monotone_limit_;
    if (std::isfinite(limit) && y > raw(limit))
        throw RangeError("value " + std::to_string(y) + " is outside the range of " + name_ +
                         " on its monotone domain");
    double hi = std::min(1.0, limit);
    while (raw(hi) < y) {
        const double next = hi * 2.0;
        if (next > limit || !std::isfinite(next)) {
            hi = limit;
            if (raw(hi) < y) throw RangeError("value is outside the range of " + name_);
            break;
        }
        hi = next;
    }
    double lo = hi;
    while (raw(lo) > y) {
        lo *= 0.5;
        if (lo < kUnderflow) return lo;
    }
    if (raw(lo) == y) return lo;
    // Geometric bisection keeps full relative precision near 0.
    for (int iter = 0; iter < 200 && hi / lo - 1.0 > 1e-15; ++iter) {
        const double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi)) break;
        if (raw(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    return (y - raw(lo) <= raw(hi) - y) ? lo : hi;
}

RegularityFunction RegularityFunction::compose_sqrt() const {
    RegularityFunction base = *this;
    const double limit = monotone_limit_;
    return custom(
        name_ + "(sqrt)", [base](double x) { return base(std::sqrt(x)); },
        [base](double y) {
            const double r = base.inverse(y);
            return r * r;
        },
        std::isfinite(limit) ? limit * limit : limit);
}

nlohmann::json RegularityFunction::to_json() const {
    if (family_ == Family::custom) throw InputError("custom regularity functions are not serializable");
    return {{"family", to_string(family_)}, {"p", p_}};
}

RegularityFunction RegularityFunction::from_json(const nlohmann::json& j) {
    const Family family = family_from_string(j.at("family").get<std::string>());
    if (family == Family::custom) throw InputError("custom regularity functions are not serializable");
    return RegularityFunction(family, j.at("p").get<double>());
}

std::vector<double> default_probe_grid() {
    std::vector<double> grid;
    for (int k = 8; k <= 60; ++k) grid.push_back(std::pow(10.0, -k / 4.0));
    return grid;
}

DoublingEstimate check_doubling(const RegularityFunction& f, DoublingKind kind, std::span<const double> probes) {
    DoublingEstimate out;
    if (probes.empty()) return out;
    std::vector<std::pair<double, double>> ratios;  // (s, ratio)
    bool finite = true;
    for (double s : probes) {
        double r;
        if (kind == DoublingKind::delta2) {
            const double fs = f(s);
            r = fs > 0.0 ? f(2.0 * s) / fs : std::numeric_limits<double>::infinity();
        } else {
            try {
                r = f.inverse(2.0 * f(s)) / s;
            } catch (const RangeError&) {
                r = std::numeric_limits<double>::infinity();
            }
        }
        if (!std::isfinite(r)) finite = false;
        ratios.emplace_back(s, r);
        out.constant = std::max(out.constant, r);
    }
    if (!finite) {
        out.constant = std::numeric_limits<double>::infinity();
        return out;
    }
    const double finest = std::min_element(probes.begin(), probes.end())[0];
    double fine_max = 0.0, next_max = 0.0;
    bool have_next = false;
    for (auto [s, r] : ratios) {
        if (s < finest * 10.0)
            fine_max = std::max(fine_max, r);
        else if (s < finest * 100.0) {
            next_max = std::max(next_max, r);
            have_next = true;
        }
    }
    out.satisfied = !have_next || fine_max <= 1.05 * next_max;
    return out;
}

}  // namespace roughvar
