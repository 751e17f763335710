#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace roughvar {

enum class Family { phi1, phi2, psi1, psi2, power, custom };

std::string to_string(Family family);
Family family_from_string(const std::string& name);

/// log(1/x) for x <= 1/e, else 1.
double log_single(double x);
/// log log(1/x) for x <= exp(-e), else 1.
double log_double(double x);

/// A modulus of regularity: f(0) = 0, continuous, strictly increasing on
/// (0, monotone_limit()].
class RegularityFunction {
public:
    static RegularityFunction phi1(double p);
    static RegularityFunction phi2(double p);
    static RegularityFunction psi1(double p);
    static RegularityFunction psi2(double p);
    static RegularityFunction power(double p);
    /// User-supplied rule. Without `inverse`, inversion falls back to bisection
    /// on (0, monotone_limit].
    static RegularityFunction custom(std::string name, std::function<double(double)> rule,
                                     std::function<double(double)> inverse = {},
                                     double monotone_limit = std::numeric_limits<double>::infinity());

    Family family() const noexcept { return family_; }
    double exponent() const noexcept { return p_; }
    const std::string& name() const noexcept { return name_; }

    /// Throws InputError for negative or NaN x.
    double operator()(double x) const;
    double evaluate(double x) const { return (*this)(x); }

    /// Preimage within the monotone domain; RangeError outside the range.
    double inverse(double y) const;

    /// Right end of the declared strictly increasing domain (+inf if global).
    double monotone_limit() const noexcept { return monotone_limit_; }

    /// x -> f(sqrt(x)), the form applied to area magnitudes.
    RegularityFunction compose_sqrt() const;

    nlohmann::json to_json() const;
    static RegularityFunction from_json(const nlohmann::json& j);

private:
    RegularityFunction(Family family, double p);

    double raw(double x) const;

    Family family_;
    double p_;
    std::string name_;
    std::shared_ptr<const std::function<double(double)>> rule_;
    std::shared_ptr<const std::function<double(double)>> inverse_;
    double monotone_limit_ = std::numeric_limits<double>::infinity();
};

enum class DoublingKind { d2, delta2 };

struct DoublingEstimate {
    double constant = 0.0;
    bool satisfied = false;
};

/// {10^{-k/4} : k = 8..60}, finest last.
std::vector<double> default_probe_grid();

/// sup of f(2s)/f(s) (delta2) or f^{-1}(2 f(s))/s (d2) over the probes. The
/// flag requires every ratio finite and the finest decade's maximum within 5%
/// of the next decade's.
DoublingEstimate check_doubling(const RegularityFunction& f, DoublingKind kind,
                                std::span<const double> probes);

}  // namespace roughvar
