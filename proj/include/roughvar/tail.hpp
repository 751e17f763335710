#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "roughvar/gaussian.hpp"

namespace roughvar {

enum class TailModel { gauss, exp, inconclusive };

std::string to_string(TailModel model);

struct SurvivalPoint {
    double x = 0.0;
    double survival = 0.0;   ///< (count + 1) / (n + 1), a plotting position that stays positive
    std::size_t count = 0;   ///< number of samples strictly above x
};

struct TailReport {
    std::size_t sample_count = 0;
    double q_lo = 0.0;
    double q_hi = 0.0;
    std::vector<SurvivalPoint> tail;
    TailModel model = TailModel::inconclusive;
    double exponent = 0.0;    ///< eta-hat: -d log S / d x^2 (gauss) or -d log S / d x (exp)
    double raw_slope = 0.0;   ///< the same slope from the plain two-parameter fit
    double quality = 0.0;     ///< R^2 of the selected model's two-parameter fit
    double r2_gauss = 0.0;
    double r2_exp = 0.0;
    double sse_gauss = 0.0;
    double sse_exp = 0.0;

    nlohmann::json to_json() const;
    void write_survival_csv(std::ostream& out) const;
};

inline constexpr std::size_t kMinTailSamples = 500;
inline constexpr std::size_t kMinTailPoints = 20;
inline constexpr double kModelSseMargin = 0.98;

/// Weighted least squares of log survival on x^2 and on x over the quantile
/// window, with weights S / (1 - S) (inverse variance of log S). The model with
/// the smaller weighted residual sum of squares wins if it beats the other by
/// the factor kModelSseMargin; otherwise the result is inconclusive. The
/// exponent comes from a fit that also absorbs a power-law prefactor (a log x
/// column).
TailReport fit_tail(std::span<const double> samples, double q_lo = 0.90, double q_hi = 0.995);

/// Standard normal distribution function.
double normal_cdf(double x);

struct HalfspaceCheck {
    double exact_bound = 0.0;   ///< Phi(a + r)
    double estimate = 0.0;      ///< MC frequency of {x_1 <= a + r}
    double standard_error = 0.0;
    bool pass = false;
};

/// Borell's inequality on the half-space {x_1 <= a} of standard R^n.
HalfspaceCheck borell_halfspace_check(double a, double r, int n, std::size_t samples, RngSeed seed);

/// Centered Gaussian on R^n with a given covariance.
class GaussianSurrogate {
public:
    explicit GaussianSurrogate(Eigen::MatrixXd covariance);

    int dimension() const noexcept { return static_cast<int>(covariance_.rows()); }
    const Eigen::MatrixXd& covariance() const noexcept { return covariance_; }
    Eigen::VectorXd sample(std::mt19937_64& rng) const;
    /// sqrt(h' C^+ h) with the pseudo-inverse on the range of C.
    double cameron_martin_norm(const Eigen::VectorXd& h) const;

private:
    Eigen::MatrixXd covariance_;
    Eigen::MatrixXd root_;          ///< C = root root'
    Eigen::MatrixXd pseudo_inverse_;
};

/// Square root of the largest covariance eigenvalue.
double fernique_sigma(const GaussianSurrogate& surrogate);

struct ShiftProbe {
    double max_violation = 0.0;
    std::size_t sample_index = 0;
    std::size_t shift_index = 0;
};

/// max over samples b and shifts h of |f(b)| - c (|f(b - h)| + sigma |h|_H), floored at 0.
ShiftProbe shift_condition_probe(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const GaussianSurrogate& surrogate, double c, std::size_t samples,
                                 const std::vector<Eigen::VectorXd>& shifts, RngSeed seed);

}  // namespace roughvar
