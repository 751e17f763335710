#include "roughvar/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "roughvar/errors.hpp"
#include "roughvar/gaussian.hpp"
#include "roughvar/parallel.hpp"
#include "roughvar/regularity.hpp"
#include "roughvar/sampled_path.hpp"
#include "roughvar/translation.hpp"
#include "roughvar/variation.hpp"

namespace roughvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (metric, value) pairs produced by one replication.
using Measurements = std::vector<std::pair<std::string, double>>;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

bool needs_large_samples(const std::string& experiment) {
    return experiment == "levy_area" || experiment == "gauss_tail" || experiment == "borell";
}

int default_dimension(const std::string& experiment) { return experiment == "taylor" ? 1 : 2; }

int default_substeps(const std::string& experiment) { return experiment == "levy_area" ? 4 : 1; }

int effective_dimension(const ExperimentConfig& c) {
    return c.dimension > 0 ? c.dimension : default_dimension(c.experiment);
}

int effective_substeps(const ExperimentConfig& c) {
    return c.substeps > 0 ? c.substeps : default_substeps(c.experiment);
}

RegularityFunction modulus(const ExperimentConfig& c) {
    return RegularityFunction::from_json({{"family", c.family}, {"p", c.p}});
}

RngSeed replication_seed(const ExperimentConfig& c, std::size_t n, std::size_t r) {
    return RngSeed{c.seed, (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(r)};
}

double area_magnitude(const std::vector<double>& a, int d) {
    double sq = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) sq += a[static_cast<std::size_t>(i * d + j)] * a[static_cast<std::size_t>(i * d + j)];
    return std::sqrt(sq);
}

// Linear-interpolation quantile (type 7).
double quantile(std::vector<double> v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// ---------------------------------------------------------------- runners

Measurements run_taylor(const ExperimentConfig& c, std::size_t n, std::size_t r) {
    const auto model = CovarianceModel::parse(c.model);
    const SampledPath path = sample_path(model, n, effective_dimension(c), replication_seed(c, n, r));
    const PairwiseDistances dist(path);
    return {{"V_psi", psi_variation(dist, modulus(c)).value},
            {"V_power", psi_variation(dist, RegularityFunction::power(c.p)).value}};
}

Measurements run_levy_area(const ExperimentConfig& c, std::size_t n, std::size_t r) {
    const auto model = CovarianceModel::parse(c.model);
    const RngSeed seed = replication_seed(c, n, r);
    const int d = effective_dimension(c);
    const SampledPath path = sample_path(model, n, d, seed);
    const GroupPath lift = enhance_to_rough_path(path, 2, effective_substeps(c), model, seed);
    const double endpoint = area_magnitude(levy_area_increment(lift, lift.times().front(), lift.times().back()), d);
    const double norm = psi_variation_norm(SampledPath::group(lift, Metric::area), modulus(c));
    return {{"area_norm", norm}, {"area_endpoint", endpoint}};
}

Measurements run_gauss_tail(const ExperimentConfig& c, std::size_t n, std::size_t r) {
    const auto model = CovarianceModel::parse(c.model);
    const RngSeed seed = replication_seed(c, n, r);
    const SampledPath path = sample_path(model, n, effective_dimension(c), seed);
    const GroupPath lift = enhance_to_rough_path(path, 2, effective_substeps(c), model, seed);
    return {{"rough_norm", psi_variation_norm(SampledPath::group(lift), modulus(c))}};
}

Measurements run_lil(const ExperimentConfig& c, std::size_t n, std::size_t r) {
    const auto model = CovarianceModel::parse(c.model);
    const RngSeed seed = replication_seed(c, n, r);
    const int d = effective_dimension(c);
    const SampledPath path = sample_path(model, n, d, seed);
    const RegularityFunction phi = RegularityFunction::phi2(c.p);
    const auto& t = path.times();

    // Snap each h = 2^-k up to the grid; phi is evaluated at the snapped time.
    std::vector<std::size_t> ends;
    for (int k = 4; k <= 12; ++k) {
        const double h = std::ldexp(1.0, -k);
        auto it = std::lower_bound(t.begin(), t.end(), h - 1e-12);
        ends.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(it - t.begin())));
    }
    const std::size_t last = *std::max_element(ends.begin(), ends.end());
    std::vector<double> prefix_osc(last + 1, 0.0);
    for (std::size_t j = 1; j <= last; ++j) {
        double m = prefix_osc[j - 1];
        for (std::size_t i = 0; i < j; ++i) m = std::max(m, path.distance(i, j));
        prefix_osc[j] = m;
    }
    double path_ratio = 0.0;
    for (std::size_t j : ends) path_ratio = std::max(path_ratio, prefix_osc[j] / phi(t[j] - t[0]));
    Measurements out{{"path_lil", path_ratio}};
    if (d >= 2) {
        const GroupPath lift = enhance_to_rough_path(path, 2, effective_substeps(c), model, seed);
        double area_ratio = 0.0;
        for (std::size_t j : ends) {
            const double a = area_magnitude(levy_area_increment(lift, t[0], t[j]), d);
            area_ratio = std::max(area_ratio, std::sqrt(a) / phi(t[j] - t[0]));
        }
        out.emplace_back("area_lil", area_ratio);
    }
    return out;
}

Measurements run_lift(const ExperimentConfig& c, std::size_t n, std::size_t r) {
    const auto model = CovarianceModel::parse(c.model);
    const SampledPath path = sample_path(model, n, effective_dimension(c), replication_seed(c, n, r));
    const RegularityFunction f = modulus(c);
    const double base = psi_variation_norm(path, f);
    Measurements out;
    for (int level : c.levels) {
        const GroupPath lift = lift_piecewise_linear(path.values(), path.dimension(), path.times(), level);
        const double lifted = psi_variation_norm(SampledPath::group(lift), f);
        out.emplace_back("lift_ratio_N" + std::to_string(level), base > 0.0 ? lifted / base : kInf);
    }
    return out;
}

// Piecewise-linear shift with 8 equal segments, Gaussian increments,
// normalized to unit Cameron-Martin norm.
SampledPath unit_shift(int d, RngSeed seed) {
    constexpr int segments = 8;
    auto rng = seed.engine(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto du = static_cast<std::size_t>(d);
    std::vector<double> times(segments + 1), values((segments + 1) * du, 0.0);
    for (int k = 0; k <= segments; ++k) times[static_cast<std::size_t>(k)] = static_cast<double>(k) / segments;
    for (std::size_t k = 1; k <= segments; ++k)
        for (std::size_t i = 0; i < du; ++i) values[k * du + i] = values[(k - 1) * du + i] + normal(rng);
    const SampledPath raw = SampledPath::euclidean(times, values, d);
    const double cm = cameron_martin_norm(raw);
    return raw.scaled(1.0 / cm);
}

Measurements run_translate(const ExperimentConfig& c, std::size_t n, std::size_t r) {
    const auto model = CovarianceModel::parse(c.model);
    const RngSeed seed = replication_seed(c, n, r);
    const int d = effective_dimension(c);
    const SampledPath path = sample_path(model, n, d, seed);
    const GroupPath lift = enhance_to_rough_path(path, 2, effective_substeps(c), model, seed);
    const SampledPath h = unit_shift(d, seed);
    return {{"translation_ratio", translation_bound_ratio(lift, h, modulus(c), 1.0).ratio}};
}

const double kBorellA[] = {-1.0, 0.0, 1.0};
const double kBorellR[] = {0.0, 0.5, 1.0, 2.0};

std::vector<int> borell_dimensions(const ExperimentConfig& c) {
    if (c.dimension > 0) return {c.dimension};
    return {2, 10};
}

std::string halfspace_metric(int n, double a, double r) {
    return "halfspace:n=" + std::to_string(n) + ":a=" + fmt(a, "%g") + ":r=" + fmt(r, "%g");
}

std::vector<RawRecord> run_borell(const ExperimentConfig& c) {
    std::vector<RawRecord> raw;
    std::uint64_t stream = 0;
    for (int n : borell_dimensions(c))
        for (double a : kBorellA)
            for (double r : kBorellR) {
                const auto check = borell_halfspace_check(a, r, n, c.replications, RngSeed{c.seed, stream++});
                raw.push_back({0, 0, halfspace_metric(n, a, r), check.estimate});
            }
    for (int n : borell_dimensions(c)) {
        const GaussianSurrogate standard(Eigen::MatrixXd::Identity(n, n));
        auto rng = RngSeed{c.seed, 1000 + static_cast<std::uint64_t>(n)}.engine();
        const std::string metric = "gauss_norm:n=" + std::to_string(n);
        for (std::size_t k = 0; k < c.tail_samples; ++k) raw.push_back({0, k, metric, standard.sample(rng).norm()});
    }
    return raw;
}

// ---------------------------------------------------------------- verdicts

using Table = std::map<std::size_t, std::map<std::string, std::vector<double>>>;

Table tabulate(const std::vector<RawRecord>& raw) {
    Table t;
    for (const auto& r : raw) t[r.grid_size][r.metric].push_back(r.value);
    return t;
}

Verdict make(std::string id, std::string theorem) {
    Verdict v;
    v.id = std::move(id);
    v.theorem = std::move(theorem);
    return v;
}

std::vector<double> medians_of(const Table& t, const std::string& metric, std::vector<std::size_t>& sizes) {
    std::vector<double> med;
    sizes.clear();
    for (const auto& [n, metrics] : t)
        if (auto it = metrics.find(metric); it != metrics.end()) {
            sizes.push_back(n);
            med.push_back(quantile(it->second, 0.5));
        }
    return med;
}

std::string list(const std::vector<std::size_t>& sizes, const std::vector<double>& values) {
    std::string s;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (k) s += ", ";
        s += std::to_string(sizes[k]) + ": " + fmt(values[k]);
    }
    return s;
}

void taylor_verdicts(const Table& t, Evaluation& ev) {
    std::vector<std::size_t> sizes;
    const auto psi = medians_of(t, "V_psi", sizes);
    Verdict stab = make("AC4.stabilization", "exact Taylor psi-variation of Brownian motion is finite");
    if (psi.empty()) {
        stab.skipped = true;
        stab.detail = "no data";
    } else {
        const double hi = *std::max_element(psi.begin(), psi.end());
        const double lo = *std::min_element(psi.begin(), psi.end());
        const double factor = lo > 0.0 ? hi / lo : kInf;
        stab.pass = factor < 2.0;
        stab.detail = "median V_psi {" + list(sizes, psi) + "}; max/min = " + fmt(factor) + " (needs < 2)";
    }
    ev.verdicts.push_back(stab);

    const auto pow_med = medians_of(t, "V_power", sizes);
    Verdict div = make("AC4.divergence", "variation with a modulus beyond the exact one diverges");
    // Longest run of consecutive doublings with strictly increasing medians.
    std::size_t best_len = 0;
    double best_growth = 0.0;
    std::size_t ladder = 0;
    for (std::size_t start = 0; start < sizes.size(); ++start) {
        std::size_t end = start;
        while (end + 1 < sizes.size() && sizes[end + 1] == 2 * sizes[end]) ++end;
        ladder = std::max(ladder, end - start);
        std::size_t run_end = start;
        while (run_end + 1 <= end && pow_med[run_end + 1] > pow_med[run_end]) ++run_end;
        const std::size_t len = run_end - start;
        const double growth = pow_med[start] > 0.0 ? pow_med[run_end] / pow_med[start] : 0.0;
        if (len > best_len || (len == best_len && growth > best_growth)) {
            best_len = len;
            best_growth = growth;
        }
    }
    if (ladder < 4) {
        div.skipped = true;
        div.detail = "grid ladder has " + std::to_string(ladder) + " consecutive doublings; 4 are needed";
    } else {
        div.pass = best_len >= 4 && best_growth >= 2.0;
        div.detail = "median V_power {" + list(sizes, pow_med) + "}; longest increasing run " +
                     std::to_string(best_len) + " doublings with growth " + fmt(best_growth) +
                     " (needs >= 4 doublings and growth >= 2)";
    }
    ev.verdicts.push_back(div);
}

// Fit every listed metric at every grid size; returns the verdict.
Verdict tail_verdict(const ExperimentConfig& c, const Table& t, const std::string& metric, TailModel wanted,
                     double min_quality, Verdict v, Evaluation& ev) {
    bool any = false;
    bool ok = true;
    std::string detail;
    for (const auto& [n, metrics] : t) {
        auto it = metrics.find(metric);
        if (it == metrics.end()) continue;
        any = true;
        if (!detail.empty()) detail += "; ";
        try {
            TailReport rep = fit_tail(it->second, c.q_lo, c.q_hi);
            const bool good = rep.model == wanted && rep.quality >= min_quality;
            ok = ok && good;
            detail += "n=" + std::to_string(n) + ": model " + to_string(rep.model) + ", quality " +
                      fmt(rep.quality) + ", exponent " + fmt(rep.exponent);
            ev.tail_fits.push_back({metric, n, std::move(rep)});
        } catch (const InsufficientDataError& e) {
            ok = false;
            detail += "n=" + std::to_string(n) + ": " + e.what();
        }
    }
    if (!any) {
        v.skipped = true;
        v.detail = "no " + metric + " data";
        return v;
    }
    v.pass = ok;
    v.detail = detail + " (needs model " + to_string(wanted) +
               (min_quality > 0.0 ? " with quality >= " + fmt(min_quality) : std::string()) + ")";
    return v;
}

void lil_verdicts(const Table& t, Evaluation& ev) {
    std::vector<std::size_t> sizes;
    const auto path = medians_of(t, "path_lil", sizes);
    Verdict pv = make("AC7.path_lil", "small-time oscillation is bounded by the double-log Holder modulus");
    if (path.empty()) {
        pv.skipped = true;
        pv.detail = "no data";
    } else {
        pv.pass = std::all_of(path.begin(), path.end(), [](double m) { return m >= 0.5 && m <= 3.0; });
        pv.detail = "median ladder max {" + list(sizes, path) + "} (needs within [0.5, 3])";
    }
    ev.verdicts.push_back(pv);
    const auto area = medians_of(t, "area_lil", sizes);
    Verdict av = make("AC7.area_lil", "small-time Levy area reaches the double-log modulus");
    if (area.empty()) {
        av.skipped = true;
        av.detail = "no area data (dimension 1)";
    } else {
        av.pass = std::all_of(area.begin(), area.end(), [](double m) { return m >= 0.05; });
        av.detail = "median ladder max {" + list(sizes, area) + "} (needs >= 0.05)";
    }
    ev.verdicts.push_back(av);
}

// Quantile q of every metric with the prefix, checked for finiteness and for
// a change factor below `limit` between consecutive grid sizes.
Verdict stability_verdict(const Table& t, const std::string& prefix, double q, double limit, Verdict v) {
    std::map<std::string, std::vector<std::pair<std::size_t, double>>> series;
    bool finite = true;
    for (const auto& [n, metrics] : t)
        for (const auto& [name, values] : metrics) {
            if (name.rfind(prefix, 0) != 0) continue;
            for (double x : values)
                if (!std::isfinite(x) || x <= 0.0) finite = false;
            series[name].emplace_back(n, q >= 1.0 ? *std::max_element(values.begin(), values.end())
                                                  : quantile(values, q));
        }
    if (series.empty()) {
        v.skipped = true;
        v.detail = "no data";
        return v;
    }
    bool stable = true;
    bool compared = false;
    std::string detail;
    for (const auto& [name, pts] : series) {
        if (!detail.empty()) detail += "; ";
        detail += name + " {";
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k) detail += ", ";
            detail += std::to_string(pts[k].first) + ": " + fmt(pts[k].second);
            if (k > 0) {
                compared = true;
                const double a = pts[k - 1].second, b = pts[k].second;
                const double factor = std::max(a, b) / std::min(a, b);
                if (!(factor < limit)) stable = false;
            }
        }
        detail += "}";
    }
    if (!compared) {
        v.skipped = true;
        v.detail = detail + "; a single grid size cannot show stability";
        return v;
    }
    v.pass = finite && stable;
    v.detail = detail + (finite ? "" : "; non-finite or non-positive ratio seen") + " (consecutive change factor < " +
               fmt(limit) + ")";
    return v;
}

bool parse_halfspace(const std::string& metric, int& n, double& a, double& r) {
    return std::sscanf(metric.c_str(), "halfspace:n=%d:a=%lf:r=%lf", &n, &a, &r) == 3;
}

void borell_verdicts(const ExperimentConfig& c, const Table& t, Evaluation& ev) {
    Verdict hv = make("AC10.halfspace", "Gaussian isoperimetry: half-space enlargement has measure >= Phi(a + r)");
    Verdict fv = make("AC10.fernique", "Gauss-tail exponent of a Gaussian norm stays below 1/(2 c^2 sigma^2)");
    bool any_h = false, ok_h = true;
    std::size_t checks = 0, failures = 0;
    std::string worst;
    double worst_z = 0.0;
    bool any_f = false, ok_f = true;
    std::string fdetail;
    for (const auto& [n, metrics] : t)
        for (const auto& [name, values] : metrics) {
            int dim;
            double a, r;
            if (parse_halfspace(name, dim, a, r)) {
                any_h = true;
                ++checks;
                const double bound = normal_cdf(a + r);
                const double se = std::sqrt(bound * (1.0 - bound) / static_cast<double>(c.replications));
                const double est = values.front();
                const bool pass = std::abs(est - bound) <= 3.0 * se && est + 3.0 * se >= bound;
                if (!pass) {
                    ok_h = false;
                    ++failures;
                }
                const double z = se > 0.0 ? std::abs(est - bound) / se : (est == bound ? 0.0 : kInf);
                if (z >= worst_z) {
                    worst_z = z;
                    worst = name + " estimate " + fmt(est, "%.5f") + " vs " + fmt(bound, "%.5f");
                }
            } else if (name.rfind("gauss_norm:", 0) == 0) {
                any_f = true;
                if (!fdetail.empty()) fdetail += "; ";
                try {
                    TailReport rep = fit_tail(values, c.q_lo, c.q_hi);
                    const bool good = rep.exponent >= 0.4 && rep.exponent <= 0.55;
                    ok_f = ok_f && good;
                    fdetail += name + ": model " + to_string(rep.model) + ", exponent " + fmt(rep.exponent) +
                               ", quality " + fmt(rep.quality);
                    ev.tail_fits.push_back({name, n, std::move(rep)});
                } catch (const InsufficientDataError& e) {
                    ok_f = false;
                    fdetail += name + ": " + e.what();
                }
            }
        }
    if (!any_h) {
        hv.skipped = true;
        hv.detail = "no data";
    } else {
        hv.pass = ok_h;
        hv.detail = std::to_string(checks - failures) + "/" + std::to_string(checks) +
                    " checks within 3 standard errors; largest deviation " + fmt(worst_z, "%.2f") + " SE (" + worst +
                    ")";
    }
    if (!any_f) {
        fv.skipped = true;
        fv.detail = "no data";
    } else {
        fv.pass = ok_f;
        fv.detail = fdetail + " (needs exponent in [0.4, 0.55], bound 0.5 for c = sigma = 1)";
    }
    ev.verdicts.push_back(hv);
    ev.verdicts.push_back(fv);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"taylor", "levy_area", "gauss_tail", "lil",
                                                "lift",   "translate", "borell"};
    return names;
}

void ExperimentConfig::validate() const {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end())
        throw UsageError("unknown experiment '" + experiment + "'");
    CovarianceModel cov = CovarianceModel::bm();
    try {
        cov = CovarianceModel::parse(model);
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    if (experiment != "borell" && grid_sizes.empty()) throw ConfigError("grid_sizes must not be empty");
    for (std::size_t n : grid_sizes) {
        if (!is_power_of_two(n) || n < 64 || n > 16384)
            throw ConfigError("grid size " + std::to_string(n) + " is not a power of two in [64, 16384]");
        if (cov.name() != "bm" && n > kMaxFbmGrid)
            throw ConfigError("fBM sampling supports grid sizes up to " + std::to_string(kMaxFbmGrid) + ", got " +
                              std::to_string(n));
    }
    if (replications == 0) throw ConfigError("replications must be positive");
    if (needs_large_samples(experiment) && replications < 100)
        throw ConfigError(experiment + " needs at least 100 replications");
    try {
        const Family f = family_from_string(family);
        if (f == Family::custom) throw ConfigError("custom regularity families cannot be configured");
        RegularityFunction::from_json({{"family", family}, {"p", p}});
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    if (dimension < 0 || dimension > kMaxDimension)
        throw ConfigError("dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
    if (experiment == "borell" && dimension > 0) {
        // any positive dimension is fine for the half-space checks
    } else if ((experiment == "levy_area" || experiment == "translate") && effective_dimension(*this) < 2) {
        throw ConfigError(experiment + " needs dimension >= 2");
    }
    const int sub = effective_substeps(*this);
    if (sub < 1 || !is_power_of_two(static_cast<std::size_t>(sub))) throw ConfigError("substeps must be a power of two");
    if (sub > 1 && cov.name() != "bm") throw ConfigError("bridge refinement (substeps > 1) needs model bm");
    if (experiment == "lift") {
        if (levels.empty()) throw ConfigError("levels must not be empty");
        for (int l : levels)
            if (l < 2 || l > kMaxLevel) throw ConfigError("levels must lie in [2, " + std::to_string(kMaxLevel) + "]");
    }
    if (!(q_lo >= 0.8 && q_lo < q_hi && q_hi <= 0.999))
        throw ConfigError("quantile window must satisfy 0.8 <= q_lo < q_hi <= 0.999");
    if (experiment == "borell" && tail_samples < kMinTailSamples)
        throw ConfigError("tail_samples must be at least " + std::to_string(kMinTailSamples));
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"experiment", experiment},   {"model", model},   {"grid_sizes", grid_sizes},
            {"replications", replications}, {"family", family}, {"p", p},
            {"seed", seed},               {"output_dir", output_dir}, {"dimension", dimension},
            {"substeps", substeps},       {"levels", levels}, {"tail_samples", tail_samples},
            {"q_lo", q_lo},               {"q_hi", q_hi},     {"workers", workers}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{"experiment", "model",    "grid_sizes", "replications", "family",
                                             "p",          "seed",     "output_dir", "dimension",    "substeps",
                                             "levels",     "tail_samples", "q_lo",   "q_hi",         "workers"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    ExperimentConfig c;
    try {
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) j.at(key).get_to(field);
        };
        get("experiment", c.experiment);
        get("model", c.model);
        get("grid_sizes", c.grid_sizes);
        get("replications", c.replications);
        get("family", c.family);
        get("p", c.p);
        get("seed", c.seed);
        get("output_dir", c.output_dir);
        get("dimension", c.dimension);
        get("substeps", c.substeps);
        get("levels", c.levels);
        get("tail_samples", c.tail_samples);
        get("q_lo", c.q_lo);
        get("q_hi", c.q_hi);
        get("workers", c.workers);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return c;
}

MetricSummary summarize(std::vector<double> values) {
    MetricSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    s.median = quantile(values, 0.5);
    s.q25 = quantile(values, 0.25);
    s.q75 = quantile(values, 0.75);
    s.iqr = s.q75 - s.q25;
    return s;
}

Evaluation evaluate_raw(const ExperimentConfig& c, const std::vector<RawRecord>& raw) {
    Evaluation ev;
    const Table t = tabulate(raw);
    if (c.experiment != "borell")
        for (const auto& [n, metrics] : t) {
            SummaryRow row;
            row.grid_size = n;
            for (const auto& [name, values] : metrics) row.metrics[name] = summarize(values);
            ev.summary.push_back(std::move(row));
        }

    if (c.experiment == "taylor") {
        taylor_verdicts(t, ev);
    } else if (c.experiment == "levy_area") {
        ev.verdicts.push_back(tail_verdict(c, t, "area_norm", TailModel::gauss, 0.9,
                                           make("AC5.gauss_tail", "area psi-variation norm has a Gauss tail"), ev));
        ev.verdicts.push_back(tail_verdict(c, t, "area_endpoint", TailModel::exp, 0.0,
                                           make("AC5.area_exp_tail", "Levy area itself has an exponential tail"), ev));
    } else if (c.experiment == "gauss_tail") {
        ev.verdicts.push_back(
            tail_verdict(c, t, "rough_norm", TailModel::gauss, 0.9,
                         make("AC6.gauss_tail", "psi-variation norm of a Gaussian rough path has a Gauss tail"), ev));
    } else if (c.experiment == "lil") {
        lil_verdicts(t, ev);
    } else if (c.experiment == "lift") {
        ev.verdicts.push_back(stability_verdict(
            t, "lift_ratio_N", 0.99, 1.5,
            make("AC8.lift_stability", "signature lift psi-variation is controlled by the path's")));
    } else if (c.experiment == "translate") {
        ev.verdicts.push_back(stability_verdict(
            t, "translation_ratio", 1.0, 1.5,
            make("AC9.translation_stability", "translated rough path is controlled by the path plus the shift")));
    } else if (c.experiment == "borell") {
        borell_verdicts(c, t, ev);
    }
    return ev;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.config = config;
    const unsigned workers = config.workers ? config.workers : default_workers();

    if (config.experiment == "borell") {
        report.raw = run_borell(config);
    } else {
        Measurements (*runner)(const ExperimentConfig&, std::size_t, std::size_t) = nullptr;
        if (config.experiment == "taylor") runner = run_taylor;
        if (config.experiment == "levy_area") runner = run_levy_area;
        if (config.experiment == "gauss_tail") runner = run_gauss_tail;
        if (config.experiment == "lil") runner = run_lil;
        if (config.experiment == "lift") runner = run_lift;
        if (config.experiment == "translate") runner = run_translate;
        for (std::size_t n : config.grid_sizes) {
            const auto results = ordered_map<Measurements>(config.replications, workers,
                                                           [&](std::size_t r) { return runner(config, n, r); });
            for (std::size_t r = 0; r < results.size(); ++r)
                for (const auto& [metric, value] : results[r]) report.raw.push_back({n, r, metric, value});
        }
    }
    Evaluation ev = evaluate_raw(config, report.raw);
    report.summary = std::move(ev.summary);
    report.tail_fits = std::move(ev.tail_fits);
    report.verdicts = std::move(ev.verdicts);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace roughvar
