#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "roughvar/tail.hpp"

namespace roughvar {

/// Known experiment names, in CLI order.
const std::vector<std::string>& experiment_names();

struct ExperimentConfig {
    std::string experiment;
    std::string model = "bm";
    std::vector<std::size_t> grid_sizes;
    std::size_t replications = 100;
    std::string family = "psi2";
    double p = 2.0;
    std::uint64_t seed = 0;
    std::string output_dir;

    int dimension = 0;               ///< 0 picks the experiment default
    int substeps = 0;                ///< 0 picks the experiment default
    std::vector<int> levels{3, 4};   ///< signature levels (lift)
    std::size_t tail_samples = 100000;  ///< Gaussian draws per tail fit (borell)
    double q_lo = 0.90;
    double q_hi = 0.995;
    unsigned workers = 0;            ///< 0 uses the hardware concurrency

    /// Throws UsageError for an unknown experiment and ConfigError for
    /// unsatisfiable settings.
    void validate() const;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

/// One long-format row of raw output.
struct RawRecord {
    std::size_t grid_size = 0;
    std::size_t replication = 0;
    std::string metric;
    double value = 0.0;
};

struct MetricSummary {
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double iqr = 0.0;
    std::size_t count = 0;
};

struct SummaryRow {
    std::size_t grid_size = 0;
    std::map<std::string, MetricSummary> metrics;
};

struct Verdict {
    std::string id;       ///< acceptance criterion, e.g. "AC4.stabilization"
    std::string theorem;  ///< statement the verdict probes
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

struct NamedTailFit {
    std::string metric;
    std::size_t grid_size = 0;
    TailReport report;
};

struct Evaluation {
    std::vector<SummaryRow> summary;
    std::vector<NamedTailFit> tail_fits;
    std::vector<Verdict> verdicts;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RawRecord> raw;
    std::vector<SummaryRow> summary;
    std::vector<NamedTailFit> tail_fits;
    std::vector<Verdict> verdicts;
    double wall_seconds = 0.0;

    bool empty() const noexcept { return raw.empty(); }
    /// True when no verdict failed (skipped verdicts do not fail).
    bool all_pass() const;
    nlohmann::json summary_json() const;
    std::string raw_csv() const;
};

MetricSummary summarize(std::vector<double> values);

/// Summary rows, tail fits and verdicts as a pure function of the raw rows.
Evaluation evaluate_raw(const ExperimentConfig& config, const std::vector<RawRecord>& raw);

std::vector<RawRecord> parse_raw_csv(std::string_view text);

ExperimentReport run_experiment(const ExperimentConfig& config);

struct ManifestEntry {
    std::string file;
    std::string sha256;
    std::size_t bytes = 0;
};

/// Writes summary.json, raw.csv (when there is raw data) and manifest.json.
/// Refuses to replace an existing report unless `overwrite` is set.
std::vector<ManifestEntry> write_report(const ExperimentReport& report, const std::filesystem::path& directory,
                                        bool overwrite = false);

std::string sha256_hex(std::string_view bytes);

}  // namespace roughvar
