#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "roughvar/errors.hpp"
#include "roughvar/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kVerdictFailed = 1, kUsage = 2, kConfig = 3, kFailure = 4 };

}  // namespace

int main(int argc, char** argv) {
    using namespace roughvar;

    CLI::App app{"Regularity experiments for Gaussian rough paths"};
    std::string experiment;
    std::string config_file;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool overwrite = false;
    bool quiet = false;
    std::string names;
    for (const auto& n : experiment_names()) names += (names.empty() ? "" : " | ") + n;
    app.add_option("experiment", experiment, names)->required();
    app.add_option("--config", config_file, "JSON config file")->required()->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
    app.add_option("--out", out_dir, "report directory (overrides the config)");
    app.add_flag("--overwrite", overwrite, "replace an existing report");
    app.add_flag("-q,--quiet", quiet, "print verdict lines only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        std::ifstream in(config_file);
        if (!in) throw IoError("cannot open " + config_file);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(config_file + ": " + e.what());
        }
        ExperimentConfig config = ExperimentConfig::from_json(j);
        if (!config.experiment.empty() && config.experiment != experiment)
            throw UsageError("config names experiment '" + config.experiment + "' but '" + experiment +
                             "' was requested");
        config.experiment = experiment;
        if (*seed_opt) config.seed = seed;
        if (!out_dir.empty()) config.output_dir = out_dir;

        const ExperimentReport report = run_experiment(config);
        for (const auto& v : report.verdicts)
            std::cout << (v.skipped ? "SKIP " : (v.pass ? "PASS " : "FAIL ")) << v.id << "  " << v.detail << '\n';
        if (!config.output_dir.empty()) {
            const auto manifest = write_report(report, config.output_dir, overwrite);
            if (!quiet)
                for (const auto& e : manifest)
                    std::cout << "wrote " << (std::filesystem::path(config.output_dir) / e.file).string() << "  "
                              << e.sha256 << '\n';
        } else if (!quiet) {
            std::cout << report.summary_json().dump(2) << '\n';
        }
        return report.all_pass() ? kOk : kVerdictFailed;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
