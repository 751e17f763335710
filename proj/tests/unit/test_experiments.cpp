#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "roughvar/errors.hpp"
#include "roughvar/experiments.hpp"

using namespace roughvar;
namespace fs = std::filesystem;

namespace {

ExperimentConfig taylor_config() {
    ExperimentConfig c;
    c.experiment = "taylor";
    c.grid_sizes = {256, 512};
    c.replications = 50;
    c.family = "psi2";
    c.p = 2.0;
    c.seed = 7;
    return c;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("roughvar_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("taylor end to end") {
    const auto report = run_experiment(taylor_config());
    REQUIRE(report.summary.size() == 2);
    CHECK(report.summary[0].grid_size == 256);
    CHECK(report.summary[1].grid_size == 512);
    CHECK(report.summary[0].metrics.at("V_psi").count == 50);
    CHECK(report.raw.size() == 2 * 50 * 2);
    bool has_stabilization = false;
    for (const auto& v : report.verdicts) {
        CHECK_FALSE(v.theorem.empty());
        CHECK(v.id.rfind("AC", 0) == 0);
        if (v.id == "AC4.stabilization") has_stabilization = true;
    }
    CHECK(has_stabilization);

    // determinism, independent of the worker count
    auto single = taylor_config();
    single.workers = 1;
    CHECK(run_experiment(single).raw_csv() == report.raw_csv());

    // verdicts are recomputable from the raw CSV
    const auto again = evaluate_raw(report.config, parse_raw_csv(report.raw_csv()));
    REQUIRE(again.verdicts.size() == report.verdicts.size());
    for (std::size_t i = 0; i < again.verdicts.size(); ++i) {
        CHECK(again.verdicts[i].id == report.verdicts[i].id);
        CHECK(again.verdicts[i].pass == report.verdicts[i].pass);
        CHECK(again.verdicts[i].skipped == report.verdicts[i].skipped);
        CHECK(again.verdicts[i].detail == report.verdicts[i].detail);
    }
    CHECK(again.summary[1].metrics.at("V_psi").median == report.summary[1].metrics.at("V_psi").median);

    const auto json = report.summary_json();
    CHECK(json.at("config").at("seed") == 7);
    CHECK(json.at("verdicts").size() == report.verdicts.size());
    CHECK(json.at("summary").size() == 2);
}

TEST_CASE("configuration errors") {
    auto c = taylor_config();
    c.experiment = "foo";
    CHECK_THROWS_AS(c.validate(), UsageError);
    CHECK_THROWS_AS(run_experiment(c), UsageError);

    c = taylor_config();
    c.model = "fbm:0.4";
    c.grid_sizes = {8192};
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = taylor_config();
    c.grid_sizes = {300};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.grid_sizes = {32};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.grid_sizes = {32768};
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = taylor_config();
    c.experiment = "gauss_tail";
    c.replications = 99;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = taylor_config();
    c.experiment = "levy_area";
    c.replications = 200;
    c.model = "fbm:0.4";
    c.substeps = 4;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = taylor_config();
    c.model = "ou";
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = taylor_config();
    c.family = "nope";
    CHECK_THROWS_AS(c.validate(), ConfigError);

    CHECK_THROWS_AS(ExperimentConfig::from_json({{"experiment", "taylor"}, {"bogus", 1}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"experiment", "taylor"}, {"grid_sizes", "many"}}), ConfigError);
    const auto round = ExperimentConfig::from_json(taylor_config().to_json());
    CHECK(round.to_json() == taylor_config().to_json());
    CHECK_NOTHROW(taylor_config().validate());
}

TEST_CASE("summary statistics") {
    const auto s = summarize({4.0, 1.0, 3.0, 2.0, 5.0});
    CHECK(s.median == 3.0);
    CHECK(s.q25 == 2.0);
    CHECK(s.q75 == 4.0);
    CHECK(s.iqr == 2.0);
    CHECK(s.count == 5);
    const auto even = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(even.median == 2.5);
    CHECK(even.q25 == doctest::Approx(1.75));
}

TEST_CASE("raw csv round trip") {
    std::vector<RawRecord> raw{{64, 0, "a", 0.1}, {64, 1, "a", 1.0 / 3.0}, {128, 0, "b:n=2", -2.5e-300}};
    ExperimentReport r;
    r.config = taylor_config();
    r.raw = raw;
    const auto parsed = parse_raw_csv(r.raw_csv());
    REQUIRE(parsed.size() == raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        CHECK(parsed[i].grid_size == raw[i].grid_size);
        CHECK(parsed[i].replication == raw[i].replication);
        CHECK(parsed[i].metric == raw[i].metric);
        CHECK(parsed[i].value == raw[i].value);
    }
    CHECK_THROWS_AS(parse_raw_csv("grid_size,replication,metric,value\n1,2\n"), InputError);
    CHECK_THROWS_AS(parse_raw_csv("wrong header\n"), InputError);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("report writing") {
    SUBCASE("empty report") {
        const auto dir = scratch_dir("empty");
        ExperimentReport empty;
        empty.config = taylor_config();
        const auto manifest = write_report(empty, dir);
        REQUIRE(manifest.size() == 1);
        CHECK(manifest[0].file == "summary.json");
        CHECK(fs::exists(dir / "manifest.json"));
        CHECK_FALSE(fs::exists(dir / "raw.csv"));
        fs::remove_all(dir);
    }
    SUBCASE("hashes, refusal and overwrite") {
        const auto dir = scratch_dir("full");
        auto cfg = taylor_config();
        cfg.grid_sizes = {64};
        const auto report = run_experiment(cfg);
        const auto manifest = write_report(report, dir);
        REQUIRE(manifest.size() == 2);
        for (const auto& entry : manifest) {
            const auto bytes = slurp(dir / entry.file);
            CHECK(entry.sha256 == sha256_hex(bytes));
            CHECK(entry.bytes == bytes.size());
        }
        const auto listed = nlohmann::json::parse(slurp(dir / "manifest.json"));
        CHECK(listed.at("files").size() == 2);
        CHECK(listed.at("files")[0].at("sha256") == manifest[0].sha256);
        CHECK(slurp(dir / "raw.csv") == report.raw_csv());

        CHECK_THROWS_AS(write_report(report, dir), IoError);
        CHECK_NOTHROW(write_report(report, dir, true));
        fs::remove_all(dir);
    }
}
