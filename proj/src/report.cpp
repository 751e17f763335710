#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "roughvar/errors.hpp"
#include "roughvar/experiments.hpp"
#include "roughvar/gaussian.hpp"

namespace roughvar {

namespace {

void write_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + file.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("write failed for " + file.string());
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

bool ExperimentReport::all_pass() const {
    for (const auto& v : verdicts)
        if (!v.skipped && !v.pass) return false;
    return true;
}

nlohmann::json ExperimentReport::summary_json() const {
    nlohmann::json sizes = nlohmann::json::array();
    for (const auto& row : summary) {
        nlohmann::json metrics = nlohmann::json::object();
        for (const auto& [name, s] : row.metrics)
            metrics[name] = {{"median", s.median}, {"q25", s.q25}, {"q75", s.q75}, {"iqr", s.iqr}, {"count", s.count}};
        sizes.push_back({{"grid_size", row.grid_size}, {"metrics", metrics}});
    }
    nlohmann::json fits = nlohmann::json::array();
    for (const auto& f : tail_fits) {
        nlohmann::json j = f.report.to_json();
        j.erase("tail");
        j["metric"] = f.metric;
        j["grid_size"] = f.grid_size;
        fits.push_back(std::move(j));
    }
    nlohmann::json verdict_list = nlohmann::json::array();
    for (const auto& v : verdicts)
        verdict_list.push_back({{"id", v.id},
                                {"theorem", v.theorem},
                                {"status", v.skipped ? "skipped" : (v.pass ? "pass" : "fail")},
                                {"detail", v.detail}});
    return {{"config", config.to_json()},
            {"summary", sizes},
            {"tail_fits", fits},
            {"verdicts", verdict_list},
            {"all_pass", all_pass()},
            {"fbm_jitter_retries", fbm_jitter_retries()},
            {"wall_seconds", wall_seconds}};
}

std::string ExperimentReport::raw_csv() const {
    std::string out = "grid_size,replication,metric,value\n";
    for (const auto& r : raw) {
        out += std::to_string(r.grid_size);
        out += ',';
        out += std::to_string(r.replication);
        out += ',';
        out += r.metric;
        out += ',';
        out += format_value(r.value);
        out += '\n';
    }
    return out;
}

std::vector<RawRecord> parse_raw_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "grid_size,replication,metric,value")
        throw InputError("raw CSV must start with the header grid_size,replication,metric,value");
    std::vector<RawRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const auto c3 = line.rfind(',');
        if (c1 == std::string::npos || c2 == std::string::npos || c3 <= c2)
            throw InputError("raw CSV line " + std::to_string(line_no) + " is malformed");
        try {
            RawRecord r;
            r.grid_size = std::stoull(line.substr(0, c1));
            r.replication = std::stoull(line.substr(c1 + 1, c2 - c1 - 1));
            r.metric = line.substr(c2 + 1, c3 - c2 - 1);
            r.value = std::stod(line.substr(c3 + 1));
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw InputError("raw CSV line " + std::to_string(line_no) + " has a bad number");
        }
    }
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::vector<ManifestEntry> write_report(const ExperimentReport& report, const std::filesystem::path& directory,
                                        bool overwrite) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());
    for (const char* name : {"summary.json", "raw.csv", "manifest.json"})
        if (!overwrite && std::filesystem::exists(directory / name))
            throw IoError((directory / name).string() + " already exists; pass overwrite to replace it");

    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("summary.json", report.summary_json().dump(2) + "\n");
    if (!report.empty()) files.emplace_back("raw.csv", report.raw_csv());
    else if (overwrite) std::filesystem::remove(directory / "raw.csv", ec);

    std::vector<ManifestEntry> manifest;
    for (const auto& [name, content] : files) {
        write_file(directory / name, content);
        manifest.push_back({name, sha256_hex(content), content.size()});
    }
    nlohmann::json mj = nlohmann::json::array();
    for (const auto& e : manifest) mj.push_back({{"file", e.file}, {"sha256", e.sha256}, {"bytes", e.bytes}});
    write_file(directory / "manifest.json", nlohmann::json{{"files", mj}}.dump(2) + "\n");
    return manifest;
}

}  // namespace roughvar
