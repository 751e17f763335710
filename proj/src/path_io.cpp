#include "roughvar/path_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "roughvar/errors.hpp"

namespace roughvar {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
}

double parse_number(const std::string& cell, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw InputError("line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
    }
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SampledPath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("path CSV is empty");
    const auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "t") throw InputError("path CSV header must be t,x1,...,xd");
    for (std::size_t c = 1; c < header.size(); ++c)
        if (header[c] != "x" + std::to_string(c))
            throw InputError("path CSV header column " + std::to_string(c + 1) + " must be x" + std::to_string(c));
    const int d = static_cast<int>(header.size() - 1);
    std::vector<double> times, values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size())
            throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(cells.size()));
        times.push_back(parse_number(cells[0], line_no));
        for (int c = 1; c <= d; ++c) values.push_back(parse_number(cells[static_cast<std::size_t>(c)], line_no));
    }
    return SampledPath::euclidean(std::move(times), std::move(values), d);
}

SampledPath read_path_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    try {
        return read_path_csv(in);
    } catch (const InputError& e) {
        throw InputError(file.string() + ": " + e.what());
    }
}

void write_path_csv(std::ostream& out, const SampledPath& path) {
    const int d = path.dimension();
    out << "t";
    for (int c = 1; c <= d; ++c) out << ",x" << c;
    out << '\n';
    for (std::size_t i = 0; i < path.size(); ++i) {
        out << format_number(path.times()[i]);
        for (double v : path.point(i)) out << ',' << format_number(v);
        out << '\n';
    }
}

void write_path_csv(const std::filesystem::path& file, const SampledPath& path) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot write " + file.string());
    write_path_csv(out, path);
    if (!out) throw IoError("write failed for " + file.string());
}

nlohmann::json group_path_to_json(const GroupPath& path) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& g : path.points()) {
        nlohmann::json levels = nlohmann::json::array();
        for (int k = 1; k <= g.level(); ++k) {
            auto c = g.coefficients(k);
            levels.push_back(std::vector<double>(c.begin(), c.end()));
        }
        points.push_back(std::move(levels));
    }
    return {{"dimension", path.dimension()}, {"level", path.level()}, {"times", path.times()}, {"points", points}};
}

GroupPath group_path_from_json(const nlohmann::json& j) {
    try {
        const int d = j.at("dimension").get<int>();
        const int level = j.at("level").get<int>();
        auto times = j.at("times").get<std::vector<double>>();
        std::vector<TensorElement> pts;
        for (const auto& p : j.at("points")) {
            const auto levels = p.get<std::vector<std::vector<double>>>();
            if (static_cast<int>(levels.size()) != level)
                throw DimensionError("group path point has " + std::to_string(levels.size()) + " levels, expected " +
                                     std::to_string(level));
            pts.push_back(TensorElement::from_levels(d, levels));
        }
        return GroupPath(std::move(times), std::move(pts));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed group path JSON: ") + e.what());
    }
}

}  // namespace roughvar
