#include "reldev/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reldev/errors.hpp"

namespace reldev {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

std::optional<double> to_number(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    std::size_t used = 0;
    try {
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            return std::nullopt;
        }
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::vector<double> number_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const std::string& cell : split(s, ',')) {
        const auto v = to_number(cell);
        if (!v) {
            throw ArgumentError("cannot parse '" + cell + "' in " + what);
        }
        out.push_back(*v);
    }
    return out;
}

std::pair<std::string, std::string> kind_and_args(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        return {spec, {}};
    }
    return {spec.substr(0, colon), spec.substr(colon + 1)};
}

std::size_t resolve_column(const std::vector<std::string>& header, const std::string& sel, std::size_t width,
                           bool has_header) {
    if (sel.empty()) {
        return width - 1;
    }
    if (has_header) {
        const auto it = std::find(header.begin(), header.end(), sel);
        if (it != header.end()) {
            return static_cast<std::size_t>(it - header.begin());
        }
    }
    const auto idx = to_number(sel);
    if (idx && *idx >= 0 && std::floor(*idx) == *idx && *idx < static_cast<double>(width)) {
        return static_cast<std::size_t>(*idx);
    }
    throw ArgumentError("unknown column '" + sel + "'");
}

}  // namespace

LoadedSeries load_series_csv(const SeriesFile& f) {
    std::ifstream in(f.path);
    if (!in) {
        throw DataError("cannot open " + f.path.string());
    }
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty() || trim(line).front() == '#') {
            continue;
        }
        rows.emplace_back(row, split(line, ','));
    }
    if (rows.empty()) {
        throw TooShort("no rows in " + f.path.string());
    }
    bool has_header = false;
    for (const std::string& cell : rows.front().second) {
        if (!to_number(cell)) {
            has_header = true;
        }
    }
    const std::vector<std::string> header = has_header ? rows.front().second : std::vector<std::string>{};
    const std::size_t width = rows.front().second.size();
    const std::size_t col = resolve_column(header, f.column, width, has_header);
    std::optional<std::size_t> time_col;
    if (!f.time_column.empty()) {
        time_col = resolve_column(header, f.time_column, width, has_header);
    }

    std::vector<double> values;
    std::vector<double> times;
    for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
        const auto& [file_row, cells] = rows[r];
        if (col >= cells.size()) {
            throw ParseError(file_row, col + 1, "missing value");
        }
        const auto v = to_number(cells[col]);
        if (!v || !std::isfinite(*v)) {
            throw ParseError(file_row, col + 1, "'" + cells[col] + "' is not a finite number");
        }
        values.push_back(*v);
        if (time_col) {
            const auto t = *time_col < cells.size() ? to_number(cells[*time_col]) : std::nullopt;
            if (!t) {
                throw ParseError(file_row, *time_col + 1, "time stamp is not a number");
            }
            times.push_back(*t);
        }
    }
    if (values.size() < 2) {
        throw TooShort("fewer than 2 usable rows in " + f.path.string());
    }
    LoadedSeries out{TimeSeries(std::move(values)), {}};
    if (times.size() >= 3) {
        const double step = times[1] - times[0];
        for (std::size_t i = 2; i < times.size(); ++i) {
            if (std::abs((times[i] - times[i - 1]) - step) > 1e-8 * std::max(1.0, std::abs(step))) {
                out.warnings.emplace_back("time column is not equidistant; design points i/n are used");
                break;
            }
        }
    }
    return out;
}

std::vector<std::vector<double>> read_numeric_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::vector<std::vector<double>> out;
    std::string line;
    std::size_t row = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty() || trim(line).front() == '#') {
            continue;
        }
        const bool header_allowed = first;
        first = false;
        const auto cells = split(line, ',');
        std::vector<double> values;
        bool numeric = true;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = to_number(cells[c]);
            if (!v) {
                if (header_allowed) {
                    numeric = false;
                    break;
                }
                throw ParseError(row, c + 1, "'" + cells[c] + "' is not a number");
            }
            values.push_back(*v);
        }
        if (numeric) {
            out.push_back(std::move(values));
        }
    }
    return out;
}

std::function<double(double)> interpolate_table(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw ArgumentError("interpolation table needs at least 2 (x, y) pairs");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw ArgumentError("interpolation abscissae must increase strictly");
        }
    }
    return [xs = std::move(xs), ys = std::move(ys)](double x) {
        if (x <= xs.front()) {
            return ys.front();
        }
        if (x >= xs.back()) {
            return ys.back();
        }
        const auto j = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
        const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        return (1.0 - w) * ys[j - 1] + w * ys[j];
    };
}

BenchmarkFunctional parse_benchmark(const std::string& spec) {
    const auto [kind, args] = kind_and_args(spec);
    if (kind == "constant") {
        const auto v = number_list(args, "benchmark");
        if (v.size() != 1) {
            throw ArgumentError("constant benchmark takes one value");
        }
        return BenchmarkFunctional::constant(v[0]);
    }
    if (kind == "window") {
        const auto v = number_list(args, "benchmark");
        if (v.size() != 2) {
            throw ArgumentError("window benchmark takes t0,t1");
        }
        return BenchmarkFunctional::window_average(v[0], v[1]);
    }
    if (kind == "point") {
        const auto v = number_list(args, "benchmark");
        if (v.size() != 1) {
            throw ArgumentError("point benchmark takes one time");
        }
        return BenchmarkFunctional::point_eval(v[0]);
    }
    if (kind == "linear") {
        const auto table = read_numeric_table(args);
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& r : table) {
            if (r.size() < 2) {
                throw ArgumentError("representer file needs two columns x,h");
            }
            xs.push_back(r[0]);
            ys.push_back(r[1]);
        }
        return BenchmarkFunctional::general_linear(interpolate_table(std::move(xs), std::move(ys)), "linear:" + args);
    }
    throw ArgumentError("unknown benchmark '" + spec + "'");
}

TauMeasure parse_tau(const std::string& spec) {
    const auto [kind, args] = kind_and_args(spec);
    if (kind == "lebesgue" && args.empty()) {
        return TauMeasure::lebesgue();
    }
    if (kind == "window") {
        const auto v = number_list(args, "tau");
        if (v.size() == 2) {
            return TauMeasure::window(v[0], v[1]);
        }
        if (v.size() == 3) {
            return TauMeasure::window(v[0], v[1], v[2]);
        }
        throw ArgumentError("tau window takes t0,t1[,scale]");
    }
    throw ArgumentError("unknown tau '" + spec + "'");
}

NuMeasure parse_nu(const std::string& spec) {
    const auto [kind, args] = kind_and_args(spec);
    if (spec == "default") {
        return NuMeasure::standard();
    }
    if (kind == "discrete") {
        return NuMeasure::discrete_uniform(number_list(args, "nu"));
    }
    if (kind == "uniform") {
        const auto v = number_list(args, "nu");
        if (v.size() == 1) {
            return NuMeasure::continuous_uniform(v[0]);
        }
        if (v.size() == 2 && v[1] >= 2 && std::floor(v[1]) == v[1]) {
            return NuMeasure::continuous_uniform(v[0], static_cast<std::size_t>(v[1]));
        }
        throw ArgumentError("uniform nu takes zeta[,points]");
    }
    std::ifstream in(spec);
    if (!in) {
        throw ArgumentError("unknown nu '" + spec + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("nu file " + spec + ": " + e.what());
    }
    if (j.contains("uniform")) {
        return NuMeasure::continuous_uniform(j.at("uniform").get<double>(), j.value("quadrature_points", 17));
    }
    auto points = j.at("points").get<std::vector<double>>();
    std::vector<double> weights =
        j.contains("weights") ? j.at("weights").get<std::vector<double>>() : std::vector<double>(points.size(), 1.0);
    return NuMeasure::discrete(std::move(points), std::move(weights), j.value("zeta", 0.0));
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    for (const std::string& c : comments) {
        out << "# " << c << '\n';
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
        out << (c ? "," : "") << header[c];
    }
    out << '\n';
    char buf[40];
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", r[c]);
            out << (c ? "," : "") << buf;
        }
        out << '\n';
    }
}

}  // namespace reldev
