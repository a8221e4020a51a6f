#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reldev/benchmarks.hpp"
#include "reldev/estimation.hpp"
#include "reldev/measures.hpp"
#include "reldev/nu_measure.hpp"

namespace reldev {

/// Where to find the series inside a CSV file.
struct SeriesFile {
    std::filesystem::path path;
    /// Column name (needs a header) or 0-based index; empty selects the last column.
    std::string column;
    /// Optional time column, only checked for equal spacing.
    std::string time_column;
};

struct LoadedSeries {
    TimeSeries series;
    std::vector<std::string> warnings;
};

/// Reads one numeric column; lines starting with # are skipped. A first row containing a non-numeric cell is
/// taken as the header. Throws ParseError (1-based file row and column) on an
/// empty, non-numeric or non-finite cell and TooShort below 2 rows.
LoadedSeries load_series_csv(const SeriesFile& f);

/// Rows of numbers from a headerless or headed CSV file (used for tables).
std::vector<std::vector<double>> read_numeric_table(const std::filesystem::path& path);

/// Piecewise linear interpolation through (x_i, y_i), constant outside.
std::function<double(double)> interpolate_table(std::vector<double> xs, std::vector<double> ys);

/// "constant:c", "window:t0,t1", "point:t" or "linear:file" (CSV of x,h_g).
BenchmarkFunctional parse_benchmark(const std::string& spec);
/// "lebesgue" or "window:t0,t1[,scale]".
TauMeasure parse_tau(const std::string& spec);
/// "default", "discrete:l1,l2,...", "uniform:zeta[,points]" or a JSON file with
/// {"points": [...], "weights": [...], "zeta": z} or {"uniform": z, "quadrature_points": m}.
NuMeasure parse_nu(const std::string& spec);

/// Writes rows with 17 significant digits after optional "# " comment lines.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const std::vector<std::string>& comments = {});

}  // namespace reldev
