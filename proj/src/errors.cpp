#include "reldev/errors.hpp"

#include <sstream>

namespace reldev {

namespace {

std::string degenerate_message(double t, double h, double lambda) {
    std::ostringstream os;
    os << "degenerate local linear window at t=" << t << " (h=" << h << ", lambda=" << lambda << ")";
    return os.str();
}

std::string parse_message(std::size_t row, std::size_t column, const std::string& detail) {
    std::ostringstream os;
    os << "parse error at row " << row << ", column " << column << ": " << detail;
    return os.str();
}

}  // namespace

DegenerateWindow::DegenerateWindow(double t, double h, double lambda)
    : NumericError(degenerate_message(t, h, lambda)), t_(t), h_(h), lambda_(lambda) {}

ParseError::ParseError(std::size_t row, std::size_t column, const std::string& detail)
    : DataError(parse_message(row, column, detail)), row_(row), column_(column) {}

}  // namespace reldev
