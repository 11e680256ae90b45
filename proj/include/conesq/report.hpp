#pragma once

#include <string>
#include <vector>

#include "conesq/experiments.hpp"

namespace conesq {

// Tolerance on |alpha - expected_alpha| used for the CSV pass column.
inline constexpr double kExponentTolerance = 0.05;

std::string csv_header();
// One row per sweep point; fit columns repeat per row. Empty input gives the header only.
std::string to_csv(const std::vector<SweepResult>& results);
// Self-contained SVG: log-log points, fitted line, and the expected-exponent reference line.
std::string to_svg(const SweepResult& r);

// Writes <dir>/results.csv and one <dir>/<experiment>_<series>_p<p>.svg per sweep; returns written paths.
std::vector<std::string> write_report(const std::vector<SweepResult>& results, const std::string& dir);
void write_text(const std::string& path, const std::string& body);

// Inverse of to_csv: rows grouped back into sweeps by (experiment:series, n, p, engine), in first-seen order.
std::vector<SweepResult> from_csv(const std::string& text);
std::vector<SweepResult> read_csv(const std::string& path);

}  // namespace conesq
