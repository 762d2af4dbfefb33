#pragma once

#include <string>

#include "backflow/eigensolve.hpp"
#include "backflow/sweep.hpp"

namespace backflow {

// %.9g formatting used for every serialized number.
std::string format_number(double x);

// Writes content via a temporary file in the same directory plus rename,
// so an interrupted run never leaves a partial file at the target path.
void write_atomic(const std::string& path, const std::string& content);

// CSV bodies (UTF-8, comma-separated, header row, LF endings).
std::string sweep_csv(const SweepResult& sweep);                    // u0,lambda_max,error_estimate
std::string classical_csv(const ClassicalFamily& family);           // alpha,u0,lambda_max
std::string symmetry_csv(const SymmetryReport& report);             // s,residual,error_bar
std::string history_csv(const ConvergedEstimate& est);              // n,u_max,lambda_max

// JSON documents: top-level object with "meta" and "rows"/"history".
std::string sweep_json(const SweepResult& sweep, const std::string& config_echo);
std::string classical_json(const ClassicalFamily& family, const std::string& config_echo);
std::string symmetry_json(const SymmetryReport& report, const std::string& config_echo);
std::string estimate_json(const ConvergedEstimate& est, const std::string& config_echo);

// Minimal self-contained line-chart SVG of (x, y) series.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};
std::string line_chart_svg(const std::vector<SvgSeries>& series, const std::string& x_label,
                           const std::string& y_label);

}  // namespace backflow
