#include "backflow/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace backflow {

namespace {

constexpr const char* kVersion = "1.0.0";

nlohmann::json meta_object(const std::string& config_echo) {
  return nlohmann::json{{"version", kVersion}, {"config", config_echo}};
}

// Serialize through the shared 9-significant-digit formatting so JSON and
// CSV agree byte-for-byte on every number.
nlohmann::json num(double x) { return nlohmann::json::parse(format_number(x)); }

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("write_atomic: cannot open " + tmp.string());
    out << content;
    if (!out.flush())
      throw std::runtime_error("write_atomic: short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("write_atomic: rename failed for " + path + ": " + ec.message());
  }
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "u0,lambda_max,error_estimate\n";
  for (const SweepRow& row : sweep.rows) {
    if (!row.ok) continue;
    out += format_number(row.u0) + "," + format_number(row.lambda_max) + "," +
           format_number(row.error_estimate) + "\n";
  }
  return out;
}

std::string classical_csv(const ClassicalFamily& family) {
  std::string out = "alpha,u0,lambda_max\n";
  for (std::size_t a = 0; a < family.alpha_values.size(); ++a)
    for (const ClassicalCurvePoint& p : family.curves[a]) {
      if (!p.ok) continue;
      out += format_number(family.alpha_values[a]) + "," + format_number(p.u0) + "," +
             format_number(p.lambda_max) + "\n";
    }
  return out;
}

std::string symmetry_csv(const SymmetryReport& report) {
  std::string out = "s,residual,error_bar\n";
  for (std::size_t i = 0; i < report.offsets.size(); ++i)
    out += format_number(report.offsets[i]) + "," + format_number(report.residuals[i]) + "," +
           format_number(report.error_bars[i]) + "\n";
  return out;
}

std::string history_csv(const ConvergedEstimate& est) {
  std::string out = "n,u_max,lambda_max\n";
  for (const ConvergeHistoryEntry& e : est.history)
    out += std::to_string(e.n) + "," + format_number(e.u_max) + "," +
           format_number(e.lambda) + "\n";
  return out;
}

std::string sweep_json(const SweepResult& sweep, const std::string& config_echo) {
  nlohmann::json doc;
  doc["meta"] = meta_object(config_echo);
  doc["rows"] = nlohmann::json::array();
  for (const SweepRow& row : sweep.rows) {
    nlohmann::json r{{"u0", num(row.u0)}, {"ok", row.ok}};
    if (row.ok) {
      r["lambda_max"] = num(row.lambda_max);
      r["error_estimate"] = num(row.error_estimate);
    } else {
      r["error"] = row.error;
    }
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

std::string classical_json(const ClassicalFamily& family, const std::string& config_echo) {
  nlohmann::json doc;
  doc["meta"] = meta_object(config_echo);
  doc["rows"] = nlohmann::json::array();
  for (std::size_t a = 0; a < family.alpha_values.size(); ++a)
    for (const ClassicalCurvePoint& p : family.curves[a]) {
      nlohmann::json r{{"alpha", num(family.alpha_values[a])}, {"u0", num(p.u0)}, {"ok", p.ok}};
      if (p.ok) r["lambda_max"] = num(p.lambda_max);
      doc["rows"].push_back(std::move(r));
    }
  return doc.dump(2) + "\n";
}

std::string symmetry_json(const SymmetryReport& report, const std::string& config_echo) {
  nlohmann::json doc;
  doc["meta"] = meta_object(config_echo);
  doc["u0_star"] = num(report.u0_star);
  doc["rows"] = nlohmann::json::array();
  for (std::size_t i = 0; i < report.offsets.size(); ++i)
    doc["rows"].push_back({{"s", num(report.offsets[i])},
                           {"residual", num(report.residuals[i])},
                           {"error_bar", num(report.error_bars[i])},
                           {"exceeds_bar", static_cast<bool>(report.exceeds_bar[i])}});
  return doc.dump(2) + "\n";
}

std::string estimate_json(const ConvergedEstimate& est, const std::string& config_echo) {
  nlohmann::json doc;
  doc["meta"] = meta_object(config_echo);
  doc["u0"] = num(est.u0);
  doc["lambda_max"] = num(est.lambda_max);
  doc["error_estimate"] = num(est.error_estimate);
  doc["n_final"] = est.n_final;
  doc["u_max_final"] = num(est.u_max_final);
  doc["truncation_extrapolated"] = est.truncation_extrapolated;
  doc["refinement_ratio"] = num(est.refinement_ratio);
  doc["history"] = nlohmann::json::array();
  for (const ConvergeHistoryEntry& e : est.history)
    doc["history"].push_back({{"n", e.n}, {"u_max", num(e.u_max)}, {"lambda_max", num(e.lambda)}});
  return doc.dump(2) + "\n";
}

std::string line_chart_svg(const std::vector<SvgSeries>& series, const std::string& x_label,
                           const std::string& y_label) {
  constexpr double W = 720, H = 480, ML = 60, MR = 20, MT = 20, MB = 45;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  bool first = true;
  for (const SvgSeries& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        x_lo = x_hi = s.x[i];
        y_lo = y_hi = s.y[i];
        first = false;
      }
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_hi = y_lo + 1;
  auto px = [&](double x) { return ML + (x - x_lo) / (x_hi - x_lo) * (W - ML - MR); };
  auto py = [&](double y) { return H - MB - (y - y_lo) / (y_hi - y_lo) * (H - MT - MB); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
                                 "#e377c2"};
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
                    "viewBox=\"0 0 720 480\">\n";
  svg += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", ML,
                H - MB, W - MR, H - MB);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", ML, MT,
                ML, H - MB);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" font-size=\"14\">%s</text>\n",
                0.5 * W, H - 8.0, x_label.c_str());
  svg += buf;
  std::snprintf(
      buf, sizeof(buf),
      "<text x=\"14\" y=\"%g\" text-anchor=\"middle\" font-size=\"14\" "
      "transform=\"rotate(-90 14 %g)\">%s</text>\n",
      0.5 * H, 0.5 * H, y_label.c_str());
  svg += buf;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const SvgSeries& s = series[si];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      pts += buf;
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(colors[si % 6]) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%g\" y=\"%g\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                  W - MR - 110.0, MT + 16.0 * (si + 1), colors[si % 6], s.label.c_str());
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace backflow
