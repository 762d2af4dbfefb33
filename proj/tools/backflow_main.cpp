#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "backflow/kernel.hpp"
#include "backflow/output.hpp"
#include "backflow/sweep.hpp"
#include "backflow/transport.hpp"

namespace {

using namespace backflow;

std::vector<double> range_grid(double from, double to, double step) {
  if (!(step > 0.0) || !(from < to))
    throw CLI::ValidationError("sweep range", "--from must be below --to and --step positive");
  const int count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = from + i * step;
  return grid;
}

std::string echo_args(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_atomic(out_path, content);
}

void emit_error_record(const std::string& command, const std::string& message) {
  std::cerr << "{\"error\":{\"command\":\"" << command << "\",\"message\":\"" << message
            << "\"}}\n";
}

std::vector<SvgSeries> with_classical_overlay(std::vector<SvgSeries> series, double lo,
                                              double hi) {
  if (lo < 0.0)
    series.push_back({"classical (u0<0)", {lo, 0.0}, {1.0, 1.0}});
  if (hi > 0.0)
    series.push_back({"classical (u0>0)", {0.0, hi}, {0.0, 0.0}});
  return series;
}

struct CommonOpts {
  double tol = 1e-4;
  double from = -4.0;
  double to = 4.0;
  double step = 0.1;
  std::string out;
  std::string format = "csv";
  std::string svg;
};

int run_eig(double u0, const CommonOpts& o, const std::string& echo) {
  ConvergeControl ctrl;
  ctrl.tol = o.tol;
  const ConvergedEstimate est = converge_lambda_max(u0, ctrl);
  std::printf("u0            = %s\n", format_number(est.u0).c_str());
  std::printf("lambda_max    = %s +/- %s\n", format_number(est.lambda_max).c_str(),
              format_number(est.error_estimate).c_str());
  std::printf("final grid    = n %d on [%s, %s]%s\n", est.n_final,
              format_number(u0).c_str(), format_number(est.u_max_final).c_str(),
              est.truncation_extrapolated ? " (truncation tail extrapolated)" : "");
  std::printf("history (n, u_max, lambda):\n");
  for (const ConvergeHistoryEntry& e : est.history)
    std::printf("  %6d  %10s  %s\n", e.n, format_number(e.u_max).c_str(),
                format_number(e.lambda).c_str());
  if (!o.out.empty())
    emit(o.out, o.format == "json" ? estimate_json(est, echo) : history_csv(est));
  return 0;
}

int run_sweep(const CommonOpts& o, const std::string& echo) {
  ConvergeControl ctrl;
  ctrl.tol = o.tol;
  const SweepResult sweep = sweep_lambda_max(range_grid(o.from, o.to, o.step), ctrl);
  emit(o.out, o.format == "json" ? sweep_json(sweep, echo) : sweep_csv(sweep));
  if (!o.svg.empty()) {
    SvgSeries s{"lambda_max", {}, {}};
    for (const SweepRow& row : sweep.rows)
      if (row.ok) {
        s.x.push_back(row.u0);
        s.y.push_back(row.lambda_max);
      }
    write_atomic(o.svg, line_chart_svg(with_classical_overlay({s}, o.from, o.to), "u0",
                                       "lambda_max"));
  }
  for (const SweepRow& row : sweep.rows)
    if (!row.ok)
      std::cerr << "sweep: u0=" << format_number(row.u0) << " failed: " << row.error << "\n";
  return 0;
}

int run_classical(const std::vector<double>& alphas, const CommonOpts& o,
                  const std::string& echo) {
  ConvergeControl ctrl;
  ctrl.tol = o.tol;
  const ClassicalFamily family = classical_family(range_grid(o.from, o.to, o.step), alphas, ctrl);
  emit(o.out, o.format == "json" ? classical_json(family, echo) : classical_csv(family));
  if (!o.svg.empty()) {
    std::vector<SvgSeries> series;
    for (std::size_t a = 0; a < family.alpha_values.size(); ++a) {
      SvgSeries s{"alpha=" + format_number(family.alpha_values[a]), {}, {}};
      for (const ClassicalCurvePoint& p : family.curves[a])
        if (p.ok) {
          s.x.push_back(p.u0);
          s.y.push_back(p.lambda_max);
        }
      series.push_back(std::move(s));
    }
    write_atomic(o.svg,
                 line_chart_svg(with_classical_overlay(std::move(series), o.from, o.to), "u0",
                                "lambda_max"));
  }
  return 0;
}

int run_crossing(double lo, double hi, const CommonOpts& o, const std::string& echo) {
  ConvergeControl ctrl;
  ctrl.tol = o.tol;
  const double u0_star = find_half_crossing(ctrl, {lo, hi});
  std::printf("u0_star = %s\n", format_number(u0_star).c_str());
  if (!o.out.empty()) {
    if (o.format == "json")
      emit(o.out, "{\n  \"meta\": {\"config\": \"" + echo + "\"},\n  \"u0_star\": " +
                      format_number(u0_star) + "\n}\n");
    else
      emit(o.out, "u0_star\n" + format_number(u0_star) + "\n");
  }
  return 0;
}

int run_symmetry(std::vector<double> offsets, double lo, double hi, bool have_u0, double u0_star,
                 const CommonOpts& o, const std::string& echo) {
  ConvergeControl ctrl;
  ctrl.tol = o.tol;
  if (!have_u0) u0_star = find_half_crossing(ctrl, {lo, hi});
  const SymmetryReport report = symmetry_residuals(u0_star, offsets, ctrl);
  std::printf("u0_star = %s\n", format_number(u0_star).c_str());
  std::printf("%10s %14s %14s  within bar?\n", "s", "residual", "error_bar");
  for (std::size_t i = 0; i < report.offsets.size(); ++i)
    std::printf("%10s %14s %14s  %s\n", format_number(report.offsets[i]).c_str(),
                format_number(report.residuals[i]).c_str(),
                format_number(report.error_bars[i]).c_str(),
                report.exceeds_bar[i] ? "no" : "yes");
  if (!o.out.empty())
    emit(o.out, o.format == "json" ? symmetry_json(report, echo) : symmetry_csv(report));
  return 0;
}

int run_validate(double u0, const CommonOpts& o) {
  ConvergeControl ctrl;
  ctrl.tol = o.tol;
  const ConvergedEstimate est = converge_lambda_max(u0, ctrl);
  OperatorSpec spec{u0, est.u_max_final, est.n_final, QuadScheme::UniformMidpoint, 8};
  const QuadratureGrid grid = build_grid(spec);
  const DiscretizedOperator op = assemble_operator(grid, spec);
  const SpectralResult top = largest_eigenpair(op, 1);
  const ExtremalState state = extremal_state(top, grid);
  const TransportResult tr = transport_backflow(state, PositionGrid{}, top.lambda_max);

  std::printf("u0                      = %s\n", format_number(u0).c_str());
  std::printf("spectral lambda (conv)  = %s +/- %s\n", format_number(est.lambda_max).c_str(),
              format_number(est.error_estimate).c_str());
  std::printf("matrix lambda (final)   = %s\n", format_number(top.lambda_max).c_str());
  std::printf("P(left) at start        = %s\n", format_number(tr.p_left_initial).c_str());
  std::printf("P(left) at end          = %s\n", format_number(tr.p_left_final).c_str());
  std::printf("transported backflow    = %s\n", format_number(tr.backflow).c_str());
  std::printf("|backflow - matrix|     = %s\n", format_number(tr.discrepancy).c_str());
  std::printf("|backflow - converged|  = %s\n",
              format_number(std::fabs(tr.backflow - est.lambda_max)).c_str());
  std::printf("position window leak    = %s\n", format_number(tr.mass_leak).c_str());
  return 0;
}

int run_convert(const PhysicalParams& params, bool with_lambda, const CommonOpts& o) {
  const double u0 = dimensionless_cutoff(params);
  std::printf("p0   = %s\n", format_number(params.p0).c_str());
  std::printf("T    = %s\n", format_number(params.T).c_str());
  std::printf("m    = %s\n", format_number(params.m).c_str());
  std::printf("hbar = %s\n", format_number(params.hbar).c_str());
  std::printf("u0   = %s\n", format_number(u0).c_str());
  if (with_lambda) {
    ConvergeControl ctrl;
    ctrl.tol = o.tol;
    const ConvergedEstimate est = converge_lambda_max(u0, ctrl);
    std::printf("lambda_max = %s +/- %s\n", format_number(est.lambda_max).c_str(),
                format_number(est.error_estimate).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum quantum probability backflow vs the dimensionless momentum cutoff"};
  app.require_subcommand(1);
  const std::string echo = echo_args(argc, argv);

  CommonOpts o;
  double u0 = 0.0;
  double bracket_lo = -2.0, bracket_hi = 0.0;
  std::vector<double> alphas = {1.0, 0.75, 0.5, 0.25, 0.125};
  std::vector<double> offsets = {0.25, 0.5, 1.0};
  PhysicalParams params{0.0, 1.0, 1.0, 1.0};
  bool with_lambda = false;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", o.out, "Output file path (stdout when omitted)");
    cmd->add_option("--format", o.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_range = [&](CLI::App* cmd, double lo, double hi) {
    o.from = lo;
    o.to = hi;
    cmd->add_option("--from", o.from, "Lowest u0");
    cmd->add_option("--to", o.to, "Highest u0");
    cmd->add_option("--step", o.step, "u0 grid step");
  };

  CLI::App* eig = app.add_subcommand("eig", "Converged lambda_max at one u0");
  eig->add_option("--u0", u0, "Dimensionless momentum cutoff")->required();
  eig->add_option("--tol", o.tol, "Convergence tolerance");
  add_output(eig);

  CLI::App* sweep = app.add_subcommand("sweep", "lambda_max over a u0 grid");
  add_range(sweep, -4.0, 4.0);
  sweep->add_option("--tol", o.tol, "Convergence tolerance");
  sweep->add_option("--svg", o.svg, "Also write a line-chart SVG to this path");
  add_output(sweep);

  CLI::App* classical = app.add_subcommand("classical", "Family lambda_max(u0/alpha)");
  add_range(classical, -2.0, 2.0);
  classical->add_option("--alphas", alphas, "Comma-separated alpha values in (0, 1]")
      ->delimiter(',');
  classical->add_option("--tol", o.tol, "Convergence tolerance");
  classical->add_option("--svg", o.svg, "Also write a line-chart SVG to this path");
  add_output(classical);

  CLI::App* crossing = app.add_subcommand("crossing", "Cutoff where lambda_max = 0.5");
  crossing->add_option("--bracket-lo", bracket_lo, "Lower bracket end");
  crossing->add_option("--bracket-hi", bracket_hi, "Upper bracket end");
  crossing->add_option("--tol", o.tol, "Convergence tolerance");
  add_output(crossing);

  CLI::App* symmetry = app.add_subcommand("symmetry", "Odd-symmetry residuals about u0_star");
  symmetry->add_option("--offsets", offsets, "Comma-separated offsets s >= 0")->delimiter(',');
  symmetry->add_option("--bracket-lo", bracket_lo, "Lower bracket end for the crossing");
  symmetry->add_option("--bracket-hi", bracket_hi, "Upper bracket end for the crossing");
  CLI::Option* sym_u0 = symmetry->add_option("--u0", u0, "Use this u0_star instead of solving");
  symmetry->add_option("--tol", o.tol, "Convergence tolerance");
  add_output(symmetry);

  CLI::App* validate = app.add_subcommand(
      "validate", "Cross-check lambda_max against wave-packet transport");
  validate->add_option("--u0", u0, "Dimensionless momentum cutoff")->required();
  validate->add_option("--tol", o.tol, "Convergence tolerance");

  CLI::App* convert = app.add_subcommand("convert", "Physical parameters to u0");
  convert->add_option("--p0", params.p0, "Momentum cutoff")->required();
  convert->add_option("--T", params.T, "Time interval")->check(CLI::PositiveNumber);
  convert->add_option("--m", params.m, "Mass")->check(CLI::PositiveNumber);
  convert->add_option("--hbar", params.hbar, "Planck constant / 2 pi")->check(CLI::PositiveNumber);
  convert->add_flag("--lambda", with_lambda, "Also converge lambda_max at the resulting u0");
  convert->add_option("--tol", o.tol, "Convergence tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (eig->parsed()) return run_eig(u0, o, echo);
    if (sweep->parsed()) return run_sweep(o, echo);
    if (classical->parsed()) return run_classical(alphas, o, echo);
    if (crossing->parsed()) return run_crossing(bracket_lo, bracket_hi, o, echo);
    if (symmetry->parsed())
      return run_symmetry(offsets, bracket_lo, bracket_hi, sym_u0->count() > 0, u0, o, echo);
    if (validate->parsed()) return run_validate(u0, o);
    if (convert->parsed()) return run_convert(params, with_lambda, o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    emit_error_record(cmd, e.what());
    return 1;
  } catch (const TruncationError& e) {
    emit_error_record(cmd, e.what());
    return 1;
  } catch (const std::domain_error& e) {
    emit_error_record(cmd, e.what());
    return 1;
  } catch (const std::runtime_error& e) {
    // write_atomic failures (unwritable output path) are usage errors
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
