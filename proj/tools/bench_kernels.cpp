// Timing comparison of the serial reference kernels against the
// OpenMP-parallel ones: matrix assembly and position-density synthesis.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "backflow/eigensolve.hpp"
#include "backflow/nystrom.hpp"
#include "backflow/transport.hpp"

using namespace backflow;
using clock_type = std::chrono::steady_clock;

static double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP: not enabled\n");
#endif

  std::printf("\n%-28s %8s %12s %12s %8s\n", "kernel", "n", "serial [s]", "parallel [s]",
              "speedup");

  for (int n : {500, 1000, 2000, 4000}) {
    OperatorSpec spec{0.0, 16.0, n};
    const QuadratureGrid grid = build_grid(spec);

    auto t0 = clock_type::now();
    const DiscretizedOperator op_s = assemble_operator_serial(grid, spec);
    const double ts = seconds_since(t0);

    t0 = clock_type::now();
    const DiscretizedOperator op_p = assemble_operator(grid, spec);
    const double tp = seconds_since(t0);

    // the parallel path must reproduce the serial bits
    bool identical = op_s.matrix == op_p.matrix;
    std::printf("%-28s %8d %12.4f %12.4f %7.2fx%s\n", "assemble_operator", n, ts, tp,
                ts / tp, identical ? "" : "  MISMATCH");
  }

  for (int n : {500, 1000, 2000}) {
    OperatorSpec spec{0.0, 16.0, n};
    const QuadratureGrid grid = build_grid(spec);
    const DiscretizedOperator op = assemble_operator(grid, spec);
    const SpectralResult top = largest_eigenpair(op, 1);
    const ExtremalState state = extremal_state(top, grid);
    PositionGrid y;
    y.y_min = -100.0;
    y.y_max = 100.0;
    y.leak_tol = 1.0;  // timing only; the narrow window is deliberate

    auto t0 = clock_type::now();
    const TransportResult r_s = transport_backflow_serial(state, y, top.lambda_max);
    const double ts = seconds_since(t0);

    t0 = clock_type::now();
    const TransportResult r_p = transport_backflow(state, y, top.lambda_max);
    const double tp = seconds_since(t0);

    bool identical = r_s.backflow == r_p.backflow;
    std::printf("%-28s %8d %12.4f %12.4f %7.2fx%s\n", "transport_backflow", n, ts, tp,
                ts / tp, identical ? "" : "  MISMATCH");
  }
  return 0;
}
