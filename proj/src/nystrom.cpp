#include "backflow/nystrom.hpp"

#include <cmath>
#include <stdexcept>

#include "backflow/kernel.hpp"

namespace backflow {

namespace {

void check_consistent(const QuadratureGrid& grid, const OperatorSpec& spec) {
  if (grid.nodes.empty() || grid.nodes.size() != grid.weights.size())
    throw std::domain_error("assemble_operator: empty or inconsistent grid");
  if (grid.nodes.front() <= spec.u0 || grid.nodes.back() >= spec.u_max)
    throw std::domain_error("assemble_operator: grid nodes outside (u0, u_max)");
}

// Fill row i for j >= i; the mirror copy keeps the matrix exactly symmetric.
inline void fill_row(std::vector<double>& m, const QuadratureGrid& g, int n, int i) {
  const double ui = g.nodes[i];
  const double sqi = std::sqrt(g.weights[i]);
  // w_i directly on the diagonal: sqrt(w_i)^2 can be off by one ulp
  m[static_cast<std::size_t>(i) * n + i] = g.weights[i] * kernel_eval(ui, ui);
  for (int j = i + 1; j < n; ++j) {
    const double val = sqi * std::sqrt(g.weights[j]) * kernel_eval(ui, g.nodes[j]);
    m[static_cast<std::size_t>(i) * n + j] = val;
    m[static_cast<std::size_t>(j) * n + i] = val;
  }
}

}  // namespace

DiscretizedOperator assemble_operator(const QuadratureGrid& grid, const OperatorSpec& spec) {
  check_consistent(grid, spec);
  const int n = grid.size();
  DiscretizedOperator op{std::vector<double>(static_cast<std::size_t>(n) * n), grid, spec};
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i)
    fill_row(op.matrix, grid, n, i);
  return op;
}

DiscretizedOperator assemble_operator_serial(const QuadratureGrid& grid, const OperatorSpec& spec) {
  check_consistent(grid, spec);
  const int n = grid.size();
  DiscretizedOperator op{std::vector<double>(static_cast<std::size_t>(n) * n), grid, spec};
  for (int i = 0; i < n; ++i)
    fill_row(op.matrix, grid, n, i);
  return op;
}

std::vector<double> assemble_plain_nystrom(const QuadratureGrid& grid) {
  const int n = grid.size();
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[static_cast<std::size_t>(i) * n + j] =
          grid.weights[j] * kernel_eval(grid.nodes[i], grid.nodes[j]);
  return m;
}

}  // namespace backflow
