#pragma once

#include <vector>

#include "backflow/grid.hpp"

namespace backflow {

// Symmetrized Nystrom matrix M_ij = sqrt(w_i w_j) K(u_i, u_j), stored
// dense row-major.  Similar to the plain Nystrom matrix w_j K(u_i, u_j),
// so the two share eigenvalues, but this form is symmetric by
// construction.
struct DiscretizedOperator {
  std::vector<double> matrix;  // row-major n x n
  QuadratureGrid grid;
  OperatorSpec spec;

  int n() const { return grid.size(); }
  double at(int i, int j) const { return matrix[static_cast<std::size_t>(i) * n() + j]; }
};

// OpenMP-parallel assembly (rows are independent).  Entry arithmetic is
// identical to the serial version, so the two produce the same bits.
DiscretizedOperator assemble_operator(const QuadratureGrid& grid, const OperatorSpec& spec);

// Serial reference assembly, kept for testing and benchmarking.
DiscretizedOperator assemble_operator_serial(const QuadratureGrid& grid, const OperatorSpec& spec);

// Plain (unsymmetrized) Nystrom matrix w_j K(u_i, u_j); used only to
// check similarity of the two formulations.
std::vector<double> assemble_plain_nystrom(const QuadratureGrid& grid);

}  // namespace backflow
