#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "backflow/eigensolve.hpp"
#include "backflow/kernel.hpp"
#include "backflow/nystrom.hpp"
#include "doctest.h"

using namespace backflow;

TEST_CASE("single node matrix") {
  QuadratureGrid g;
  g.nodes = {1.0};
  g.weights = {2.0};
  const DiscretizedOperator op = assemble_operator(g, {0.0, 2.0, 1});
  REQUIRE(op.n() == 1);
  CHECK(op.at(0, 0) == doctest::Approx(-4.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(op.at(0, 0) == doctest::Approx(-1.2732395).epsilon(1e-6));
}

TEST_CASE("two node hand evaluation") {
  const OperatorSpec spec{0.0, 2.0, 2};
  const QuadratureGrid g = build_grid(spec);
  const DiscretizedOperator op = assemble_operator(g, spec);
  // nodes 0.5, 1.5, weights 1; off-diagonal -(1/pi) sin(2)
  CHECK(op.at(0, 1) == doctest::Approx(-std::sin(2.0) / std::numbers::pi).epsilon(1e-14));
  CHECK(op.at(0, 1) == doctest::Approx(-0.289438).epsilon(1e-5));
  CHECK(op.at(0, 1) == op.at(1, 0));
  CHECK(op.at(0, 1) == kernel_eval(0.5, 1.5));  // sqrt(1*1) weight factor
}

TEST_CASE("assembled matrix is exactly symmetric with exact diagonal") {
  const OperatorSpec spec{-1.5, 11.0, 157};
  const QuadratureGrid g = build_grid(spec);
  const DiscretizedOperator op = assemble_operator(g, spec);
  for (int i = 0; i < op.n(); ++i) {
    CHECK(op.at(i, i) == g.weights[i] * kernel_eval(g.nodes[i], g.nodes[i]));
    for (int j = i + 1; j < op.n(); ++j) CHECK(op.at(i, j) == op.at(j, i));
  }
}

TEST_CASE("parallel assembly matches the serial reference bitwise") {
  for (const OperatorSpec spec : {OperatorSpec{0.0, 16.0, 311},
                                  OperatorSpec{-4.0, 12.0, 500},
                                  OperatorSpec{2.0, 18.0, 64, QuadScheme::CompositeGaussLegendre}}) {
    const QuadratureGrid g = build_grid(spec);
    const DiscretizedOperator a = assemble_operator(g, spec);
    const DiscretizedOperator b = assemble_operator_serial(g, spec);
    CHECK(a.matrix == b.matrix);
  }
}

TEST_CASE("symmetrized and plain formulations share eigenvalues") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> lo_dist(-5.0, 2.0);
  std::uniform_real_distribution<double> len_dist(1.0, 12.0);
  std::uniform_int_distribution<int> n_dist(2, 20);
  for (int trial = 0; trial < 25; ++trial) {
    const double u0 = lo_dist(rng);
    OperatorSpec spec{u0, u0 + len_dist(rng), n_dist(rng)};
    const QuadratureGrid g = build_grid(spec);
    const DiscretizedOperator op = assemble_operator(g, spec);

    const std::vector<double> sym = all_eigenvalues(op);
    const std::vector<double> plain = assemble_plain_nystrom(g);
    const std::vector<double> unsym = general_eigenvalues_real(plain, g.size());
    REQUIRE(sym.size() == unsym.size());
    for (std::size_t i = 0; i < sym.size(); ++i)
      CHECK(std::fabs(sym[i] - unsym[i]) <= 1e-10);
  }
}

TEST_CASE("lambda_max error decays at least quadratically under refinement") {
  // fixed window, node count doubled three times, compared against a
  // much finer reference
  const double u0 = 0.0, u_max = 8.0;
  const OperatorSpec ref_spec{u0, u_max, 3200};
  const double ref =
      largest_eigenpair(assemble_operator(build_grid(ref_spec), ref_spec)).lambda_max;

  double prev_err = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int n = 100 << level;
    const OperatorSpec spec{u0, u_max, n};
    const double lam = largest_eigenpair(assemble_operator(build_grid(spec), spec)).lambda_max;
    const double err = std::fabs(lam - ref);
    if (level > 0) CHECK(err <= prev_err / 3.0);  // at least ~quadratic decay
    prev_err = err;
  }
}
