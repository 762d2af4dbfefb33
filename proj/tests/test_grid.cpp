#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "backflow/grid.hpp"
#include "doctest.h"

using namespace backflow;

TEST_CASE("uniform midpoint nodes and weights") {
  const QuadratureGrid g = build_grid({0.0, 10.0, 5});
  REQUIRE(g.size() == 5);
  const double expect_nodes[] = {1.0, 3.0, 5.0, 7.0, 9.0};
  for (int i = 0; i < 5; ++i) {
    CHECK(g.nodes[i] == doctest::Approx(expect_nodes[i]).epsilon(1e-15));
    CHECK(g.weights[i] == doctest::Approx(2.0).epsilon(1e-15));
  }
}

TEST_CASE("two point gauss legendre on [-1,1]") {
  OperatorSpec spec{-1.0, 1.0, 2, QuadScheme::CompositeGaussLegendre, 2};
  const QuadratureGrid g = build_grid(spec);
  REQUIRE(g.size() == 2);
  const double x = 1.0 / std::sqrt(3.0);
  CHECK(g.nodes[0] == doctest::Approx(-x).epsilon(1e-14));
  CHECK(g.nodes[1] == doctest::Approx(x).epsilon(1e-14));
  CHECK(g.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.weights[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gauss legendre rule integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre_rule(8, x, w);
  REQUIRE(x.size() == 8);
  // exact for degree <= 15 on [-1, 1]
  for (int k = 0; k <= 15; ++k) {
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += w[i] * std::pow(x[i], k);
    const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(std::fabs(s - exact) <= 1e-13);
  }
}

TEST_CASE("weights sum to the interval length") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> lo_dist(-10.0, 5.0);
  std::uniform_real_distribution<double> len_dist(0.5, 30.0);
  std::uniform_int_distribution<int> n_dist(1, 400);
  for (int trial = 0; trial < 50; ++trial) {
    const double u0 = lo_dist(rng);
    const double u_max = u0 + len_dist(rng);
    const int n = n_dist(rng);
    for (QuadScheme s : {QuadScheme::UniformMidpoint, QuadScheme::CompositeGaussLegendre}) {
      const QuadratureGrid g = build_grid({u0, u_max, n, s});
      double sum = 0.0;
      for (double w : g.weights) {
        CHECK(w > 0.0);
        sum += w;
      }
      CHECK(sum == doctest::Approx(u_max - u0).epsilon(1e-12));
      for (int i = 1; i < g.size(); ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
      CHECK(g.nodes.front() > u0);
      CHECK(g.nodes.back() < u_max);
    }
  }
}

TEST_CASE("composite scheme node count within one panel of the request") {
  for (int n : {1, 7, 8, 9, 100, 978}) {
    const QuadratureGrid g = build_grid({0.0, 16.0, n, QuadScheme::CompositeGaussLegendre, 8});
    CHECK(g.size() >= n);
    CHECK(g.size() < n + 8);
    CHECK(g.size() % 8 == 0);
  }
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(build_grid({0.0, 10.0, 0}), std::domain_error);
  CHECK_THROWS_AS(build_grid({0.0, 10.0, -4}), std::domain_error);
  CHECK_THROWS_AS(build_grid({3.0, 3.0, 10}), std::domain_error);
  CHECK_THROWS_AS(build_grid({3.0, 1.0, 10}), std::domain_error);
  std::vector<double> x, w;
  CHECK_THROWS_AS(gauss_legendre_rule(0, x, w), std::domain_error);
}
