#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "backflow/sweep.hpp"
#include "doctest.h"

using namespace backflow;

namespace {

ConvergeControl fast_ctrl() {
  ConvergeControl ctrl;
  ctrl.tol = 1e-3;
  return ctrl;
}

}  // namespace

TEST_CASE("single point sweep hits the zero-cutoff maximum") {
  const SweepResult r = sweep_lambda_max({0.0}, fast_ctrl());
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].ok);
  CHECK(std::fabs(r.rows[0].lambda_max - 0.0384517) <= 2e-3);
}

TEST_CASE("seven point sweep is strictly decreasing") {
  const SweepResult r = sweep_lambda_max({-3, -2, -1, 0, 1, 2, 3}, fast_ctrl());
  REQUIRE(r.rows.size() == 7);
  for (const SweepRow& row : r.rows) {
    REQUIRE(row.ok);
    CHECK(row.lambda_max > 0.0);
    CHECK(row.lambda_max < 1.0);
  }
  for (std::size_t i = 1; i < r.rows.size(); ++i)
    CHECK(r.rows[i].lambda_max < r.rows[i - 1].lambda_max);
}

TEST_CASE("deep negative cutoff approaches but never reaches one") {
  const SweepResult r = sweep_lambda_max({-4.0}, fast_ctrl());
  REQUIRE(r.rows[0].ok);
  CHECK(r.rows[0].lambda_max > 0.9);
  CHECK(r.rows[0].lambda_max < 1.0);
  // independent fine-grid reference: 0.9999998083481
  CHECK(std::fabs(r.rows[0].lambda_max - 0.9999998083481) <= 1e-4);
}

TEST_CASE("row level failures do not abort the sweep") {
  ConvergeControl ctrl;
  ctrl.n_max = 50;
  const SweepResult r = sweep_lambda_max({-1.0, 0.0, 1.0}, ctrl);
  REQUIRE(r.rows.size() == 3);
  for (const SweepRow& row : r.rows) {
    CHECK(!row.ok);
    CHECK(!row.error.empty());
  }
}

TEST_CASE("sweep input validation") {
  CHECK_THROWS_AS(sweep_lambda_max({}, fast_ctrl()), std::domain_error);
  CHECK_THROWS_AS(sweep_lambda_max({0.0, 0.0}, fast_ctrl()), std::domain_error);
  CHECK_THROWS_AS(sweep_lambda_max({1.0, -1.0}, fast_ctrl()), std::domain_error);
}

TEST_CASE("classical reference step") {
  CHECK(classical_step(-0.5) == 1.0);
  CHECK(classical_step(0.5) == 0.0);
  CHECK(!classical_step(0.0).has_value());
}

TEST_CASE("identity reparametrization reproduces the base sweep") {
  const ConvergeControl ctrl = fast_ctrl();
  const std::vector<double> u0s = {-1.5, -0.5, 0.5};
  const SweepResult base = sweep_lambda_max(u0s, ctrl);
  const ClassicalFamily fam = classical_family(u0s, {1.0}, ctrl);
  REQUIRE(fam.curves.size() == 1);
  for (std::size_t i = 0; i < u0s.size(); ++i) {
    CHECK(fam.curves[0][i].ok);
    CHECK(fam.curves[0][i].lambda_max == base.rows[i].lambda_max);
  }
}

TEST_CASE("all curves pin to the same value at zero cutoff") {
  const ClassicalFamily fam = classical_family({-0.5, 0.0, 0.5}, {1.0, 0.5, 0.25}, fast_ctrl());
  REQUIRE(fam.curves.size() == 3);
  const double pinned = fam.curves[0][1].lambda_max;
  for (const auto& curve : fam.curves) {
    CHECK(curve[1].u0 == 0.0);
    CHECK(curve[1].lambda_max == pinned);
  }
}

TEST_CASE("rescaling maps curve points to base evaluations") {
  const ConvergeControl ctrl = fast_ctrl();
  const ClassicalFamily fam = classical_family({-0.5}, {0.125}, ctrl);
  const double direct = converge_lambda_max(-4.0, ctrl).lambda_max;
  CHECK(fam.curves[0][0].lambda_max == direct);
}

TEST_CASE("alpha validation") {
  CHECK_THROWS_AS(classical_family({0.0}, {0.0}, fast_ctrl()), std::domain_error);
  CHECK_THROWS_AS(classical_family({0.0}, {-0.5}, fast_ctrl()), std::domain_error);
  CHECK_THROWS_AS(classical_family({0.0}, {1.5}, fast_ctrl()), std::domain_error);
}

TEST_CASE("half crossing with default bracket") {
  const double u0_star = find_half_crossing(fast_ctrl());
  CHECK(std::fabs(u0_star - (-1.16)) <= 0.05);

  const double tighter = find_half_crossing(fast_ctrl(), {-1.3, -1.0});
  CHECK(std::fabs(tighter - u0_star) <= 0.05);
}

TEST_CASE("half crossing rejects a bracket without sign change") {
  CHECK_THROWS_AS(find_half_crossing(fast_ctrl(), {0.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(find_half_crossing(fast_ctrl(), {-1.0, -2.0}), std::domain_error);
}

TEST_CASE("symmetry residual report") {
  const SymmetryReport rep = symmetry_residuals(-1.16, {0.0, 1.16}, fast_ctrl());
  REQUIRE(rep.residuals.size() == 2);
  REQUIRE(rep.error_bars.size() == 2);
  CHECK(rep.residuals[0] == 0.0);
  CHECK(rep.error_bars[0] > 0.0);
  // r(1.16) = [lam(0) - 0.5] + [lam(-2.32) - 0.5]; the second term was
  // checked against an independent fine-grid value 0.9803347873
  CHECK(std::fabs(rep.residuals[1] - 0.0188) <= 5e-3);
}

TEST_CASE("symmetry offsets must be non-negative") {
  CHECK_THROWS_AS(symmetry_residuals(-1.16, {-0.25}, fast_ctrl()), std::domain_error);
  CHECK_THROWS_AS(symmetry_residuals(-1.16, {std::nan("")}, fast_ctrl()), std::domain_error);
}
