#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "support/generators.hpp"
#include "wlp/cdf.hpp"
#include "wlp/error.hpp"
#include "wlp/oracle.hpp"

using namespace wlp;
namespace wt = wlp::testing;

namespace {

const LatticeDomain kLifetimes(0, std::numeric_limits<double>::infinity());

Expression x(std::size_t i) { return Expression::projection(i); }

}  // namespace

TEST_SUITE("mc-oracle") {

TEST_CASE("series of two exponentials") {
  const Expression series = Expression::meet(x(1), x(2));
  const JointModel model = JointModel::iid(2, MarginalCdf::exponential(1));
  const std::vector<double> grid{0.3};
  const OracleReport r = estimate_cdf(series, model, grid, 1000000, 2024);
  const double p = 1 - std::exp(-0.6);
  CHECK(std::abs(r.empirical[0] - p) <= 4 * std::sqrt(p * (1 - p) / 1e6));
  CHECK(r.samples == 1000000);
  CHECK(r.standard_error[0] == doctest::Approx(std::sqrt(r.empirical[0] * (1 - r.empirical[0]) / 1e6)));
}

TEST_CASE("constant system is an exact step") {
  const JointModel model = JointModel::iid(2, MarginalCdf::exponential(1));
  const std::vector<double> grid{0.5, 1.4999, 1.5, 3.0};
  const OracleReport r = estimate_cdf(Expression::constant(1.5), model, grid, 1000, 1);
  CHECK(r.empirical == std::vector<double>{0, 0, 1, 1});
  for (double se : r.standard_error) CHECK(se == 0);
}

TEST_CASE("determinism and worker independence") {
  const Expression e = Expression::join(Expression::meet(x(1), x(2)), x(3));
  const JointModel model = JointModel::random_shift(3, MarginalCdf::uniform(0, 1), MarginalCdf::weibull(1.5, 1));
  const std::vector<double> grid{0.2, 0.6, 1.0, 1.8};
  const OracleReport a = estimate_cdf(e, model, grid, 30000, 77);
  const OracleReport b = estimate_cdf(e, model, grid, 30000, 77);
  const OracleReport c = estimate_cdf(e, model, grid, 30000, 77, 3);
  CHECK(a.empirical == b.empirical);
  CHECK(a.empirical == c.empirical);
  CHECK(report_to_json(a).dump() == report_to_json(c).dump());
  CHECK_FALSE(estimate_cdf(e, model, grid, 30000, 78).empirical == a.empirical);
  for (std::size_t j = 1; j < grid.size(); ++j) CHECK(a.empirical[j] >= a.empirical[j - 1]);
}

TEST_CASE("preconditions") {
  const JointModel model = JointModel::iid(2, MarginalCdf::exponential(1));
  const std::vector<double> grid{0.5};
  CHECK_THROWS_AS(estimate_cdf(x(1), model, grid, 999, 1), DomainError);
  CHECK_THROWS_AS(estimate_cdf(x(3), model, grid, 1000, 1), ArityError);
  Generator gen(3);
  CHECK_THROWS_AS(estimate_cdf(x(1), wt::random_exchangeable(gen, 2), grid, 1000, 1), ModelError);
  const std::vector<double> unsorted{0.5, 0.1};
  CHECK_THROWS_AS(estimate_cdf(x(1), model, unsorted, 1000, 1), DomainError);
}

TEST_CASE("compare threshold logic") {
  OracleReport r;
  r.grid = {0.1, 0.2, 0.3};
  r.empirical = {0.1, 0.5, 0.9};
  r.standard_error = {0.01, 0.01, 0.01};
  r.samples = 1000;
  std::vector<SurvivalPoint> exact;
  for (std::size_t j = 0; j < 3; ++j) exact.push_back(SurvivalPoint::from_survival(r.grid[j], 1 - r.empirical[j]));
  for (double sigma : {0.0, 1.0, 4.0}) CHECK(compare(exact, r, sigma).passed);

  std::vector<SurvivalPoint> off = exact;
  off[1] = SurvivalPoint::from_survival(0.2, 1 - 0.6);
  const OracleVerdict v = compare(off, r, 4.0);
  CHECK_FALSE(v.passed);
  CHECK(v.flagged == std::vector<std::size_t>{1});
  CHECK(v.max_deviation == doctest::Approx(0.1));
  const auto json = report_to_json(r, &v);
  CHECK(json["verdict"] == "fail");
  CHECK(json["flagged"][0] == 1);

  std::vector<SurvivalPoint> shorter(exact.begin(), exact.begin() + 2);
  CHECK_THROWS_AS(compare(shorter, r, 4.0), DomainError);
  std::vector<SurvivalPoint> moved = exact;
  moved[2].y = 0.35;
  CHECK_THROWS_AS(compare(moved, r, 4.0), DomainError);
}

TEST_CASE("independent Weibull mixture against the product route") {
  const JointModel model = JointModel::independent(
      {MarginalCdf::weibull(0.8, 1.0), MarginalCdf::weibull(1.5, 2.0), MarginalCdf::weibull(3.0, 1.2)});
  const Expression e = Expression::join(Expression::meet(x(1), x(2)), Expression::meet(x(2), x(3)));
  const std::vector<double> grid{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0};
  const auto analytic = cdf_curve(canonical_set_function(e, kLifetimes, 3), model, grid,
                                  Route::kIndependent);
  const OracleReport r = estimate_cdf(e, model, grid, 1000000, 5150);
  CHECK(compare(analytic, r, 4.0).passed);
}

}  // TEST_SUITE
