#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "wlp/error.hpp"
#include "wlp/joint_model.hpp"
#include "wlp/marginal.hpp"
#include "wlp/set_algebra.hpp"

using namespace wlp;
namespace wt = wlp::testing;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

JointModel uniform_pair() {
  return JointModel::independent({MarginalCdf::uniform(0, 1), MarginalCdf::uniform(0, 1)});
}

}  // namespace

TEST_SUITE("joint-models") {

TEST_CASE("marginal laws") {
  const MarginalCdf e = MarginalCdf::exponential(2);
  CHECK(e.cdf(0.5) == doctest::Approx(1 - std::exp(-1.0)));
  CHECK(e.cdf(-1) == 0);
  CHECK(e.quantile(e.cdf(0.7)) == doctest::Approx(0.7));
  const MarginalCdf w = MarginalCdf::weibull(2, 3);
  CHECK(w.cdf(3) == doctest::Approx(1 - std::exp(-1.0)));
  const MarginalCdf u = MarginalCdf::uniform(1, 3);
  CHECK(u.cdf(2) == doctest::Approx(0.5));
  CHECK(u.cdf(3) == 1);
  const MarginalCdf p = MarginalCdf::point_mass(2);
  CHECK(p.cdf(1.999) == 0);
  CHECK(p.cdf(2) == 1);
  const MarginalCdf emp = MarginalCdf::empirical({3, 1, 2, 2});
  CHECK(emp.cdf(1) == 0.25);
  CHECK(emp.cdf(2) == 0.75);
  CHECK(emp.quantile(0.5) == 2);
  CHECK(emp.atoms().size() == 3);
  CHECK(emp.is_discrete());
  CHECK_FALSE(e.is_discrete());
  CHECK(e.describe() == "exp(2)");
  CHECK_THROWS_AS(MarginalCdf::exponential(0), DomainError);
  CHECK_THROWS_AS(MarginalCdf::uniform(2, 1), DomainError);
  CHECK_THROWS_AS(MarginalCdf::empirical({}), DomainError);
}

TEST_CASE("independent indicator law") {
  const IndicatorDistribution dist = indicator_distribution(uniform_pair(), 0.5);
  for (Subset s = 0; s < 4; ++s) CHECK(dist[s] == doctest::Approx(0.25));
  CHECK(joint_cdf_at_characteristic(uniform_pair(), 0b01, 0.5) == doctest::Approx(0.5));
  CHECK(joint_cdf_at_characteristic(uniform_pair(), 0b11, 0.1) == 1);
  CHECK(joint_cdf_at_characteristic(uniform_pair(), 0b00, kInf) == 1);
  const IndicatorDistribution top = indicator_distribution(uniform_pair(), kInf);
  CHECK(top[0] == 1);
  CHECK_THROWS_AS(indicator_distribution(uniform_pair(), std::nan("")), DomainError);
}

TEST_CASE("comonotone sample") {
  SampleMatrix sample(4, 2);
  const double values[] = {1, 2, 3, 4};
  for (std::size_t r = 0; r < 4; ++r) sample.row(r)[0] = sample.row(r)[1] = values[r];
  const IndicatorDistribution dist = indicator_distribution(JointModel::empirical_sample(sample), 2.0);
  CHECK(dist[0b00] == 0.5);
  CHECK(dist[0b11] == 0.5);
  CHECK(dist[0b01] == 0);
  CHECK(dist[0b10] == 0);
}

TEST_CASE("level counts") {
  const JointModel iid = JointModel::iid(3, MarginalCdf::uniform(0, 1));
  const auto p = level_count_pmf(iid, 0.5);
  const double expected[] = {0.125, 0.375, 0.375, 0.125};
  for (int s = 0; s < 4; ++s) CHECK(p[s] == doctest::Approx(expected[s]));
  const auto top = level_count_pmf(iid, kInf);
  CHECK(top[0] == 1);
  for (int s = 1; s < 4; ++s) CHECK(top[s] == 0);

  const std::vector<double> g{0.4, 0.1, 0.05, 0.15};
  const JointModel ex = JointModel::exchangeable_indicator(3, [g](double) { return g; });
  const auto pe = level_count_pmf(ex, 0.3);
  CHECK(pe[0] == doctest::Approx(0.4));
  CHECK(pe[1] == doctest::Approx(0.3));
  CHECK(pe[2] == doctest::Approx(0.15));
  CHECK(pe[3] == doctest::Approx(0.15));
}

TEST_CASE("probability generating function") {
  const JointModel model = JointModel::independent(
      {MarginalCdf::exponential(1), MarginalCdf::uniform(0, 2), MarginalCdf::weibull(1.5, 1)});
  const double y = 0.6;
  const IndicatorDistribution dist = indicator_distribution(model, y);
  CHECK(pgf_evaluate(dist, std::vector<double>{1, 1, 1}) == doctest::Approx(1.0));
  CHECK(pgf_evaluate(dist, std::vector<double>{0, 0, 0}) ==
        doctest::Approx(joint_cdf_at_characteristic(model, 0, y)));
  const std::vector<double> z{0.3, -0.7, 0.9};
  const double F[] = {MarginalCdf::exponential(1).cdf(y), MarginalCdf::uniform(0, 2).cdf(y),
                      MarginalCdf::weibull(1.5, 1).cdf(y)};
  double product = 1.0;
  for (int i = 0; i < 3; ++i) product *= F[i] + z[i] * (1 - F[i]);
  CHECK(pgf_evaluate(dist, z) == doctest::Approx(product).epsilon(1e-12));
  CHECK_THROWS(pgf_evaluate(dist, std::vector<double>{1.5, 0, 0}));
}

TEST_CASE("cardinality symmetry detection") {
  const JointModel iid = JointModel::iid(4, MarginalCdf::weibull(1.3, 2));
  for (double y : {0.1, 0.8, 2.0, 5.0}) {
    CHECK(has_cardinality_symmetry(indicator_distribution(iid, y), 1e-12));
  }
  // F1(y) = 0.3 and F2(y) = 0.6 at y = 0.3
  const JointModel asym =
      JointModel::independent({MarginalCdf::uniform(0, 1), MarginalCdf::uniform(0, 0.5)});
  const IndicatorDistribution dist = indicator_distribution(asym, 0.3);
  CHECK_FALSE(has_cardinality_symmetry(dist, 1e-12));
  const auto witness = cardinality_symmetry_witness(dist, 1e-12);
  REQUIRE(witness);
  CHECK(cardinality(witness->first) == 1);
  CHECK(cardinality(witness->second) == 1);
  const JointModel single = JointModel::independent({MarginalCdf::exponential(3)});
  CHECK(has_cardinality_symmetry(indicator_distribution(single, 0.2), 1e-12));
}

TEST_CASE("sampling") {
  const JointModel model = JointModel::iid(2, MarginalCdf::exponential(1));
  const SampleMatrix a = sample_lifetimes(model, 4, 99);
  const SampleMatrix b = sample_lifetimes(model, 4, 99);
  CHECK(a.rows() == 4);
  CHECK(a.cols() == 2);
  CHECK(a == b);
  CHECK_FALSE(a == sample_lifetimes(model, 4, 100));

  SampleMatrix base(3, 2);
  for (std::size_t r = 0; r < 3; ++r) base.row(r)[0] = base.row(r)[1] = static_cast<double>(r);
  const SampleMatrix boot = sample_lifetimes(JointModel::empirical_sample(base), 3, 5);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(boot(r, 0) == boot(r, 1));
    CHECK((boot(r, 0) == 0 || boot(r, 0) == 1 || boot(r, 0) == 2));
  }

  const JointModel shift =
      JointModel::random_shift(3, MarginalCdf::uniform(0, 1), MarginalCdf::point_mass(0));
  const SampleMatrix s = sample_lifetimes(shift, 50, 7);
  for (std::size_t r = 0; r < s.rows(); ++r) {
    CHECK(s(r, 0) == s(r, 1));
    CHECK(s(r, 1) == s(r, 2));
  }
  Generator gen(1);
  CHECK_THROWS_AS(sample_lifetimes(wt::random_exchangeable(gen, 2), 3, 1), ModelError);
}

TEST_CASE("exchangeable weight validation") {
  CHECK_NOTHROW(validate_exchangeable_weights(std::vector<double>{0.25, 0.25, 0.25}, 2));
  CHECK_THROWS_AS(validate_exchangeable_weights(std::vector<double>{0.5, 0.5, 0.5}, 2), ModelError);
  CHECK_THROWS_AS(validate_exchangeable_weights(std::vector<double>{-0.1, 0.3, 0.5}, 2), ModelError);
  CHECK_THROWS_AS(validate_exchangeable_weights(std::vector<double>{1.0}, 2), ModelError);
}

TEST_CASE("joint c.d.f. table with negative mass is rejected") {
  // F(e_{1}) < F(e_{}) gives probs({1}) = -0.7.
  const JointModel bad = JointModel::joint_cdf_table(2, [](Subset s, double) {
    if (s == 0) return 0.9;
    return 0.2;
  });
  CHECK_THROWS_AS(indicator_distribution(bad, 1.0), ModelError);
}

TEST_CASE("property: joint-c.d.f. values are the zeta transform of indicator probabilities") {
  Generator gen(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + gen.index(5);
    for (const JointModel& model : wt::one_of_each_kind(gen, n)) {
      for (double y : {0.05, 0.4, 0.9, 1.7, 3.0}) {
        const IndicatorDistribution dist = indicator_distribution(model, y);
        const RealSetFunction z = zeta_transform(dist.probs());
        double total = 0.0;
        for (Subset s = 0; s < z.size(); ++s) {
          CHECK(dist[s] >= 0.0);
          total += dist[s];
          CHECK(std::abs(z[s] - joint_cdf_at_characteristic(model, s, y)) <= 1e-9);
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("property: level-count p.m.f. by both routes") {
  Generator gen(32);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + gen.index(6);
    for (const JointModel& model : wt::one_of_each_kind(gen, n)) {
      for (double y : {0.2, 0.7, 1.5}) {
        const auto a = level_count_pmf(model, y);
        const auto b = level_count_pmf_from_joint_cdf(model, y);
        REQUIRE(a.size() == n + 1);
        for (std::size_t s = 0; s <= n; ++s) CHECK(std::abs(a[s] - b[s]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("property: empirical indicator law matches direct counting") {
  Generator gen(33);
  const std::size_t n = 3;
  const SampleMatrix sample = wt::random_dependent_sample(gen, n, 300);
  const JointModel model = JointModel::empirical_sample(sample);
  for (double y : {0.3, 1.0}) {
    const IndicatorDistribution dist = indicator_distribution(model, y);
    std::vector<double> counts(8, 0.0);
    for (std::size_t r = 0; r < sample.rows(); ++r) {
      Subset s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sample(r, i) > y) s |= 1u << i;
      }
      counts[s] += 1.0 / 300.0;
    }
    for (Subset s = 0; s < 8; ++s) CHECK(dist[s] == doctest::Approx(counts[s]).epsilon(1e-12));
  }
}

TEST_CASE("property: random shift with a discrete shared part is an exact mixture") {
  // Z uniform on {0, 0.5}; given Z the components are i.i.d. exponential.
  const JointModel model = JointModel::random_shift(2, MarginalCdf::empirical({0.0, 0.5}),
                                                    MarginalCdf::exponential(1));
  const double y = 0.8;
  const IndicatorDistribution dist = indicator_distribution(model, y);
  double both_alive = 0.0;
  for (double z : {0.0, 0.5}) both_alive += 0.5 * std::exp(-2 * (y - z));
  CHECK(dist[0b11] == doctest::Approx(both_alive).epsilon(1e-12));
}

TEST_CASE("property: random shift with a continuous shared part") {
  // Z ~ Exp(1), Y_i ~ Exp(2): Pr(min X > y) = E[exp(-4 (y - Z)^+)] in closed form.
  const JointModel model =
      JointModel::random_shift(2, MarginalCdf::exponential(1), MarginalCdf::exponential(2));
  const double y = 0.9;
  const double expected = std::exp(-4 * y) * (std::exp(3 * y) - 1) / 3 + std::exp(-y);
  CHECK(std::abs(indicator_distribution(model, y)[0b11] - expected) <= 1e-10);
}

}  // TEST_SUITE
