#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wlp/marginal.hpp"
#include "wlp/rng.hpp"
#include "wlp/set_algebra.hpp"
#include "wlp/subset.hpp"

namespace wlp {

/// Row-major matrix of joint lifetime draws, one row per draw.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  SampleMatrix(std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// g_y(0..n): probability of one particular indicator pattern with s survivors.
using ExchangeableWeights = std::function<std::vector<double>(double y)>;
/// (S, y) -> F(e_S^{y,b}) = Pr(X_i <= y for every i outside S).
using JointCdfEvaluator = std::function<double(Subset s, double y)>;

struct IndependentLaw {
  std::vector<MarginalCdf> marginals;
};
struct ExchangeableIndicatorLaw {
  std::size_t arity;
  ExchangeableWeights g;
};
struct EmpiricalSampleLaw {
  SampleMatrix sample;
};
struct JointCdfTableLaw {
  std::size_t arity;
  JointCdfEvaluator evaluator;
};
/// X_i = Z + Y_i with Z ~ shared and Y_i ~ individual, all independent.
struct RandomShiftLaw {
  std::size_t arity;
  MarginalCdf shared;
  MarginalCdf individual;
};

/// Provider of indicator distributions for n component lifetimes.
/// Immutable; copies share the underlying law.
class JointModel {
 public:
  using Law = std::variant<IndependentLaw, ExchangeableIndicatorLaw, EmpiricalSampleLaw,
                           JointCdfTableLaw, RandomShiftLaw>;

  static JointModel independent(std::vector<MarginalCdf> marginals);
  static JointModel iid(std::size_t n, const MarginalCdf& marginal);
  static JointModel exchangeable_indicator(std::size_t n, ExchangeableWeights g);
  static JointModel empirical_sample(SampleMatrix sample);
  static JointModel joint_cdf_table(std::size_t n, JointCdfEvaluator evaluator);
  static JointModel random_shift(std::size_t n, MarginalCdf shared, MarginalCdf individual);

  std::size_t arity() const { return arity_; }
  const Law& law() const { return *law_; }
  /// Independent, EmpiricalSample and RandomShift specify a full joint law.
  bool is_samplable() const;
  bool is_independent() const { return std::holds_alternative<IndependentLaw>(*law_); }
  std::string kind_name() const;

 private:
  JointModel(std::size_t arity, Law law)
      : arity_(arity), law_(std::make_shared<const Law>(std::move(law))) {}
  std::size_t arity_;
  std::shared_ptr<const Law> law_;
};

/// Slack below zero tolerated (then clamped) in indicator probabilities.
inline constexpr double kProbabilityClampTolerance = 1e-12;
/// Slack tolerated when Moebius inversion of a joint-c.d.f. table goes negative.
inline constexpr double kJointCdfClampTolerance = 1e-9;
/// Allowed deviation of the total mass from one.
inline constexpr double kNormalizationTolerance = 1e-9;

/// Pr(chi(y) = eps_S) for every S, where chi_i(y) = Ind(X_i > y).
class IndicatorDistribution {
 public:
  /// Clamps entries in [-clamp_tolerance, 0) to zero and renormalizes.
  /// Throws ModelError for larger negatives or a total off by more than
  /// kNormalizationTolerance.
  IndicatorDistribution(double threshold, RealSetFunction probs,
                        double clamp_tolerance = kProbabilityClampTolerance);

  double threshold() const { return threshold_; }
  std::size_t arity() const { return probs_.arity(); }
  const RealSetFunction& probs() const { return probs_; }
  /// Coefficient of prod_{i in S} z_i in the indicator p.g.f.
  double operator[](Subset s) const { return probs_[s]; }

 private:
  double threshold_;
  RealSetFunction probs_;
};

IndicatorDistribution indicator_distribution(const JointModel& model, double y);

/// Pr(X_i <= y for all i outside S); 1 when S = [n].
double joint_cdf_at_characteristic(const JointModel& model, Subset s, double y);

/// The whole set function S -> F(e_S^{y,b}).
RealSetFunction joint_cdf_set_function(const JointModel& model, double y);

/// Pr(|chi(y)| = s), s = 0..n, by summing indicator probabilities.
std::vector<double> level_count_pmf(const IndicatorDistribution& dist);
std::vector<double> level_count_pmf(const JointModel& model, double y);
/// Same quantity by the alternating binomial sum over joint-c.d.f. values.
std::vector<double> level_count_pmf_from_joint_cdf(const JointModel& model, double y);

/// G(z, y) = sum_S probs(S) prod_{i in S} z_i; requires |z_i| <= 1.
double pgf_evaluate(const IndicatorDistribution& dist, std::span<const double> z);

/// A pair S, S' of equal size whose probabilities differ by more than tol,
/// choosing the pair with the largest gap.
std::optional<std::pair<Subset, Subset>> cardinality_symmetry_witness(
    const IndicatorDistribution& dist, double tol);
bool has_cardinality_symmetry(const IndicatorDistribution& dist, double tol);

/// g(s) = mean of probs(S) over |S| = s; equals g_y when the model is
/// cardinality symmetric.
std::vector<double> exchangeable_weights(const IndicatorDistribution& dist);

/// Checks g >= 0 and sum_s C(n, s) g(s) = 1; throws ModelError otherwise.
void validate_exchangeable_weights(std::span<const double> g, std::size_t n);

/// count x n draws from a samplable model (EmpiricalSample is bootstrapped).
/// Throws ModelError for ExchangeableIndicator and JointCdfTable.
SampleMatrix sample_lifetimes(const JointModel& model, std::size_t count, Generator& gen);
SampleMatrix sample_lifetimes(const JointModel& model, std::size_t count, std::uint64_t seed);

}  // namespace wlp
