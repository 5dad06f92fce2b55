#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wlp/rng.hpp"

namespace wlp {

/// Univariate lifetime law F(x) = Pr(X <= x).
class MarginalCdf {
 public:
  struct Exponential { double rate; };
  struct Weibull { double shape; double scale; };
  struct Uniform { double lo; double hi; };
  struct PointMass { double at; };
  /// Right-continuous step function through a sorted sample.
  struct EmpiricalStep { std::vector<double> values; };
  using Kind = std::variant<Exponential, Weibull, Uniform, PointMass, EmpiricalStep>;

  /// Factories validate parameters and throw DomainError.
  static MarginalCdf exponential(double rate);
  static MarginalCdf weibull(double shape, double scale);
  static MarginalCdf uniform(double lo, double hi);
  static MarginalCdf point_mass(double at);
  static MarginalCdf empirical(std::vector<double> values);

  double cdf(double x) const;
  /// Generalized inverse inf{x : F(x) >= u} for u in [0, 1).
  double quantile(double u) const;
  double sample(Generator& gen) const { return quantile(gen.uniform01()); }

  /// Atoms (location, mass) for the discrete kinds; empty otherwise.
  std::vector<std::pair<double, double>> atoms() const;
  bool is_discrete() const;
  /// Points where F has a jump or a kink.
  std::vector<double> breakpoints() const;

  const Kind& kind() const { return kind_; }
  std::string describe() const;

 private:
  explicit MarginalCdf(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

}  // namespace wlp
