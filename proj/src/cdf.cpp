#include "wlp/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wlp/error.hpp"

namespace wlp {

namespace {

constexpr double kOrderStatTolerance = 1e-12;

void check_arity(const SetFunction& w, std::size_t n, const char* what) {
  if (w.arity() != n) {
    throw ArityError(std::string(what) + ": set function has arity " +
                     std::to_string(w.arity()) + " but the model has " + std::to_string(n));
  }
}

double binomial_real(std::size_t n, std::size_t k) {
  return static_cast<double>(binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)));
}

void check_level_pmf(std::span<const double> p) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= -kProbabilityClampTolerance)) {
      throw DomainError("level-count probabilities must be nonnegative");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw DomainError("level-count probabilities sum to " + std::to_string(total));
  }
}

void check_order_stat_list(std::span<const double> f) {
  if (f.size() < 3) throw ArityError("order-statistic c.d.f. list needs n + 2 >= 3 entries");
  if (std::abs(f.front() - 1.0) > kOrderStatTolerance ||
      std::abs(f.back()) > kOrderStatTolerance) {
    throw DomainError("order-statistic c.d.f. list must start at F_(0) = 1 and end at F_(n+1) = 0");
  }
  for (std::size_t k = 1; k < f.size(); ++k) {
    if (f[k] > f[k - 1] + kOrderStatTolerance) {
      throw DomainError("order-statistic c.d.f. values must be nonincreasing in k");
    }
  }
}

// F_(0) = 1, F_(k) = p(0) + ... + p(n - k), F_(n+1) = 0.
std::vector<double> cdfs_from_level_pmf(std::span<const double> p) {
  const std::size_t n = p.size() - 1;
  std::vector<double> f(n + 2, 0.0);
  f[0] = 1.0;
  double running = 0.0;
  for (std::size_t k = n; k >= 1; --k) {
    running += p[n - k];
    f[k] = std::clamp(running, 0.0, 1.0);
  }
  return f;
}

}  // namespace

SurvivalPoint SurvivalPoint::from_survival(double y, double survival) {
  const double s = std::clamp(survival, 0.0, 1.0);
  return SurvivalPoint{y, 1.0 - s, s};
}

ThresholdIndicator threshold_indicator(const SetFunction& w, double y) {
  RealSetFunction omega(w.arity());
  for (Subset s = 0; s < omega.size(); ++s) omega[s] = w[s] > y ? 1.0 : 0.0;
  return ThresholdIndicator{y, std::move(omega)};
}

std::string_view route_name(Route route) {
  switch (route) {
    case Route::kAuto: return "auto";
    case Route::kGeneral: return "general";
    case Route::kIndependent: return "independent";
    case Route::kLatticePolynomial: return "lattice";
    case Route::kSymmetric: return "symmetric";
    case Route::kCardinalitySymmetric: return "cardinality-symmetric";
    case Route::kOrderStatistics: return "order-stats";
  }
  return "unknown";
}

std::optional<Route> parse_route(std::string_view name) {
  for (Route r : {Route::kAuto, Route::kGeneral, Route::kIndependent, Route::kLatticePolynomial,
                  Route::kSymmetric, Route::kCardinalitySymmetric, Route::kOrderStatistics}) {
    if (route_name(r) == name) return r;
  }
  return std::nullopt;
}

SurvivalPoint survival_general(const SetFunction& w, const IndicatorDistribution& dist) {
  check_arity(w, dist.arity(), "survival_general");
  const double y = dist.threshold();
  double survival = 0.0;
  for (Subset s = 0; s < dist.probs().size(); ++s) {
    if (w[s] > y) survival += dist[s];
  }
  return SurvivalPoint::from_survival(y, survival);
}

double cdf_by_complement(const SetFunction& w, const IndicatorDistribution& dist) {
  check_arity(w, dist.arity(), "cdf_by_complement");
  const double y = dist.threshold();
  double cdf = 0.0;
  for (Subset s = 0; s < dist.probs().size(); ++s) {
    if (w[s] <= y) cdf += dist[s];
  }
  return cdf;
}

SurvivalPoint survival_independent(const SetFunction& w, std::span<const MarginalCdf> marginals,
                                   double y) {
  check_arity(w, marginals.size(), "survival_independent");
  const std::size_t n = marginals.size();
  std::vector<double> fail(n);
  for (std::size_t i = 0; i < n; ++i) fail[i] = marginals[i].cdf(y);
  double survival = 0.0;
  for (Subset s = 0; s < w.table().size(); ++s) {
    if (!(w[s] > y)) continue;
    double term = 1.0;
    for (std::size_t i = 0; i < n; ++i) term *= ((s >> i) & 1u) ? 1.0 - fail[i] : fail[i];
    survival += term;
  }
  return SurvivalPoint::from_survival(y, survival);
}

SurvivalPoint survival_lattice_polynomial(const SetFunction& w, const IndicatorDistribution& dist) {
  check_arity(w, dist.arity(), "survival_lattice_polynomial");
  if (!is_lattice_polynomial(w)) {
    throw RouteError("set function is not a lattice polynomial");
  }
  const double y = dist.threshold();
  const double top = w.domain().top();
  if (!(top > y)) return SurvivalPoint::from_survival(y, 0.0);
  double survival = 0.0;
  for (Subset s = 0; s < dist.probs().size(); ++s) {
    if (w[s] == top) survival += dist[s];
  }
  return SurvivalPoint::from_survival(y, survival);
}

std::size_t threshold_index(std::span<const double> m, double y) {
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m[s] > y) return s;
  }
  return m.size();
}

SurvivalPoint survival_symmetric(std::span<const double> m, std::span<const double> level_pmf,
                                 double y) {
  if (m.size() != level_pmf.size() || m.empty()) {
    throw ArityError("profile and level-count p.m.f. must both have n + 1 entries");
  }
  for (std::size_t s = 1; s < m.size(); ++s) {
    if (m[s - 1] > m[s]) throw DomainError("profile m must be nondecreasing");
  }
  check_level_pmf(level_pmf);
  double survival = 0.0;
  for (std::size_t s = threshold_index(m, y); s < m.size(); ++s) survival += level_pmf[s];
  return SurvivalPoint::from_survival(y, survival);
}

std::vector<double> order_statistic_cdfs(const JointModel& model, double y) {
  return cdfs_from_level_pmf(level_count_pmf(model, y));
}

double order_statistic_cdf(const JointModel& model, std::size_t k, double y) {
  const std::size_t n = model.arity();
  if (k > n + 1) {
    throw DomainError("order statistic index " + std::to_string(k) + " outside [0, " +
                      std::to_string(n + 1) + "]");
  }
  if (k == 0) return 1.0;
  if (k == n + 1) return 0.0;
  return order_statistic_cdfs(model, y)[k];
}

double order_statistic_cdf_explicit(const JointModel& model, std::size_t k, double y) {
  const std::size_t n = model.arity();
  if (k > n + 1) {
    throw DomainError("order statistic index " + std::to_string(k) + " outside [0, " +
                      std::to_string(n + 1) + "]");
  }
  if (k == 0) return 1.0;
  if (k == n + 1) return 0.0;
  const RealSetFunction f = joint_cdf_set_function(model, y);
  const Subset all = full_set(n);
  double total = 0.0;
  for (Subset s = 0; s < f.size(); ++s) {
    const std::size_t size = cardinality(s);
    if (size < k) continue;
    const double sign = ((size - k) % 2 == 0) ? 1.0 : -1.0;
    total += sign * binomial_real(size - 1, k - 1) * f[all & ~s];
  }
  return total;
}

std::vector<double> level_pmf_from_order_stats(std::span<const double> order_stat_cdfs) {
  check_order_stat_list(order_stat_cdfs);
  const std::size_t n = order_stat_cdfs.size() - 2;
  std::vector<double> p(n + 1);
  for (std::size_t s = 0; s <= n; ++s) {
    p[s] = std::max(0.0, order_stat_cdfs[n - s] - order_stat_cdfs[n - s + 1]);
  }
  return p;
}

SurvivalPoint survival_cardinality_symmetric(const SetFunction& w, std::span<const double> g,
                                             double y) {
  const std::size_t n = w.arity();
  validate_exchangeable_weights(g, n);
  std::vector<double> alive_count(n + 1, 0.0);
  for (Subset s = 0; s < w.table().size(); ++s) {
    if (w[s] > y) alive_count[cardinality(s)] += 1.0;
  }
  double survival = 0.0;
  for (std::size_t s = 0; s <= n; ++s) survival += std::max(0.0, g[s]) * alive_count[s];
  return SurvivalPoint::from_survival(y, survival);
}

std::string_view validity_name(Validity validity) {
  switch (validity) {
    case Validity::kAssumesSymmetry: return "valid-under-symmetry";
    case Validity::kVerifiedSymmetric: return "verified-symmetric";
    case Validity::kSymmetryViolated: return "symmetry-violated";
  }
  return "unknown";
}

OrderStatSurvival survival_via_order_stats(const SetFunction& w,
                                           std::span<const double> order_stat_cdfs, double y) {
  check_order_stat_list(order_stat_cdfs);
  const std::size_t n = w.arity();
  if (order_stat_cdfs.size() != n + 2) {
    throw ArityError("order-statistic c.d.f. list must have n + 2 entries");
  }
  std::vector<double> alive_count(n + 1, 0.0);
  for (Subset s = 0; s < w.table().size(); ++s) {
    if (w[s] > y) alive_count[cardinality(s)] += 1.0;
  }
  double survival = 0.0;
  for (std::size_t s = 0; s <= n; ++s) {
    const double fraction = alive_count[s] / binomial_real(n, s);
    survival += fraction * (order_stat_cdfs[n - s] - order_stat_cdfs[n - s + 1]);
  }
  return {SurvivalPoint::from_survival(y, survival), Validity::kAssumesSymmetry};
}

OrderStatSurvival survival_via_order_stats(const SetFunction& w, const JointModel& model,
                                           double y, double tol) {
  check_arity(w, model.arity(), "survival_via_order_stats");
  OrderStatSurvival result = survival_via_order_stats(w, order_statistic_cdfs(model, y), y);
  result.validity = has_cardinality_symmetry(indicator_distribution(model, y), tol)
                        ? Validity::kVerifiedSymmetric
                        : Validity::kSymmetryViolated;
  return result;
}

Route resolve_auto_route(const SetFunction& w, const JointModel& model) {
  if (model.is_independent()) return Route::kIndependent;
  if (cardinality_profile(w)) return Route::kSymmetric;
  return Route::kGeneral;
}

namespace {

SurvivalPoint evaluate_route(const SetFunction& w, const JointModel& model,
                             const IndicatorDistribution& dist, Route route) {
  const double y = dist.threshold();
  switch (route) {
    case Route::kAuto:
      return evaluate_route(w, model, dist, resolve_auto_route(w, model));
    case Route::kGeneral:
      return survival_general(w, dist);
    case Route::kIndependent: {
      const auto* law = std::get_if<IndependentLaw>(&model.law());
      if (law == nullptr) throw RouteError("model is not independent");
      return survival_independent(w, law->marginals, y);
    }
    case Route::kLatticePolynomial:
      return survival_lattice_polynomial(w, dist);
    case Route::kSymmetric: {
      const auto m = cardinality_profile(w);
      if (!m) throw RouteError("set function is not cardinality-based");
      return survival_symmetric(*m, level_count_pmf(dist), y);
    }
    case Route::kCardinalitySymmetric:
      if (!has_cardinality_symmetry(dist, kSymmetryTolerance)) {
        throw RouteError("indicator law is not cardinality symmetric");
      }
      return survival_cardinality_symmetric(w, exchangeable_weights(dist), y);
    case Route::kOrderStatistics: {
      if (!has_cardinality_symmetry(dist, kSymmetryTolerance)) {
        throw RouteError("indicator law is not cardinality symmetric");
      }
      return survival_via_order_stats(w, cdfs_from_level_pmf(level_count_pmf(dist)), y).point;
    }
  }
  throw RouteError("unknown route");
}

bool route_applies(const SetFunction& w, const JointModel& model,
                   const IndicatorDistribution& dist, Route route) {
  switch (route) {
    case Route::kAuto:
    case Route::kGeneral:
      return true;
    case Route::kIndependent:
      return model.is_independent();
    case Route::kLatticePolynomial:
      return is_lattice_polynomial(w);
    case Route::kSymmetric:
      return cardinality_profile(w).has_value();
    case Route::kCardinalitySymmetric:
    case Route::kOrderStatistics:
      return has_cardinality_symmetry(dist, kSymmetryTolerance);
  }
  return false;
}

}  // namespace

SurvivalPoint survival_by_route(const SetFunction& w, const JointModel& model, double y,
                                Route route) {
  check_arity(w, model.arity(), "survival_by_route");
  if (route == Route::kIndependent || (route == Route::kAuto && model.is_independent())) {
    const auto* law = std::get_if<IndependentLaw>(&model.law());
    if (law == nullptr) throw RouteError("model is not independent");
    return survival_independent(w, law->marginals, y);
  }
  return evaluate_route(w, model, indicator_distribution(model, y), route);
}

RouteComparison compare_routes(const SetFunction& w, const JointModel& model, double y) {
  check_arity(w, model.arity(), "compare_routes");
  const IndicatorDistribution dist = indicator_distribution(model, y);
  RouteComparison out;
  for (Route r : {Route::kGeneral, Route::kIndependent, Route::kLatticePolynomial,
                  Route::kSymmetric, Route::kCardinalitySymmetric, Route::kOrderStatistics}) {
    if (route_applies(w, model, dist, r)) out.results.emplace_back(r, evaluate_route(w, model, dist, r));
  }
  for (std::size_t i = 0; i < out.results.size(); ++i) {
    for (std::size_t j = i + 1; j < out.results.size(); ++j) {
      out.max_deviation = std::max(out.max_deviation, std::abs(out.results[i].second.survival -
                                                               out.results[j].second.survival));
    }
  }
  return out;
}

std::vector<SurvivalPoint> cdf_curve(const SetFunction& w, const JointModel& model,
                                     std::span<const double> grid, Route route) {
  if (grid.empty()) throw DomainError("cdf_curve needs a nonempty grid");
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw DomainError("cdf_curve grid must be sorted ascending");
  }
  check_arity(w, model.arity(), "cdf_curve");
  if (route == Route::kAuto) route = resolve_auto_route(w, model);
  if (route == Route::kSymmetric && !cardinality_profile(w)) {
    throw RouteError("set function is not cardinality-based");
  }
  if (route == Route::kLatticePolynomial && !is_lattice_polynomial(w)) {
    throw RouteError("set function is not a lattice polynomial");
  }
  std::vector<SurvivalPoint> curve;
  curve.reserve(grid.size());
  for (double y : grid) curve.push_back(survival_by_route(w, model, y, route));
  return curve;
}

}  // namespace wlp
