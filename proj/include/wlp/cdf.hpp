#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "wlp/joint_model.hpp"
#include "wlp/lattice.hpp"
#include "wlp/marginal.hpp"
#include "wlp/set_algebra.hpp"

namespace wlp {

/// F_Y(y) together with the reliability 1 - F_Y(y).
struct SurvivalPoint {
  double y = 0.0;
  double cdf = 0.0;
  double survival = 0.0;

  /// Clamps the survival probability into [0, 1] and sets cdf = 1 - survival.
  static SurvivalPoint from_survival(double y, double survival);
};

/// omega_y(S) = Ind(w(S) > y).
struct ThresholdIndicator {
  double threshold;
  RealSetFunction omega;
};
ThresholdIndicator threshold_indicator(const SetFunction& w, double y);

/// Ways of evaluating the system survival function. Each has its own
/// preconditions; kAuto picks the most specific applicable one.
enum class Route {
  kAuto,
  kGeneral,
  kIndependent,
  kLatticePolynomial,
  kSymmetric,
  kCardinalitySymmetric,
  kOrderStatistics,
};
std::string_view route_name(Route route);
std::optional<Route> parse_route(std::string_view name);

/// Tolerance used to decide that an indicator law is cardinality symmetric.
inline constexpr double kSymmetryTolerance = 1e-12;

/// sum over S with w(S) > y of Pr(chi(y) = eps_S). The threshold is dist.threshold().
SurvivalPoint survival_general(const SetFunction& w, const IndicatorDistribution& dist);

/// sum over S with w(S) <= y of Pr(chi(y) = eps_S), computed independently of
/// survival_general.
double cdf_by_complement(const SetFunction& w, const IndicatorDistribution& dist);

/// Product-form evaluation for independent lifetimes with the given marginals.
SurvivalPoint survival_independent(const SetFunction& w, std::span<const MarginalCdf> marginals,
                                   double y);

/// sum over S with w(S) = b of Pr(chi(y) = eps_S), times Ind(b > y). Throws
/// RouteError when w is not a lattice polynomial.
SurvivalPoint survival_lattice_polynomial(const SetFunction& w, const IndicatorDistribution& dist);

/// Smallest s in 0..n with m(s) > y, or n + 1 when there is none.
std::size_t threshold_index(std::span<const double> m, double y);

/// sum_{s >= s(y)} Pr(|chi(y)| = s) for a cardinality-based w(S) = m(|S|).
SurvivalPoint survival_symmetric(std::span<const double> m, std::span<const double> level_pmf,
                                 double y);

/// F_(k)(y) = Pr(|chi(y)| <= n - k) for 0 <= k <= n + 1.
double order_statistic_cdf(const JointModel& model, std::size_t k, double y);

/// F_(k)(y) by the alternating sum over joint-c.d.f. values
/// sum_{|S| >= k} (-1)^{|S|-k} C(|S|-1, k-1) F(e_{[n]\S}^{y,b}).
/// k = 0 and k = n + 1 return the conventional 1 and 0.
double order_statistic_cdf_explicit(const JointModel& model, std::size_t k, double y);

/// F_(0)(y), ..., F_(n+1)(y).
std::vector<double> order_statistic_cdfs(const JointModel& model, double y);

/// Pr(|chi(y)| = s) = F_(n-s)(y) - F_(n-s+1)(y).
std::vector<double> level_pmf_from_order_stats(std::span<const double> order_stat_cdfs);

/// sum_s g(s) #{S : |S| = s, w(S) > y} for exchangeable indicator weights g.
SurvivalPoint survival_cardinality_symmetric(const SetFunction& w, std::span<const double> g,
                                             double y);

enum class Validity {
  kAssumesSymmetry,    // caller did not check the model
  kVerifiedSymmetric,  // model checked: value equals the general route
  kSymmetryViolated,   // model checked: value is not the system survival
};
std::string_view validity_name(Validity validity);

struct OrderStatSurvival {
  SurvivalPoint point;
  Validity validity;
};

/// sum_s wbar_s [F_(n-s)(y) - F_(n-s+1)(y)] with wbar_s the fraction of
/// s-subsets where w(S) > y. Equals the system survival exactly when the
/// indicators are cardinality symmetric; never fails on asymmetric input.
OrderStatSurvival survival_via_order_stats(const SetFunction& w,
                                           std::span<const double> order_stat_cdfs, double y);
/// Same, reading F_(k) from the model and labelling the result after
/// checking cardinality symmetry at tolerance tol.
OrderStatSurvival survival_via_order_stats(const SetFunction& w, const JointModel& model,
                                           double y, double tol = kSymmetryTolerance);

/// kIndependent for independent models, else kSymmetric when w is
/// cardinality-based, else kGeneral.
Route resolve_auto_route(const SetFunction& w, const JointModel& model);

/// Survival at y by one route; throws RouteError if it does not apply.
SurvivalPoint survival_by_route(const SetFunction& w, const JointModel& model, double y,
                                Route route);

struct RouteComparison {
  std::vector<std::pair<Route, SurvivalPoint>> results;
  /// Largest |survival_r - survival_r'| over all pairs of applicable routes.
  double max_deviation = 0.0;
};
/// Evaluates every route whose preconditions hold at y.
RouteComparison compare_routes(const SetFunction& w, const JointModel& model, double y);

/// One point per grid value. The grid must be nonempty and ascending.
std::vector<SurvivalPoint> cdf_curve(const SetFunction& w, const JointModel& model,
                                     std::span<const double> grid, Route route = Route::kAuto);

}  // namespace wlp
