#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "wlp/cdf.hpp"
#include "wlp/expression.hpp"
#include "wlp/joint_model.hpp"

namespace wlp {

inline constexpr std::size_t kMinOracleSamples = 1000;
inline constexpr double kDefaultSigmaMultiplier = 4.0;
/// Draws per seed stream; chunk c uses derive_seed(seed, c).
inline constexpr std::size_t kOracleChunkSize = 4096;

/// Empirical F_Y on a grid from N simulated joint lifetime vectors.
struct OracleReport {
  std::vector<double> grid;
  std::vector<double> empirical;
  /// sqrt(p(1 - p) / N) at each grid point.
  std::vector<double> standard_error;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Y = eval_ast(expr, X) for N draws of X. The result does not depend on
/// `workers`.
OracleReport estimate_cdf(const Expression& expr, const JointModel& model,
                          std::span<const double> grid, std::size_t samples, std::uint64_t seed,
                          std::size_t workers = 1);

struct OracleVerdict {
  double sigma = kDefaultSigmaMultiplier;
  /// analytic cdf - empirical cdf, per grid point.
  std::vector<double> deltas;
  /// Grid indices where |delta| > sigma * stderr + 1e-9.
  std::vector<std::size_t> flagged;
  double max_deviation = 0.0;
  bool passed = true;
};

OracleVerdict compare(std::span<const SurvivalPoint> analytic, const OracleReport& report,
                      double sigma = kDefaultSigmaMultiplier);

/// {"grid", "estimates", "stderr", "samples", "seed"} plus, when a verdict is
/// given, {"deltas", "flagged", "max_deviation", "sigma", "verdict"}.
nlohmann::json report_to_json(const OracleReport& report, const OracleVerdict* verdict = nullptr);

}  // namespace wlp
