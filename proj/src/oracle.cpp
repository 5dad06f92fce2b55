#include "wlp/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "wlp/error.hpp"
#include "wlp/rng.hpp"

namespace wlp {

namespace {

// Number of draws in each chunk with Y <= grid[j].
std::vector<std::uint64_t> count_chunk(const Expression& expr, const JointModel& model,
                                       std::span<const double> grid, std::size_t draws,
                                       std::uint64_t seed) {
  Generator gen(seed);
  const SampleMatrix x = sample_lifetimes(model, draws, gen);
  std::vector<double> y(draws);
  for (std::size_t r = 0; r < draws; ++r) y[r] = eval_ast(expr, x.row(r));
  std::sort(y.begin(), y.end());
  std::vector<std::uint64_t> counts(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    counts[j] = std::upper_bound(y.begin(), y.end(), grid[j]) - y.begin();
  }
  return counts;
}

}  // namespace

OracleReport estimate_cdf(const Expression& expr, const JointModel& model,
                          std::span<const double> grid, std::size_t samples, std::uint64_t seed,
                          std::size_t workers) {
  if (!model.is_samplable()) {
    throw ModelError("a " + std::string(model.kind_name()) + " model cannot be sampled");
  }
  if (samples < kMinOracleSamples) {
    throw DomainError("oracle needs at least " + std::to_string(kMinOracleSamples) +
                      " samples, got " + std::to_string(samples));
  }
  if (expr.arity() > model.arity()) {
    throw ArityError("system uses x" + std::to_string(expr.arity()) + " but the model has " +
                     std::to_string(model.arity()) + " components");
  }
  if (grid.empty()) throw DomainError("empty grid");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (std::isnan(grid[j]) || (j > 0 && grid[j] < grid[j - 1])) {
      throw DomainError("grid must be ascending and free of NaN");
    }
  }

  const std::size_t chunks = (samples + kOracleChunkSize - 1) / kOracleChunkSize;
  std::vector<std::vector<std::uint64_t>> per_chunk(chunks);
  auto run = [&](std::size_t c) {
    const std::size_t draws = std::min(kOracleChunkSize, samples - c * kOracleChunkSize);
    per_chunk[c] = count_chunk(expr, model, grid, draws, derive_seed(seed, c));
  };

  workers = std::clamp<std::size_t>(workers, 1, chunks);
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t c = next++; c < chunks; c = next++) run(c);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  OracleReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.samples = samples;
  report.seed = seed;
  const double n = static_cast<double>(samples);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::uint64_t total = 0;
    for (const auto& counts : per_chunk) total += counts[j];
    const double p = static_cast<double>(total) / n;
    report.empirical.push_back(p);
    report.standard_error.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return report;
}

OracleVerdict compare(std::span<const SurvivalPoint> analytic, const OracleReport& report,
                      double sigma) {
  if (!(sigma >= 0.0)) throw DomainError("sigma multiplier must be nonnegative");
  if (analytic.size() != report.grid.size()) {
    throw DomainError("grid mismatch: " + std::to_string(analytic.size()) + " analytic points vs " +
                      std::to_string(report.grid.size()) + " oracle points");
  }
  OracleVerdict verdict;
  verdict.sigma = sigma;
  for (std::size_t j = 0; j < analytic.size(); ++j) {
    if (analytic[j].y != report.grid[j]) {
      throw DomainError("grid mismatch at point " + std::to_string(j));
    }
    const double delta = analytic[j].cdf - report.empirical[j];
    verdict.deltas.push_back(delta);
    verdict.max_deviation = std::max(verdict.max_deviation, std::abs(delta));
    if (std::abs(delta) > sigma * report.standard_error[j] + 1e-9) verdict.flagged.push_back(j);
  }
  verdict.passed = verdict.flagged.empty();
  return verdict;
}

nlohmann::json report_to_json(const OracleReport& report, const OracleVerdict* verdict) {
  nlohmann::json out = {
      {"grid", report.grid},
      {"estimates", report.empirical},
      {"stderr", report.standard_error},
      {"samples", report.samples},
      {"seed", report.seed},
  };
  if (verdict != nullptr) {
    out["deltas"] = verdict->deltas;
    out["flagged"] = verdict->flagged;
    out["max_deviation"] = verdict->max_deviation;
    out["sigma"] = verdict->sigma;
    out["verdict"] = verdict->passed ? "pass" : "fail";
  }
  return out;
}

}  // namespace wlp
