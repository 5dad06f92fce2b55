// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 1 if any fails.
// Usage: wlp_acceptance <path-to-wlpcdf>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "wlp/cdf.hpp"
#include "wlp/error.hpp"
#include "wlp/oracle.hpp"
#include "wlp/parser.hpp"

using namespace wlp;
namespace wt = wlp::testing;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const LatticeDomain kLifetimes(0, kInf);

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Pooled quantiles of a pilot sample (or of a fixed range when the model
// cannot be sampled), so grids sit where the c.d.f. moves.
std::vector<double> quantile_grid(std::vector<double> values, std::size_t points) {
  std::sort(values.begin(), values.end());
  std::vector<double> grid;
  for (std::size_t j = 0; j < points; ++j) {
    const double q = 0.05 + 0.9 * static_cast<double>(j) / static_cast<double>(points - 1);
    grid.push_back(values[static_cast<std::size_t>(q * static_cast<double>(values.size() - 1))]);
  }
  return grid;
}

std::vector<double> component_grid(const JointModel& model, std::size_t points, std::uint64_t seed) {
  const SampleMatrix x = sample_lifetimes(model, 2000, seed);
  return quantile_grid(std::vector<double>(x.data().begin(), x.data().end()), points);
}

std::vector<double> system_grid(const Expression& e, const JointModel& model, std::size_t points,
                                std::uint64_t seed) {
  const SampleMatrix x = sample_lifetimes(model, 4000, seed);
  std::vector<double> y;
  for (std::size_t r = 0; r < x.rows(); ++r) y.push_back(eval_ast(e, x.row(r)));
  auto grid = quantile_grid(y, points);
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// A random AST, or with some probability a symmetric one, always of depth <= 6.
Expression test_system(Generator& gen, std::size_t n, bool constants) {
  if (wt::coin(gen, 0.3)) {
    const std::size_t k = 1 + gen.index(n);
    const Expression e = order_statistic_expression(k, n, kLifetimes);
    if (e.depth() <= 6) return e;
  }
  wt::ExpressionOptions opt;
  opt.arity = n;
  opt.max_depth = 6;
  opt.constants = constants;
  return wt::random_expression(gen, opt);
}

Outcome route_agreement() {
  const auto start = Clock::now();
  Generator gen(1001);
  const std::array<Route, 5> routes{Route::kGeneral, Route::kIndependent, Route::kLatticePolynomial,
                                    Route::kSymmetric, Route::kCardinalitySymmetric};
  double worst = 0.0;
  std::size_t comparisons = 0;
  std::array<std::size_t, 5> used{};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen.index(6);
    const Expression e = test_system(gen, n, wt::coin(gen));
    const SetFunction w = canonical_set_function(e, kLifetimes, n);
    JointModel model = JointModel::iid(1, MarginalCdf::exponential(1));
    switch (trial % 3) {
      case 0:
        model = wt::coin(gen, 0.25) ? JointModel::iid(n, wt::random_marginal(gen))
                                    : wt::random_independent(gen, n);
        break;
      case 1: model = JointModel::empirical_sample(wt::random_dependent_sample(gen, n, 10000)); break;
      default: model = wt::random_random_shift(gen, n); break;
    }
    for (double y : component_grid(model, 11, derive_seed(1001, trial))) {
      std::vector<double> values;
      for (std::size_t r = 0; r < routes.size(); ++r) {
        try {
          values.push_back(survival_by_route(w, model, y, routes[r]).survival);
          ++used[r];
        } catch (const RouteError&) {
        }
      }
      for (std::size_t a = 0; a < values.size(); ++a) {
        for (std::size_t b = a + 1; b < values.size(); ++b) {
          worst = std::max(worst, std::abs(values[a] - values[b]));
          ++comparisons;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  Outcome out;
  out.pass = worst <= 1e-9 && elapsed < 60.0 && comparisons > 0;
  for (std::size_t u : used) out.pass = out.pass && u > 0;
  std::ostringstream d;
  d << "200 pairs, " << comparisons << " route pairs, max deviation " << fmt(worst)
    << " (<= 1e-9), route uses general/independent/lattice/symmetric/card-symmetric = " << used[0]
    << "/" << used[1] << "/" << used[2] << "/" << used[3] << "/" << used[4] << ", " << fmt(elapsed)
    << " s (< 60 s)";
  out.detail = d.str();
  return out;
}

Outcome closed_forms() {
  double worst = 0.0;
  const std::vector<Route> routes{Route::kAuto, Route::kGeneral, Route::kIndependent,
                                  Route::kLatticePolynomial, Route::kSymmetric,
                                  Route::kCardinalitySymmetric, Route::kOrderStatistics};
  auto check_all = [&](const SetFunction& w, const JointModel& model, double y, double expected) {
    for (Route r : routes) {
      worst = std::max(worst, std::abs(survival_by_route(w, model, y, r).survival - expected));
    }
  };
  for (std::size_t k = 1; k <= 10; ++k) {
    const SetFunction series =
        canonical_set_function(order_statistic_expression(1, k, kLifetimes), kLifetimes, k);
    const SetFunction parallel =
        canonical_set_function(order_statistic_expression(k, k, kLifetimes), kLifetimes, k);
    for (double rate : {0.5, 1.0, 2.0}) {
      const JointModel exp_model = JointModel::iid(k, MarginalCdf::exponential(rate));
      for (double y : {0.0, 0.05, 0.3, 1.0, 2.5}) {
        check_all(series, exp_model, y, std::exp(-static_cast<double>(k) * rate * y));
      }
    }
    const JointModel uni = JointModel::iid(k, MarginalCdf::uniform(0, 1));
    for (double y : {0.0, 0.1, 0.25, 0.5, 0.9, 1.0}) {
      check_all(parallel, uni, y, 1.0 - std::pow(y, static_cast<double>(k)));
    }
  }
  for (std::size_t n = 1; n <= 10; ++n) {
    const JointModel uni = JointModel::iid(n, MarginalCdf::uniform(0, 1));
    for (std::size_t k = 1; k <= n; ++k) {
      const SetFunction w = canonical_set_function(
          order_statistic_expression(n - k + 1, n, kLifetimes), kLifetimes, n);
      for (double y : {0.0, 0.1, 0.33, 0.5, 0.77, 1.0}) {
        check_all(w, uni, y, wt::binomial_tail(static_cast<int>(n), 1.0 - y, static_cast<int>(k)));
      }
    }
  }
  return {worst <= 1e-12, "series, parallel and k-out-of-n for n <= 10 over 7 routes, max error " +
                              fmt(worst) + " (<= 1e-12)"};
}

Outcome mobius_machinery() {
  Generator gen(3003);
  double round_trip = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const RealSetFunction f = wt::random_real_table(gen, 10);
    const RealSetFunction back = mobius_transform(zeta_transform(f));
    for (Subset s = 0; s < f.size(); ++s) round_trip = std::max(round_trip, std::abs(back[s] - f[s]));
  }
  double consistency = 0.0;
  std::size_t models = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 1 + gen.index(6);
    for (const JointModel& model : wt::one_of_each_kind(gen, n)) {
      ++models;
      for (double y : {0.1, 0.5, 1.0, 2.0}) {
        const RealSetFunction z = zeta_transform(indicator_distribution(model, y).probs());
        for (Subset s = 0; s < z.size(); ++s) {
          consistency = std::max(consistency, std::abs(z[s] - joint_cdf_at_characteristic(model, s, y)));
        }
      }
    }
  }
  return {round_trip <= 1e-12 && consistency <= 1e-9,
          "round trip on 100 tables at n = 10: " + fmt(round_trip) +
              " (<= 1e-12); zeta of indicator law vs joint c.d.f. over " + std::to_string(models) +
              " models of all 5 kinds: " + fmt(consistency) + " (<= 1e-9)"};
}

Outcome order_statistics() {
  Generator gen(4004);
  double explicit_gap = 0.0;
  double pmf_gap = 0.0;
  for (std::size_t n = 1; n <= 8; ++n) {
    for (const JointModel& model : wt::one_of_each_kind(gen, n)) {
      for (double y : {0.15, 0.6, 1.2, 2.4}) {
        const auto f = order_statistic_cdfs(model, y);
        for (std::size_t k = 0; k <= n + 1; ++k) {
          explicit_gap = std::max(explicit_gap,
                                  std::abs(order_statistic_cdf(model, k, y) -
                                           order_statistic_cdf_explicit(model, k, y)));
        }
        const auto p = level_pmf_from_order_stats(f);
        const auto q = level_count_pmf(model, y);
        for (std::size_t s = 0; s <= n; ++s) pmf_gap = std::max(pmf_gap, std::abs(p[s] - q[s]));
      }
    }
  }
  return {explicit_gap <= 1e-9 && pmf_gap <= 1e-9,
          "n = 1..8, all 5 model kinds, k = 0..n+1: explicit vs level-count " + fmt(explicit_gap) +
              ", level p.m.f. " + fmt(pmf_gap) + " (<= 1e-9)"};
}

Outcome order_statistic_theorem() {
  Generator gen(5005);
  double forward = 0.0;
  std::size_t cases = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + gen.index(6);
    const Expression e = test_system(gen, n, wt::coin(gen));
    const SetFunction w = canonical_set_function(e, kLifetimes, n);
    const JointModel model = trial % 2 == 0 ? JointModel::iid(n, wt::random_marginal(gen))
                                            : wt::random_random_shift(gen, n);
    for (double y : component_grid(model, 6, derive_seed(5005, trial))) {
      const auto via = survival_via_order_stats(w, model, y);
      const double general = survival_general(w, indicator_distribution(model, y)).survival;
      forward = std::max(forward, std::abs(via.point.survival - general));
      ++cases;
    }
  }
  // F1(0.3) = 0.3, F2(0.3) = 0.6
  const JointModel asym =
      JointModel::independent({MarginalCdf::uniform(0, 1), MarginalCdf::uniform(0, 0.5)});
  const SetFunction first = canonical_set_function(Expression::projection(1), kLifetimes, 2);
  const double via = survival_via_order_stats(first, asym, 0.3).point.survival;
  const double general = survival_general(first, indicator_distribution(asym, 0.3)).survival;
  const bool converse = std::abs(via - general) >= 0.1 && std::abs(via - 0.55) <= 1e-12 &&
                        std::abs(general - 0.7) <= 1e-12;
  return {forward <= 1e-9 && converse,
          "i.i.d. and random-shift: max |order-stats - general| " + fmt(forward) + " over " +
              std::to_string(cases) + " points (<= 1e-9); asymmetric p = x1: " + fmt(via) +
              " vs " + fmt(general) + " (gap >= 0.1)"};
}

Outcome monte_carlo_oracle() {
  const auto start = Clock::now();
  Generator gen(6006);
  std::size_t passed = 0;
  std::size_t mutants_caught = 0;
  const std::size_t cases = 20;
  for (std::size_t trial = 0; trial < cases; ++trial) {
    const std::size_t n = 1 + gen.index(5);
    const Expression e = test_system(gen, n, wt::coin(gen));
    const SetFunction w = canonical_set_function(e, kLifetimes, n);
    JointModel model = JointModel::iid(1, MarginalCdf::exponential(1));
    switch (trial % 3) {
      case 0: model = wt::random_independent(gen, n); break;
      case 1: model = JointModel::empirical_sample(wt::random_dependent_sample(gen, n, 10000)); break;
      default: model = wt::random_random_shift(gen, n); break;
    }
    const auto grid = system_grid(e, model, 11, derive_seed(6006, trial));
    const OracleReport report = estimate_cdf(e, model, grid, 200000, derive_seed(6007, trial));

    std::vector<SurvivalPoint> analytic;
    for (double y : grid) analytic.push_back(survival_general(w, indicator_distribution(model, y)));
    if (compare(analytic, report, 5.0).passed) ++passed;

    // Flip the entry whose change moves the c.d.f. the most.
    double best = -1.0;
    std::vector<SurvivalPoint> mutant;
    for (Subset s = 0; s < subset_count(n); ++s) {
      const double flipped = w[s] == kLifetimes.bottom() ? kLifetimes.top() : kLifetimes.bottom();
      const SetFunction m = w.with_entry(s, flipped);
      std::vector<SurvivalPoint> curve;
      double shift = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        curve.push_back(survival_general(m, indicator_distribution(model, grid[j])));
        shift = std::max(shift, std::abs(curve.back().cdf - analytic[j].cdf));
      }
      if (shift > best) {
        best = shift;
        mutant = curve;
      }
    }
    if (!compare(mutant, report, 5.0).passed) ++mutants_caught;
  }
  const double elapsed = seconds_since(start);
  return {passed == cases && mutants_caught == cases && elapsed < 120.0,
          std::to_string(passed) + "/20 cases pass and " + std::to_string(mutants_caught) +
              "/20 mutated tables fail at sigma 5, N = 2e5, " + fmt(elapsed) + " s (< 120 s)"};
}

Outcome parser_suite() {
  Generator gen(7007);
  std::size_t round_trips = 0;
  std::size_t semantic = 0;
  const std::size_t trials = 600;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    wt::ExpressionOptions opt;
    opt.arity = 1 + gen.index(8);
    opt.decimals = static_cast<int>(gen.index(4));
    const Expression e = wt::random_expression(gen, opt);
    const std::string text = format_expression(e);
    const ParsedSystem p = parse_system(text, kLifetimes);
    if (p.ok() && *p.expression == e && format_expression(*p.expression) == text) ++round_trips;
    bool same = p.ok();
    for (int k = 0; k < 10 && same; ++k) {
      const auto x = wt::random_point(gen, opt.arity, 0.0, 3.0);
      same = eval_ast(*p.expression, x) == eval_ast(e, x) &&
             eval_dnf(canonical_set_function(*p.expression, kLifetimes, opt.arity), x) ==
                 eval_ast(e, x);
    }
    if (same) ++semantic;
  }

  struct Expected {
    const char* source;
    LatticeDomain domain;
    SourceSpan span;
  };
  const Expected diagnostics[] = {
      {"x1 & & x2", kLifetimes, {5, 6, 1, 6}},
      {"x1 | 12", LatticeDomain(0, 10), {5, 7, 1, 6}},
      {"x0 & x1", kLifetimes, {0, 2, 1, 1}},
  };
  std::size_t spans = 0;
  for (const auto& d : diagnostics) {
    const ParsedSystem p = parse_system(d.source, d.domain);
    if (!p.ok() && p.diagnostics.size() == 1 && p.diagnostics[0].span == d.span) ++spans;
  }
  return {round_trips == trials && semantic == trials && spans == 3,
          std::to_string(round_trips) + "/" + std::to_string(trials) + " round trips, " +
              std::to_string(semantic) + "/" + std::to_string(trials) +
              " semantics preserved, " + std::to_string(spans) + "/3 diagnostic spans exact"};
}

std::string capture(const std::string& command, int& status) {
  std::string out;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  status = pclose(pipe);
  return out;
}

Outcome determinism(const std::string& binary) {
  if (binary.empty()) return {false, "no CLI path given"};
  const std::string model = " --model 'shift:3:uniform(0,1)+weibull(1.5,1)'";
  const std::vector<std::string> commands{
      " cdf --system 'max(min(x1,x2), min(x2,x3))'" + model + " --grid 0:3:13",
      " cdf --system 'x1 | (x2 & 0.7)'" + model + " --grid 0.2,0.9,1.4 --format json",
      " check --system 'x1 & x2 | x3' --model 'indep:exp(1),exp(2),uniform(0,2)' --seed 5",
      " orderstats --model 'iid:4:weibull(2,1)' --grid 0:2:9 --k 2 --format json",
      " oracle --system 'x1 & x3 | x2'" + model + " --grid 0:3:7 --seed 42 --oracle-n 50000",
      " oracle --system 'x1 & x3 | x2'" + model +
          " --grid 0:3:7 --seed 42 --oracle-n 50000 --format json",
  };
  std::size_t identical = 0;
  for (const auto& args : commands) {
    int s1 = 0, s2 = 0;
    const std::string a = capture(binary + args, s1);
    const std::string b = capture(binary + args, s2);
    if (!a.empty() && a == b && s1 == 0 && s2 == 0) ++identical;
  }
  // Worker count must not change the bytes either.
  int s1 = 0, s2 = 0;
  const std::string serial = capture(binary + commands.back(), s1);
  const std::string threaded = capture(binary + commands.back() + " --workers 4", s2);
  const bool workers_ok = !serial.empty() && serial == threaded;
  return {identical == commands.size() && workers_ok,
          std::to_string(identical) + "/" + std::to_string(commands.size()) +
              " commands byte-identical across runs; oracle with 1 vs 4 workers " +
              (workers_ok ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"route agreement", route_agreement},
      {"analytic closed forms", closed_forms},
      {"Mobius machinery", mobius_machinery},
      {"order statistics", order_statistics},
      {"order-statistics route iff cardinality symmetry", order_statistic_theorem},
      {"Monte Carlo oracle", monte_carlo_oracle},
      {"parser", parser_suite},
      {"determinism", [&] { return determinism(binary); }},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << index << ". " << c.name << ": " << o.detail
              << std::endl;
    if (!o.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
