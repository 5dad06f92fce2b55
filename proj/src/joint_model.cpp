#include "wlp/joint_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "overloaded.hpp"
#include "wlp/error.hpp"

namespace wlp {

using detail::Overloaded;

SampleMatrix::SampleMatrix(std::size_t cols, std::vector<double> data)
    : rows_(cols == 0 ? 0 : data.size() / cols), cols_(cols), data_(std::move(data)) {
  if (cols == 0 || data_.size() % cols != 0) {
    throw ArityError("sample data size is not a multiple of the column count");
  }
}

namespace {

void check_model_arity(std::size_t n) {
  if (n == 0 || n > kHardMaxArity) {
    throw ArityError("model arity " + std::to_string(n) + " outside [1, " +
                     std::to_string(kHardMaxArity) + "]");
  }
}

}  // namespace

JointModel JointModel::independent(std::vector<MarginalCdf> marginals) {
  check_model_arity(marginals.size());
  const std::size_t n = marginals.size();
  return JointModel(n, IndependentLaw{std::move(marginals)});
}

JointModel JointModel::iid(std::size_t n, const MarginalCdf& marginal) {
  return independent(std::vector<MarginalCdf>(n, marginal));
}

JointModel JointModel::exchangeable_indicator(std::size_t n, ExchangeableWeights g) {
  check_model_arity(n);
  if (!g) throw ModelError("exchangeable model needs a weight function");
  return JointModel(n, ExchangeableIndicatorLaw{n, std::move(g)});
}

JointModel JointModel::empirical_sample(SampleMatrix sample) {
  if (sample.rows() == 0) throw ModelError("empirical sample has no rows");
  check_model_arity(sample.cols());
  for (double v : sample.data()) {
    if (!std::isfinite(v)) throw ModelError("empirical sample contains a non-finite value");
  }
  const std::size_t n = sample.cols();
  return JointModel(n, EmpiricalSampleLaw{std::move(sample)});
}

JointModel JointModel::joint_cdf_table(std::size_t n, JointCdfEvaluator evaluator) {
  check_model_arity(n);
  if (!evaluator) throw ModelError("joint c.d.f. table needs an evaluator");
  return JointModel(n, JointCdfTableLaw{n, std::move(evaluator)});
}

JointModel JointModel::random_shift(std::size_t n, MarginalCdf shared, MarginalCdf individual) {
  check_model_arity(n);
  return JointModel(n, RandomShiftLaw{n, std::move(shared), std::move(individual)});
}

bool JointModel::is_samplable() const {
  return !std::holds_alternative<ExchangeableIndicatorLaw>(*law_) &&
         !std::holds_alternative<JointCdfTableLaw>(*law_);
}

std::string JointModel::kind_name() const {
  return std::visit(Overloaded{
                        [](const IndependentLaw&) { return "independent"; },
                        [](const ExchangeableIndicatorLaw&) { return "exchangeable-indicator"; },
                        [](const EmpiricalSampleLaw&) { return "empirical-sample"; },
                        [](const JointCdfTableLaw&) { return "joint-cdf-table"; },
                        [](const RandomShiftLaw&) { return "random-shift"; },
                    },
                    *law_);
}

IndicatorDistribution::IndicatorDistribution(double threshold, RealSetFunction probs,
                                             double clamp_tolerance)
    : threshold_(threshold), probs_(std::move(probs)) {
  double total = 0.0;
  for (Subset s = 0; s < probs_.size(); ++s) {
    if (probs_[s] < 0.0) {
      if (probs_[s] < -clamp_tolerance) {
        throw ModelError("indicator probability for " + format_subset(s) + " is " +
                         std::to_string(probs_[s]) + " at y = " + std::to_string(threshold) +
                         "; the joint law is inconsistent");
      }
      probs_[s] = 0.0;
    }
    total += probs_[s];
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw ModelError("indicator probabilities sum to " + std::to_string(total) + " at y = " +
                     std::to_string(threshold));
  }
  if (total != 1.0) {
    for (Subset s = 0; s < probs_.size(); ++s) probs_[s] /= total;
  }
}

void validate_exchangeable_weights(std::span<const double> g, std::size_t n) {
  if (g.size() != n + 1) {
    throw ModelError("exchangeable weights need n + 1 = " + std::to_string(n + 1) +
                     " entries, got " + std::to_string(g.size()));
  }
  double total = 0.0;
  for (std::size_t s = 0; s <= n; ++s) {
    if (!std::isfinite(g[s]) || g[s] < -kProbabilityClampTolerance) {
      throw ModelError("exchangeable weight g(" + std::to_string(s) + ") is negative");
    }
    total += static_cast<double>(binomial(static_cast<unsigned>(n), static_cast<unsigned>(s))) *
             g[s];
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw ModelError("exchangeable weights are not normalized: sum C(n,s) g(s) = " +
                     std::to_string(total));
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
constexpr std::size_t kShiftPanels = 512;

struct WeightedNode {
  double weight;
  double survive;  // Pr(Y_i > y - z) at this shift z
};

// Quadrature over the shared shift Z: exact for a discrete Z, otherwise
// Gauss-Legendre panels in probability space, split where the integrand
// jumps or kinks.
std::vector<WeightedNode> shift_nodes(const RandomShiftLaw& law, double y) {
  std::vector<WeightedNode> nodes;
  auto survive_at = [&](double z) { return 1.0 - law.individual.cdf(y - z); };
  if (law.shared.is_discrete()) {
    for (const auto& [z, mass] : law.shared.atoms()) nodes.push_back({mass, survive_at(z)});
    return nodes;
  }
  std::vector<double> cuts = {0.0, 1.0};
  for (double c : law.individual.breakpoints()) {
    const double u = law.shared.cdf(y - c);
    if (u > 0.0 && u < 1.0) cuts.push_back(u);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    const auto panels = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(static_cast<double>(kShiftPanels) * (hi - lo))));
    const double width = (hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = lo + (static_cast<double>(p) + 0.5) * width;
      for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
        const double u = mid + 0.5 * width * kGaussNodes[g];
        nodes.push_back({0.5 * width * kGaussWeights[g], survive_at(law.shared.quantile(u))});
      }
    }
  }
  return nodes;
}

RealSetFunction independent_probs(const IndependentLaw& law, double y) {
  const std::size_t n = law.marginals.size();
  std::vector<double> table(subset_count(n), 0.0);
  table[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fail = law.marginals[i].cdf(y);
    const Subset bit = Subset{1} << i;
    for (Subset s = 0; s < bit; ++s) {
      table[s | bit] = table[s] * (1.0 - fail);
      table[s] *= fail;
    }
  }
  return RealSetFunction(n, std::move(table));
}

RealSetFunction empirical_probs(const EmpiricalSampleLaw& law, double y) {
  const SampleMatrix& sample = law.sample;
  std::vector<double> counts(subset_count(sample.cols()), 0.0);
  for (std::size_t r = 0; r < sample.rows(); ++r) {
    Subset mask = 0;
    const auto row = sample.row(r);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] > y) mask |= Subset{1} << i;
    }
    counts[mask] += 1.0;
  }
  const double rows = static_cast<double>(sample.rows());
  for (double& c : counts) c /= rows;
  return RealSetFunction(sample.cols(), std::move(counts));
}

RealSetFunction shift_probs(const RandomShiftLaw& law, double y) {
  const std::size_t n = law.arity;
  std::vector<double> level(n + 1, 0.0);
  for (const auto& node : shift_nodes(law, y)) {
    for (std::size_t s = 0; s <= n; ++s) {
      level[s] += node.weight * std::pow(node.survive, static_cast<double>(s)) *
                  std::pow(1.0 - node.survive, static_cast<double>(n - s));
    }
  }
  std::vector<double> table(subset_count(n));
  for (Subset s = 0; s < table.size(); ++s) table[s] = level[cardinality(s)];
  return RealSetFunction(n, std::move(table));
}

double checked_cdf_value(double v, Subset s, double y) {
  if (!(v >= -kProbabilityClampTolerance && v <= 1.0 + kProbabilityClampTolerance)) {
    throw ModelError("joint c.d.f. value for " + format_subset(s) + " at y = " +
                     std::to_string(y) + " is " + std::to_string(v) + ", outside [0, 1]");
  }
  return std::clamp(v, 0.0, 1.0);
}

void check_threshold(double y) {
  if (std::isnan(y)) throw DomainError("threshold y is NaN");
}

}  // namespace

IndicatorDistribution indicator_distribution(const JointModel& model, double y) {
  check_threshold(y);
  const std::size_t n = model.arity();
  if (y == kInf) {
    RealSetFunction probs(n);
    probs[0] = 1.0;
    return IndicatorDistribution(y, std::move(probs));
  }
  return std::visit(
      Overloaded{
          [&](const IndependentLaw& law) {
            return IndicatorDistribution(y, independent_probs(law, y));
          },
          [&](const ExchangeableIndicatorLaw& law) {
            const std::vector<double> g = law.g(y);
            validate_exchangeable_weights(g, n);
            std::vector<double> table(subset_count(n));
            for (Subset s = 0; s < table.size(); ++s) {
              table[s] = std::max(0.0, g[cardinality(s)]);
            }
            return IndicatorDistribution(y, RealSetFunction(n, std::move(table)));
          },
          [&](const EmpiricalSampleLaw& law) {
            return IndicatorDistribution(y, empirical_probs(law, y));
          },
          [&](const JointCdfTableLaw&) {
            return IndicatorDistribution(y, mobius_transform(joint_cdf_set_function(model, y)),
                                         kJointCdfClampTolerance);
          },
          [&](const RandomShiftLaw& law) {
            return IndicatorDistribution(y, shift_probs(law, y));
          },
      },
      model.law());
}

double joint_cdf_at_characteristic(const JointModel& model, Subset s, double y) {
  check_threshold(y);
  const std::size_t n = model.arity();
  if (s > full_set(n)) throw ArityError("subset " + format_subset(s) + " is not inside [n]");
  const Subset outside = full_set(n) & ~s;
  if (outside == 0 || y == kInf) return 1.0;
  return std::visit(
      Overloaded{
          [&](const IndependentLaw& law) {
            double product = 1.0;
            for (std::size_t i = 1; i <= n; ++i) {
              if (contains(outside, i)) product *= law.marginals[i - 1].cdf(y);
            }
            return product;
          },
          [&](const ExchangeableIndicatorLaw& law) {
            const std::vector<double> g = law.g(y);
            validate_exchangeable_weights(g, n);
            const unsigned size = cardinality(s);
            double total = 0.0;
            for (unsigned t = 0; t <= size; ++t) {
              total += static_cast<double>(binomial(size, t)) * g[t];
            }
            return std::clamp(total, 0.0, 1.0);
          },
          [&](const EmpiricalSampleLaw& law) {
            const SampleMatrix& sample = law.sample;
            std::size_t hits = 0;
            for (std::size_t r = 0; r < sample.rows(); ++r) {
              const auto row = sample.row(r);
              bool all_failed = true;
              for (std::size_t i = 1; i <= n && all_failed; ++i) {
                if (contains(outside, i) && row[i - 1] > y) all_failed = false;
              }
              hits += all_failed ? 1 : 0;
            }
            return static_cast<double>(hits) / static_cast<double>(sample.rows());
          },
          [&](const JointCdfTableLaw& law) { return checked_cdf_value(law.evaluator(s, y), s, y); },
          [&](const RandomShiftLaw& law) {
            const double failed = static_cast<double>(cardinality(outside));
            double total = 0.0;
            for (const auto& node : shift_nodes(law, y)) {
              total += node.weight * std::pow(1.0 - node.survive, failed);
            }
            return std::clamp(total, 0.0, 1.0);
          },
      },
      model.law());
}

RealSetFunction joint_cdf_set_function(const JointModel& model, double y) {
  const std::size_t n = model.arity();
  RealSetFunction f(n);
  for (Subset s = 0; s < f.size(); ++s) f[s] = joint_cdf_at_characteristic(model, s, y);
  return f;
}

std::vector<double> level_count_pmf(const IndicatorDistribution& dist) {
  std::vector<double> p(dist.arity() + 1, 0.0);
  for (Subset s = 0; s < dist.probs().size(); ++s) p[cardinality(s)] += dist[s];
  return p;
}

std::vector<double> level_count_pmf(const JointModel& model, double y) {
  return level_count_pmf(indicator_distribution(model, y));
}

std::vector<double> level_count_pmf_from_joint_cdf(const JointModel& model, double y) {
  const std::size_t n = model.arity();
  const RealSetFunction f = joint_cdf_set_function(model, y);
  std::vector<double> p(n + 1, 0.0);
  for (Subset t = 0; t < f.size(); ++t) {
    const unsigned size = cardinality(t);
    for (std::size_t s = size; s <= n; ++s) {
      const double sign = ((s - size) % 2 == 0) ? 1.0 : -1.0;
      const auto coeff = static_cast<double>(
          binomial(static_cast<unsigned>(n - size), static_cast<unsigned>(s - size)));
      p[s] += sign * coeff * f[t];
    }
  }
  return p;
}

double pgf_evaluate(const IndicatorDistribution& dist, std::span<const double> z) {
  const std::size_t n = dist.arity();
  if (z.size() != n) {
    throw ArityError("p.g.f. needs " + std::to_string(n) + " arguments, got " +
                     std::to_string(z.size()));
  }
  for (double v : z) {
    if (!(std::abs(v) <= 1.0)) throw DomainError("p.g.f. arguments must satisfy |z_i| <= 1");
  }
  std::vector<double> monomial(subset_count(n));
  monomial[0] = 1.0;
  double total = dist[0];
  for (Subset s = 1; s < monomial.size(); ++s) {
    const auto low = static_cast<unsigned>(std::countr_zero(s));
    monomial[s] = monomial[s & (s - 1)] * z[low];
    total += dist[s] * monomial[s];
  }
  return total;
}

std::optional<std::pair<Subset, Subset>> cardinality_symmetry_witness(
    const IndicatorDistribution& dist, double tol) {
  const std::size_t n = dist.arity();
  std::vector<Subset> lowest(n + 1, 0);
  std::vector<Subset> highest(n + 1, 0);
  std::vector<bool> seen(n + 1, false);
  for (Subset s = 0; s < dist.probs().size(); ++s) {
    const unsigned c = cardinality(s);
    if (!seen[c]) {
      lowest[c] = highest[c] = s;
      seen[c] = true;
      continue;
    }
    if (dist[s] < dist[lowest[c]]) lowest[c] = s;
    if (dist[s] > dist[highest[c]]) highest[c] = s;
  }
  double worst = tol;
  std::optional<std::pair<Subset, Subset>> witness;
  for (std::size_t c = 0; c <= n; ++c) {
    const double gap = dist[highest[c]] - dist[lowest[c]];
    if (gap > worst) {
      worst = gap;
      witness = std::make_pair(std::min(lowest[c], highest[c]), std::max(lowest[c], highest[c]));
    }
  }
  return witness;
}

bool has_cardinality_symmetry(const IndicatorDistribution& dist, double tol) {
  if (tol < 0.0) throw DomainError("symmetry tolerance must be nonnegative");
  return !cardinality_symmetry_witness(dist, tol).has_value();
}

std::vector<double> exchangeable_weights(const IndicatorDistribution& dist) {
  const std::size_t n = dist.arity();
  std::vector<double> g = level_count_pmf(dist);
  for (std::size_t s = 0; s <= n; ++s) {
    g[s] /= static_cast<double>(binomial(static_cast<unsigned>(n), static_cast<unsigned>(s)));
  }
  return g;
}

SampleMatrix sample_lifetimes(const JointModel& model, std::size_t count, Generator& gen) {
  const std::size_t n = model.arity();
  SampleMatrix out(count, n);
  std::visit(
      Overloaded{
          [&](const IndependentLaw& law) {
            for (std::size_t r = 0; r < count; ++r) {
              auto row = out.row(r);
              for (std::size_t i = 0; i < n; ++i) row[i] = law.marginals[i].sample(gen);
            }
          },
          [&](const EmpiricalSampleLaw& law) {
            for (std::size_t r = 0; r < count; ++r) {
              const auto src = law.sample.row(gen.index(law.sample.rows()));
              std::copy(src.begin(), src.end(), out.row(r).begin());
            }
          },
          [&](const RandomShiftLaw& law) {
            for (std::size_t r = 0; r < count; ++r) {
              auto row = out.row(r);
              const double z = law.shared.sample(gen);
              for (std::size_t i = 0; i < n; ++i) row[i] = z + law.individual.sample(gen);
            }
          },
          [&](const auto&) {
            throw ModelError(model.kind_name() +
                             " models specify indicator laws only and cannot be sampled");
          },
      },
      model.law());
  return out;
}

SampleMatrix sample_lifetimes(const JointModel& model, std::size_t count, std::uint64_t seed) {
  Generator gen(seed);
  return sample_lifetimes(model, count, gen);
}

}  // namespace wlp
