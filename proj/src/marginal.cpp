#include "wlp/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "overloaded.hpp"
#include "wlp/error.hpp"

namespace wlp {

namespace {

using detail::Overloaded;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

MarginalCdf MarginalCdf::exponential(double rate) {
  if (!positive_finite(rate)) throw DomainError("exponential rate must be positive");
  return MarginalCdf(Exponential{rate});
}

MarginalCdf MarginalCdf::weibull(double shape, double scale) {
  if (!positive_finite(shape) || !positive_finite(scale)) {
    throw DomainError("weibull shape and scale must be positive");
  }
  return MarginalCdf(Weibull{shape, scale});
}

MarginalCdf MarginalCdf::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError("uniform law requires finite lo < hi");
  }
  return MarginalCdf(Uniform{lo, hi});
}

MarginalCdf MarginalCdf::point_mass(double at) {
  if (!std::isfinite(at)) throw DomainError("point mass location must be finite");
  return MarginalCdf(PointMass{at});
}

MarginalCdf MarginalCdf::empirical(std::vector<double> values) {
  if (values.empty()) throw DomainError("empirical law needs at least one value");
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("empirical values must be finite");
  }
  std::sort(values.begin(), values.end());
  return MarginalCdf(EmpiricalStep{std::move(values)});
}

double MarginalCdf::cdf(double x) const {
  return std::visit(
      Overloaded{
          [x](const Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
          [x](const Weibull& w) {
            return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / w.scale, w.shape));
          },
          [x](const Uniform& u) {
            if (x <= u.lo) return 0.0;
            if (x >= u.hi) return 1.0;
            return (x - u.lo) / (u.hi - u.lo);
          },
          [x](const PointMass& p) { return x >= p.at ? 1.0 : 0.0; },
          [x](const EmpiricalStep& s) {
            const auto it = std::upper_bound(s.values.begin(), s.values.end(), x);
            return static_cast<double>(it - s.values.begin()) /
                   static_cast<double>(s.values.size());
          },
      },
      kind_);
}

double MarginalCdf::quantile(double u) const {
  return std::visit(
      Overloaded{
          [u](const Exponential& e) { return -std::log1p(-u) / e.rate; },
          [u](const Weibull& w) { return w.scale * std::pow(-std::log1p(-u), 1.0 / w.shape); },
          [u](const Uniform& un) { return un.lo + u * (un.hi - un.lo); },
          [](const PointMass& p) { return p.at; },
          [u](const EmpiricalStep& s) {
            auto i = static_cast<std::size_t>(u * static_cast<double>(s.values.size()));
            return s.values[std::min(i, s.values.size() - 1)];
          },
      },
      kind_);
}

std::vector<std::pair<double, double>> MarginalCdf::atoms() const {
  if (const auto* p = std::get_if<PointMass>(&kind_)) return {{p->at, 1.0}};
  std::vector<std::pair<double, double>> out;
  if (const auto* s = std::get_if<EmpiricalStep>(&kind_)) {
    const double mass = 1.0 / static_cast<double>(s->values.size());
    for (double v : s->values) {
      if (!out.empty() && out.back().first == v) {
        out.back().second += mass;
      } else {
        out.emplace_back(v, mass);
      }
    }
  }
  return out;
}

bool MarginalCdf::is_discrete() const {
  return std::holds_alternative<PointMass>(kind_) || std::holds_alternative<EmpiricalStep>(kind_);
}

std::vector<double> MarginalCdf::breakpoints() const {
  return std::visit(
      Overloaded{
          [](const Exponential&) { return std::vector<double>{0.0}; },
          [](const Weibull&) { return std::vector<double>{0.0}; },
          [](const Uniform& u) { return std::vector<double>{u.lo, u.hi}; },
          [](const PointMass& p) { return std::vector<double>{p.at}; },
          [](const EmpiricalStep& s) {
            std::vector<double> out = s.values;
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
          },
      },
      kind_);
}

std::string MarginalCdf::describe() const {
  return std::visit(
      Overloaded{
          [](const Exponential& e) { return "exp(" + number(e.rate) + ")"; },
          [](const Weibull& w) {
            return "weibull(" + number(w.shape) + "," + number(w.scale) + ")";
          },
          [](const Uniform& u) { return "uniform(" + number(u.lo) + "," + number(u.hi) + ")"; },
          [](const PointMass& p) { return "point(" + number(p.at) + ")"; },
          [](const EmpiricalStep& s) {
            return "empirical(" + std::to_string(s.values.size()) + " values)";
          },
      },
      kind_);
}

}  // namespace wlp
