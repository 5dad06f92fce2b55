#include "wlp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "wlp/cdf.hpp"
#include "wlp/error.hpp"
#include "wlp/joint_model.hpp"
#include "wlp/model_io.hpp"
#include "wlp/oracle.hpp"
#include "wlp/parser.hpp"

namespace wlp {

namespace {

using Json = nlohmann::json;

constexpr std::size_t kTableDisplayArity = 6;
constexpr std::size_t kPilotSamples = 2000;

bool parse_real(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

double parse_real_or_throw(std::string_view text, std::string_view what) {
  double v = 0.0;
  if (!parse_real(trim(text), v)) {
    throw InputError(std::string(what) + ": invalid number '" + std::string(trim(text)) + "'");
  }
  return v;
}

// Same value as the printed text, so CSV and JSON agree digit for digit.
Json number(double v) {
  if (std::isfinite(v)) return std::strtod(format_number(v).c_str(), nullptr);
  return format_number(v);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string join_numbers(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(values[i]);
  }
  return out;
}

Json subset_json(Subset s) {
  Json members = Json::array();
  for (std::size_t i = 1; i <= kHardMaxArity; ++i) {
    if (contains(s, i)) members.push_back(i);
  }
  return members;
}

struct Session {
  const RunConfig& config;
  std::ostream& out;
  std::ostream& err;
  LatticeDomain domain;

  Session(const RunConfig& c, std::ostream& o, std::ostream& e)
      : config(c), out(o), err(e), domain(parse_domain(c.domain)) {}

  std::string source;
  std::optional<Expression> expr;
  std::optional<JointModel> model;
  std::vector<double> grid;

  void load_system() {
    source = config.system;
    if (!source.empty() && source.front() == '@') source = read_text_file(source.substr(1));
    ParsedSystem parsed = parse_system(source, domain);
    for (const auto& d : parsed.diagnostics) err << format_diagnostic(d, source);
    if (!parsed.ok()) {
      throw ParseError("system description has errors", std::move(parsed.diagnostics));
    }
    expr = parsed.expression;
  }

  void load_model() {
    model = parse_model_spec(config.model);
    if (expr && expr->arity() > model->arity()) {
      throw InputError("system uses x" + std::to_string(expr->arity()) + " but the model has " +
                       std::to_string(model->arity()) + " components");
    }
    if (expr) {
      for (std::size_t i = expr->arity() + 1; i <= model->arity(); ++i) {
        err << "warning: model component x" << i << " does not appear in the system\n";
      }
    }
  }

  SetFunction set_function() const {
    const std::size_t n = model ? model->arity() : std::max<std::size_t>(1, expr->arity());
    SetFunction w = canonical_set_function(*expr, domain, n, config.max_arity);
    if (config.mutate_entry) {
      const Subset s = *config.mutate_entry;
      if (s >= subset_count(n)) {
        throw InputError("--mutate-entry " + std::to_string(s) + " is not a subset of [" +
                         std::to_string(n) + "]");
      }
      w = w.with_entry(s, w[s] == domain.bottom() ? domain.top() : domain.bottom());
    }
    return w;
  }

  Json config_echo() const {
    Json c = {{"command", config.command}, {"domain", config.domain}};
    if (!config.system.empty()) c["system"] = config.system;
    if (!config.model.empty()) c["model"] = config.model;
    if (!grid.empty()) {
      Json g = Json::array();
      for (double y : grid) g.push_back(number(y));
      c["grid"] = g;
    }
    if (config.command == "cdf" || config.command == "oracle") c["route"] = config.route;
    if (config.command == "orderstats") c["k"] = config.k;
    if (config.command == "oracle" || config.command == "check") c["seed"] = config.seed;
    if (config.command == "oracle") {
      c["oracle_n"] = config.oracle_samples;
      c["sigma"] = number(config.sigma);
    }
    if (config.mutate_entry) c["mutate_entry"] = *config.mutate_entry;
    return c;
  }

  Route route() const {
    const auto r = parse_route(config.route);
    if (!r) throw InputError("unknown route '" + config.route + "'");
    return *r;
  }

  bool json() const { return config.format == "json"; }

  // Pooled component quantiles from a pilot sample.
  std::vector<double> pilot_thresholds() const {
    const SampleMatrix x = sample_lifetimes(*model, kPilotSamples, derive_seed(config.seed, 0));
    std::vector<double> pooled(x.data().begin(), x.data().end());
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> out;
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      out.push_back(pooled[static_cast<std::size_t>(q * static_cast<double>(pooled.size() - 1))]);
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  int check() {
    load_system();
    if (!config.model.empty()) load_model();
    if (!config.grid.empty()) grid = parse_grid(config.grid);
    const SetFunction w = set_function();
    const std::size_t n = w.arity();
    const auto profile = cardinality_profile(w);

    struct SymmetryResult {
      bool holds = true;
      std::vector<double> thresholds;
      std::optional<double> y;
      std::optional<std::pair<Subset, Subset>> witness;
      double p_first = 0.0;
      double p_second = 0.0;
    };
    std::optional<SymmetryResult> symmetry;
    if (model) {
      SymmetryResult r;
      if (!grid.empty()) {
        r.thresholds = grid;
      } else if (model->is_samplable()) {
        r.thresholds = pilot_thresholds();
      } else {
        throw InputError("--grid is required to check cardinality symmetry of model kind " +
                         model->kind_name());
      }
      for (double y : r.thresholds) {
        const IndicatorDistribution dist = indicator_distribution(*model, y);
        if (auto wit = cardinality_symmetry_witness(dist, kSymmetryTolerance)) {
          r.holds = false;
          r.y = y;
          r.witness = wit;
          r.p_first = dist[wit->first];
          r.p_second = dist[wit->second];
          break;
        }
      }
      symmetry = r;
    }

    if (json()) {
      Json doc = {{"config", config_echo()}, {"components", n}};
      if (n <= kTableDisplayArity) {
        Json table = Json::array();
        for (Subset s = 0; s < subset_count(n); ++s) {
          table.push_back({{"subset", subset_json(s)}, {"value", number(w[s])}});
        }
        doc["set_function"] = table;
      } else {
        std::vector<double> values(w.table().begin(), w.table().end());
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        doc["set_function"] = {{"entries", subset_count(n)}, {"distinct_values", values.size()}};
      }
      doc["nondecreasing"] = w.is_nondecreasing();
      doc["lattice_polynomial"] = is_lattice_polynomial(w);
      doc["sugeno_integral"] = is_sugeno_integral(w);
      doc["symmetric"] = profile.has_value();
      if (profile) {
        Json m = Json::array();
        for (double v : *profile) m.push_back(number(v));
        doc["cardinality_profile"] = m;
      }
      if (symmetry) {
        Json s = {{"holds", symmetry->holds}};
        Json ts = Json::array();
        for (double y : symmetry->thresholds) ts.push_back(number(y));
        s["thresholds"] = ts;
        if (symmetry->witness) {
          s["witness"] = {{"y", number(*symmetry->y)},
                          {"first", subset_json(symmetry->witness->first)},
                          {"second", subset_json(symmetry->witness->second)},
                          {"first_probability", number(symmetry->p_first)},
                          {"second_probability", number(symmetry->p_second)}};
        }
        doc["cardinality_symmetry"] = s;
      }
      out << doc.dump(2) << '\n';
      return 0;
    }

    out << "components: " << n << '\n';
    if (n <= kTableDisplayArity) {
      out << "set function:\n";
      for (Subset s = 0; s < subset_count(n); ++s) {
        out << "  " << format_subset(s) << ' ' << format_number(w[s]) << '\n';
      }
    } else {
      std::vector<double> values(w.table().begin(), w.table().end());
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      out << "set function: " << subset_count(n) << " entries, " << values.size()
          << " distinct values\n";
    }
    out << "nondecreasing: " << yes_no(w.is_nondecreasing()) << '\n';
    out << "lattice polynomial: " << yes_no(is_lattice_polynomial(w)) << '\n';
    out << "sugeno integral: " << yes_no(is_sugeno_integral(w)) << '\n';
    out << "symmetric: " << yes_no(profile.has_value());
    if (profile) out << " (m = " << join_numbers(*profile) << ')';
    out << '\n';
    if (symmetry) {
      out << "cardinality symmetry: " << yes_no(symmetry->holds);
      if (symmetry->witness) {
        out << " (y = " << format_number(*symmetry->y) << ": Pr "
            << format_subset(symmetry->witness->first) << " = " << format_number(symmetry->p_first)
            << " vs Pr " << format_subset(symmetry->witness->second) << " = "
            << format_number(symmetry->p_second) << ')';
      } else {
        out << " (y = " << join_numbers(symmetry->thresholds) << ')';
      }
      out << '\n';
    }
    return 0;
  }

  int cdf() {
    load_system();
    load_model();
    grid = parse_grid(config.grid);
    const Route r = route();
    const SetFunction w = set_function();
    const auto curve = cdf_curve(w, *model, grid, r);
    std::vector<double> deviation;
    if (r == Route::kAuto) {
      for (double y : grid) deviation.push_back(compare_routes(w, *model, y).max_deviation);
    }

    if (json()) {
      Json points = Json::array();
      for (std::size_t j = 0; j < curve.size(); ++j) {
        Json p = {{"y", number(curve[j].y)},
                  {"cdf", number(curve[j].cdf)},
                  {"survival", number(curve[j].survival)}};
        if (!deviation.empty()) p["deviation"] = number(deviation[j]);
        points.push_back(p);
      }
      out << Json{{"config", config_echo()}, {"points", points}}.dump(2) << '\n';
      return 0;
    }
    out << "y,cdf,survival" << (deviation.empty() ? "" : ",deviation") << '\n';
    for (std::size_t j = 0; j < curve.size(); ++j) {
      out << format_number(curve[j].y) << ',' << format_number(curve[j].cdf) << ','
          << format_number(curve[j].survival);
      if (!deviation.empty()) out << ',' << format_number(deviation[j]);
      out << '\n';
    }
    return 0;
  }

  int orderstats() {
    load_model();
    grid = parse_grid(config.grid);
    const std::size_t n = model->arity();
    if (config.k > n + 1) {
      throw InputError("k = " + std::to_string(config.k) + " is outside 0.." +
                       std::to_string(n + 1));
    }
    std::vector<double> level, explicit_form;
    for (double y : grid) {
      level.push_back(order_statistic_cdf(*model, config.k, y));
      explicit_form.push_back(order_statistic_cdf_explicit(*model, config.k, y));
    }

    if (json()) {
      Json points = Json::array();
      for (std::size_t j = 0; j < grid.size(); ++j) {
        points.push_back({{"y", number(grid[j])},
                          {"level_count", number(level[j])},
                          {"explicit", number(explicit_form[j])},
                          {"deviation", number(std::abs(level[j] - explicit_form[j]))}});
      }
      out << Json{{"config", config_echo()}, {"points", points}}.dump(2) << '\n';
      return 0;
    }
    out << "y,level_count,explicit,deviation\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
      out << format_number(grid[j]) << ',' << format_number(level[j]) << ','
          << format_number(explicit_form[j]) << ','
          << format_number(std::abs(level[j] - explicit_form[j])) << '\n';
    }
    return 0;
  }

  int oracle() {
    load_system();
    load_model();
    grid = parse_grid(config.grid);
    if (!model->is_samplable()) {
      throw ModelError("a " + model->kind_name() + " model cannot be sampled");
    }
    const SetFunction w = set_function();
    const auto curve = cdf_curve(w, *model, grid, route());
    const OracleReport report =
        estimate_cdf(*expr, *model, grid, config.oracle_samples, config.seed, config.workers);
    const OracleVerdict verdict = compare(curve, report, config.sigma);
    std::vector<bool> flagged(grid.size(), false);
    for (std::size_t j : verdict.flagged) flagged[j] = true;

    if (json()) {
      Json points = Json::array();
      for (std::size_t j = 0; j < grid.size(); ++j) {
        points.push_back({{"y", number(grid[j])},
                          {"cdf", number(curve[j].cdf)},
                          {"survival", number(curve[j].survival)},
                          {"empirical", number(report.empirical[j])},
                          {"stderr", number(report.standard_error[j])},
                          {"delta", number(verdict.deltas[j])},
                          {"flagged", static_cast<bool>(flagged[j])}});
      }
      Json v = {{"passed", verdict.passed},
                {"max_deviation", number(verdict.max_deviation)},
                {"sigma", number(verdict.sigma)},
                {"samples", report.samples},
                {"flagged", verdict.flagged}};
      out << Json{{"config", config_echo()}, {"points", points}, {"verdict", v}}.dump(2) << '\n';
    } else {
      out << "y,cdf,survival,empirical,stderr,delta,flagged\n";
      for (std::size_t j = 0; j < grid.size(); ++j) {
        out << format_number(grid[j]) << ',' << format_number(curve[j].cdf) << ','
            << format_number(curve[j].survival) << ',' << format_number(report.empirical[j])
            << ',' << format_number(report.standard_error[j]) << ','
            << format_number(verdict.deltas[j]) << ',' << (flagged[j] ? 1 : 0) << '\n';
      }
    }
    err << "oracle: " << (verdict.passed ? "pass" : "fail") << " (max |delta| = "
        << format_number(verdict.max_deviation) << ", " << verdict.flagged.size()
        << " flagged, N = " << report.samples << ")\n";
    return verdict.passed ? 0 : 1;
  }
};

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
  spec = trim(spec);
  if (spec.empty()) throw InputError("empty grid");
  std::vector<double> grid;
  if (spec.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t pos; (pos = spec.find(':', start)) != std::string_view::npos; start = pos + 1) {
      parts.push_back(spec.substr(start, pos - start));
    }
    parts.push_back(spec.substr(start));
    if (parts.size() != 3) throw InputError("grid '" + std::string(spec) + "' is not lo:hi:steps");
    const double lo = parse_real_or_throw(parts[0], "grid");
    const double hi = parse_real_or_throw(parts[1], "grid");
    const double steps_real = parse_real_or_throw(parts[2], "grid");
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
      throw InputError("grid bounds must be finite with lo <= hi");
    }
    if (steps_real < 1 || steps_real != std::floor(steps_real) || steps_real > 1e7) {
      throw InputError("grid steps must be an integer >= 1");
    }
    const auto steps = static_cast<std::size_t>(steps_real);
    if (steps == 1) return {lo};
    for (std::size_t i = 0; i < steps; ++i) {
      grid.push_back(i + 1 == steps ? hi
                                    : lo + (hi - lo) * static_cast<double>(i) /
                                               static_cast<double>(steps - 1));
    }
    return grid;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = spec.find(',', start);
    grid.push_back(parse_real_or_throw(spec.substr(start, pos == std::string_view::npos
                                                              ? pos
                                                              : pos - start),
                                       "grid"));
    if (std::isnan(grid.back())) throw InputError("grid contains NaN");
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (!std::is_sorted(grid.begin(), grid.end())) throw InputError("grid must be ascending");
  return grid;
}

LatticeDomain parse_domain(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("domain '" + std::string(spec) + "' is not lo:hi");
  }
  const double lo = parse_real_or_throw(spec.substr(0, colon), "domain");
  const double hi = parse_real_or_throw(spec.substr(colon + 1), "domain");
  if (!(lo < hi)) throw InputError("domain needs lo < hi");
  return LatticeDomain(lo, hi);
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string mutate;

  CLI::App app{"Exact lifetime distribution of weighted lattice polynomial systems"};
  app.require_subcommand(1);

  auto add_system = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--system", config.system, "System text, or @file");
    if (required) opt->required();
  };
  auto add_model = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--model", config.model,
                                "indep:..., iid:n:..., shift:n:...+..., sample:path or @file.json");
    if (required) opt->required();
  };
  auto add_grid = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--grid", config.grid, "lo:hi:steps or y1,y2,...");
    if (required) opt->required();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", config.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--domain", config.domain, "Lattice lo:hi")->capture_default_str();
    sub->add_option("--max-arity", config.max_arity, "Largest number of components")
        ->check(CLI::Range(std::size_t{1}, kHardMaxArity))
        ->capture_default_str();
  };
  auto add_route = [&](CLI::App* sub) {
    sub->add_option("--route", config.route, "Evaluation route")
        ->check(CLI::IsMember({"auto", "general", "independent", "lattice", "symmetric",
                               "cardinality-symmetric", "order-stats"}));
    sub->add_option("--mutate-entry", mutate)->group("");
  };

  auto* check = app.add_subcommand("check", "Classify a system and a model");
  add_system(check, true);
  add_model(check, false);
  add_grid(check, false);
  add_common(check);
  check->add_option("--seed", config.seed, "Seed for the pilot sample");
  check->add_option("--mutate-entry", mutate)->group("");

  auto* cdf = app.add_subcommand("cdf", "System lifetime c.d.f. on a grid");
  add_system(cdf, true);
  add_model(cdf, true);
  add_grid(cdf, true);
  add_common(cdf);
  add_route(cdf);

  auto* orderstats = app.add_subcommand("orderstats", "Order statistic c.d.f. by two routes");
  add_model(orderstats, true);
  add_grid(orderstats, true);
  add_common(orderstats);
  orderstats->add_option("--k", config.k, "Order statistic index, 0..n+1")->required();

  auto* oracle = app.add_subcommand("oracle", "Monte Carlo check of an analytic route");
  add_system(oracle, true);
  add_model(oracle, true);
  add_grid(oracle, true);
  add_common(oracle);
  add_route(oracle);
  oracle->add_option("--seed", config.seed, "Master seed")->required();
  oracle->add_option("--oracle-n", config.oracle_samples, "Number of simulated systems")
      ->capture_default_str();
  oracle->add_option("--sigma", config.sigma, "Standard-error multiplier")->capture_default_str();
  oracle->add_option("--workers", config.workers, "Sampling threads")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  config.command = app.get_subcommands().front()->get_name();

  try {
    if (!mutate.empty()) {
      unsigned long long s = 0;
      const auto res = std::from_chars(mutate.data(), mutate.data() + mutate.size(), s);
      if (res.ec != std::errc{} || res.ptr != mutate.data() + mutate.size() ||
          s >= (1ULL << kHardMaxArity)) {
        throw InputError("--mutate-entry expects a subset bitmask");
      }
      config.mutate_entry = static_cast<Subset>(s);
    }
    Session session(config, out, err);
    if (config.command == "check") return session.check();
    if (config.command == "cdf") return session.cdf();
    if (config.command == "orderstats") return session.orderstats();
    return session.oracle();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace wlp
