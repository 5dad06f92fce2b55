#include "wlp/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>
#include <utility>

#include "wlp/error.hpp"
#include "wlp/subset.hpp"

namespace wlp {

namespace {

using Json = nlohmann::json;
using Breakpoints = std::vector<std::pair<double, double>>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Splits on commas that are not inside parentheses.
std::vector<std::string_view> split_top_level(std::string_view text) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (text[i] == ',' && depth == 0) {
      out.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(text.substr(start)));
  return out;
}

double interpolate(const Breakpoints& pts, double y) {
  if (y <= pts.front().first) return pts.front().second;
  if (y >= pts.back().first) return pts.back().second;
  const auto hi = std::upper_bound(pts.begin(), pts.end(), y,
                                   [](double v, const auto& p) { return v < p.first; });
  const auto lo = hi - 1;
  const double t = (y - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

template <class T>
T require(const Json& doc, const char* key, std::string_view context) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw InputError(std::string(context) + ": missing field \"" + key + "\"");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InputError(std::string(context) + ": field \"" + key + "\" has the wrong type");
  }
}

std::size_t require_arity(const Json& doc, std::string_view context) {
  const auto n = require<long long>(doc, "n", context);
  if (n < 1 || n > static_cast<long long>(kHardMaxArity)) {
    throw InputError(std::string(context) + ": \"n\" must lie in [1, " +
                     std::to_string(kHardMaxArity) + "]");
  }
  return static_cast<std::size_t>(n);
}

Breakpoints read_breakpoints(const Json& arr, std::string_view context) {
  if (!arr.is_array() || arr.empty()) {
    throw InputError(std::string(context) + ": breakpoints must be a nonempty array");
  }
  Breakpoints pts;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw InputError(std::string(context) + ": each breakpoint must be [y, F]");
    }
    pts.emplace_back(p[0].get<double>(), std::clamp(p[1].get<double>(), 0.0, 1.0));
  }
  std::stable_sort(pts.begin(), pts.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return pts;
}

JointModel exchangeable_from_json(const Json& doc) {
  const std::size_t n = require_arity(doc, "exchangeable model");
  const Json& rows = doc.contains("g") ? doc.at("g") : Json();
  if (!rows.is_array() || rows.empty()) {
    throw InputError("exchangeable model: \"g\" must be a nonempty array of {y, g} objects");
  }
  auto table = std::make_shared<std::vector<std::pair<double, std::vector<double>>>>();
  for (const auto& row : rows) {
    const auto y = require<double>(row, "y", "exchangeable model");
    auto g = require<std::vector<double>>(row, "g", "exchangeable model");
    validate_exchangeable_weights(g, n);
    table->emplace_back(y, std::move(g));
  }
  std::stable_sort(table->begin(), table->end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return JointModel::exchangeable_indicator(n, [table, n](double y) {
    const auto& t = *table;
    if (y <= t.front().first) return t.front().second;
    if (y >= t.back().first) return t.back().second;
    const auto hi = std::upper_bound(t.begin(), t.end(), y,
                                     [](double v, const auto& p) { return v < p.first; });
    const auto lo = hi - 1;
    const double w = (y - lo->first) / (hi->first - lo->first);
    std::vector<double> g(n + 1);
    for (std::size_t s = 0; s <= n; ++s) g[s] = (1.0 - w) * lo->second[s] + w * hi->second[s];
    return g;
  });
}

}  // namespace

SampleMatrix read_sample_csv(std::istream& in, std::string_view source_name) {
  const std::string name(source_name);
  std::vector<double> data;
  std::size_t cols = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    std::vector<double> row(fields.size());
    std::size_t bad = fields.size();
    for (std::size_t c = 0; c < fields.size() && bad == fields.size(); ++c) {
      if (!parse_double(fields[c], row[c])) bad = c;
    }
    if (first_content) {
      first_content = false;
      cols = fields.size();
      if (bad != fields.size()) continue;  // header
    }
    if (fields.size() != cols) {
      throw InputError(name + ": row " + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " columns, found " + std::to_string(fields.size()));
    }
    if (bad != fields.size()) {
      throw InputError(name + ": row " + std::to_string(line_no) + ", column " +
                       std::to_string(bad + 1) + ": invalid number '" +
                       std::string(trim(fields[bad])) + "'");
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  if (data.empty()) throw InputError(name + ": no data rows");
  return SampleMatrix(cols, std::move(data));
}

SampleMatrix load_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open sample file " + path.string());
  return read_sample_csv(in, path.string());
}

JointModel joint_cdf_table_from_json(const Json& doc) {
  const std::size_t n = require_arity(doc, "joint c.d.f. table");
  if (!doc.contains("entries") || !doc.at("entries").is_array()) {
    throw InputError("joint c.d.f. table: \"entries\" must be an array");
  }
  auto tables = std::make_shared<std::vector<Breakpoints>>(subset_count(n));
  std::vector<bool> present(subset_count(n), false);
  for (const auto& entry : doc.at("entries")) {
    const auto members = require<std::vector<long long>>(entry, "subset", "joint c.d.f. table");
    Subset s = 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const long long i = members[k];
      if (i < 1 || i > static_cast<long long>(n) || (k > 0 && members[k - 1] >= i)) {
        throw InputError("joint c.d.f. table: subset indices must be sorted, distinct and in [1, " +
                         std::to_string(n) + "]");
      }
      s |= Subset{1} << (i - 1);
    }
    if (present[s]) {
      throw InputError("joint c.d.f. table: subset " + format_subset(s) + " listed twice");
    }
    present[s] = true;
    (*tables)[s] = read_breakpoints(entry.contains("breakpoints") ? entry.at("breakpoints") : Json(),
                                    "joint c.d.f. table " + format_subset(s));
  }
  const Subset all = full_set(n);
  for (Subset s = 0; s < all; ++s) {
    if (!present[s]) {
      throw InputError("joint c.d.f. table: no entry for subset " + format_subset(s));
    }
  }
  return JointModel::joint_cdf_table(n, [tables, all](Subset s, double y) {
    if (s == all) return 1.0;
    return interpolate((*tables)[s], y);
  });
}

MarginalCdf marginal_from_json(const Json& doc) {
  const auto type = require<std::string>(doc, "type", "marginal");
  if (type == "exponential") return MarginalCdf::exponential(require<double>(doc, "rate", type));
  if (type == "weibull") {
    return MarginalCdf::weibull(require<double>(doc, "shape", type),
                                require<double>(doc, "scale", type));
  }
  if (type == "uniform") {
    return MarginalCdf::uniform(require<double>(doc, "lo", type), require<double>(doc, "hi", type));
  }
  if (type == "point") return MarginalCdf::point_mass(require<double>(doc, "at", type));
  if (type == "empirical") {
    return MarginalCdf::empirical(require<std::vector<double>>(doc, "values", type));
  }
  throw InputError("unknown marginal type \"" + type + "\"");
}

JointModel model_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  const auto kind = require<std::string>(doc, "kind", "model");
  if (kind == "independent") {
    const Json& list = doc.contains("marginals") ? doc.at("marginals") : Json();
    if (!list.is_array() || list.empty()) {
      throw InputError("independent model: \"marginals\" must be a nonempty array");
    }
    std::vector<MarginalCdf> marginals;
    for (const auto& m : list) marginals.push_back(marginal_from_json(m));
    return JointModel::independent(std::move(marginals));
  }
  if (kind == "iid") {
    return JointModel::iid(require_arity(doc, "iid model"),
                           marginal_from_json(doc.contains("marginal") ? doc.at("marginal") : Json()));
  }
  if (kind == "random-shift") {
    const std::size_t n = require_arity(doc, "random-shift model");
    if (!doc.contains("shared") || !doc.contains("individual")) {
      throw InputError("random-shift model: needs \"shared\" and \"individual\" marginals");
    }
    return JointModel::random_shift(n, marginal_from_json(doc.at("shared")),
                                    marginal_from_json(doc.at("individual")));
  }
  if (kind == "empirical-sample") {
    std::filesystem::path path = require<std::string>(doc, "path", "empirical-sample model");
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    return JointModel::empirical_sample(load_sample_csv(path));
  }
  if (kind == "exchangeable") return exchangeable_from_json(doc);
  if (kind == "joint-cdf-table") return joint_cdf_table_from_json(doc);
  throw InputError("unknown model kind \"" + kind + "\"");
}

MarginalCdf parse_marginal_spec(std::string_view spec) {
  spec = trim(spec);
  const auto open = spec.find('(');
  if (open == std::string_view::npos || spec.back() != ')') {
    throw InputError("marginal \"" + std::string(spec) + "\" must look like name(args)");
  }
  const std::string_view name = trim(spec.substr(0, open));
  std::vector<double> args;
  for (const auto field : split(spec.substr(open + 1, spec.size() - open - 2), ',')) {
    double v = 0.0;
    if (!parse_double(field, v)) {
      throw InputError("marginal \"" + std::string(spec) + "\": invalid number '" +
                       std::string(trim(field)) + "'");
    }
    args.push_back(v);
  }
  auto need = [&](std::size_t count) {
    if (args.size() != count) {
      throw InputError("marginal \"" + std::string(spec) + "\" takes " + std::to_string(count) +
                       " argument(s)");
    }
  };
  if (name == "exp" || name == "exponential") {
    need(1);
    return MarginalCdf::exponential(args[0]);
  }
  if (name == "weibull") {
    need(2);
    return MarginalCdf::weibull(args[0], args[1]);
  }
  if (name == "uniform") {
    need(2);
    return MarginalCdf::uniform(args[0], args[1]);
  }
  if (name == "point") {
    need(1);
    return MarginalCdf::point_mass(args[0]);
  }
  throw InputError("unknown marginal \"" + std::string(name) + "\"");
}

JointModel parse_model_spec(std::string_view spec) {
  spec = trim(spec);
  if (!spec.empty() && spec.front() == '@') {
    const std::filesystem::path path(std::string(spec.substr(1)));
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file " + path.string());
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw InputError(path.string() + ": " + e.what());
    }
    return model_from_json(doc, path.parent_path());
  }
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("model spec \"" + std::string(spec) + "\" must start with indep:, iid:, shift:, sample: or @");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  auto read_count = [&](std::string_view text) {
    double v = 0.0;
    if (!parse_double(text, v) || v < 1 || v != static_cast<double>(static_cast<long long>(v))) {
      throw InputError("model spec: invalid component count '" + std::string(text) + "'");
    }
    return static_cast<std::size_t>(v);
  };
  if (kind == "indep") {
    std::vector<MarginalCdf> marginals;
    for (const auto field : split_top_level(rest)) marginals.push_back(parse_marginal_spec(field));
    return JointModel::independent(std::move(marginals));
  }
  if (kind == "iid" || kind == "shift") {
    const auto second = rest.find(':');
    if (second == std::string_view::npos) {
      throw InputError("model spec: expected " + std::string(kind) + ":<n>:<law>");
    }
    const std::size_t n = read_count(rest.substr(0, second));
    const std::string_view law = rest.substr(second + 1);
    if (kind == "iid") return JointModel::iid(n, parse_marginal_spec(law));
    const auto plus = law.find(")+");
    if (plus == std::string_view::npos) {
      throw InputError("model spec: expected shift:<n>:<shared>+<individual>");
    }
    return JointModel::random_shift(n, parse_marginal_spec(law.substr(0, plus + 1)),
                                    parse_marginal_spec(law.substr(plus + 2)));
  }
  if (kind == "sample") {
    return JointModel::empirical_sample(load_sample_csv(std::string(trim(rest))));
  }
  throw InputError("unknown model kind \"" + std::string(kind) + "\"");
}

}  // namespace wlp
