#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "wlp/joint_model.hpp"
#include "wlp/marginal.hpp"

namespace wlp {

/// Reads one joint draw per line: n comma-separated decimal numbers, with an
/// optional header line. Errors name the source, row and column.
SampleMatrix read_sample_csv(std::istream& in, std::string_view source_name = "<input>");
SampleMatrix load_sample_csv(const std::filesystem::path& path);

/// Joint-c.d.f. table from
///   {"n": 2, "entries": [{"subset": [1], "breakpoints": [[y, F], ...]}, ...]}
/// Each subset S (sorted 1-based indices) gives y -> F(e_S^{y,b}), linearly
/// interpolated between breakpoints, flat outside them and clamped to [0, 1].
/// Every proper subset must be listed; [n] is implicitly 1.
JointModel joint_cdf_table_from_json(const nlohmann::json& doc);

/// {"type": "exponential", "rate": 1}, "weibull" (shape, scale),
/// "uniform" (lo, hi), "point" (at), "empirical" (values).
MarginalCdf marginal_from_json(const nlohmann::json& doc);

/// Model file with a "kind" of independent, iid, random-shift,
/// empirical-sample, exchangeable or joint-cdf-table. Relative sample paths
/// are resolved against base_dir.
JointModel model_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Inline marginal such as "exp(1)", "weibull(1.5,2)", "uniform(0,1)", "point(3)".
MarginalCdf parse_marginal_spec(std::string_view spec);

/// Inline model:
///   indep:<marginal>,<marginal>,...   independent components
///   iid:<n>:<marginal>                n i.i.d. components
///   shift:<n>:<shared>+<individual>   random shift X_i = Z + Y_i
///   sample:<path.csv>                 empirical sample
///   @<file.json>                      model file (see model_from_json)
JointModel parse_model_spec(std::string_view spec);

}  // namespace wlp
