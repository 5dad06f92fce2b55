#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "wlp/lattice.hpp"
#include "wlp/subset.hpp"

namespace wlp {

struct RunConfig {
  std::string command;
  std::string system;
  std::string model;
  std::string grid;
  std::string route = "auto";
  std::string format = "csv";
  std::string domain = "0:inf";
  std::uint64_t seed = 0;
  std::size_t oracle_samples = 100000;
  double sigma = 4.0;
  std::size_t workers = 1;
  std::size_t max_arity = kDefaultMaxArity;
  std::size_t k = 0;
  /// Test hook: flips w(S) between a and b before any analytic evaluation.
  std::optional<Subset> mutate_entry;
};

/// "lo:hi:steps" (inclusive, linear; steps = 1 gives lo) or "y1,y2,...".
/// Throws InputError on malformed or descending grids.
std::vector<double> parse_grid(std::string_view spec);

/// "lo:hi", e.g. "0:inf" or "-inf:inf".
LatticeDomain parse_domain(std::string_view spec);

/// 12 significant digits.
std::string format_number(double v);

/// Runs one command. argv[0] is the program name. Returns the exit status:
/// 0 success, 1 validation or oracle failure, 2 usage or parse error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wlp
