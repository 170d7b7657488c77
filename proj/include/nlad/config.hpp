#pragma once

// Flat `key = value` run configuration. Lines starting with '#' and blank
// lines are ignored; every key must be known. Command-line overrides go
// through the same setter so both are validated the same way.

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlad/continuation.hpp"
#include "nlad/model.hpp"
#include "nlad/spectral_solver.hpp"

namespace nlad {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class InitialCondition { perturbed, wnl, checkpoint };
enum class SweepDirection { up, down, both };

struct RunConfig {
  ModelParams<double> model;
  std::string kernel = "tophat";  // "tophat" or "tabulated:<file>"
  SolverConfig solver;
  std::uint64_t seed = 0;

  // simulate
  InitialCondition initial = InitialCondition::perturbed;
  std::string checkpoint_in;   // for initial = checkpoint
  double perturbation = 1e-3;  // relative to u1_bar
  double noise = 0;            // relative to u1_bar

  // continuation
  std::optional<double> gamma_min;
  std::optional<double> gamma_max;
  int n_points = 40;
  SweepDirection direction = SweepDirection::both;
  SeedMode seed_mode = SeedMode::previous_state;
  int refine = 3;

  std::string output = "out";  // prefix of written files

  /// Applies one key/value pair; throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  /// Checks cross-field consistency and loads the kernel.
  void finalize();

  /// Every key with its resolved value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Reads one sample per whitespace-separated token.
Tabulated<double> load_tabulated_kernel(const std::string& path);

std::string to_string(InitialCondition c);
std::string to_string(SweepDirection d);

}  // namespace nlad
