#pragma once

// Natural-parameter continuation in gamma: each converged steady state seeds
// the next point of the sweep. Unstable branches are not traced; they come
// from the analytic small-amplitude branch instead.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlad/model.hpp"
#include "nlad/spectral_solver.hpp"

namespace nlad {

enum class SeedMode { homogeneous_plus_noise, previous_state, wnl_profile };
enum class Modulation { SmallAmplitude, StronglyModulated };
enum class Direction { upward, downward };

std::string_view to_string(SeedMode m);
std::string_view to_string(Modulation m);
std::string_view to_string(Direction d);
SeedMode parse_seed_mode(std::string_view s);

struct BranchPoint {
  double gamma = 0;
  double amplitude = 0;        // first-harmonic half-amplitude of u1
  double total_amplitude = 0;  // (max u1 - min u1) / 2
  double mode1_energy_fraction = 1;
  double phase_correlation = 0;
  double mass_drift = 0;
  bool converged = false;
  bool negative_density = false;
  std::shared_ptr<const StateGrid> state;
  std::string checkpoint;  // filled in when the state is written to disk
};

constexpr double kStrongModulationThreshold = 0.8;

Modulation classify_modulation(const BranchPoint& bp);

BranchPoint make_branch_point(double gamma, const StateGrid& s, bool converged);

struct SweepOptions {
  SeedMode seed_mode = SeedMode::previous_state;
  double noise = 1e-3;               // homogeneous_plus_noise: perturbation relative to u1_bar
  double reseed_perturbation = 1e-6; // previous_state: relative kick added to the carried state
  std::uint64_t seed = 0;
  std::optional<StateGrid> initial;  // seeds the first point when given
};

/// Solves each gamma in order (gammas must be monotone in |gamma|) to a steady state.
std::vector<BranchPoint> sweep(const ModelParams<double>& base, const std::vector<double>& gammas,
                               const SolverConfig& config, const SweepOptions& options);

struct Diagram {
  std::vector<BranchPoint> upward;    // increasing |gamma|
  std::vector<BranchPoint> downward;  // decreasing |gamma|
  std::optional<std::pair<double, double>> hysteresis_interval;
};

/// Merges two sweeps over the same gamma grid. The hysteresis interval spans
/// the gammas where |amp_up - amp_down| > 5% max(amp_up, amp_down, floor),
/// counting only gammas where both sweeps converged.
Diagram build_diagram(std::vector<BranchPoint> up, std::vector<BranchPoint> down, double amplitude_floor = 1e-5);

/// n points spanning [lo, hi] times gamma_c, with gamma_c itself included.
std::vector<double> default_gamma_grid(double gamma_c, int n = 40, double lo = 0.9, double hi = 1.3);

/// Inserts `factor - 1` extra points inside every grid interval where the
/// sweep's amplitude jumps: a change above half the amplitude and above
/// four times the change across either neighbouring interval.
std::vector<double> refine_near_jumps(const std::vector<BranchPoint>& sweep, int factor = 3,
                                      double amplitude_floor = 1e-5);

/// Up sweep over `gammas` followed by a down sweep seeded from the last up state.
Diagram hysteresis_diagram(const ModelParams<double>& base, const std::vector<double>& gammas,
                           const SolverConfig& config, SweepOptions up_options);

}  // namespace nlad
