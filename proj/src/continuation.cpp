#include "nlad/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nlad/errors.hpp"
#include "nlad/linear_stability.hpp"
#include "nlad/weakly_nonlinear.hpp"

namespace nlad {

std::string_view to_string(SeedMode m) {
  switch (m) {
    case SeedMode::homogeneous_plus_noise:
      return "homogeneous_plus_noise";
    case SeedMode::previous_state:
      return "previous_state";
    case SeedMode::wnl_profile:
      return "wnl_profile";
  }
  return "?";
}

std::string_view to_string(Modulation m) {
  return m == Modulation::SmallAmplitude ? "SmallAmplitude" : "StronglyModulated";
}

std::string_view to_string(Direction d) { return d == Direction::upward ? "up" : "down"; }

SeedMode parse_seed_mode(std::string_view s) {
  if (s == "homogeneous_plus_noise" || s == "noise") return SeedMode::homogeneous_plus_noise;
  if (s == "previous_state" || s == "previous") return SeedMode::previous_state;
  if (s == "wnl_profile" || s == "wnl") return SeedMode::wnl_profile;
  throw std::invalid_argument("unknown seed mode: " + std::string(s));
}

Modulation classify_modulation(const BranchPoint& bp) {
  return bp.mode1_energy_fraction < kStrongModulationThreshold ? Modulation::StronglyModulated
                                                               : Modulation::SmallAmplitude;
}

BranchPoint make_branch_point(double gamma, const StateGrid& s, bool converged) {
  BranchPoint bp;
  bp.gamma = gamma;
  bp.amplitude = first_harmonic_amplitude(s);
  bp.total_amplitude = total_amplitude(s);
  bp.mode1_energy_fraction = mode1_energy_fraction(s);
  bp.phase_correlation = phase_correlation(s);
  bp.converged = converged;
  bp.negative_density = !s.nonnegative();
  bp.state = std::make_shared<const StateGrid>(s);
  return bp;
}

namespace {

// Adds a deterministic relative kick in the first few modes so a carried state
// does not sit exactly on a symmetric but unstable solution.
StateGrid kicked(const StateGrid& s, double rel, std::mt19937_64& rng) {
  StateGrid out = s;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double a1 = unif(rng), a2 = unif(rng), b1 = unif(rng), b2 = unif(rng);
  const double m1 = std::abs(s.u1.mean());
  const double m2 = std::abs(s.u2.mean());
  for (int k = 0; k < s.n; ++k) {
    const double th = 2 * std::numbers::pi * k / s.n;
    out.u1[k] += rel * m1 * (a1 * std::cos(th) + a2 * std::sin(2 * th));
    out.u2[k] += rel * m2 * (b1 * std::cos(th) + b2 * std::sin(2 * th));
  }
  return out;
}

bool monotone_in_magnitude(const std::vector<double>& g) {
  bool up = true, down = true;
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (std::abs(g[i]) < std::abs(g[i - 1])) up = false;
    if (std::abs(g[i]) > std::abs(g[i - 1])) down = false;
  }
  return up || down;
}

}  // namespace

std::vector<BranchPoint> sweep(const ModelParams<double>& base, const std::vector<double>& gammas,
                               const SolverConfig& config, const SweepOptions& options) {
  if (!monotone_in_magnitude(gammas)) throw std::invalid_argument("gamma list must be monotone in |gamma|");
  std::mt19937_64 rng(options.seed);
  std::vector<BranchPoint> out;
  std::optional<StateGrid> carried = options.initial;

  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const ModelParams<double> p = base.with_gamma(gammas[i]);
    StateGrid seed;
    switch (options.seed_mode) {
      case SeedMode::previous_state:
        if (carried) {
          seed = kicked(*carried, options.reseed_perturbation, rng);
          break;
        }
        [[fallthrough]];
      case SeedMode::homogeneous_plus_noise:
        seed = perturbed_homogeneous(p, config.n, options.noise, options.noise * 1e-3, options.seed + i);
        break;
      case SeedMode::wnl_profile: {
        const Side side = gammas[i] >= 0 ? Side::plus : Side::minus;
        std::optional<WnlCoefficients<double>> c;
        try {
          c = wnl_coefficients(p, side, regime_of(gammas[i], critical_mode(p).gamma_c(sign_of(side))));
        } catch (const std::domain_error&) {
          // no usable small-amplitude branch; fall back to noise below
        }
        if (c && c->stationary_amplitude()) {
          seed = kicked(wnl_profile(p, *c, epsilon_of(gammas[i], c->gamma_c), config.n), options.reseed_perturbation,
                        rng);
        } else {
          seed = perturbed_homogeneous(p, config.n, options.noise, 0, options.seed + i);
        }
        break;
      }
    }

    SpectralSolver solver(p, config);
    try {
      const SimulationResult r = solver.run(seed);
      BranchPoint bp = make_branch_point(gammas[i], r.final_state, r.reached_steady);
      bp.mass_drift = r.mass_drift;
      bp.negative_density = bp.negative_density || r.negative_density;
      carried = r.final_state;
      out.push_back(std::move(bp));
    } catch (const BlowUp&) {
      BranchPoint bp;
      bp.gamma = gammas[i];
      bp.converged = false;
      bp.amplitude = std::nan("");
      bp.total_amplitude = std::nan("");
      out.push_back(std::move(bp));
    }
  }
  return out;
}

Diagram build_diagram(std::vector<BranchPoint> up, std::vector<BranchPoint> down, double amplitude_floor) {
  Diagram d;
  d.upward = std::move(up);
  d.downward = std::move(down);
  double lo = 0, hi = 0;
  bool any = false;
  for (const auto& u : d.upward) {
    for (const auto& w : d.downward) {
      if (std::abs(u.gamma - w.gamma) > 1e-12 * std::max(1.0, std::abs(u.gamma))) continue;
      // Unconverged points say nothing about coexisting states.
      if (!u.converged || !w.converged) continue;
      if (!std::isfinite(u.amplitude) || !std::isfinite(w.amplitude)) continue;
      const double scale = std::max({u.amplitude, w.amplitude, amplitude_floor});
      if (std::abs(u.amplitude - w.amplitude) > 0.05 * scale) {
        if (!any) {
          lo = hi = u.gamma;
          any = true;
        }
        lo = std::min(lo, u.gamma);
        hi = std::max(hi, u.gamma);
      }
    }
  }
  if (any) d.hysteresis_interval = std::make_pair(lo, hi);
  return d;
}

std::vector<double> default_gamma_grid(double gamma_c, int n, double lo, double hi) {
  if (n < 2) throw std::invalid_argument("grid needs at least two points");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(gamma_c * (lo + (hi - lo) * i / (n - 1)));
  if (lo <= 1.0 && hi >= 1.0) {
    auto nearest = std::min_element(g.begin(), g.end(), [&](double a, double b) {
      return std::abs(a - gamma_c) < std::abs(b - gamma_c);
    });
    *nearest = gamma_c;
  }
  return g;
}

std::vector<double> refine_near_jumps(const std::vector<BranchPoint>& sw, int factor, double amplitude_floor) {
  const std::size_t n = sw.size();
  auto step = [&](std::size_t i) {  // |a_{i+1} - a_i|, 0 outside the sweep or for failed points
    if (i + 1 >= n) return 0.0;
    const double d = std::abs(sw[i + 1].amplitude - sw[i].amplitude);
    return std::isfinite(d) ? d : 0.0;
  };
  std::vector<double> g;
  for (std::size_t i = 0; i < n; ++i) {
    g.push_back(sw[i].gamma);
    if (i + 1 == n) break;
    const double a = sw[i].amplitude, b = sw[i + 1].amplitude;
    const double scale = std::max({std::abs(a), std::abs(b), amplitude_floor});
    const double neighbour = std::max(i > 0 ? step(i - 1) : 0.0, step(i + 1));
    // A jump: the change across one interval is large on the amplitude's own
    // scale and over four times the change across either neighbouring interval
    // (a square-root onset sampled on a grid gives at most 1/(sqrt(2) - 1)).
    if (step(i) > 0.5 * scale && step(i) > 4 * neighbour) {
      for (int k = 1; k < factor; ++k) g.push_back(sw[i].gamma + (sw[i + 1].gamma - sw[i].gamma) * k / factor);
    }
  }
  return g;
}

Diagram hysteresis_diagram(const ModelParams<double>& base, const std::vector<double>& gammas,
                           const SolverConfig& config, SweepOptions up_options) {
  std::vector<BranchPoint> up = sweep(base, gammas, config, up_options);
  SweepOptions down_options = up_options;
  down_options.seed_mode = SeedMode::previous_state;
  down_options.initial.reset();
  for (auto it = up.rbegin(); it != up.rend(); ++it) {
    if (it->state) {
      down_options.initial = *it->state;
      break;
    }
  }
  std::vector<double> reversed(gammas.rbegin(), gammas.rend());
  std::vector<BranchPoint> down = sweep(base, reversed, config, down_options);
  return build_diagram(std::move(up), std::move(down));
}

}  // namespace nlad
