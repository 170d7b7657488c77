#pragma once

// Pseudo-spectral integration of the nonlocal advection-diffusion system on a
// uniform periodic grid.
//
// Time stepping is first-order exponential (ETD1): per Fourier mode,
//   h_{n+1} = e^{-q^2 dt} h_n + (1 - e^{-q^2 dt}) / q^2 * N(h_n),
// where N is the nonlocal advection term. Diffusion is integrated exactly and
// fixed points satisfy q^2 h = N(h) for any dt. The zero mode of N vanishes
// identically, so the mass of each species never changes.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "nlad/model.hpp"
#include "nlad/state_grid.hpp"

namespace nlad {

struct SolverConfig {
  int n = 128;
  double dt = 0;  // 0 selects 1e-3 (L / 2 pi)^2
  double t_max = 1000;
  bool dealias = true;
  double steady_tol = 1e-9;
  int record_every = 100;  // steps between amplitude records
  int check_every = 20;    // steps between steady-state checks
  int max_halvings = 4;

  void validate() const;
  double resolved_dt(double L) const;
};

struct SimulationResult {
  StateGrid final_state;
  bool reached_steady = false;
  bool negative_density = false;
  double t_final = 0;
  double dt_used = 0;
  double residual = 0;  // max-norm of the right-hand side at the end
  long steps = 0;
  std::vector<double> times;
  std::vector<double> amplitude_series;  // (max u1 - min u1) / 2
  std::vector<double> mode_energies;     // |u1_m|^2 + |u2_m|^2, m = 0 .. n/2
  double mass_drift = 0;                 // max relative drift over both species
};

using ComplexVector = Eigen::VectorXcd;

/// One simulation's transform workspace and precomputed multipliers.
class SpectralSolver {
 public:
  SpectralSolver(const ModelParams<double>& p, const SolverConfig& config);

  const ModelParams<double>& params() const { return params_; }
  const SolverConfig& config() const { return config_; }
  int n() const { return n_; }
  double dt() const { return dt_; }

  /// Time derivatives (du1/dt, du2/dt) on the grid.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> rhs(const StateGrid& s);

  /// Advances one dt.
  StateGrid step(const StateGrid& s);

  /// Steps until t_max or until max |rhs| < steady_tol. If blow-up occurs the
  /// run restarts from `initial` with dt halved, at most max_halvings times.
  SimulationResult run(const StateGrid& initial);

  // Spectral-space helpers, half spectrum m = 0 .. n/2.
  ComplexVector forward(const Eigen::VectorXd& u);
  Eigen::VectorXd inverse(const ComplexVector& h);

 private:
  void set_dt(double dt);
  void nonlinear(const ComplexVector& h1, const ComplexVector& h2, ComplexVector& n1, ComplexVector& n2);
  double residual(const ComplexVector& h1, const ComplexVector& h2, const ComplexVector& n1,
                  const ComplexVector& n2);
  SimulationResult run_once(const StateGrid& initial);

  ModelParams<double> params_;
  SolverConfig config_;
  int n_;
  int half_;
  double dt_ = 0;
  Eigen::FFT<double> fft_;
  Eigen::VectorXd q_;        // wavenumbers 2 pi m / L
  Eigen::VectorXd q2_;
  Eigen::VectorXd kernel_;   // K^(q_m)
  Eigen::VectorXd mask_;     // 2/3-rule truncation (all ones when off)
  Eigen::VectorXd decay_;    // e^{-q^2 dt}
  Eigen::VectorXd phi_;      // (1 - e^{-q^2 dt}) / q^2
  // scratch
  ComplexVector t1_, t2_;
  Eigen::VectorXd p1_, p2_, g1_, g2_;
};

/// Complex Fourier coefficient of e^{i q_m x} normalized so that
/// u = sum_m c_m e^{i q_m x}; the grid offset -L/2 is accounted for.
std::complex<double> fourier_mode(const Eigen::VectorXd& u, int m, double L);

/// |c_1| of u1: the half-amplitude of its first harmonic.
double first_harmonic_amplitude(const StateGrid& s);

/// (max u1 - min u1) / 2.
double total_amplitude(const StateGrid& s);

/// Energy |c_m|^2 + |c_{-m}|^2 summed over both species for m = 0 .. n/2.
std::vector<double> mode_energies(const StateGrid& s);

/// Energy in modes +-1 over all nonzero-mode energy; 1 for a homogeneous state.
double mode1_energy_fraction(const StateGrid& s);

/// Normalized inner product of (u1 - mean) and (u2 - mean); 0 if either is flat.
double phase_correlation(const StateGrid& s);

/// Homogeneous state plus delta cos(q_c x) (1, -sign(gamma_c)) with
/// delta = rel * u1_bar, plus optional seeded noise of size noise * u1_bar.
StateGrid perturbed_homogeneous(const ModelParams<double>& p, int n, double rel = 1e-3, double noise = 0,
                                std::uint64_t seed = 0);

}  // namespace nlad
