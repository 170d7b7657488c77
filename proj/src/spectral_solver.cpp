#include "nlad/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nlad/errors.hpp"
#include "nlad/linear_stability.hpp"

namespace nlad {

void SolverConfig::validate() const {
  if (n < 32) throw std::invalid_argument("grid size n must be at least 32");
  if (!is_power_of_two(n)) throw std::invalid_argument("grid size n must be a power of two");
  if (dt < 0 || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_max > 0)) throw std::invalid_argument("t_max must be positive");
  if (!(steady_tol >= 0)) throw std::invalid_argument("steady_tol must be nonnegative");
  if (record_every < 1 || check_every < 1) throw std::invalid_argument("record/check cadence must be positive");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be nonnegative");
}

double SolverConfig::resolved_dt(double L) const {
  if (dt > 0) return dt;
  const double s = L / (2 * std::numbers::pi);
  return 1e-3 * s * s;
}

SpectralSolver::SpectralSolver(const ModelParams<double>& p, const SolverConfig& config)
    : params_(p), config_(config), n_(config.n), half_(config.n / 2 + 1) {
  nlad::validate(p);
  config_.validate();
  fft_.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  q_.resize(half_);
  kernel_.resize(half_);
  mask_.setOnes(half_);
  for (int m = 0; m < half_; ++m) {
    q_[m] = wavenumber(p, m);
    kernel_[m] = fourier_coefficient(p.kernel, q_[m]);
    if (config_.dealias && 3 * m > n_) mask_[m] = 0;
  }
  q2_ = q_.array().square();
  t1_.resize(half_);
  t2_.resize(half_);
  p1_.resize(n_);
  p2_.resize(n_);
  g1_.resize(n_);
  g2_.resize(n_);
  set_dt(config_.resolved_dt(p.L));
}

void SpectralSolver::set_dt(double dt) {
  dt_ = dt;
  decay_ = (-q2_ * dt).array().exp();
  phi_.resize(half_);
  phi_[0] = dt;
  for (int m = 1; m < half_; ++m) phi_[m] = -std::expm1(-q2_[m] * dt) / q2_[m];
}

ComplexVector SpectralSolver::forward(const Eigen::VectorXd& u) {
  ComplexVector h(half_);
  fft_.fwd(h.data(), u.data(), n_);
  return h;
}

Eigen::VectorXd SpectralSolver::inverse(const ComplexVector& h) {
  Eigen::VectorXd u(n_);
  fft_.inv(u.data(), h.data(), n_);
  return u;
}

// n_i = gamma d_x(u_i d_x(K * u_j)), evaluated in spectral space.
void SpectralSolver::nonlinear(const ComplexVector& h1, const ComplexVector& h2, ComplexVector& n1,
                               ComplexVector& n2) {
  const std::complex<double> I(0, 1);
  const int nyq = n_ / 2;
  // gradients of the averaged fields
  for (int m = 0; m < half_; ++m) {
    const double w = (m == nyq ? 0.0 : q_[m]) * kernel_[m] * mask_[m];
    t1_[m] = I * w * h2[m];
    t2_[m] = I * w * h1[m];
  }
  fft_.inv(g1_.data(), t1_.data(), n_);
  fft_.inv(g2_.data(), t2_.data(), n_);
  if (config_.dealias) {
    t1_ = h1.cwiseProduct(mask_.cast<std::complex<double>>());
    t2_ = h2.cwiseProduct(mask_.cast<std::complex<double>>());
    fft_.inv(p1_.data(), t1_.data(), n_);
    fft_.inv(p2_.data(), t2_.data(), n_);
  } else {
    fft_.inv(p1_.data(), h1.data(), n_);
    fft_.inv(p2_.data(), h2.data(), n_);
  }
  p1_.array() *= g1_.array();
  p2_.array() *= g2_.array();
  fft_.fwd(n1.data(), p1_.data(), n_);
  fft_.fwd(n2.data(), p2_.data(), n_);
  const double g = params_.gamma;
  for (int m = 0; m < half_; ++m) {
    const std::complex<double> d = I * (m == nyq ? 0.0 : q_[m]) * g * mask_[m];
    n1[m] *= d;
    n2[m] *= d;
  }
}

double SpectralSolver::residual(const ComplexVector& h1, const ComplexVector& h2, const ComplexVector& n1,
                                const ComplexVector& n2) {
  t1_ = n1 - q2_.cast<std::complex<double>>().cwiseProduct(h1);
  t2_ = n2 - q2_.cast<std::complex<double>>().cwiseProduct(h2);
  fft_.inv(g1_.data(), t1_.data(), n_);
  fft_.inv(g2_.data(), t2_.data(), n_);
  return std::max(g1_.cwiseAbs().maxCoeff(), g2_.cwiseAbs().maxCoeff());
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> SpectralSolver::rhs(const StateGrid& s) {
  if (s.n != n_) throw std::invalid_argument("state grid size does not match solver");
  const ComplexVector h1 = forward(s.u1);
  const ComplexVector h2 = forward(s.u2);
  ComplexVector n1(half_), n2(half_);
  nonlinear(h1, h2, n1, n2);
  const ComplexVector d1 = n1 - q2_.cast<std::complex<double>>().cwiseProduct(h1);
  const ComplexVector d2 = n2 - q2_.cast<std::complex<double>>().cwiseProduct(h2);
  Eigen::VectorXd r1 = inverse(d1);
  Eigen::VectorXd r2 = inverse(d2);
  if (!r1.allFinite() || !r2.allFinite()) throw BlowUp("nonfinite right-hand side", 0);
  return {std::move(r1), std::move(r2)};
}

StateGrid SpectralSolver::step(const StateGrid& s) {
  if (s.n != n_) throw std::invalid_argument("state grid size does not match solver");
  ComplexVector h1 = forward(s.u1);
  ComplexVector h2 = forward(s.u2);
  ComplexVector n1(half_), n2(half_);
  nonlinear(h1, h2, n1, n2);
  const auto e = decay_.cast<std::complex<double>>();
  const auto f = phi_.cast<std::complex<double>>();
  h1 = e.cwiseProduct(h1) + f.cwiseProduct(n1);
  h2 = e.cwiseProduct(h2) + f.cwiseProduct(n2);
  StateGrid out(n_, s.L);
  out.u1 = inverse(h1);
  out.u2 = inverse(h2);
  if (!out.finite()) throw BlowUp("nonfinite state after step", dt_);
  return out;
}

SimulationResult SpectralSolver::run(const StateGrid& initial) {
  const double dt0 = dt_;
  for (int attempt = 0;; ++attempt) {
    try {
      SimulationResult r = run_once(initial);
      set_dt(dt0);
      return r;
    } catch (const BlowUp&) {
      if (attempt >= config_.max_halvings) {
        set_dt(dt0);
        throw;
      }
      set_dt(dt_ / 2);
    }
  }
}

SimulationResult SpectralSolver::run_once(const StateGrid& initial) {
  if (initial.n != n_) throw std::invalid_argument("state grid size does not match solver");
  if (!initial.finite()) throw std::invalid_argument("initial state is not finite");
  SimulationResult r;
  r.dt_used = dt_;
  ComplexVector h1 = forward(initial.u1);
  ComplexVector h2 = forward(initial.u2);
  ComplexVector n1(half_), n2(half_);
  const double mass1 = initial.mass1();
  const double mass2 = initial.mass2();
  const auto e = decay_.cast<std::complex<double>>();
  const auto f = phi_.cast<std::complex<double>>();

  auto record = [&](double t) {
    fft_.inv(p1_.data(), h1.data(), n_);
    r.times.push_back(t);
    r.amplitude_series.push_back((p1_.maxCoeff() - p1_.minCoeff()) / 2);
  };

  const long max_steps = static_cast<long>(std::ceil(config_.t_max / dt_ - 1e-9));
  double t = 0;
  long k = 0;
  r.residual = std::numeric_limits<double>::infinity();
  for (;; ++k) {
    nonlinear(h1, h2, n1, n2);
    if (k % config_.record_every == 0) record(t);
    if (k % config_.check_every == 0 || k == max_steps) {
      r.residual = residual(h1, h2, n1, n2);
      if (!std::isfinite(r.residual)) throw BlowUp("nonfinite state at t = " + std::to_string(t), t);
      if (r.residual < config_.steady_tol) {
        r.reached_steady = true;
        break;
      }
    }
    if (k == max_steps) break;
    h1 = e.cwiseProduct(h1) + f.cwiseProduct(n1);
    h2 = e.cwiseProduct(h2) + f.cwiseProduct(n2);
    t = (k + 1) * dt_;
  }
  if (r.times.empty() || r.times.back() != t) record(t);
  r.steps = k;
  r.t_final = t;
  r.final_state = StateGrid(n_, initial.L);
  r.final_state.u1 = inverse(h1);
  r.final_state.u2 = inverse(h2);
  if (!r.final_state.finite()) throw BlowUp("nonfinite final state", t);
  r.negative_density = !r.final_state.nonnegative();
  r.mode_energies = mode_energies(r.final_state);
  r.mass_drift = std::max(std::abs(r.final_state.mass1() - mass1) / std::abs(mass1),
                          std::abs(r.final_state.mass2() - mass2) / std::abs(mass2));
  return r;
}

std::complex<double> fourier_mode(const Eigen::VectorXd& u, int m, double L) {
  const int n = static_cast<int>(u.size());
  std::complex<double> acc = 0;
  const double dx = L / n;
  const double q = 2 * std::numbers::pi * m / L;
  for (int k = 0; k < n; ++k) acc += u[k] * std::polar(1.0, -q * (-L / 2 + k * dx));
  return acc / static_cast<double>(n);
}

double first_harmonic_amplitude(const StateGrid& s) { return std::abs(fourier_mode(s.u1, 1, s.L)); }

double total_amplitude(const StateGrid& s) { return (s.u1.maxCoeff() - s.u1.minCoeff()) / 2; }

std::vector<double> mode_energies(const StateGrid& s) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  const int half = s.n / 2 + 1;
  ComplexVector h1(half), h2(half);
  fft.fwd(h1.data(), s.u1.data(), s.n);
  fft.fwd(h2.data(), s.u2.data(), s.n);
  std::vector<double> e(static_cast<std::size_t>(half));
  const double n2 = static_cast<double>(s.n) * s.n;
  for (int m = 0; m < half; ++m) {
    const double w = (m == 0 || 2 * m == s.n) ? 1.0 : 2.0;  // +-m pair
    e[m] = w * (std::norm(h1[m]) + std::norm(h2[m])) / n2;
  }
  return e;
}

double mode1_energy_fraction(const StateGrid& s) {
  const auto e = mode_energies(s);
  double total = 0;
  for (std::size_t m = 1; m < e.size(); ++m) total += e[m];
  const double scale = e[0];
  if (total <= 1e-28 * std::max(scale, 1.0)) return 1.0;
  return std::clamp(e[1] / total, 0.0, 1.0);
}

double phase_correlation(const StateGrid& s) {
  const Eigen::ArrayXd a = s.u1.array() - s.u1.mean();
  const Eigen::ArrayXd b = s.u2.array() - s.u2.mean();
  const double na = std::sqrt((a * a).sum());
  const double nb = std::sqrt((b * b).sum());
  if (na == 0 || nb == 0) return 0;
  const double scale1 = std::max(std::abs(s.u1.mean()), 1e-300);
  const double scale2 = std::max(std::abs(s.u2.mean()), 1e-300);
  // Round-off sized fluctuations of a homogeneous state carry no phase.
  if (na / std::sqrt(static_cast<double>(s.n)) < 1e-13 * scale1 ||
      nb / std::sqrt(static_cast<double>(s.n)) < 1e-13 * scale2)
    return 0;
  return (a * b).sum() / (na * nb);
}

StateGrid perturbed_homogeneous(const ModelParams<double>& p, int n, double rel, double noise, std::uint64_t seed) {
  StateGrid s = StateGrid::homogeneous(n, p.L, p.u1_bar, p.u2_bar);
  const double q = critical_mode(p).q_c;
  const double delta = rel * p.u1_bar;
  const double sg = p.gamma >= 0 ? 1.0 : -1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < n; ++k) {
    const double c = std::cos(q * s.x(k));
    s.u1[k] += delta * c;
    s.u2[k] -= sg * delta * c;
    if (noise > 0) {
      s.u1[k] += noise * p.u1_bar * unif(rng);
      s.u2[k] += noise * p.u1_bar * unif(rng);
    }
  }
  return s;
}

}  // namespace nlad
