#pragma once

// Amplitude-equation coefficients near gamma_c and what follows from them:
// bifurcation type, small-amplitude branches, and the growth rates of
// large-scale perturbations coupled through the conserved zero mode.
//
// Near onset the solution is
//   u_i = u_i_bar + eps rho_i (A e^{iq_c x} + c.c.)
//         + eps^2 (psi_i (A^2 e^{2iq_c x} + c.c.) + B) + O(eps^3)
// with eps^2 = |gamma - gamma_c| / |gamma_c| and
//   A_T = sigma A - Lambda |A|^2 A + nu A B,   B_T = mu B_XX - eta (|A|^2)_XX
// (the B coupling only for u1_bar = u2_bar; otherwise B = 0).

#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "nlad/linear_stability.hpp"
#include "nlad/model.hpp"
#include "nlad/state_grid.hpp"

namespace nlad {

enum class Side { plus, minus };
enum class Regime { stable, unstable };

inline int sign_of(Side s) { return s == Side::plus ? 1 : -1; }
std::string_view to_string(Side s);
std::string_view to_string(Regime r);

enum class BifurcationClass { Subcritical, SupercriticalStable, SupercriticalUnstable };
std::string_view to_string(BifurcationClass c);

template <typename Scalar = double>
struct WnlCoefficients {
  Scalar gamma_c = 0;
  Scalar q_c = 0;
  int m_c = 1;
  Scalar rho2 = 0;
  Scalar a2 = 0;
  Scalar psi1 = 0;
  Scalar psi2 = 0;
  Scalar sigma = 0;
  Scalar Lambda = 0;
  Scalar nu = 0;
  Scalar mu = 0;
  Scalar eta = 0;
  std::optional<Scalar> Gamma;  // only for u1_bar = u2_bar and Lambda > 0
  bool equal_densities = false;
  Side side = Side::plus;
  Regime branch_side = Regime::unstable;

  /// a0^2 = sigma / Lambda when positive.
  std::optional<Scalar> stationary_amplitude() const {
    using std::sqrt;
    const Scalar r = sigma / Lambda;
    if (!(r > 0)) return std::nullopt;
    return sqrt(r);
  }
};

template <typename Scalar>
WnlCoefficients<Scalar> wnl_coefficients(const ModelParams<Scalar>& p, Side side, Regime regime) {
  using std::abs;
  const CriticalMode<Scalar> cm = critical_mode(p);
  const Scalar g = cm.gamma_c(sign_of(side));
  const Scalar q = cm.q_c;
  const Scalar q2 = q * q;
  const Scalar u1 = p.u1_bar;
  const Scalar u2 = p.u2_bar;
  const Scalar k1 = fourier_coefficient(p.kernel, q);
  const Scalar k2 = fourier_coefficient(p.kernel, Scalar(2) * q);
  const Scalar k0 = fourier_coefficient(p.kernel, Scalar(0));

  const Scalar denom = Scalar(1) - g * g * u1 * u2 * k2 * k2;
  if (abs(denom) < Scalar(1e-10))
    throw SecondHarmonicResonance("second-harmonic resonance: |K^(2 q_c)| equals |K^(q_c)|");

  WnlCoefficients<Scalar> c;
  c.gamma_c = g;
  c.q_c = q;
  c.m_c = cm.m_c;
  c.side = side;
  c.branch_side = regime;
  c.equal_densities = p.equal_densities();
  c.rho2 = Scalar(-1) / (g * u1 * k1);
  c.a2 = Scalar(-1) / (g * u2 * k1);
  // Both second-harmonic coefficients carry the 1/(2 u1) prefactor.
  c.psi1 = (Scalar(1) - g * u1 * k2) / denom / (Scalar(2) * u1);
  c.psi2 = (Scalar(1) - g * u2 * k2) / denom / (Scalar(2) * u1);
  c.sigma = regime == Regime::unstable ? q2 : -q2;
  c.Lambda = q2 * g / Scalar(2) *
             (Scalar(2) * k2 * (c.psi1 + c.psi2) - k1 * (c.psi1 * c.rho2 + c.psi2 * c.a2));
  c.nu = q2 / u1;
  c.mu = Scalar(1) + g * u1 * k0;
  c.eta = Scalar(1) / u1;
  if (c.equal_densities && c.Lambda > 0) c.Gamma = c.Lambda * c.mu / (c.eta * c.nu) - Scalar(1);
  return c;
}

template <typename Scalar>
BifurcationClass classify(const WnlCoefficients<Scalar>& c) {
  if (c.Lambda < 0) return BifurcationClass::Subcritical;
  if (c.equal_densities && c.Gamma && *c.Gamma < 0) return BifurcationClass::SupercriticalUnstable;
  return BifurcationClass::SupercriticalStable;
}

/// Closed form of Gamma(L) for the top-hat kernel, gamma > 0, equal densities.
template <typename Scalar>
Scalar gamma_closed_form_tophat(Scalar L) {
  using std::abs;
  if (!(L > Scalar(2))) throw ModelError("L must exceed 2");
  const Scalar q = Scalar(2) * std::numbers::pi_v<Scalar> / L;
  const Scalar k1 = sinc(q);
  const Scalar k2 = sinc(Scalar(2) * q);
  if (abs(k1 + k2) < Scalar(1e-12)) throw std::domain_error("Gamma closed form is singular: K^(2q)+K^(q) = 0");
  return (Scalar(1) + k1) * (Scalar(2) * k2 + k1) / (Scalar(2) * k1 * (k2 + k1)) - Scalar(1);
}

template <typename Scalar = double>
struct ZeroModeRates {
  Scalar lambda0 = 0;
  Scalar lambda_plus = 0;
  Scalar lambda_minus = 0;
};

/// Eigenvalues of the linearization about A = a0, B = 0 for a perturbation
/// with slow wavenumber Q: 0 and
/// (-mu Q^2 - 2 sigma +- sqrt(mu^2 Q^4 + Q^2 (8 a0^2 eta nu - 4 mu sigma) + 4 sigma^2)) / 2.
template <typename Scalar>
ZeroModeRates<Scalar> zero_mode_growth_rates(const WnlCoefficients<Scalar>& c, Scalar a0, Scalar Q) {
  using std::sqrt;
  const Scalar Q2 = Q * Q;
  const Scalar disc = c.mu * c.mu * Q2 * Q2 + Q2 * (Scalar(8) * a0 * a0 * c.eta * c.nu - Scalar(4) * c.mu * c.sigma) +
                      Scalar(4) * c.sigma * c.sigma;
  const Scalar root = sqrt(disc);
  const Scalar base = -c.mu * Q2 - Scalar(2) * c.sigma;
  return {Scalar(0), (base + root) / 2, (base - root) / 2};
}

struct BranchSample {
  double gamma = 0;
  double epsilon = 0;
  double amplitude = 0;           // first-harmonic half-amplitude of u1, eps a0
  double second_harmonic = 0;     // eps^2 |psi1| a0^2, half-amplitude of the 2 q_c part of u1
  Regime regime = Regime::unstable;
  bool stable = false;
  std::optional<StateGrid> profile;
};

struct AnalyticBranch {
  Side side = Side::plus;
  double gamma_c = 0;
  BifurcationClass kind = BifurcationClass::SupercriticalStable;
  std::vector<BranchSample> points;

  std::vector<double> gamma_values() const;
  std::vector<double> epsilon_values() const;
  std::vector<double> amplitude_values() const;
  std::vector<bool> stability_flags() const;
};

/// eps = sqrt(|gamma - gamma_c| / |gamma_c|).
inline double epsilon_of(double gamma, double gamma_c) { return std::sqrt(std::abs((gamma - gamma_c) / gamma_c)); }

/// Regime of gamma relative to the threshold on the given side.
Regime regime_of(double gamma, double gamma_c);

/// Reconstructs u1, u2 truncated at O(eps^2) with A = a0 (phase 0) and B = 0.
StateGrid wnl_profile(const ModelParams<double>& p, const WnlCoefficients<double>& c, double epsilon, int n);

/// Small-amplitude branch for every gamma in `gammas` where sigma/Lambda > 0.
/// `profile_n` > 0 also reconstructs the profiles on that many grid points.
AnalyticBranch analytic_branch(const ModelParams<double>& p, Side side, const std::vector<double>& gammas,
                               int profile_n = 0);

/// n_points equally spaced values of gamma in [gamma_lo, gamma_hi].
AnalyticBranch analytic_branch(const ModelParams<double>& p, Side side, double gamma_lo, double gamma_hi,
                               int n_points, int profile_n = 0);

}  // namespace nlad
