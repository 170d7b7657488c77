#pragma once

// Dispersion relation and instability thresholds of the homogeneous state.
//
// Linearizing about (u1_bar, u2_bar) gives, for a mode e^{iqx}, the matrix
// -q^2 [[1, gamma u1 K^(q)], [gamma u2 K^(q), 1]] whose eigenvalues are
// -q^2 (1 +- gamma |K^(q)| sqrt(u1 u2)).

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nlad/model.hpp"

namespace nlad {

template <typename Scalar = double>
struct DispersionPoint {
  int m = 0;
  Scalar q = 0;
  Scalar lambda_plus = 0;   // -q^2 (1 + gamma |K^| sqrt(u1 u2))
  Scalar lambda_minus = 0;  // -q^2 (1 - gamma |K^| sqrt(u1 u2))

  // The eigenvalue that can become positive for the sign of gamma in use.
  Scalar destabilized(Scalar gamma) const { return gamma >= 0 ? lambda_minus : lambda_plus; }
};

template <typename Scalar = double>
struct CriticalMode {
  int m_c = 1;
  Scalar q_c = 0;
  Scalar gamma_c_plus = 0;
  Scalar gamma_c_minus = 0;

  Scalar gamma_c(int side) const { return side >= 0 ? gamma_c_plus : gamma_c_minus; }
};

template <typename Scalar>
DispersionPoint<Scalar> dispersion_point(const ModelParams<Scalar>& p, int m) {
  using std::abs;
  using std::sqrt;
  DispersionPoint<Scalar> d;
  d.m = m;
  d.q = wavenumber(p, m);
  const Scalar q2 = d.q * d.q;
  const Scalar s = p.gamma * abs(fourier_coefficient(p.kernel, d.q)) * sqrt(p.u1_bar * p.u2_bar);
  d.lambda_plus = -q2 * (Scalar(1) + s);
  d.lambda_minus = -q2 * (Scalar(1) - s);
  return d;
}

template <typename Scalar>
std::vector<DispersionPoint<Scalar>> dispersion(const ModelParams<Scalar>& p, int m_max) {
  if (m_max < 1) throw std::invalid_argument("m_max must be at least 1");
  validate(p);
  std::vector<DispersionPoint<Scalar>> out;
  out.reserve(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) out.push_back(dispersion_point(p, m));
  return out;
}

/// gamma_m^{+-} = +-1 / (|K^(q_m)| sqrt(u1 u2)).
template <typename Scalar>
std::pair<Scalar, Scalar> instability_thresholds(const ModelParams<Scalar>& p, int m) {
  using std::abs;
  using std::sqrt;
  if (m < 1) throw std::invalid_argument("threshold needs m >= 1");
  validate(p);
  const Scalar k = abs(fourier_coefficient(p.kernel, wavenumber(p, m)));
  if (k < Scalar(1e-14)) throw ModeNeverDestabilized(m);
  const Scalar g = Scalar(1) / (k * sqrt(p.u1_bar * p.u2_bar));
  return {g, -g};
}

template <typename Scalar>
int default_mode_window(const ModelParams<Scalar>& p) {
  using std::ceil;
  return static_cast<int>(ceil(static_cast<double>(p.L) * 4.0));
}

/// Admissible m >= 1 maximizing |K^(q_m)|; ties go to the smallest m.
template <typename Scalar>
CriticalMode<Scalar> critical_mode(const ModelParams<Scalar>& p, int m_max) {
  using std::abs;
  validate(p);
  if (wavenumber(p, m_max) <= Scalar(4) * std::numbers::pi_v<Scalar>)
    throw std::invalid_argument("m_max too small: q_{m_max} must exceed 4 pi");
  int best = 0;
  Scalar best_k = 0;
  for (int m = 1; m <= m_max; ++m) {
    const Scalar k = abs(fourier_coefficient(p.kernel, wavenumber(p, m)));
    if (best > 0 && abs(k - best_k) <= Scalar(1e-12) * best_k) {
      std::clog << "nlad: critical wavenumber not unique (m = " << best << " and m = " << m
                << "), keeping m = " << best << '\n';
      continue;
    }
    if (k > best_k) {
      best = m;
      best_k = k;
    }
  }
  if (best == 0 || best_k < Scalar(1e-14)) throw ModeNeverDestabilized(1);
  CriticalMode<Scalar> c;
  c.m_c = best;
  c.q_c = wavenumber(p, best);
  auto [gp, gm] = instability_thresholds(p, best);
  c.gamma_c_plus = gp;
  c.gamma_c_minus = gm;
  return c;
}

template <typename Scalar>
CriticalMode<Scalar> critical_mode(const ModelParams<Scalar>& p) {
  return critical_mode(p, default_mode_window(p));
}

}  // namespace nlad
