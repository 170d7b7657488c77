#pragma once

// Model parameters, nondimensionalization and the averaging kernel.
//
// The nondimensional system on x in [-L/2, L/2] (periodic) is
//
//   d_t u1 = d_xx u1 + gamma d_x(u1 d_x(K * u2))
//   d_t u2 = d_xx u2 + gamma d_x(u2 d_x(K * u1))
//
// with K even, nonnegative, supported on [-1, 1] and of unit mass.

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <variant>
#include <vector>

#include "nlad/errors.hpp"

namespace nlad {

struct DimensionalParams {
  double D = 1.0;          // diffusion rate
  double gamma_dim = 0.0;  // advection strength, signed
  double alpha = 1.0;      // sensing radius
  double l = 4.0;          // domain length
  double p1 = 1.0;         // population sizes
  double p2 = 1.0;
};

struct TopHat {};

// Kernel sampled uniformly on [-1, 1], endpoints included.
template <typename Scalar>
class Tabulated {
 public:
  static constexpr std::size_t kMinSamples = 1024;

  explicit Tabulated(std::vector<Scalar> samples);

  const std::vector<Scalar>& samples() const { return *samples_; }
  Scalar spacing() const { return Scalar(2) / Scalar(samples_->size() - 1); }

  // Builds the tabulated version of the top-hat kernel (value 1/2 everywhere).
  static Tabulated top_hat(std::size_t n = kMinSamples) {
    return Tabulated(std::vector<Scalar>(n, Scalar(0.5)));
  }

 private:
  std::shared_ptr<const std::vector<Scalar>> samples_;
};

template <typename Scalar>
using Kernel = std::variant<TopHat, Tabulated<Scalar>>;

template <typename Scalar = double>
struct ModelParams {
  Scalar gamma = 0;
  Scalar u1_bar = 1;
  Scalar u2_bar = 1;
  Scalar L = 4;
  Kernel<Scalar> kernel = TopHat{};

  bool equal_densities() const {
    using std::abs;
    return abs(u1_bar - u2_bar) <= Scalar(1e-12) * abs(u1_bar);
  }

  ModelParams with_gamma(Scalar g) const {
    ModelParams p = *this;
    p.gamma = g;
    return p;
  }
};

template <typename Scalar>
void validate(const ModelParams<Scalar>& p) {
  using std::isfinite;
  if (!(p.L > Scalar(2))) throw ModelError("L must exceed 2");
  if (!(p.u1_bar > 0) || !(p.u2_bar > 0)) throw ModelError("equilibrium densities must be positive");
  if (!isfinite(static_cast<double>(p.gamma))) throw ModelError("gamma must be finite");
}

inline ModelParams<double> nondimensionalize(const DimensionalParams& d) {
  if (!(d.D > 0)) throw ModelError("D must be positive");
  if (!(d.l > 0)) throw ModelError("l must be positive");
  if (!(d.alpha > 0)) throw ModelError("alpha must be positive");
  if (!(d.p1 > 0) || !(d.p2 > 0)) throw ModelError("population sizes must be positive");
  if (!(d.alpha < d.l / 2)) throw ModelError("sensing radius must satisfy alpha < l/2");
  ModelParams<double> p;
  p.gamma = d.gamma_dim / (d.l * d.D);
  p.L = d.l / d.alpha;
  p.u1_bar = d.p1;
  p.u2_bar = d.p2;
  return p;
}

/// sin(q)/q with the removable singularity at q = 0 handled by its Taylor series.
template <typename Scalar>
Scalar sinc(Scalar q) {
  using std::abs;
  using std::sin;
  if (abs(q) < Scalar(1e-4)) {
    const Scalar q2 = q * q;
    return Scalar(1) - q2 / 6 + q2 * q2 / 120;
  }
  return sin(q) / q;
}

// 1 - sin(z)/z, series near 0 where the subtraction cancels.
template <typename Scalar>
Scalar one_minus_sinc(Scalar z) {
  using std::abs;
  if (abs(z) < Scalar(1e-2)) {
    const Scalar z2 = z * z;
    return z2 / 6 - z2 * z2 / 120 + z2 * z2 * z2 / 5040;
  }
  return Scalar(1) - sinc(z);
}

template <typename Scalar>
Tabulated<Scalar>::Tabulated(std::vector<Scalar> samples) {
  using std::abs;
  const std::size_t n = samples.size();
  if (n < kMinSamples) throw ModelError("tabulated kernel needs at least 1024 samples");
  const Scalar h = Scalar(2) / Scalar(n - 1);
  Scalar mass = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (samples[i] < 0) throw ModelError("kernel must be nonnegative");
    if (abs(samples[i] - samples[n - 1 - i]) > Scalar(1e-12)) throw ModelError("kernel must be even");
    mass += (i == 0 || i == n - 1) ? samples[i] / 2 : samples[i];
  }
  mass *= h;
  if (abs(mass - Scalar(1)) > Scalar(1e-12)) throw ModelError("kernel must have unit integral");
  samples_ = std::make_shared<const std::vector<Scalar>>(std::move(samples));
}

namespace detail {

// Cosine transform of the piecewise-linear interpolant of the samples. Each
// interior hat function contributes h sinc^2(qh/2) cos(q x_i); the two
// half-hats at the endpoints carry an extra boundary term.
template <typename Scalar>
Scalar tabulated_transform(const Tabulated<Scalar>& k, Scalar q) {
  using std::cos;
  using std::sin;
  const auto& s = k.samples();
  const std::size_t n = s.size();
  const Scalar h = k.spacing();
  const Scalar half = sinc(q * h / 2);
  const Scalar hat = h * half * half;
  Scalar acc = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Scalar x = Scalar(-1) + Scalar(i) * h;
    acc += s[i] * cos(q * x);
  }
  acc *= hat;
  // Both endpoint half-hats give the same contribution by evenness.
  const Scalar edge = hat * cos(q) / 2 + sin(q) * one_minus_sinc(q * h) * (q == 0 ? Scalar(0) : Scalar(1) / q);
  acc += (s.front() + s.back()) * edge;
  return acc;
}

}  // namespace detail

/// Fourier coefficient K^(q) = int K(x) cos(qx) dx of an even kernel.
template <typename Scalar>
Scalar fourier_coefficient(const Kernel<Scalar>& k, Scalar q) {
  if (std::holds_alternative<TopHat>(k)) return sinc(q);
  return detail::tabulated_transform(std::get<Tabulated<Scalar>>(k), q);
}

template <typename Scalar>
Scalar wavenumber(const ModelParams<Scalar>& p, int m) {
  return Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(m) / p.L;
}

}  // namespace nlad
