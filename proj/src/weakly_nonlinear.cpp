#include "nlad/weakly_nonlinear.hpp"

#include <stdexcept>

namespace nlad {

std::string_view to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

std::string_view to_string(Regime r) { return r == Regime::stable ? "stable" : "unstable"; }

std::string_view to_string(BifurcationClass c) {
  switch (c) {
    case BifurcationClass::Subcritical:
      return "Subcritical";
    case BifurcationClass::SupercriticalStable:
      return "SupercriticalStable";
    case BifurcationClass::SupercriticalUnstable:
      return "SupercriticalUnstable";
  }
  return "?";
}

Regime regime_of(double gamma, double gamma_c) {
  // Beyond the threshold means further from zero on the same side.
  return (gamma_c > 0 ? gamma > gamma_c : gamma < gamma_c) ? Regime::unstable : Regime::stable;
}

StateGrid wnl_profile(const ModelParams<double>& p, const WnlCoefficients<double>& c, double epsilon, int n) {
  StateGrid s = StateGrid::homogeneous(n, static_cast<double>(p.L), p.u1_bar, p.u2_bar);
  if (epsilon == 0) return s;
  const auto a0 = c.stationary_amplitude();
  if (!a0) throw std::domain_error("no stationary amplitude: sigma/Lambda <= 0");
  const double first = 2 * epsilon * *a0;
  const double second = 2 * epsilon * epsilon * *a0 * *a0;
  for (int k = 0; k < n; ++k) {
    const double x = s.x(k);
    const double c1 = std::cos(c.q_c * x);
    const double c2 = std::cos(2 * c.q_c * x);
    s.u1[k] += first * c1 + second * c.psi1 * c2;
    s.u2[k] += first * c.rho2 * c1 + second * c.psi2 * c2;
  }
  return s;
}

AnalyticBranch analytic_branch(const ModelParams<double>& p, Side side, const std::vector<double>& gammas,
                               int profile_n) {
  const auto unstable = wnl_coefficients(p, side, Regime::unstable);
  const auto stable = wnl_coefficients(p, side, Regime::stable);
  if (unstable.Lambda == 0) throw std::domain_error("Lambda vanishes: the cubic truncation is degenerate");

  AnalyticBranch b;
  b.side = side;
  b.gamma_c = unstable.gamma_c;
  b.kind = classify(unstable);
  for (double g : gammas) {
    const double eps = epsilon_of(g, b.gamma_c);
    const Regime r = eps == 0 ? Regime::unstable : regime_of(g, b.gamma_c);
    const auto& c = r == Regime::unstable ? unstable : stable;
    BranchSample s;
    s.gamma = g;
    s.epsilon = eps;
    s.regime = r;
    if (eps == 0) {
      s.stable = b.kind == BifurcationClass::SupercriticalStable;
    } else {
      const auto a0 = c.stationary_amplitude();
      if (!a0) continue;
      s.amplitude = eps * *a0;
      s.second_harmonic = eps * eps * std::abs(c.psi1) * *a0 * *a0;
      // Subcritical segments live on the stable side and are always unstable.
      s.stable = r == Regime::unstable && b.kind == BifurcationClass::SupercriticalStable;
    }
    if (profile_n > 0) s.profile = wnl_profile(p, c, eps, profile_n);
    b.points.push_back(std::move(s));
  }
  return b;
}

AnalyticBranch analytic_branch(const ModelParams<double>& p, Side side, double gamma_lo, double gamma_hi,
                               int n_points, int profile_n) {
  if (n_points < 1) throw std::invalid_argument("n_points must be positive");
  std::vector<double> g(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i)
    g[i] = n_points == 1 ? gamma_lo : gamma_lo + (gamma_hi - gamma_lo) * i / (n_points - 1);
  return analytic_branch(p, side, g, profile_n);
}

std::vector<double> AnalyticBranch::gamma_values() const {
  std::vector<double> v;
  for (const auto& s : points) v.push_back(s.gamma);
  return v;
}

std::vector<double> AnalyticBranch::epsilon_values() const {
  std::vector<double> v;
  for (const auto& s : points) v.push_back(s.epsilon);
  return v;
}

std::vector<double> AnalyticBranch::amplitude_values() const {
  std::vector<double> v;
  for (const auto& s : points) v.push_back(s.amplitude);
  return v;
}

std::vector<bool> AnalyticBranch::stability_flags() const {
  std::vector<bool> v;
  for (const auto& s : points) v.push_back(s.stable);
  return v;
}

}  // namespace nlad
