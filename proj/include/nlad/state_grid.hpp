#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace nlad {

/// Two densities sampled at x_k = -L/2 + k L / n on a periodic grid.
struct StateGrid {
  int n = 0;
  double L = 0;
  Eigen::VectorXd u1;
  Eigen::VectorXd u2;

  StateGrid() = default;
  StateGrid(int n_, double L_) : n(n_), L(L_), u1(Eigen::VectorXd::Zero(n_)), u2(Eigen::VectorXd::Zero(n_)) {}

  static StateGrid homogeneous(int n, double L, double u1_bar, double u2_bar) {
    StateGrid s(n, L);
    s.u1.setConstant(u1_bar);
    s.u2.setConstant(u2_bar);
    return s;
  }

  double dx() const { return L / n; }
  double x(int k) const { return -L / 2 + k * dx(); }
  Eigen::VectorXd coordinates() const {
    return Eigen::VectorXd::LinSpaced(n, 0, n - 1).unaryExpr([this](double k) { return -L / 2 + k * L / n; });
  }

  double mass1() const { return dx() * u1.sum(); }
  double mass2() const { return dx() * u2.sum(); }

  bool nonnegative() const { return u1.minCoeff() >= 0 && u2.minCoeff() >= 0; }
  bool finite() const { return u1.allFinite() && u2.allFinite(); }

  // Cyclic shift by `cells` grid points: result(k) = this(k - cells).
  StateGrid shifted(int cells) const {
    StateGrid s(n, L);
    for (int k = 0; k < n; ++k) {
      const int src = ((k - cells) % n + n) % n;
      s.u1[k] = u1[src];
      s.u2[k] = u2[src];
    }
    return s;
  }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace nlad
