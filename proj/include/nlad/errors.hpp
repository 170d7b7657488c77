#pragma once

#include <stdexcept>
#include <string>

namespace nlad {

// Parameters violate a model invariant (nonpositive density, L <= 2, ...).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// |K^(q_m)| vanishes, so no finite gamma destabilizes the mode.
class ModeNeverDestabilized : public std::domain_error {
 public:
  explicit ModeNeverDestabilized(int m)
      : std::domain_error("mode never destabilized (m = " + std::to_string(m) + ")"), mode(m) {}
  int mode;
};

// 1 - gamma_c^2 u1 u2 K^(2 q_c)^2 vanishes: the second harmonic is itself critical.
class SecondHarmonicResonance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Nonfinite values appeared during time stepping.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(const std::string& what, double t) : std::runtime_error(what), time(t) {}
  double time;
};

}  // namespace nlad
