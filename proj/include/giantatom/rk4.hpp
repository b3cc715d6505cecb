#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "giantatom/errors.hpp"
#include "giantatom/types.hpp"

namespace giantatom {

/// Classical fourth-order Runge-Kutta on a flat complex buffer.
///
/// `f(t, y, dydt)` must write the full derivative into `dydt`. Scratch buffers
/// are owned by the stepper so repeated steps do not allocate.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  template <class F>
  void step(F&& f, double t, double dt, std::span<Complex> y) {
    const std::size_t n = y.size();
    const double half = 0.5 * dt;

    f(t, std::span<const Complex>(y), std::span<Complex>(k1_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + half * k1_[i];
    f(t + half, std::span<const Complex>(tmp_), std::span<Complex>(k2_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + half * k2_[i];
    f(t + half, std::span<const Complex>(tmp_), std::span<Complex>(k3_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
    f(t + dt, std::span<const Complex>(tmp_), std::span<Complex>(k4_));

    const double sixth = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += sixth * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
    }
  }

 private:
  std::vector<Complex> k1_, k2_, k3_, k4_, tmp_;
};

/// Throws DivergenceError if the buffer holds a non-finite value. The error
/// reports the largest finite magnitude still present.
inline void check_finite(std::span<const Complex> y, std::size_t step, double t) {
  bool finite = true;
  double largest = 0.0;
  for (const Complex& z : y) {
    const double a = std::abs(z);
    if (std::isfinite(a)) {
      largest = std::max(largest, a);
    } else {
      finite = false;
    }
  }
  if (!finite) throw DivergenceError(step, t, largest);
}

}  // namespace giantatom
