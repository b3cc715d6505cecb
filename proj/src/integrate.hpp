#pragma once

#include <span>
#include <vector>

#include "giantatom/model.hpp"
#include "giantatom/rk4.hpp"

namespace giantatom::detail {

/// Fixed-step RK4 from t = 0 to integ.t_end. `visit(step, t, y)` runs at step 0
/// and after every step; t is computed as step * dt so runs are reproducible.
template <class Generator, class Visitor>
void integrate(const Generator& gen, std::vector<Complex>& y, const IntegratorConfig& integ,
               Visitor&& visit) {
  Rk4Stepper stepper(y.size());
  const std::size_t steps = integ.steps();
  visit(std::size_t{0}, 0.0, std::span<const Complex>(y));
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * integ.dt;
    stepper.step(gen, t, integ.dt, std::span<Complex>(y));
    const double t_next = static_cast<double>(n + 1) * integ.dt;
    check_finite(y, n + 1, t_next);
    visit(n + 1, t_next, std::span<const Complex>(y));
  }
}

inline bool is_snapshot(std::size_t step, const IntegratorConfig& integ) {
  return step % static_cast<std::size_t>(integ.snapshot_stride) == 0 || step == integ.steps();
}

}  // namespace giantatom::detail
