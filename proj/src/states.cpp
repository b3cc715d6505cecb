#include "giantatom/states.hpp"

#include <sstream>

#include "giantatom/errors.hpp"
#include "giantatom/trajectory.hpp"

namespace giantatom {

namespace {
double sum_norm(const std::vector<Complex>& a) {
  double s = 0.0;
  for (const Complex& z : a) s += std::norm(z);
  return s;
}

std::size_t wrap(int k, int d) {
  const int n = 2 * d;
  int r = (k + d) % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}
}  // namespace

double RealState::norm() const { return sum_norm(v) + std::norm(xi); }

Complex& KState::at(int k) { return c[wrap(k, d)]; }
const Complex& KState::at(int k) const { return c[wrap(k, d)]; }
double KState::norm() const { return sum_norm(c) + std::norm(chi); }

ReducedState::ReducedState(int half_extent, double time) : d(half_extent), t(time) {
  if (half_extent <= 0 || half_extent % 4 != 0) {
    std::ostringstream os;
    os << "reduced model needs d divisible by 4 (got d = " << half_extent << ")";
    throw DimensionError(os.str());
  }
  const auto n = static_cast<std::size_t>(half_extent / 4);
  j_s_plus.assign(n, Complex{});
  j_s_minus.assign(n, Complex{});
  j_0_plus.assign(n, Complex{});
  j_0_minus.assign(n, Complex{});
}

double ReducedState::norm_s() const {
  double s = 0.0;
  for (std::size_t k = 0; k < j_s_plus.size(); ++k)
    s += weight(k) * (std::norm(j_s_plus[k]) + std::norm(j_s_minus[k]));
  return s;
}

double ReducedState::norm_0() const {
  double s = 0.0;
  for (std::size_t k = 0; k < j_0_plus.size(); ++k)
    s += weight(k) * (std::norm(j_0_plus[k]) + std::norm(j_0_minus[k]));
  return s;
}

DivergenceError::DivergenceError(std::size_t step, double t, double max_abs)
    : Error([&] {
        std::ostringstream os;
        os << "integration diverged at step " << step << " (t = " << t
           << "): non-finite amplitude, largest finite |amplitude| = " << max_abs;
        return os.str();
      }()),
      step_(step),
      t_(t),
      max_abs_(max_abs) {}

double Trajectory::site_probability(std::size_t snapshot, int m) const {
  if (!sites.contains(m)) return 0.0;
  return std::norm(site_amplitudes.at(snapshot)[sites.index(m)]);
}

double Trajectory::atom_probability(std::size_t snapshot) const {
  return std::norm(atom_amplitudes.at(snapshot));
}

double Trajectory::window_probability(std::size_t snapshot, int halfwidth, bool include_atom) const {
  const auto& v = site_amplitudes.at(snapshot);
  double p = 0.0;
  for (int m = std::max(-halfwidth, sites.first); m <= std::min(halfwidth, sites.last); ++m)
    p += std::norm(v[sites.index(m)]);
  if (include_atom) p += atom_probability(snapshot);
  return p;
}

double Trajectory::centroid(std::size_t snapshot) const {
  const auto& v = site_amplitudes.at(snapshot);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double p = std::norm(v[i]);
    num += p * sites.site(i);
    den += p;
  }
  if (!(den > 0.0)) throw DataError("centroid of a zero-norm snapshot");
  return num / den;
}

}  // namespace giantatom
