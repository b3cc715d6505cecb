#pragma once

#include <complex>
#include <cstddef>

namespace giantatom {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Contiguous, inclusive range of lattice site indices.
struct SiteRange {
  int first = 0;
  int last = -1;

  std::size_t size() const { return last < first ? 0 : static_cast<std::size_t>(last - first + 1); }
  bool contains(int m) const { return m >= first && m <= last; }
  std::size_t index(int m) const { return static_cast<std::size_t>(m - first); }
  int site(std::size_t i) const { return first + static_cast<int>(i); }

  friend bool operator==(const SiteRange&, const SiteRange&) = default;
};

}  // namespace giantatom
