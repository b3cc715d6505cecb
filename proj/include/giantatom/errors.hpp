#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>

namespace giantatom {

struct Trajectory;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (wrong excitation variant, site outside lattice, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Array extents that do not match the lattice they are meant to live on.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Malformed or insufficient input to an analysis routine.
class DataError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

/// Division by an exact resonance Omega == omega_k in a closed-form expression.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, int k) : Error(what), k_(k) {}
  int k() const { return k_; }

 private:
  int k_;
};

/// Non-finite amplitudes produced by an integration step.
///
/// Carries whatever part of the trajectory was recorded before the failure so
/// callers can still write it out (flagged as partial).
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t step, double t, double max_abs);

  std::size_t step() const { return step_; }
  double time() const { return t_; }
  double max_abs() const { return max_abs_; }

  const std::shared_ptr<const Trajectory>& partial() const { return partial_; }
  void set_partial(std::shared_ptr<const Trajectory> partial) { partial_ = std::move(partial); }

 private:
  std::size_t step_;
  double t_;
  double max_abs_;
  std::shared_ptr<const Trajectory> partial_;
};

}  // namespace giantatom
