#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamlab {

/// Bad input from a caller: wrong dimension, invalid parameter, unknown name.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure gave up (corrector, root finder, rank sequence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point (q, p) of a 2n-dimensional phase space.
///
/// Components are always finite; the flat layout used by the field and the
/// integrators is (q1, ..., qn, p1, ..., pn).
class PhaseState {
 public:
  PhaseState(std::vector<double> q, std::vector<double> p);

  static PhaseState zero(std::size_t n);
  static PhaseState from_flat(std::span<const double> x);

  std::size_t dof() const { return q_.size(); }
  std::size_t dim() const { return 2 * q_.size(); }

  const std::vector<double>& q() const { return q_; }
  const std::vector<double>& p() const { return p_; }

  /// Component k of the flat vector (q then p).
  double operator[](std::size_t k) const { return k < dof() ? q_[k] : p_[k - dof()]; }

  std::vector<double> flat() const;
  double norm() const;
  double distance(const PhaseState& other) const;

  friend bool operator==(const PhaseState&, const PhaseState&) = default;

 private:
  std::vector<double> q_;
  std::vector<double> p_;
};

double norm2(std::span<const double> x);

/// Name of flat component k for an n-dof system ("q1", ..., "p2").
std::string component_name(std::size_t k, std::size_t n);

}  // namespace hamlab
