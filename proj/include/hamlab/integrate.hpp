#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hamlab/hamiltonian.hpp"

namespace hamlab {

enum class IntegratorMethod { kImplicitMidpoint, kExplicitRk4 };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::kImplicitMidpoint;
  double step = 1e-3;
  /// Corrector tolerance on the update, relative to max(1, |x|_inf).
  double tolerance = 1e-13;
  int max_iterations = 50;
  std::optional<double> escape_radius;
  /// Keep every k-th state (the first and last state are always kept).
  std::size_t record_stride = 1;

  void validate() const;
};

enum class Termination { kTimeEnd, kEscape, kCorrectorFailure };

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<double> energies;
  Termination terminated_by = Termination::kTimeEnd;
  std::optional<double> escape_time;
  /// Largest distance from the equilibrium seen at any step, recorded or not.
  double max_norm = 0.0;

  bool empty() const { return times.empty(); }
  const PhaseState& final_state() const { return states.back(); }
};

/// Fixed-step integration from t0 to t1 (t1 < t0 runs backward in time).
///
/// The step is shrunk slightly so that the grid lands on t1 exactly. With an
/// escape radius the run stops at the first step whose distance from the
/// equilibrium reaches the radius; escape_time interpolates that crossing
/// linearly in the norm.
Trajectory integrate(const HamiltonianSystem& sys, const PhaseState& s0, double t0, double t1,
                     const IntegratorConfig& cfg);

/// max_k |H_k - H_0|
double energy_drift(const Trajectory& tr);

using StateFunction = std::function<double(const PhaseState&)>;

/// max_k |F(x_k) - F(x_0)|
double first_integral_drift(const Trajectory& tr, const StateFunction& f);

/// CSV with header t,q1..qn,p1..pn,H and 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& tr);

std::string to_string(IntegratorMethod m);
std::string to_string(Termination t);
IntegratorMethod parse_method(const std::string& name);

}  // namespace hamlab
