#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hamlab/integrate.hpp"

namespace hamlab {

// ---------------------------------------------------------------------------
// Instability witness
// ---------------------------------------------------------------------------

/// Where a probe starts: base + epsilon * direction, with an optional group of
/// components whose norm is tracked separately.
struct WitnessSetup {
  PhaseState base;
  std::vector<double> direction;  // unit length
  std::vector<std::size_t> monitored;
  std::string note;
};

/// Default starting family per catalog system.
///
/// free_particle (0,1); l4_linear (1,0,0,0); cherry along the closed-form
/// asymptotic motion at t = -2 pi k; variation_like from a subsystem orbit of
/// amplitude kVariationWitnessAmplitude seeded in q2, monitoring (q2, p1).
WitnessSetup default_witness(const HamiltonianSystem& sys);

inline constexpr double kVariationWitnessAmplitude = 0.4;

struct ProbeDefaults {
  static constexpr double kRadius = 1.0;
  static constexpr double kTMax = 1e4;
  static constexpr double kStep = 1e-2;
  static std::vector<double> epsilons() { return {0.5, 0.2, 0.1, 0.01}; }
};

struct ProbeRecord {
  double epsilon = 0.0;
  PhaseState initial;
  bool escaped = false;
  std::optional<double> escape_time;
  bool failed = false;  // corrector failure; excluded from the verdict
  double monitored_initial = 0.0;
  double monitored_max = 0.0;
};

enum class ProbeVerdict { kUnstableWitnessed, kNoEscapeObserved };

struct ProbeReport {
  std::string system;
  double radius = 0.0;
  double t_max = 0.0;
  std::vector<double> epsilons;
  std::vector<ProbeRecord> records;
  ProbeVerdict verdict = ProbeVerdict::kNoEscapeObserved;
  /// False for kNoEscapeObserved: not escaping up to t_max proves nothing.
  bool conclusive = false;
  std::vector<std::size_t> monitored;
  std::string note;
};

/// Integrates from setup.base + eps * setup.direction for every eps with the
/// escape radius R until escape or t_max.
ProbeReport instability_probe(const HamiltonianSystem& sys, const WitnessSetup& setup, double radius,
                              const std::vector<double>& epsilons, double t_max,
                              IntegratorConfig cfg);

/// Same with the equilibrium as base and no monitored group.
ProbeReport instability_probe(const HamiltonianSystem& sys, const std::vector<double>& direction,
                              double radius, const std::vector<double>& epsilons, double t_max,
                              IntegratorConfig cfg);

std::string to_string(ProbeVerdict v);

// ---------------------------------------------------------------------------
// Closed-form motions
// ---------------------------------------------------------------------------

/// An explicit solution t -> x(t) on an open interval, with its derivative
/// written out independently of the vector field.
struct ClosedFormMotion {
  std::string name;
  double t_lower = -std::numeric_limits<double>::infinity();
  double t_upper = std::numeric_limits<double>::infinity();
  std::function<PhaseState(double)> state;
  std::function<std::vector<double>(double)> velocity;

  bool contains(double t) const { return t > t_lower && t < t_upper; }
};

/// Cherry: q1 = sin t/(sqrt2 s t), q2 = sin 2t/(2 s t), p1 = cos t/(sqrt2 s t),
/// p2 = -cos 2t/(2 s t), for t < 0.
ClosedFormMotion cherry_asymptotic_motion(double sigma);

/// L4 linearization: q = (cos w t, -sin w t)/m, p = (-t cos w t, t sin w t)/m,
/// w = 1/sqrt2.
ClosedFormMotion l4_unstable_motion(double m);

/// Free particle: q = q0 + p0 t, p = p0.
ClosedFormMotion free_particle_motion(double q0, double p0);

ClosedFormMotion equilibrium_motion(const HamiltonianSystem& sys);

/// max over the grid of |x'(t) - f(x(t))|.
double asymptotic_residual(const HamiltonianSystem& sys, const ClosedFormMotion& motion,
                           const std::vector<double>& grid);

/// |t| * |x(t)| at each time (times negative, inside the domain).
std::vector<double> past_decay_profile(const ClosedFormMotion& motion, const std::vector<double>& times);

/// max over times of |t| * |x(t)|.
double past_decay_check(const ClosedFormMotion& motion, const std::vector<double>& times);

/// Evidence that x(t) -> 0 like 1/|t|: |t| |x(t)| over t in [-1e4, -1e3]
/// does not exceed its maximum over [-100, -1] by more than 1%.
bool decays_in_past(const ClosedFormMotion& motion);

/// The solution of the catalog system known in closed form, if any.
std::optional<ClosedFormMotion> default_motion(const HamiltonianSystem& sys);

std::vector<double> linspace(double a, double b, std::size_t count);

// ---------------------------------------------------------------------------
// Cascaded first integrals
// ---------------------------------------------------------------------------

struct CascadeStage {
  std::string name;
  StateFunction f;
  /// Flat indices forced to vanish once this stage's integral is zero; later
  /// stages are checked with these pinned to the equilibrium.
  std::vector<std::size_t> zero_locus;
};

struct CascadeSpec {
  std::vector<CascadeStage> stages;
};

struct StageResult {
  std::string name;
  std::vector<std::size_t> pinned;
  double max_residual = 0.0;
  bool validated = false;
  bool evaluated = false;
};

enum class CascadeVerdict { kCertifiedNoAsymptoticMotion, kNotCertified };

struct CascadeCertificate {
  std::vector<StageResult> stages;
  bool positive_definite = false;
  double min_sum = 0.0;  // smallest sum of F_j - F_j(eq) over nonzero samples
  CascadeVerdict verdict = CascadeVerdict::kNotCertified;
  std::size_t sample_count = 0;
  double tol = 0.0;
  double ball_radius = 0.0;
  std::uint64_t seed = 0;
  std::string label = "numerical evidence";
};

inline constexpr double kCascadeBallRadius = 0.1;
inline constexpr double kCascadeTol = 1e-9;
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Checks (a) grad F1 . f = 0 on a ball around the equilibrium, (b) for each
/// later stage grad Fj . f = 0 with the previous zero loci pinned, (c) the sum
/// of the Fj is positive at every nonzero sample. Samples are uniform in the
/// ball of radius ball_radius (restricted to the unpinned coordinates).
CascadeCertificate certify_no_asymptotic(const HamiltonianSystem& sys, const CascadeSpec& cascade,
                                         std::size_t sample_count, double tol,
                                         std::uint64_t seed = kDefaultSeed,
                                         double ball_radius = kCascadeBallRadius);

/// free_particle [p^2, q^2 on {p=0}], l4_linear [|q|^2, |p|^2 on {q=0}],
/// cherry [H], variation_like [p2^2/2 + G(q1), (p1^2 + g'(0) q2^2)/2 on
/// {q1 = p2 = 0}].
std::optional<CascadeSpec> default_cascade(const HamiltonianSystem& sys);

std::string to_string(CascadeVerdict v);

}  // namespace hamlab
