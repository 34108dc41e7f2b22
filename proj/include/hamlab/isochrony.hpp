#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamlab/g_function.hpp"
#include "hamlab/integrate.hpp"

namespace hamlab {

/// Where the planar center q' = p, p' = -g(q) has closed orbits, as far as a
/// scan of g on [-2, 2] can tell.
struct OscillationRange {
  std::optional<double> left_critical;   // nearest zero of g below 0
  std::optional<double> right_critical;  // nearest zero of g above 0
  double energy_cap = 0.0;               // orbits need G(a) < energy_cap

  bool admits(const GFunction& g, double amplitude) const;
};

inline constexpr double kScanHalfWidth = 2.0;
inline constexpr double kScanResolution = 1e-3;

OscillationRange oscillation_range(const GFunction& g);

/// Turning point q < 0 with G(q) = G(amplitude).
double left_turning_point(const GFunction& g, double amplitude);

/// Period of the orbit through (amplitude, 0) from
/// T = sqrt2 * integral dq / sqrt(G(a) - G(q)) between the turning points,
/// with square-root substitutions at both ends and composite Gauss-Legendre
/// panels doubled until converged.
double quadrature_period(const GFunction& g, double amplitude);

struct PeriodFailure {
  double amplitude;
  std::string reason;
};

struct PeriodTable {
  std::vector<double> amplitudes;
  std::vector<double> periods;             // first return to {p = 0, q > 0}
  std::vector<double> quadrature_periods;  // cross-check
  std::vector<PeriodFailure> failures;
  std::string method = "poincare_return";
  double max_spread = 0.0;
  double max_cross_check = 0.0;  // max |return - quadrature|
};

/// The period scan integrates with explicit RK4 at h = 1e-3 unless told otherwise.
IntegratorConfig default_period_config();

/// Measures the return time of the orbit through (a, 0) for every amplitude.
/// Throws UsageError for an amplitude outside the oscillation range; an orbit
/// that does not return within ten harmonic periods is listed as a failure.
PeriodTable period_scan(const GFunction& g, const std::vector<double>& amplitudes,
                        const IntegratorConfig& cfg = default_period_config());

/// g'''(0) - 5 g''(0)^2 / (3 g'(0)), exact.
Rational isochrony_condition_residual(const GFunction& g);

enum class IsochronyVerdict { kUnstable, kIsochronousWithinTolerance };

struct StabilityVerdict {
  IsochronyVerdict verdict;
  Rational residual;
  double max_spread = 0.0;
  double spread_tol = 0.0;
  std::string reason;
};

inline constexpr double kDefaultSpreadTol = 1e-6;

StabilityVerdict stability_verdict(const GFunction& g, const PeriodTable& scan,
                                   double spread_tol = kDefaultSpreadTol);

struct TransformCheck {
  double max_mismatch = 0.0;
  bool symplectic_exact = false;
  std::size_t samples = 0;
};

/// Compares p1 p2 + q1 q2 + s q1^2 q2 at (Q1+Q2, Q1-Q2, P1+P2, P1-P2)/sqrt2
/// with (Q1^2+P1^2)/2 - (Q2^2+P2^2)/2 + s/(2 sqrt2) (Q1+Q2)(Q1^2-Q2^2) on
/// random points of the unit ball, and checks M^T J M = J in integers.
TransformCheck transform_check(double sigma, std::size_t samples, std::uint64_t seed = 42);

/// Integer matrix K with M = K / sqrt2.
std::vector<int> transform_matrix_scaled();

std::string to_string(IsochronyVerdict v);

}  // namespace hamlab
