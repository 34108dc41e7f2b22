#include "hamlab/isochrony.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace hamlab {

namespace {

constexpr double kCrossingTol = 1e-12;

// g(x)/x, positive near 0.
double slope_ratio(const GFunction& g, double x) {
  const auto& c = g.coefficients();
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
  return acc;
}

std::optional<double> first_sign_change(const GFunction& g, double direction) {
  const auto steps = static_cast<int>(std::lround(kScanHalfWidth / kScanResolution));
  double prev = 0.0;
  for (int k = 1; k <= steps; ++k) {
    const double x = direction * kScanResolution * k;
    if (slope_ratio(g, x) <= 0.0) {
      double lo = prev, hi = x;  // ratio > 0 at lo, <= 0 at hi
      for (int it = 0; it < 200 && lo != hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (slope_ratio(g, mid) > 0.0 ? lo : hi) = mid;
      }
      return hi;
    }
    prev = x;
  }
  return std::nullopt;
}

// Composite 5-point Gauss-Legendre on [a, b], panels doubled until two
// successive estimates agree to ~1e-15 relative.
template <typename F>
double integrate_smooth(F&& f, double a, double b) {
  static constexpr std::array<double, 5> x = {0.0, -0.5384693101056831, 0.5384693101056831,
                                              -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665,
                                              0.4786286704993665, 0.2369268850561891,
                                              0.2369268850561891};
  auto composite = [&](int panels) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double c = a + (p + 0.5) * h;
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(c + 0.5 * h * x[i]);
      total += 0.5 * h * s;
    }
    return total;
  };
  double prev = composite(1);
  for (int panels = 2; panels <= (1 << 16); panels *= 2) {
    const double next = composite(panels);
    if (std::abs(next - prev) <= 1e-15 * std::abs(next)) return next;
    prev = next;
  }
  throw NumericalError("quadrature_period: panel doubling did not converge");
}

// Root of the cubic Hermite interpolant of p(t) on [0, h], p(0) < 0 <= p(h).
// Callers with a falling crossing pass the negated data.
double hermite_root(double h, double p0, double p1, double dp0, double dp1) {
  auto value = [&](double s) {  // s in [0, 1]
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * dp0 + (-2 * s3 + 3 * s2) * p1 +
           (s3 - s2) * h * dp1;
  };
  auto slope = [&](double s) {
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * h * dp0 + (-6 * s2 + 6 * s) * p1 +
            (3 * s2 - 2 * s) * h * dp1) /
           h;
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) < 0.0 ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 20; ++it) {
    const double ds = slope(s);
    if (ds == 0.0) break;
    const double step = value(s) / ds / h;
    s -= step;
    if (std::abs(step * h) <= kCrossingTol) break;
  }
  return std::clamp(s, 0.0, 1.0) * h;
}

}  // namespace

bool OscillationRange::admits(const GFunction& g, double amplitude) const {
  if (!(amplitude > 0.0) || amplitude > kScanHalfWidth) return false;
  if (right_critical && amplitude >= *right_critical) return false;
  const double energy = g.antiderivative(amplitude);
  // orbits touching the separatrix level (to rounding) are excluded
  if (!(energy < energy_cap * (1.0 - 1e-9))) return false;
  if (!left_critical && !(g.antiderivative(-kScanHalfWidth) > energy)) return false;
  return true;
}

OscillationRange oscillation_range(const GFunction& g) {
  OscillationRange r;
  r.left_critical = first_sign_change(g, -1.0);
  r.right_critical = first_sign_change(g, 1.0);
  r.energy_cap = std::numeric_limits<double>::infinity();
  if (r.left_critical) r.energy_cap = std::min(r.energy_cap, g.antiderivative(*r.left_critical));
  if (r.right_critical) r.energy_cap = std::min(r.energy_cap, g.antiderivative(*r.right_critical));
  return r;
}

double left_turning_point(const GFunction& g, double amplitude) {
  const auto range = oscillation_range(g);
  if (!range.admits(g, amplitude)) throw UsageError("amplitude outside the oscillation range");
  const double energy = g.antiderivative(amplitude);
  double lo = range.left_critical.value_or(-kScanHalfWidth);  // G(lo) > energy
  double hi = 0.0;                                            // G(hi) < energy
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (g.antiderivative(mid) > energy ? lo : hi) = mid;
  }
  return std::abs(g.antiderivative(lo) - energy) < std::abs(g.antiderivative(hi) - energy) ? lo : hi;
}

double quadrature_period(const GFunction& g, double amplitude) {
  const double left = left_turning_point(g, amplitude);
  const double mid = 0.5 * (left + amplitude);
  const double c = 2.0 * std::numbers::sqrt2;
  // q = a - u^2: G(a) - G(q) = u^2 S(a, q).
  const double right_part = integrate_smooth(
      [&](double u) { return c / std::sqrt(g.antiderivative_slope(amplitude, amplitude - u * u)); }, 0.0,
      std::sqrt(amplitude - mid));
  // q = left + u^2: G(a) - G(q) = G(left) - G(q) = -u^2 S(left, q).
  const double left_part = integrate_smooth(
      [&](double u) { return c / std::sqrt(-g.antiderivative_slope(left, left + u * u)); }, 0.0,
      std::sqrt(mid - left));
  return right_part + left_part;
}

IntegratorConfig default_period_config() {
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::kExplicitRk4;
  cfg.step = 1e-3;
  return cfg;
}

PeriodTable period_scan(const GFunction& g, const std::vector<double>& amplitudes,
                        const IntegratorConfig& cfg) {
  if (amplitudes.empty()) throw UsageError("period_scan: no amplitudes");
  for (std::size_t k = 1; k < amplitudes.size(); ++k) {
    if (!(amplitudes[k] > amplitudes[k - 1])) throw UsageError("period_scan: amplitudes must increase strictly");
  }
  const auto range = oscillation_range(g);
  for (double a : amplitudes) {
    if (!range.admits(g, a)) {
      throw UsageError("period_scan: amplitude " + std::to_string(a) + " outside the oscillation range");
    }
  }

  IntegratorConfig run = cfg;
  run.escape_radius.reset();
  run.record_stride = 1;
  const auto sub = separated_subsystem(g);
  const double harmonic = 2.0 * std::numbers::pi / std::sqrt(g.coefficients()[0]);
  const double t_cap = 10.0 * harmonic;

  PeriodTable table;
  for (double a : amplitudes) {
    const auto tr = integrate(sub, PhaseState({a}, {0.0}), 0.0, t_cap, run);
    if (tr.terminated_by == Termination::kCorrectorFailure) {
      table.failures.push_back({a, "corrector failure"});
      continue;
    }
    std::optional<double> period;
    for (std::size_t k = 2; k < tr.states.size(); ++k) {
      const double p0 = tr.states[k - 1].p()[0];
      const double p1 = tr.states[k].p()[0];
      // Back at the right turning point: p changes sign from + to - with q > 0.
      if (p0 > 0.0 && p1 <= 0.0 && tr.states[k].q()[0] > 0.0) {
        const double h = tr.times[k] - tr.times[k - 1];
        const double dp0 = g.value(tr.states[k - 1].q()[0]);
        const double dp1 = g.value(tr.states[k].q()[0]);
        period = tr.times[k - 1] + hermite_root(h, -p0, -p1, dp0, dp1);
        break;
      }
    }
    if (!period) {
      table.failures.push_back({a, "no return within ten harmonic periods"});
      continue;
    }
    const double quad = quadrature_period(g, a);
    table.amplitudes.push_back(a);
    table.periods.push_back(*period);
    table.quadrature_periods.push_back(quad);
    table.max_cross_check = std::max(table.max_cross_check, std::abs(*period - quad));
  }
  if (!table.periods.empty()) {
    const auto [lo, hi] = std::minmax_element(table.periods.begin(), table.periods.end());
    table.max_spread = *hi - *lo;
  }
  return table;
}

Rational isochrony_condition_residual(const GFunction& g) {
  const Rational d1 = g.derivative_at_zero(1);
  const Rational d2 = g.derivative_at_zero(2);
  const Rational d3 = g.derivative_at_zero(3);
  return d3 - Rational(5) * d2 * d2 / (Rational(3) * d1);
}

StabilityVerdict stability_verdict(const GFunction& g, const PeriodTable& scan, double spread_tol) {
  if (scan.periods.empty()) throw UsageError("stability_verdict: empty period table");
  StabilityVerdict v{IsochronyVerdict::kUnstable, isochrony_condition_residual(g), scan.max_spread,
                     spread_tol, {}};
  if (v.residual != 0) {
    v.reason = "necessary condition g'''(0) = 5 g''(0)^2 / (3 g'(0)) violated";
  } else if (scan.max_spread > spread_tol) {
    v.reason = "necessary condition holds but the measured period spread exceeds the tolerance";
  } else {
    v.verdict = IsochronyVerdict::kIsochronousWithinTolerance;
    v.reason = "necessary condition holds and periods agree within the tolerance (suggests stability, not a proof)";
  }
  return v;
}

std::vector<int> transform_matrix_scaled() {
  // Rows map (Q1, Q2, P1, P2) to (q1, q2, p1, p2) times sqrt2.
  return {1, 1, 0, 0,  //
          1, -1, 0, 0,  //
          0, 0, 1, 1,   //
          0, 0, 1, -1};
}

TransformCheck transform_check(double sigma, std::size_t samples, std::uint64_t seed) {
  if (samples < 100) throw UsageError("transform_check: need at least 100 samples");
  TransformCheck out;
  out.samples = samples;

  // K^T J K == 2 J  <=>  M^T J M == J for M = K / sqrt2.
  const auto k = transform_matrix_scaled();
  const std::array<int, 16> j = {0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0};
  out.symplectic_exact = true;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      int acc = 0;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) acc += k[a * 4 + r] * j[a * 4 + b] * k[b * 4 + c];
      }
      if (acc != 2 * j[r * 4 + c]) out.symplectic_exact = false;
    }
  }

  const auto sys = catalog_build("variation_like", {sigma, std::nullopt});
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double inv = 1.0 / std::numbers::sqrt2;
  for (std::size_t s = 0; s < samples; ++s) {
    std::array<double, 4> z{};
    double len = 0.0;
    for (auto& v : z) {
      v = gauss(rng);
      len += v * v;
    }
    const double r = std::pow(unit(rng), 0.25) / std::sqrt(len);
    for (auto& v : z) v *= r;
    const double Q1 = z[0], Q2 = z[1], P1 = z[2], P2 = z[3];
    const PhaseState image({(Q1 + Q2) * inv, (Q1 - Q2) * inv}, {(P1 + P2) * inv, (P1 - P2) * inv});
    const double lhs = sys.hamiltonian(image);
    const double rhs = 0.5 * (Q1 * Q1 + P1 * P1) - 0.5 * (Q2 * Q2 + P2 * P2) +
                       sigma / (2.0 * std::numbers::sqrt2) * (Q1 + Q2) * (Q1 * Q1 - Q2 * Q2);
    out.max_mismatch = std::max(out.max_mismatch, std::abs(lhs - rhs));
  }
  return out;
}

std::string to_string(IsochronyVerdict v) {
  return v == IsochronyVerdict::kUnstable ? "UNSTABLE" : "ISOCHRONOUS_WITHIN_TOLERANCE";
}

}  // namespace hamlab
