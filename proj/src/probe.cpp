#include "hamlab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace hamlab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kGradStep = 1e-5;

double monitored_norm(const PhaseState& s, const PhaseState& eq, const std::vector<std::size_t>& idx) {
  double acc = 0.0;
  for (auto k : idx) acc += (s[k] - eq[k]) * (s[k] - eq[k]);
  return std::sqrt(acc);
}

double field_derivative(const HamiltonianSystem& sys, const StateFunction& f, std::vector<double> x) {
  // grad F . field with central differences.
  std::vector<double> v(sys.dim());
  sys.field(x, v);
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + kGradStep;
    const double fp = f(PhaseState::from_flat(x));
    x[k] = saved - kGradStep;
    const double fm = f(PhaseState::from_flat(x));
    x[k] = saved;
    acc += (fp - fm) / (2.0 * kGradStep) * v[k];
  }
  return acc;
}

}  // namespace

WitnessSetup default_witness(const HamiltonianSystem& sys) {
  WitnessSetup w{sys.equilibrium(), {}, {}, {}};
  switch (sys.kind()) {
    case SystemKind::kFreeParticle:
      w.direction = {0.0, 1.0};
      w.note = "(q, p) = (0, eps)";
      break;
    case SystemKind::kL4Linear:
      w.direction = {1.0, 0.0, 0.0, 0.0};
      w.note = "(q1, q2, p1, p2) = (eps, 0, 0, 0)";
      break;
    case SystemKind::kCherry: {
      const double sign = sys.sigma() < 0.0 ? -1.0 : 1.0;
      w.direction = {0.0, 0.0, -sign * std::sqrt(2.0 / 3.0), sign / std::sqrt(3.0)};
      w.note = "eps times the direction of the closed-form asymptotic motion at t = -2 pi k";
      break;
    }
    case SystemKind::kVariationLike:
      w.base = PhaseState({kVariationWitnessAmplitude, 0.0}, {0.0, 0.0});
      w.direction = {0.0, 1.0, 0.0, 0.0};
      w.monitored = {1, 2};
      w.note =
          "(q1, q2, p1, p2) = (0.4, eps, 0, 0): fixed subsystem amplitude, shrinking transverse "
          "seed; the starting points do not approach the equilibrium";
      break;
    case SystemKind::kSubsystem:
      w.direction = {1.0, 0.0};
      w.note = "(q, p) = (eps, 0)";
      break;
  }
  return w;
}

ProbeReport instability_probe(const HamiltonianSystem& sys, const WitnessSetup& setup, double radius,
                              const std::vector<double>& epsilons, double t_max,
                              IntegratorConfig cfg) {
  if (!(radius > 0.0)) throw UsageError("probe: radius must be positive");
  if (!(t_max > 0.0)) throw UsageError("probe: t_max must be positive");
  if (epsilons.empty()) throw UsageError("probe: empty epsilon sequence");
  for (double e : epsilons) {
    if (!(e > 0.0 && e < radius)) throw UsageError("probe: every epsilon must lie in (0, R)");
  }
  if (setup.direction.size() != sys.dim() || setup.base.dim() != sys.dim()) {
    throw UsageError("probe: direction dimension mismatch");
  }
  if (std::abs(norm2(setup.direction) - 1.0) > 1e-12) throw UsageError("probe: direction must be a unit vector");
  for (auto k : setup.monitored) {
    if (k >= sys.dim()) throw UsageError("probe: monitored index out of range");
  }

  cfg.escape_radius = radius;
  if (cfg.record_stride == 1) cfg.record_stride = 10;

  ProbeReport report;
  report.system = sys.name();
  report.radius = radius;
  report.t_max = t_max;
  report.epsilons = epsilons;
  report.monitored = setup.monitored;
  report.note = setup.note;

  const auto base = setup.base.flat();
  bool all_escaped = true;
  std::size_t usable = 0;
  for (double eps : epsilons) {
    std::vector<double> x0(base);
    for (std::size_t k = 0; k < x0.size(); ++k) x0[k] += eps * setup.direction[k];
    ProbeRecord rec{eps, PhaseState::from_flat(x0), false, std::nullopt, false, 0.0, 0.0};
    const auto tr = integrate(sys, rec.initial, 0.0, t_max, cfg);
    rec.failed = tr.terminated_by == Termination::kCorrectorFailure;
    rec.escaped = tr.terminated_by == Termination::kEscape;
    rec.escape_time = tr.escape_time;
    if (!setup.monitored.empty()) {
      rec.monitored_initial = monitored_norm(rec.initial, sys.equilibrium(), setup.monitored);
      for (const auto& s : tr.states) {
        rec.monitored_max = std::max(rec.monitored_max, monitored_norm(s, sys.equilibrium(), setup.monitored));
      }
    }
    if (!rec.failed) {
      ++usable;
      all_escaped = all_escaped && rec.escaped;
    }
    report.records.push_back(std::move(rec));
  }
  report.verdict = usable > 0 && all_escaped ? ProbeVerdict::kUnstableWitnessed : ProbeVerdict::kNoEscapeObserved;
  report.conclusive = report.verdict == ProbeVerdict::kUnstableWitnessed;
  return report;
}

ProbeReport instability_probe(const HamiltonianSystem& sys, const std::vector<double>& direction,
                              double radius, const std::vector<double>& epsilons, double t_max,
                              IntegratorConfig cfg) {
  return instability_probe(sys, WitnessSetup{sys.equilibrium(), direction, {}, {}}, radius, epsilons,
                           t_max, cfg);
}

std::string to_string(ProbeVerdict v) {
  return v == ProbeVerdict::kUnstableWitnessed ? "UNSTABLE_WITNESSED" : "NO_ESCAPE_OBSERVED";
}

ClosedFormMotion cherry_asymptotic_motion(double sigma) {
  if (sigma == 0.0 || !std::isfinite(sigma)) throw UsageError("cherry motion needs sigma != 0");
  ClosedFormMotion m;
  m.name = "cherry_asymptotic";
  m.t_upper = 0.0;
  m.state = [sigma](double t) {
    const double a = kSqrt2 * sigma * t;
    const double b = 2.0 * sigma * t;
    return PhaseState({std::sin(t) / a, std::sin(2.0 * t) / b}, {std::cos(t) / a, -std::cos(2.0 * t) / b});
  };
  m.velocity = [sigma](double t) {
    const double a = kSqrt2 * sigma * t * t;
    const double b = 2.0 * sigma * t * t;
    const double s1 = std::sin(t), c1 = std::cos(t), s2 = std::sin(2.0 * t), c2 = std::cos(2.0 * t);
    return std::vector<double>{(t * c1 - s1) / a, (2.0 * t * c2 - s2) / b, (-t * s1 - c1) / a,
                               (2.0 * t * s2 + c2) / b};
  };
  return m;
}

ClosedFormMotion l4_unstable_motion(double m) {
  if (!(m > 0.0)) throw UsageError("l4 motion needs m > 0");
  ClosedFormMotion motion;
  motion.name = "l4_secular";
  motion.state = [m](double t) {
    const double c = std::cos(t / kSqrt2), s = std::sin(t / kSqrt2);
    return PhaseState({c / m, -s / m}, {-t * c / m, t * s / m});
  };
  motion.velocity = [m](double t) {
    const double c = std::cos(t / kSqrt2), s = std::sin(t / kSqrt2);
    return std::vector<double>{-s / (kSqrt2 * m), -c / (kSqrt2 * m), (-c + t * s / kSqrt2) / m,
                               (s + t * c / kSqrt2) / m};
  };
  return motion;
}

ClosedFormMotion free_particle_motion(double q0, double p0) {
  ClosedFormMotion m;
  m.name = "free_particle";
  m.state = [q0, p0](double t) { return PhaseState({q0 + p0 * t}, {p0}); };
  m.velocity = [p0](double) { return std::vector<double>{p0, 0.0}; };
  return m;
}

ClosedFormMotion equilibrium_motion(const HamiltonianSystem& sys) {
  ClosedFormMotion m;
  m.name = "equilibrium";
  const PhaseState eq = sys.equilibrium();
  m.state = [eq](double) { return eq; };
  m.velocity = [d = sys.dim()](double) { return std::vector<double>(d, 0.0); };
  return m;
}

double asymptotic_residual(const HamiltonianSystem& sys, const ClosedFormMotion& motion,
                           const std::vector<double>& grid) {
  double worst = 0.0;
  std::vector<double> f(sys.dim());
  for (double t : grid) {
    if (!motion.contains(t)) throw UsageError("asymptotic_residual: grid point outside the domain");
    const auto x = motion.state(t);
    const auto v = motion.velocity(t);
    sys.field(x.flat(), f);
    double acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) acc += (v[k] - f[k]) * (v[k] - f[k]);
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

std::vector<double> past_decay_profile(const ClosedFormMotion& motion, const std::vector<double>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t < 0.0) || !motion.contains(t)) throw UsageError("past_decay_check: times must be negative and in the domain");
    out.push_back(std::abs(t) * motion.state(t).norm());
  }
  return out;
}

double past_decay_check(const ClosedFormMotion& motion, const std::vector<double>& times) {
  const auto profile = past_decay_profile(motion, times);
  return profile.empty() ? 0.0 : *std::max_element(profile.begin(), profile.end());
}

bool decays_in_past(const ClosedFormMotion& motion) {
  if (!motion.contains(-1.0) || !motion.contains(-1e4)) return false;
  const double near = past_decay_check(motion, linspace(-100.0, -1.0, 1000));
  const double far = past_decay_check(motion, linspace(-1e4, -1e3, 1000));
  return std::isfinite(far) && far <= 1.01 * near;
}

std::optional<ClosedFormMotion> default_motion(const HamiltonianSystem& sys) {
  switch (sys.kind()) {
    case SystemKind::kFreeParticle: return free_particle_motion(0.0, 1.0);
    case SystemKind::kL4Linear: return l4_unstable_motion(1.0);
    case SystemKind::kCherry:
      if (sys.sigma() != 0.0) return cherry_asymptotic_motion(sys.sigma());
      return std::nullopt;
    default: return std::nullopt;
  }
}

std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  return out;
}

CascadeCertificate certify_no_asymptotic(const HamiltonianSystem& sys, const CascadeSpec& cascade,
                                         std::size_t sample_count, double tol, std::uint64_t seed,
                                         double ball_radius) {
  if (cascade.stages.empty()) throw UsageError("certify: empty cascade");
  if (sample_count < 100) throw UsageError("certify: need at least 100 samples");
  if (!(tol > 0.0) || !(ball_radius > 0.0)) throw UsageError("certify: tol and radius must be positive");
  const std::size_t d = sys.dim();
  for (const auto& st : cascade.stages) {
    if (!st.f) throw UsageError("certify: stage without a function");
    for (auto k : st.zero_locus) {
      if (k >= d) throw UsageError("certify: zero-locus index out of range");
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto eq = sys.equilibrium().flat();

  auto sample = [&](const std::vector<bool>& pinned) {
    std::vector<double> x(eq);
    std::vector<std::size_t> free;
    for (std::size_t k = 0; k < d; ++k) {
      if (!pinned[k]) free.push_back(k);
    }
    if (free.empty()) return x;
    std::vector<double> g(free.size());
    double len = 0.0;
    do {
      len = 0.0;
      for (auto& v : g) {
        v = gauss(rng);
        len += v * v;
      }
    } while (len == 0.0);
    len = std::sqrt(len);
    const double r = ball_radius * std::pow(unit(rng), 1.0 / static_cast<double>(free.size()));
    for (std::size_t i = 0; i < free.size(); ++i) x[free[i]] += r * g[i] / len;
    return x;
  };

  CascadeCertificate cert;
  cert.sample_count = sample_count;
  cert.tol = tol;
  cert.ball_radius = ball_radius;
  cert.seed = seed;

  std::vector<bool> pinned(d, false);
  bool chain_ok = true;
  for (const auto& st : cascade.stages) {
    StageResult res;
    res.name = st.name;
    for (std::size_t k = 0; k < d; ++k) {
      if (pinned[k]) res.pinned.push_back(k);
    }
    if (chain_ok) {
      res.evaluated = true;
      for (std::size_t i = 0; i < sample_count; ++i) {
        const double r = std::abs(field_derivative(sys, st.f, sample(pinned)));
        res.max_residual = std::max(res.max_residual, r);
      }
      res.validated = res.max_residual <= tol;
      chain_ok = res.validated;
    }
    for (auto k : st.zero_locus) pinned[k] = true;
    cert.stages.push_back(std::move(res));
  }

  const PhaseState eq_state = sys.equilibrium();
  double at_eq = 0.0;
  for (const auto& st : cascade.stages) at_eq += st.f(eq_state);
  const std::vector<bool> none(d, false);
  cert.min_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sample_count; ++i) {
    const auto x = sample(none);
    const auto s = PhaseState::from_flat(x);
    double total = -at_eq;
    for (const auto& st : cascade.stages) total += st.f(s);
    cert.min_sum = std::min(cert.min_sum, total);
  }
  cert.positive_definite = cert.min_sum > 0.0;
  cert.verdict = chain_ok && cert.positive_definite ? CascadeVerdict::kCertifiedNoAsymptoticMotion
                                                    : CascadeVerdict::kNotCertified;
  return cert;
}

std::optional<CascadeSpec> default_cascade(const HamiltonianSystem& sys) {
  CascadeSpec spec;
  switch (sys.kind()) {
    case SystemKind::kFreeParticle:
      spec.stages.push_back({"p^2", [](const PhaseState& s) { return s.p()[0] * s.p()[0]; }, {1}});
      spec.stages.push_back({"q^2 on {p=0}", [](const PhaseState& s) { return s.q()[0] * s.q()[0]; }, {0}});
      return spec;
    case SystemKind::kL4Linear:
      spec.stages.push_back({"|q|^2",
                             [](const PhaseState& s) { return s.q()[0] * s.q()[0] + s.q()[1] * s.q()[1]; },
                             {0, 1}});
      spec.stages.push_back({"|p|^2 on {q=0}",
                             [](const PhaseState& s) { return s.p()[0] * s.p()[0] + s.p()[1] * s.p()[1]; },
                             {2, 3}});
      return spec;
    case SystemKind::kCherry:
      spec.stages.push_back({"H", [sys](const PhaseState& s) { return sys.hamiltonian(s); }, {}});
      return spec;
    case SystemKind::kVariationLike: {
      const GFunction g = *sys.g();
      const double slope = g.coefficients()[0];
      spec.stages.push_back({"p2^2/2 + G(q1)",
                             [g](const PhaseState& s) {
                               return 0.5 * s.p()[1] * s.p()[1] + g.antiderivative(s.q()[0]);
                             },
                             {0, 3}});
      spec.stages.push_back({"p1^2/2 + g'(0) q2^2/2 on {q1=p2=0}",
                             [slope](const PhaseState& s) {
                               return 0.5 * s.p()[0] * s.p()[0] + 0.5 * slope * s.q()[1] * s.q()[1];
                             },
                             {1, 2}});
      return spec;
    }
    case SystemKind::kSubsystem:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string to_string(CascadeVerdict v) {
  return v == CascadeVerdict::kCertifiedNoAsymptoticMotion ? "CERTIFIED_NO_ASYMPTOTIC_MOTION"
                                                           : "NOT_CERTIFIED";
}

}  // namespace hamlab
