#include "hamlab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace hamlab {

namespace {

double inf_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

// Solves a x = b in place (b becomes x). Returns false for a singular matrix.
bool solve_in_place(std::vector<double>& a, std::vector<double>& b) {
  const std::size_t d = b.size();
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r) {
      if (std::abs(a[r * d + col]) > std::abs(a[piv * d + col])) piv = r;
    }
    if (a[piv * d + col] == 0.0) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < d; ++c) std::swap(a[piv * d + c], a[col * d + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < d; ++r) {
      const double f = a[r * d + col] / a[col * d + col];
      for (std::size_t c = col; c < d; ++c) a[r * d + c] -= f * a[col * d + c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = d; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < d; ++c) s -= a[r * d + c] * b[c];
    b[r] = s / a[r * d + r];
  }
  return true;
}

class Stepper {
 public:
  Stepper(const HamiltonianSystem& sys, const IntegratorConfig& cfg)
      : sys_(sys), cfg_(cfg), d_(sys.dim()), k1_(d_), k2_(d_), k3_(d_), k4_(d_), tmp_(d_),
        mid_(d_), next_(d_), jac_(d_ * d_) {}

  // Advances x by dt in place; false when the corrector does not converge.
  bool step(std::vector<double>& x, double dt) {
    return cfg_.method == IntegratorMethod::kExplicitRk4 ? rk4(x, dt) : midpoint(x, dt);
  }

 private:
  bool rk4(std::vector<double>& x, double dt) {
    sys_.field(x, k1_);
    for (std::size_t i = 0; i < d_; ++i) tmp_[i] = x[i] + 0.5 * dt * k1_[i];
    sys_.field(tmp_, k2_);
    for (std::size_t i = 0; i < d_; ++i) tmp_[i] = x[i] + 0.5 * dt * k2_[i];
    sys_.field(tmp_, k3_);
    for (std::size_t i = 0; i < d_; ++i) tmp_[i] = x[i] + dt * k3_[i];
    sys_.field(tmp_, k4_);
    for (std::size_t i = 0; i < d_; ++i) {
      x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
  }

  // x1 = x0 + dt f((x0 + x1)/2). Fixed-point iteration, switching to Newton
  // once successive updates shrink by less than a factor 2.
  bool midpoint(std::vector<double>& x, double dt) {
    sys_.field(x, k1_);
    for (std::size_t i = 0; i < d_; ++i) next_[i] = x[i] + dt * k1_[i];

    double previous = -1.0;
    bool newton = false;
    for (int it = 0; it < cfg_.max_iterations; ++it) {
      for (std::size_t i = 0; i < d_; ++i) mid_[i] = 0.5 * (x[i] + next_[i]);
      sys_.field(mid_, k2_);
      double update = 0.0;
      if (!newton) {
        for (std::size_t i = 0; i < d_; ++i) {
          const double v = x[i] + dt * k2_[i];
          update = std::max(update, std::abs(v - next_[i]));
          next_[i] = v;
        }
        if (previous > 0.0 && update > 0.5 * previous) newton = true;
        previous = update;
      } else {
        sys_.jacobian(mid_, jac_);
        for (std::size_t r = 0; r < d_; ++r) {
          for (std::size_t c = 0; c < d_; ++c) jac_[r * d_ + c] *= -0.5 * dt;
          jac_[r * d_ + r] += 1.0;
          tmp_[r] = -(next_[r] - x[r] - dt * k2_[r]);
        }
        if (!solve_in_place(jac_, tmp_)) return false;
        for (std::size_t i = 0; i < d_; ++i) {
          next_[i] += tmp_[i];
          update = std::max(update, std::abs(tmp_[i]));
        }
      }
      if (!std::isfinite(update)) return false;
      if (update <= cfg_.tolerance * std::max(1.0, inf_norm(next_))) {
        x = next_;
        return true;
      }
    }
    return false;
  }

  const HamiltonianSystem& sys_;
  const IntegratorConfig& cfg_;
  std::size_t d_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_, mid_, next_, jac_;
};

}  // namespace

void IntegratorConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw UsageError("integrator: step must be positive");
  if (!(tolerance > 0.0)) throw UsageError("integrator: tolerance must be positive");
  if (max_iterations < 1) throw UsageError("integrator: max_iterations must be >= 1");
  if (escape_radius && !(*escape_radius > 0.0)) {
    throw UsageError("integrator: escape_radius must be positive");
  }
  if (record_stride < 1) throw UsageError("integrator: record_stride must be >= 1");
}

Trajectory integrate(const HamiltonianSystem& sys, const PhaseState& s0, double t0, double t1,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  if (s0.dim() != sys.dim()) throw UsageError("integrate: dimension mismatch");
  if (!std::isfinite(t0) || !std::isfinite(t1) || t0 == t1) {
    throw UsageError("integrate: need finite t0 != t1");
  }

  const double span = t1 - t0;
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(span) / cfg.step * (1.0 - 1e-12)));
  const double dt = span / static_cast<double>(std::max<std::size_t>(steps, 1));
  const std::vector<double> eq = sys.equilibrium().flat();

  auto distance = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - eq[i]) * (x[i] - eq[i]);
    return std::sqrt(s);
  };

  Trajectory tr;
  std::vector<double> x = s0.flat();
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.states.push_back(PhaseState::from_flat(x));
    tr.energies.push_back(sys.hamiltonian(x));
  };

  record(t0);
  double prev_norm = distance(x);
  tr.max_norm = prev_norm;
  if (cfg.escape_radius && prev_norm >= *cfg.escape_radius) {
    tr.terminated_by = Termination::kEscape;
    tr.escape_time = t0;
    return tr;
  }

  Stepper stepper(sys, cfg);
  const std::size_t n = std::max<std::size_t>(steps, 1);
  for (std::size_t k = 1; k <= n; ++k) {
    const double t_prev = t0 + static_cast<double>(k - 1) * dt;
    const double t = k == n ? t1 : t0 + static_cast<double>(k) * dt;
    if (!stepper.step(x, dt)) {
      tr.terminated_by = Termination::kCorrectorFailure;
      return tr;
    }
    const double norm = distance(x);
    tr.max_norm = std::max(tr.max_norm, norm);
    if (cfg.escape_radius && norm >= *cfg.escape_radius) {
      const double frac = (*cfg.escape_radius - prev_norm) / (norm - prev_norm);
      tr.escape_time = t_prev + frac * (t - t_prev);
      tr.terminated_by = Termination::kEscape;
      record(t);
      return tr;
    }
    if (k % cfg.record_stride == 0 || k == n) record(t);
    prev_norm = norm;
  }
  tr.terminated_by = Termination::kTimeEnd;
  return tr;
}

double energy_drift(const Trajectory& tr) {
  if (tr.empty()) throw UsageError("energy_drift: empty trajectory");
  double d = 0.0;
  for (double e : tr.energies) d = std::max(d, std::abs(e - tr.energies.front()));
  return d;
}

double first_integral_drift(const Trajectory& tr, const StateFunction& f) {
  if (tr.empty()) throw UsageError("first_integral_drift: empty trajectory");
  const double f0 = f(tr.states.front());
  double d = 0.0;
  for (const auto& s : tr.states) d = std::max(d, std::abs(f(s) - f0));
  return d;
}

void write_csv(std::ostream& out, const Trajectory& tr) {
  if (tr.empty()) return;
  const std::size_t n = tr.states.front().dof();
  out << 't';
  for (std::size_t k = 0; k < 2 * n; ++k) out << ',' << component_name(k, n);
  out << ",H\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    out << tr.times[i];
    for (std::size_t k = 0; k < 2 * n; ++k) out << ',' << tr.states[i][k];
    out << ',' << tr.energies[i] << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

std::string to_string(IntegratorMethod m) {
  return m == IntegratorMethod::kExplicitRk4 ? "explicit_rk4" : "implicit_midpoint";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kTimeEnd: return "time_end";
    case Termination::kEscape: return "escape";
    case Termination::kCorrectorFailure: return "corrector_failure";
  }
  return "?";
}

IntegratorMethod parse_method(const std::string& name) {
  if (name == "implicit_midpoint" || name == "midpoint") return IntegratorMethod::kImplicitMidpoint;
  if (name == "explicit_rk4" || name == "rk4") return IntegratorMethod::kExplicitRk4;
  throw UsageError("unknown integrator method '" + name + "'");
}

}  // namespace hamlab
