#include "hamlab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hamlab {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

}  // namespace

HamiltonianSystem::HamiltonianSystem(SystemKind kind, std::string name, std::size_t dof,
                                     double sigma, std::optional<GFunction> g)
    : kind_(kind),
      name_(std::move(name)),
      dof_(dof),
      sigma_(sigma),
      g_(std::move(g)),
      equilibrium_(PhaseState::zero(dof)) {}

void HamiltonianSystem::check_dim(std::size_t size) const {
  if (size != dim()) {
    throw UsageError(name_ + ": expected a state of dimension " + std::to_string(dim()) + ", got " +
                     std::to_string(size));
  }
}

double HamiltonianSystem::hamiltonian(const PhaseState& s) const { return hamiltonian(s.flat()); }

double HamiltonianSystem::hamiltonian(std::span<const double> x) const {
  check_dim(x.size());
  switch (kind_) {
    case SystemKind::kFreeParticle:
      return 0.5 * x[1] * x[1];
    case SystemKind::kL4Linear: {
      const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3];
      return kInvSqrt2 * (p1 * q2 - p2 * q1) + 0.5 * (q1 * q1 + q2 * q2);
    }
    case SystemKind::kCherry: {
      const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3];
      return 0.5 * (q1 * q1 + p1 * p1) - (q2 * q2 + p2 * p2) +
             sigma_ * (q2 * (q1 * q1 - p1 * p1) - 2.0 * q1 * p1 * p2);
    }
    case SystemKind::kVariationLike: {
      const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3];
      return p1 * p2 + g_->value(q1) * q2;
    }
    case SystemKind::kSubsystem:
      return 0.5 * x[1] * x[1] + g_->antiderivative(x[0]);
  }
  return 0.0;
}

std::vector<double> HamiltonianSystem::gradient(const PhaseState& s) const {
  std::vector<double> out(dim());
  gradient(s.flat(), out);
  return out;
}

void HamiltonianSystem::gradient(std::span<const double> x, std::span<double> out) const {
  check_dim(x.size());
  check_dim(out.size());
  switch (kind_) {
    case SystemKind::kFreeParticle:
      out[0] = 0.0;
      out[1] = x[1];
      return;
    case SystemKind::kL4Linear: {
      const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3];
      out[0] = q1 - kInvSqrt2 * p2;
      out[1] = q2 + kInvSqrt2 * p1;
      out[2] = kInvSqrt2 * q2;
      out[3] = -kInvSqrt2 * q1;
      return;
    }
    case SystemKind::kCherry: {
      const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3], s = sigma_;
      out[0] = q1 + 2.0 * s * q1 * q2 - 2.0 * s * p1 * p2;
      out[1] = -2.0 * q2 + s * (q1 * q1 - p1 * p1);
      out[2] = p1 - 2.0 * s * q2 * p1 - 2.0 * s * q1 * p2;
      out[3] = -2.0 * p2 - 2.0 * s * q1 * p1;
      return;
    }
    case SystemKind::kVariationLike: {
      const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3];
      out[0] = g_->derivative(q1, 1) * q2;
      out[1] = g_->value(q1);
      out[2] = p2;
      out[3] = p1;
      return;
    }
    case SystemKind::kSubsystem:
      out[0] = g_->value(x[0]);
      out[1] = x[1];
      return;
  }
}

std::vector<double> HamiltonianSystem::field(const PhaseState& s) const {
  std::vector<double> out(dim());
  field(s.flat(), out);
  return out;
}

void HamiltonianSystem::field(std::span<const double> x, std::span<double> out) const {
  check_dim(x.size());
  check_dim(out.size());
  switch (kind_) {
    case SystemKind::kFreeParticle:
      out[0] = x[1];
      out[1] = 0.0;
      return;
    case SystemKind::kL4Linear: {
      const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3];
      out[0] = q2 * kInvSqrt2;
      out[1] = -q1 * kInvSqrt2;
      out[2] = -q1 + p2 * kInvSqrt2;
      out[3] = -q2 - p1 * kInvSqrt2;
      return;
    }
    case SystemKind::kCherry: {
      const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3], s = sigma_;
      out[0] = p1 - 2.0 * s * q2 * p1 - 2.0 * s * q1 * p2;
      out[1] = -2.0 * p2 - 2.0 * s * q1 * p1;
      out[2] = -q1 - 2.0 * s * q2 * q1 + 2.0 * s * p1 * p2;
      out[3] = 2.0 * q2 + s * p1 * p1 - s * q1 * q1;
      return;
    }
    case SystemKind::kVariationLike: {
      const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3];
      out[0] = p2;
      out[1] = p1;
      out[2] = -g_->derivative(q1, 1) * q2;
      out[3] = -g_->value(q1);
      return;
    }
    case SystemKind::kSubsystem:
      out[0] = x[1];
      out[1] = -g_->value(x[0]);
      return;
  }
}

std::vector<double> HamiltonianSystem::jacobian(const PhaseState& s) const {
  std::vector<double> out(dim() * dim());
  jacobian(s.flat(), out);
  return out;
}

void HamiltonianSystem::jacobian(std::span<const double> x, std::span<double> out) const {
  check_dim(x.size());
  if (out.size() != dim() * dim()) throw UsageError(name_ + ": jacobian buffer size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t d = dim();
  auto at = [&](std::size_t r, std::size_t c) -> double& { return out[r * d + c]; };
  switch (kind_) {
    case SystemKind::kFreeParticle:
      at(0, 1) = 1.0;
      return;
    case SystemKind::kL4Linear:
      at(0, 1) = kInvSqrt2;
      at(1, 0) = -kInvSqrt2;
      at(2, 0) = -1.0;
      at(2, 3) = kInvSqrt2;
      at(3, 1) = -1.0;
      at(3, 2) = -kInvSqrt2;
      return;
    case SystemKind::kCherry: {
      const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3], s = sigma_;
      at(0, 0) = -2.0 * s * p2;
      at(0, 1) = -2.0 * s * p1;
      at(0, 2) = 1.0 - 2.0 * s * q2;
      at(0, 3) = -2.0 * s * q1;
      at(1, 0) = -2.0 * s * p1;
      at(1, 2) = -2.0 * s * q1;
      at(1, 3) = -2.0;
      at(2, 0) = -1.0 - 2.0 * s * q2;
      at(2, 1) = -2.0 * s * q1;
      at(2, 2) = 2.0 * s * p2;
      at(2, 3) = 2.0 * s * p1;
      at(3, 0) = -2.0 * s * q1;
      at(3, 1) = 2.0;
      at(3, 2) = 2.0 * s * p1;
      return;
    }
    case SystemKind::kVariationLike: {
      const double q1 = x[0], q2 = x[1];
      at(0, 3) = 1.0;
      at(1, 2) = 1.0;
      at(2, 0) = -g_->derivative(q1, 2) * q2;
      at(2, 1) = -g_->derivative(q1, 1);
      at(3, 0) = -g_->derivative(q1, 1);
      return;
    }
    case SystemKind::kSubsystem:
      at(0, 1) = 1.0;
      at(1, 0) = -g_->derivative(x[0], 1);
      return;
  }
}

SystemParams HamiltonianSystem::params() const {
  SystemParams p;
  if (kind_ == SystemKind::kCherry) p.sigma = sigma_;
  if (g_) p.g = *g_;
  return p;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"free_particle", "l4_linear", "cherry",
                                                 "variation_like"};
  return names;
}

HamiltonianSystem catalog_build(std::string_view name, const SystemParams& params) {
  const double sigma = params.sigma.value_or(1.0);
  if (!std::isfinite(sigma)) throw UsageError("sigma must be finite");
  if (name == "free_particle") {
    return HamiltonianSystem(SystemKind::kFreeParticle, "free_particle", 1, 0.0, std::nullopt);
  }
  if (name == "l4_linear") {
    return HamiltonianSystem(SystemKind::kL4Linear, "l4_linear", 2, 0.0, std::nullopt);
  }
  if (name == "cherry") {
    return HamiltonianSystem(SystemKind::kCherry, "cherry", 2, sigma, std::nullopt);
  }
  if (name == "variation_like") {
    GFunction g = params.g ? *params.g : GFunction::quadratic(sigma);
    const double s = g.degree() >= 2 ? g.coefficients()[1] : 0.0;
    return HamiltonianSystem(SystemKind::kVariationLike, "variation_like", 2, s, std::move(g));
  }
  throw UsageError("unknown system '" + std::string(name) + "'");
}

HamiltonianSystem separated_subsystem(const GFunction& g) {
  return HamiltonianSystem(SystemKind::kSubsystem, "subsystem", 1, 0.0, g);
}

}  // namespace hamlab
