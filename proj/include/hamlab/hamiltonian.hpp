#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamlab/g_function.hpp"
#include "hamlab/phase_state.hpp"

namespace hamlab {

enum class SystemKind {
  kFreeParticle,   // H = p^2/2, n = 1
  kL4Linear,       // H = (p1 q2 - p2 q1)/sqrt2 + |q|^2/2
  kCherry,         // H = (q1^2+p1^2)/2 - (q2^2+p2^2) + s (q2(q1^2-p1^2) - 2 q1 p1 p2)
  kVariationLike,  // H = p1 p2 + g(q1) q2
  kSubsystem,      // H = p^2/2 + G(q), the separating planar part of kVariationLike
};

/// Parameters accepted by catalog_build. Unset sigma means 1.
struct SystemParams {
  std::optional<double> sigma;
  std::optional<GFunction> g;
};

/// One entry of the system catalog: an exact polynomial Hamiltonian, its
/// canonical field (dH/dp, -dH/dq) and the analytic Jacobian of that field.
///
/// Flat state layout is (q1..qn, p1..pn). Immutable after construction.
class HamiltonianSystem {
 public:
  SystemKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::size_t dof() const { return dof_; }
  std::size_t dim() const { return 2 * dof_; }
  const PhaseState& equilibrium() const { return equilibrium_; }
  double sigma() const { return sigma_; }
  /// Set for kVariationLike and kSubsystem.
  const std::optional<GFunction>& g() const { return g_; }
  /// True for the free particle, whose equilibria form the line {p = 0}.
  bool non_isolated_equilibrium() const { return kind_ == SystemKind::kFreeParticle; }

  double hamiltonian(const PhaseState& s) const;
  double hamiltonian(std::span<const double> x) const;

  /// Flat gradient (dH/dq, dH/dp).
  std::vector<double> gradient(const PhaseState& s) const;
  void gradient(std::span<const double> x, std::span<double> out) const;

  std::vector<double> field(const PhaseState& s) const;
  void field(std::span<const double> x, std::span<double> out) const;

  /// Row-major dim x dim derivative of the field at x.
  void jacobian(std::span<const double> x, std::span<double> out) const;
  std::vector<double> jacobian(const PhaseState& s) const;

  SystemParams params() const;

 private:
  friend HamiltonianSystem catalog_build(std::string_view, const SystemParams&);
  friend HamiltonianSystem separated_subsystem(const GFunction&);

  HamiltonianSystem(SystemKind kind, std::string name, std::size_t dof, double sigma,
                    std::optional<GFunction> g);

  void check_dim(std::size_t size) const;

  SystemKind kind_;
  std::string name_;
  std::size_t dof_;
  double sigma_;
  std::optional<GFunction> g_;
  PhaseState equilibrium_;
};

/// Names accepted by catalog_build, in catalog order.
const std::vector<std::string>& catalog_names();

/// Builds free_particle, l4_linear, cherry or variation_like.
///
/// variation_like uses params.g when given, otherwise g(x) = x + sigma x^2.
/// Throws UsageError for an unknown name or a g violating g(0)=0, g'(0)>0.
HamiltonianSystem catalog_build(std::string_view name, const SystemParams& params = {});

/// The planar system q' = p, p' = -g(q) that separates out of variation_like.
HamiltonianSystem separated_subsystem(const GFunction& g);

}  // namespace hamlab
