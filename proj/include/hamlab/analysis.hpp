#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamlab/isochrony.hpp"
#include "hamlab/linalg.hpp"
#include "hamlab/probe.hpp"

namespace hamlab {

enum class CompositeVerdict {
  kStableSuggested,
  kWeaklyUnstable,
  kUnstableWithAsymptoticMotion,
  kLinearlyUnstable,
  kUnstableUnresolved,
};

std::string to_string(CompositeVerdict v);

struct MotionCheck {
  std::string name;
  double residual = 0.0;      // over 1000 points of [-100, -1]
  bool solves_field = false;  // residual < kMotionResidualTol
  bool decays_in_past = false;
};

inline constexpr double kMotionResidualTol = 1e-9;

struct AnalyzeOptions {
  std::uint64_t seed = kDefaultSeed;
  double radius = ProbeDefaults::kRadius;
  double t_max = ProbeDefaults::kTMax;
  double step = ProbeDefaults::kStep;
  std::vector<double> epsilons = ProbeDefaults::epsilons();
  std::size_t samples = 1000;
  std::vector<double> amplitudes = {0.1, 0.2, 0.3};
};

struct AnalysisReport {
  std::string system;
  Spectrum spectrum;
  SpectralClassification classification;
  std::optional<MotionCheck> motion;
  ProbeReport probe;
  std::optional<CascadeCertificate> certificate;
  std::optional<PeriodTable> periods;
  std::optional<StabilityVerdict> isochrony;
  CompositeVerdict composite = CompositeVerdict::kUnstableUnresolved;
};

/// Runs every check that applies to the system and composes them:
/// positive real part -> LINEARLY_UNSTABLE; a closed-form solution that
/// decays in the past -> UNSTABLE_WITH_ASYMPTOTIC_MOTION; escape witnessed
/// plus a cascade certificate -> WEAKLY_UNSTABLE; no escape -> STABLE_SUGGESTED.
AnalysisReport analyze(const HamiltonianSystem& sys, const AnalyzeOptions& options = {});

}  // namespace hamlab
