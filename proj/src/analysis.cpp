#include "hamlab/analysis.hpp"

namespace hamlab {

std::string to_string(CompositeVerdict v) {
  switch (v) {
    case CompositeVerdict::kStableSuggested: return "STABLE_SUGGESTED";
    case CompositeVerdict::kWeaklyUnstable: return "WEAKLY_UNSTABLE";
    case CompositeVerdict::kUnstableWithAsymptoticMotion: return "UNSTABLE_WITH_ASYMPTOTIC_MOTION";
    case CompositeVerdict::kLinearlyUnstable: return "LINEARLY_UNSTABLE";
    case CompositeVerdict::kUnstableUnresolved: return "UNSTABLE_UNRESOLVED";
  }
  return "?";
}

AnalysisReport analyze(const HamiltonianSystem& sys, const AnalyzeOptions& options) {
  AnalysisReport report;
  report.system = sys.name();
  report.spectrum = eigenstructure(jacobian_at(sys, sys.equilibrium()));
  report.classification = classify(report.spectrum);

  if (const auto motion = default_motion(sys)) {
    MotionCheck check;
    check.name = motion->name;
    check.residual = asymptotic_residual(sys, *motion, linspace(-100.0, -1.0, 1000));
    check.solves_field = check.residual < kMotionResidualTol;
    check.decays_in_past = decays_in_past(*motion);
    report.motion = check;
  }

  IntegratorConfig cfg;
  cfg.step = options.step;
  report.probe = instability_probe(sys, default_witness(sys), options.radius, options.epsilons,
                                   options.t_max, cfg);

  if (const auto cascade = default_cascade(sys)) {
    report.certificate = certify_no_asymptotic(sys, *cascade, options.samples, kCascadeTol, options.seed);
  }

  if (sys.kind() == SystemKind::kVariationLike) {
    const auto& g = *sys.g();
    const auto range = oscillation_range(g);
    std::vector<double> amplitudes;
    for (double a : options.amplitudes) {
      if (range.admits(g, a)) amplitudes.push_back(a);
    }
    if (!amplitudes.empty()) {
      report.periods = period_scan(g, amplitudes);
      if (!report.periods->periods.empty()) report.isochrony = stability_verdict(g, *report.periods);
    }
  }

  const bool witnessed = report.probe.verdict == ProbeVerdict::kUnstableWitnessed;
  const bool certified =
      report.certificate && report.certificate->verdict == CascadeVerdict::kCertifiedNoAsymptoticMotion;
  if (report.classification.verdict == SpectralVerdict::kAsymptoticMotionExists) {
    report.composite = CompositeVerdict::kLinearlyUnstable;
  } else if (report.motion && report.motion->solves_field && report.motion->decays_in_past) {
    report.composite = CompositeVerdict::kUnstableWithAsymptoticMotion;
  } else if (witnessed && certified) {
    report.composite = CompositeVerdict::kWeaklyUnstable;
  } else if (!witnessed) {
    report.composite = CompositeVerdict::kStableSuggested;
  } else {
    report.composite = CompositeVerdict::kUnstableUnresolved;
  }
  return report;
}

}  // namespace hamlab
