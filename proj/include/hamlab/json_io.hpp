#pragma once

#include "json.hpp"

#include "hamlab/analysis.hpp"

namespace hamlab {

using Json = nlohmann::json;

/// {name, params: {sigma?, g_coeffs?}}
Json to_json(const HamiltonianSystem& sys);
HamiltonianSystem system_from_json(const Json& j);

Json to_json(const PhaseState& s);
Json to_json(const Spectrum& s);
Json to_json(const SpectralClassification& c);
Json to_json(const ProbeReport& r);
Json to_json(const CascadeCertificate& c);
Json to_json(const PeriodTable& t);
Json to_json(const StabilityVerdict& v);
Json to_json(const TransformCheck& t);
Json to_json(const MotionCheck& m);
Json to_json(const AnalysisReport& r);

/// Summary of a run without the per-step data.
Json trajectory_summary(const Trajectory& tr);

std::string to_string(const Rational& r);

}  // namespace hamlab
