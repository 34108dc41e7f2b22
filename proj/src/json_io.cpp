#include "hamlab/json_io.hpp"

#include <sstream>

namespace hamlab {

std::string to_string(const Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

Json to_json(const HamiltonianSystem& sys) {
  Json params = Json::object();
  if (sys.kind() == SystemKind::kCherry) params["sigma"] = sys.sigma();
  if (sys.g()) params["g_coeffs"] = sys.g()->to_string();
  return {{"name", sys.name()}, {"params", params}};
}

HamiltonianSystem system_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) {
    throw UsageError("system record needs a string 'name'");
  }
  SystemParams params;
  if (j.contains("params")) {
    const auto& p = j["params"];
    if (p.contains("sigma")) params.sigma = p["sigma"].get<double>();
    if (p.contains("g_coeffs")) params.g = GFunction::parse(p["g_coeffs"].get<std::string>());
  }
  return catalog_build(j["name"].get<std::string>(), params);
}

Json to_json(const PhaseState& s) { return s.flat(); }

Json to_json(const Spectrum& s) {
  Json eig = Json::array();
  for (const auto& rec : s.eigenvalues) {
    eig.push_back({{"re", rec.value.real()},
                   {"im", rec.value.imag()},
                   {"alg", rec.algebraic},
                   {"geo", rec.geometric},
                   {"blocks", rec.jordan_blocks}});
  }
  return {{"eigenvalues", eig}, {"residual_bound", s.residual_bound}, {"tol", s.tol}};
}

Json to_json(const SpectralClassification& c) {
  return {{"verdict", to_string(c.verdict)},
          {"has_positive_real_part", c.has_positive_real_part},
          {"all_imaginary_semisimple", c.all_imaginary_semisimple},
          {"imaginary_with_nontrivial_jordan", c.imaginary_with_nontrivial_jordan},
          {"inconclusive_for_nonlinear", c.inconclusive_for_nonlinear}};
}

Json to_json(const ProbeReport& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) {
    Json item = {{"epsilon", rec.epsilon},
                 {"initial", to_json(rec.initial)},
                 {"escaped", rec.escaped},
                 {"failed", rec.failed},
                 {"escape_time", rec.escape_time ? Json(*rec.escape_time) : Json(nullptr)}};
    if (!r.monitored.empty()) {
      item["monitored_initial"] = rec.monitored_initial;
      item["monitored_max"] = rec.monitored_max;
    }
    records.push_back(std::move(item));
  }
  Json out = {{"system", r.system},
              {"radius", r.radius},
              {"t_max", r.t_max},
              {"epsilons", r.epsilons},
              {"records", records},
              {"verdict", to_string(r.verdict)},
              {"conclusive", r.conclusive},
              {"witness", r.note}};
  if (!r.monitored.empty()) out["monitored_components"] = r.monitored;
  return out;
}

Json to_json(const CascadeCertificate& c) {
  Json stages = Json::array();
  for (const auto& s : c.stages) {
    stages.push_back({{"name", s.name},
                      {"pinned", s.pinned},
                      {"evaluated", s.evaluated},
                      {"validated", s.validated},
                      {"max_residual", s.max_residual}});
  }
  return {{"stages", stages},
          {"positive_definite", c.positive_definite},
          {"min_sum", c.min_sum},
          {"verdict", to_string(c.verdict)},
          {"samples", c.sample_count},
          {"tol", c.tol},
          {"ball_radius", c.ball_radius},
          {"seed", c.seed},
          {"label", c.label}};
}

Json to_json(const PeriodTable& t) {
  Json failures = Json::array();
  for (const auto& f : t.failures) failures.push_back({{"amplitude", f.amplitude}, {"reason", f.reason}});
  return {{"amplitudes", t.amplitudes},
          {"periods", t.periods},
          {"quadrature_periods", t.quadrature_periods},
          {"method", t.method},
          {"max_spread", t.max_spread},
          {"max_cross_check", t.max_cross_check},
          {"failures", failures}};
}

Json to_json(const StabilityVerdict& v) {
  return {{"verdict", to_string(v.verdict)},
          {"residual", to_string(v.residual)},
          {"residual_value", v.residual.convert_to<double>()},
          {"max_spread", v.max_spread},
          {"spread_tol", v.spread_tol},
          {"reason", v.reason}};
}

Json to_json(const TransformCheck& t) {
  return {{"max_mismatch", t.max_mismatch}, {"symplectic_exact", t.symplectic_exact}, {"samples", t.samples}};
}

Json to_json(const MotionCheck& m) {
  return {{"name", m.name},
          {"residual", m.residual},
          {"solves_field", m.solves_field},
          {"decays_in_past", m.decays_in_past}};
}

Json to_json(const AnalysisReport& r) {
  Json out = {{"system", r.system},
              {"spectrum", to_json(r.spectrum)},
              {"classification", to_json(r.classification)},
              {"probe", to_json(r.probe)},
              {"composite_verdict", to_string(r.composite)}};
  out["closed_form_motion"] = r.motion ? to_json(*r.motion) : Json(nullptr);
  out["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  if (r.periods) out["period_scan"] = to_json(*r.periods);
  if (r.isochrony) out["isochrony"] = to_json(*r.isochrony);
  return out;
}

Json trajectory_summary(const Trajectory& tr) {
  Json out = {{"terminated_by", to_string(tr.terminated_by)},
              {"points", tr.times.size()},
              {"max_norm", tr.max_norm}};
  if (!tr.empty()) {
    out["t_start"] = tr.times.front();
    out["t_end"] = tr.times.back();
    out["final_state"] = to_json(tr.final_state());
    out["energy_drift"] = energy_drift(tr);
  }
  out["escape_time"] = tr.escape_time ? Json(*tr.escape_time) : Json(nullptr);
  return out;
}

}  // namespace hamlab
