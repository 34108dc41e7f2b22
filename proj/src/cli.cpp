#include "hamlab/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "hamlab/json_io.hpp"
#include "hamlab/svg.hpp"

namespace hamlab::cli {

namespace {

constexpr double kPlotOffset = 0.1;

/// Everything a command can be told on the command line.
struct RunSpec {
  std::string command;
  std::string system;
  std::optional<double> sigma;
  std::string g_coeffs;
  std::optional<double> step;
  std::optional<double> t0;
  std::optional<double> t1;
  std::optional<double> tmax;
  double radius = ProbeDefaults::kRadius;
  std::vector<std::string> epsilons;
  std::vector<std::string> amplitudes;
  std::vector<std::string> state;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 1000;
  double tol = kCascadeTol;
  std::string method = "implicit_midpoint";
  std::string coords = "q1,q2";
  std::string out;
  std::string format;
};

std::vector<double> parse_numbers(const std::vector<std::string>& tokens) {
  std::vector<double> v;
  v.reserve(tokens.size());
  for (const auto& t : tokens) v.push_back(parse_rational(t).convert_to<double>());
  return v;
}

SystemParams params_of(const RunSpec& spec) {
  SystemParams p;
  p.sigma = spec.sigma;
  if (!spec.g_coeffs.empty()) {
    if (spec.sigma) throw UsageError("--sigma and --g-coeffs are mutually exclusive");
    p.g = GFunction::parse(spec.g_coeffs);
  }
  return p;
}

HamiltonianSystem system_of(const RunSpec& spec) {
  if (spec.system.empty()) throw UsageError("missing system name");
  if (!spec.g_coeffs.empty() && spec.system != "variation_like") {
    throw UsageError("--g-coeffs only applies to variation_like");
  }
  return catalog_build(spec.system, params_of(spec));
}

std::string format_of(const RunSpec& spec, const std::string& fallback) {
  const std::string f = spec.format.empty() ? fallback : spec.format;
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

std::size_t component_index(const std::string& name, std::size_t n) {
  for (std::size_t k = 0; k < 2 * n; ++k) {
    if (component_name(k, n) == name) return k;
  }
  throw UsageError("unknown coordinate '" + name + "'");
}

std::string sidecar_path(const std::string& svg) {
  const auto dot = svg.rfind('.');
  const auto slash = svg.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return svg.substr(0, dot) + ".csv";
  return svg + ".csv";
}

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

int cmd_catalog(const RunSpec& spec, std::ostream& out) {
  Json list = Json::array();
  const std::vector<std::string> names = spec.system.empty() ? catalog_names() : std::vector{spec.system};
  for (const auto& name : names) {
    RunSpec one = spec;
    one.system = name;
    if (name != "variation_like") one.g_coeffs.clear();
    const auto sys = system_of(one);
    Json item = to_json(sys);
    item["dof"] = sys.dof();
    item["equilibrium"] = to_json(sys.equilibrium());
    item["non_isolated_equilibrium"] = sys.non_isolated_equilibrium();
    list.push_back(std::move(item));
  }
  write_json(out, list);
  return kExitOk;
}

int cmd_analyze(const RunSpec& spec, std::ostream& out) {
  const auto sys = system_of(spec);
  AnalyzeOptions opt;
  opt.seed = spec.seed;
  opt.radius = spec.radius;
  if (spec.tmax) opt.t_max = *spec.tmax;
  if (spec.step) opt.step = *spec.step;
  if (!spec.epsilons.empty()) opt.epsilons = parse_numbers(spec.epsilons);
  if (!spec.amplitudes.empty()) opt.amplitudes = parse_numbers(spec.amplitudes);
  opt.samples = spec.samples;
  format_of(spec, "json");
  Json report = to_json(analyze(sys, opt));
  report["system_record"] = to_json(sys);
  write_json(out, report);
  return kExitOk;
}

int cmd_integrate(const RunSpec& spec, std::ostream& out) {
  const auto sys = system_of(spec);
  IntegratorConfig cfg;
  cfg.method = parse_method(spec.method);
  if (spec.step) cfg.step = *spec.step;
  if (spec.radius != ProbeDefaults::kRadius) cfg.escape_radius = spec.radius;
  const double t0 = spec.t0.value_or(0.0);
  const double t1 = spec.t1 ? *spec.t1 : t0 + spec.tmax.value_or(10.0);
  PhaseState s0 = sys.equilibrium();
  if (!spec.state.empty()) {
    s0 = PhaseState::from_flat(parse_numbers(spec.state));
  } else {
    const auto w = default_witness(sys);
    auto x = w.base.flat();
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += 0.1 * w.direction[k];
    s0 = PhaseState::from_flat(x);
  }
  const auto tr = integrate(sys, s0, t0, t1, cfg);
  if (tr.terminated_by == Termination::kCorrectorFailure) {
    Json body = {{"error", {{"kind", "numerical"}, {"message", "corrector did not converge"}}},
                 {"trajectory", trajectory_summary(tr)}};
    write_json(out, body);
    return kExitNumerical;
  }
  if (format_of(spec, "csv") == "csv") {
    write_csv(out, tr);
  } else {
    Json body = trajectory_summary(tr);
    body["system"] = to_json(sys);
    body["method"] = to_string(cfg.method);
    body["step"] = cfg.step;
    write_json(out, body);
  }
  return kExitOk;
}

int cmd_probe(const RunSpec& spec, std::ostream& out) {
  const auto sys = system_of(spec);
  IntegratorConfig cfg;
  cfg.method = parse_method(spec.method);
  cfg.step = spec.step.value_or(ProbeDefaults::kStep);
  const auto eps = spec.epsilons.empty() ? ProbeDefaults::epsilons() : parse_numbers(spec.epsilons);
  const auto report =
      instability_probe(sys, default_witness(sys), spec.radius, eps, spec.tmax.value_or(ProbeDefaults::kTMax), cfg);
  if (format_of(spec, "json") == "csv") {
    out << "epsilon,escaped,escape_time,failed\n" << std::setprecision(17);
    for (const auto& r : report.records) {
      out << r.epsilon << ',' << (r.escaped ? 1 : 0) << ',';
      if (r.escape_time) out << *r.escape_time;
      out << ',' << (r.failed ? 1 : 0) << '\n';
    }
  } else {
    write_json(out, to_json(report));
  }
  return kExitOk;
}

int cmd_certify(const RunSpec& spec, std::ostream& out) {
  const auto sys = system_of(spec);
  const auto cascade = default_cascade(sys);
  if (!cascade) throw UsageError("no default cascade for " + sys.name());
  const auto cert = certify_no_asymptotic(sys, *cascade, spec.samples, spec.tol, spec.seed);
  if (format_of(spec, "json") == "csv") {
    out << "stage,evaluated,validated,max_residual\n" << std::setprecision(17);
    for (const auto& s : cert.stages) {
      out << s.name << ',' << s.evaluated << ',' << s.validated << ',' << s.max_residual << '\n';
    }
  } else {
    Json body = to_json(cert);
    body["system"] = to_json(sys);
    write_json(out, body);
  }
  return kExitOk;
}

int cmd_period_scan(const RunSpec& spec, std::ostream& out) {
  const GFunction g = !spec.g_coeffs.empty() ? GFunction::parse(spec.g_coeffs)
                                             : GFunction::quadratic(spec.sigma.value_or(1.0));
  auto cfg = default_period_config();
  if (spec.step) cfg.step = *spec.step;
  if (spec.method != "implicit_midpoint") cfg.method = parse_method(spec.method);
  const auto amplitudes = spec.amplitudes.empty() ? std::vector<double>{0.1, 0.2, 0.3} : parse_numbers(spec.amplitudes);
  const auto table = period_scan(g, amplitudes, cfg);
  if (format_of(spec, "csv") == "csv") {
    out << "amplitude,period,method\n" << std::setprecision(17);
    for (std::size_t k = 0; k < table.periods.size(); ++k) {
      out << table.amplitudes[k] << ',' << table.periods[k] << ',' << table.method << '\n';
    }
  } else {
    Json body = {{"g_coeffs", g.to_string()},
                 {"table", to_json(table)},
                 {"isochrony_residual", to_string(isochrony_condition_residual(g))}};
    if (!table.periods.empty()) body["verdict"] = to_json(stability_verdict(g, table));
    write_json(out, body);
  }
  return kExitOk;
}

int cmd_plot(const RunSpec& spec, std::ostream& out) {
  if (spec.out.empty()) throw UsageError("plot needs --out FILE.svg");
  std::vector<double> xs, ys;
  std::ostringstream csv;
  PlotSpec plot;

  const auto comma = spec.coords.find(',');
  if (comma == std::string::npos) throw UsageError("--coords expects a pair like q1,q2");
  const std::string cx = spec.coords.substr(0, comma), cy = spec.coords.substr(comma + 1);

  if (spec.system == "cherry-asymptotic") {
    const double sigma = spec.sigma.value_or(1.0);
    const double t0 = spec.t0.value_or(-60.0), t1 = spec.t1.value_or(-1.0);
    if (t0 == t1) throw UsageError("plot: zero-length time span");
    if (!(t0 < 0.0 && t1 < 0.0)) throw UsageError("plot: the asymptotic motion is defined for t < 0 only");
    const auto motion = cherry_asymptotic_motion(sigma);
    const auto sys = catalog_build("cherry", {sigma, std::nullopt});
    const std::size_t ix = component_index(cx, 2), iy = component_index(cy, 2);
    csv << "t,q1,q2,p1,p2,H\n" << std::setprecision(17);
    for (double t : linspace(t0, t1, 4000)) {
      const auto s = motion.state(t);
      xs.push_back(s[ix]);
      ys.push_back(s[iy]);
      csv << t << ',' << s[0] << ',' << s[1] << ',' << s[2] << ',' << s[3] << ',' << sys.hamiltonian(s) << '\n';
    }
    plot = {"Asymptotic motion, Cherry Hamiltonian (sigma = " + Json(sigma).dump() + ")", cx, cy};
  } else if (spec.system == "variation-unbounded") {
    const double tmax = spec.tmax.value_or(200.0);
    if (!(tmax > 0.0)) throw UsageError("plot: zero-length time span");
    const auto sys = catalog_build("variation_like", params_of(spec));
    const auto w = default_witness(sys);
    auto x0 = w.base.flat();
    for (std::size_t k = 0; k < x0.size(); ++k) x0[k] += kPlotOffset * w.direction[k];
    IntegratorConfig cfg;
    cfg.step = spec.step.value_or(1e-3);
    cfg.record_stride = 10;
    const auto tr = integrate(sys, PhaseState::from_flat(x0), 0.0, tmax, cfg);
    if (tr.terminated_by == Termination::kCorrectorFailure) throw NumericalError("corrector did not converge");
    const std::size_t ix = component_index(cx, 2), iy = component_index(cy, 2);
    for (const auto& s : tr.states) {
      xs.push_back(s[ix]);
      ys.push_back(s[iy]);
    }
    write_csv(csv, tr);
    plot = {"Unbounded orbit, H = p1 p2 + g(q1) q2 (g = " + sys.g()->to_string() + ")", cx, cy};
  } else {
    throw UsageError("plot target must be cherry-asymptotic or variation-unbounded");
  }

  std::ofstream svg_file(spec.out);
  if (!svg_file) throw UsageError("cannot write " + spec.out);
  write_svg(svg_file, xs, ys, plot);
  const std::string sidecar = sidecar_path(spec.out);
  std::ofstream csv_file(sidecar);
  if (!csv_file) throw UsageError("cannot write " + sidecar);
  csv_file << csv.str();
  write_json(out, {{"svg", spec.out}, {"csv", sidecar}, {"points", xs.size()}});
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunSpec spec;
  CLI::App app{"Stability laboratory for Hamiltonian equilibria", "hamlab"};
  app.require_subcommand(1);

  auto add_system = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("system", spec.system, "catalog system");
    if (required) opt->required();
    sub->add_option("--sigma", spec.sigma, "coupling sigma (default 1)");
    sub->add_option("--g-coeffs", spec.g_coeffs, "g coefficients c1,c2,... (fractions allowed)");
  };
  auto add_numeric = [&](CLI::App* sub) {
    sub->add_option("--step", spec.step, "integrator step");
    sub->add_option("--t0", spec.t0, "start time");
    sub->add_option("--t1", spec.t1, "end time");
    sub->add_option("--tmax", spec.tmax, "time horizon");
    sub->add_option("--radius", spec.radius, "escape radius");
    sub->add_option("--epsilons", spec.epsilons, "initial offsets")->delimiter(',');
    sub->add_option("--amplitudes", spec.amplitudes, "subsystem amplitudes")->delimiter(',');
    sub->add_option("--seed", spec.seed, "sampling seed");
    sub->add_option("--method", spec.method, "implicit_midpoint or explicit_rk4");
    sub->add_option("--out", spec.out, "output file");
    sub->add_option("--format", spec.format, "json or csv");
  };

  auto* catalog = app.add_subcommand("catalog", "list the catalog systems");
  add_system(catalog, false);
  catalog->add_option("--out", spec.out, "output file");
  auto* analyze_cmd = app.add_subcommand("analyze", "classify the equilibrium of a system");
  add_system(analyze_cmd, true);
  add_numeric(analyze_cmd);
  analyze_cmd->add_option("--samples", spec.samples, "cascade samples");
  auto* integrate_cmd = app.add_subcommand("integrate", "integrate a trajectory");
  add_system(integrate_cmd, true);
  add_numeric(integrate_cmd);
  integrate_cmd->add_option("--state", spec.state, "initial state q...,p...")->delimiter(',');
  auto* probe_cmd = app.add_subcommand("probe", "shrinking-offset instability probe");
  add_system(probe_cmd, true);
  add_numeric(probe_cmd);
  auto* certify_cmd = app.add_subcommand("certify", "cascaded first-integral certificate");
  add_system(certify_cmd, true);
  add_numeric(certify_cmd);
  certify_cmd->add_option("--samples", spec.samples, "samples per stage");
  certify_cmd->add_option("--tol", spec.tol, "conservation tolerance");
  auto* period_cmd = app.add_subcommand("period-scan", "period function of the separating subsystem");
  period_cmd->add_option("--sigma", spec.sigma, "g(x) = x + sigma x^2");
  period_cmd->add_option("--g-coeffs", spec.g_coeffs, "g coefficients c1,c2,...");
  add_numeric(period_cmd);
  auto* plot_cmd = app.add_subcommand("plot", "render cherry-asymptotic or variation-unbounded");
  add_system(plot_cmd, true);
  add_numeric(plot_cmd);
  plot_cmd->add_option("--coords", spec.coords, "coordinate pair, e.g. q1,q2");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (auto* sub : app.get_subcommands()) spec.command = sub->get_name();

  try {
    if (spec.command == "plot") return cmd_plot(spec, out);

    std::ofstream file;
    std::ostream* dest = &out;
    if (!spec.out.empty()) {
      file.open(spec.out);
      if (!file) throw UsageError("cannot write " + spec.out);
      dest = &file;
    }
    if (spec.command == "catalog") return cmd_catalog(spec, *dest);
    if (spec.command == "analyze") return cmd_analyze(spec, *dest);
    if (spec.command == "integrate") return cmd_integrate(spec, *dest);
    if (spec.command == "probe") return cmd_probe(spec, *dest);
    if (spec.command == "certify") return cmd_certify(spec, *dest);
    if (spec.command == "period-scan") return cmd_period_scan(spec, *dest);
    throw UsageError("unknown command");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const NumericalError& e) {
    write_json(out, {{"error", {{"kind", "numerical"}, {"message", e.what()}}}});
    return kExitNumerical;
  }
}

}  // namespace hamlab::cli
