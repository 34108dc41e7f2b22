#include "doctest.h"

#include <cmath>

#include "hamlab/probe.hpp"

using namespace hamlab;

namespace {

IntegratorConfig midpoint(double h) {
  IntegratorConfig c;
  c.step = h;
  return c;
}

}  // namespace

TEST_CASE("closed-form motions solve their fields") {
  const auto grid = linspace(-100.0, -1.0, 1000);
  CHECK(asymptotic_residual(catalog_build("cherry"), cherry_asymptotic_motion(1.0), grid) < 1e-12);
  CHECK(asymptotic_residual(catalog_build("cherry", {-2.5, std::nullopt}), cherry_asymptotic_motion(-2.5), grid) <
        1e-12);
  const auto fwd = linspace(0.0, 30.0, 500);
  CHECK(asymptotic_residual(catalog_build("l4_linear"), l4_unstable_motion(3.0), fwd) < 1e-12);
  CHECK(asymptotic_residual(catalog_build("free_particle"), free_particle_motion(0.2, -1.0), fwd) < 1e-15);
  // wrong sign of sigma does not solve the field
  CHECK(asymptotic_residual(catalog_build("cherry", {-1.0, std::nullopt}), cherry_asymptotic_motion(1.0), grid) > 1e-3);
}

TEST_CASE("closed-form velocities match finite differences of the state") {
  for (const auto& m : {cherry_asymptotic_motion(1.0), l4_unstable_motion(2.0)}) {
    for (double t : {-7.3, -2.1}) {
      const double h = 1e-6;
      const auto v = m.velocity(t);
      const auto a = m.state(t + h).flat(), b = m.state(t - h).flat();
      for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] == doctest::Approx((a[k] - b[k]) / (2 * h)).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("cherry motion decays like 1/|t|") {
  const auto m = cherry_asymptotic_motion(1.0);
  for (double v : past_decay_profile(m, linspace(-100.0, -1.0, 50))) CHECK(v == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-13));
  CHECK(decays_in_past(m));
  CHECK_FALSE(decays_in_past(l4_unstable_motion(1.0)));
  CHECK_FALSE(m.contains(0.0));
  CHECK_THROWS_AS(cherry_asymptotic_motion(0.0), UsageError);
}

TEST_CASE("default motion per system") {
  CHECK(default_motion(catalog_build("cherry"))->name == "cherry_asymptotic");
  CHECK_FALSE(default_motion(catalog_build("cherry", {0.0, std::nullopt})));
  CHECK(default_motion(catalog_build("l4_linear")));
  CHECK_FALSE(default_motion(catalog_build("variation_like")));
}

TEST_CASE("witness directions are unit vectors") {
  for (const auto& name : catalog_names()) {
    const auto w = default_witness(catalog_build(name));
    double n2 = 0.0;
    for (double d : w.direction) n2 += d * d;
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("probe escape times for the free particle and l4") {
  for (const auto& name : {"free_particle", "l4_linear"}) {
    const auto sys = catalog_build(name);
    const auto r = instability_probe(sys, default_witness(sys), 1.0, {0.5, 0.1}, 1e3, midpoint(1e-3));
    CHECK(r.verdict == ProbeVerdict::kUnstableWitnessed);
    CHECK(r.conclusive);
    CHECK(*r.records[0].escape_time == doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));
    CHECK(*r.records[1].escape_time == doctest::Approx(std::sqrt(99.0)).epsilon(1e-3));
  }
}

TEST_CASE("cherry probe escape time matches the motion along the curve") {
  for (double sigma : {1.0, -0.5}) {
    const auto sys = catalog_build("cherry", {sigma, std::nullopt});
    const auto r = instability_probe(sys, default_witness(sys), 1.0, {0.2, 0.05}, 1e3, midpoint(1e-3));
    for (const auto& rec : r.records) {
      const double exact = std::sqrt(3.0) / (2 * std::abs(sigma)) * (1 / rec.epsilon - 1.0);
      CHECK(*rec.escape_time == doctest::Approx(exact).epsilon(1e-3));
    }
  }
}

TEST_CASE("harmonic oscillator does not escape") {
  // variation_like subsystem alone is a bounded oscillator
  const auto sub = separated_subsystem(GFunction::quadratic(0.0));
  const std::vector<double> dir{1.0, 0.0};
  const auto r = instability_probe(sub, dir, 1.0, {0.1}, 100.0, midpoint(1e-2));
  CHECK(r.verdict == ProbeVerdict::kNoEscapeObserved);
  CHECK_FALSE(r.conclusive);
}

TEST_CASE("probe input validation") {
  const auto sys = catalog_build("free_particle");
  const std::vector<double> dir{0.0, 1.0}, bad{0.0, 2.0};
  CHECK_THROWS_AS(instability_probe(sys, dir, 1.0, {1.5}, 10.0, midpoint(1e-2)), UsageError);
  CHECK_THROWS_AS(instability_probe(sys, dir, 1.0, {0.0}, 10.0, midpoint(1e-2)), UsageError);
  CHECK_THROWS_AS(instability_probe(sys, bad, 1.0, {0.1}, 10.0, midpoint(1e-2)), UsageError);
}

TEST_CASE("variation-like probe monitors transverse growth") {
  const auto sys = catalog_build("variation_like");
  const auto r = instability_probe(sys, default_witness(sys), 1.0, {0.1}, 1e3, midpoint(1e-2));
  CHECK(r.verdict == ProbeVerdict::kUnstableWitnessed);
  CHECK(r.records[0].monitored_max > 5 * r.records[0].monitored_initial);
}

TEST_CASE("cascade certificates") {
  for (const auto& name : {"free_particle", "l4_linear", "variation_like"}) {
    CAPTURE(name);
    const auto sys = catalog_build(name);
    const auto cert = certify_no_asymptotic(sys, *default_cascade(sys), 500, kCascadeTol);
    CHECK(cert.verdict == CascadeVerdict::kCertifiedNoAsymptoticMotion);
    CHECK(cert.positive_definite);
    for (const auto& st : cert.stages) CHECK(st.validated);
  }
  const auto cherry = catalog_build("cherry");
  const auto cert = certify_no_asymptotic(cherry, *default_cascade(cherry), 500, kCascadeTol);
  CHECK(cert.verdict == CascadeVerdict::kNotCertified);
  CHECK(cert.stages[0].validated);  // H is conserved, yet indefinite
  CHECK_FALSE(cert.positive_definite);
  CHECK(cert.label == "numerical evidence");
}

TEST_CASE("a non-conserved quantity fails its stage") {
  const auto sys = catalog_build("l4_linear");
  CascadeSpec spec;
  spec.stages.push_back({"q1^2", [](const PhaseState& s) { return s.q()[0] * s.q()[0]; }, {}});
  const auto cert = certify_no_asymptotic(sys, spec, 200, kCascadeTol);
  CHECK_FALSE(cert.stages[0].validated);
  CHECK(cert.verdict == CascadeVerdict::kNotCertified);
}

TEST_CASE("loosening the tolerance never invalidates a stage") {
  const auto sys = catalog_build("variation_like");
  const auto spec = *default_cascade(sys);
  double prev_validated = 0;
  for (double tol : {1e-16, 1e-13, 1e-9, 1e-3}) {
    const auto cert = certify_no_asymptotic(sys, spec, 200, tol);
    double validated = 0;
    for (const auto& st : cert.stages) validated += st.validated;
    CHECK(validated >= prev_validated);
    prev_validated = validated;
  }
}

TEST_CASE("certificate is deterministic in the seed") {
  const auto sys = catalog_build("cherry");
  const auto spec = *default_cascade(sys);
  const auto a = certify_no_asymptotic(sys, spec, 300, kCascadeTol, 9);
  const auto b = certify_no_asymptotic(sys, spec, 300, kCascadeTol, 9);
  CHECK(a.min_sum == b.min_sum);
  CHECK(a.stages[0].max_residual == b.stages[0].max_residual);
  CHECK_THROWS_AS(certify_no_asymptotic(sys, spec, 10, kCascadeTol), UsageError);
}
