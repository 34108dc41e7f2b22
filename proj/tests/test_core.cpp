#include "doctest.h"

#include <cmath>
#include <random>

#include "hamlab/hamiltonian.hpp"

using namespace hamlab;

namespace {

std::vector<double> random_point(std::mt19937_64& rng, std::size_t dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(dim);
  for (auto& v : x) v = u(rng);
  return x;
}

std::vector<HamiltonianSystem> all_systems() {
  std::vector<HamiltonianSystem> out;
  for (const auto& n : catalog_names()) out.push_back(catalog_build(n));
  out.push_back(catalog_build("cherry", {-0.7, std::nullopt}));
  out.push_back(catalog_build("variation_like", {std::nullopt, GFunction::parse("1,1,10/9")}));
  out.push_back(separated_subsystem(GFunction::quadratic(1.0)));
  return out;
}

}  // namespace

TEST_CASE("phase state validates and flattens") {
  const PhaseState s({1.0, 2.0}, {3.0, 4.0});
  CHECK(s.dof() == 2);
  CHECK(s.flat() == std::vector<double>{1, 2, 3, 4});
  CHECK(s[2] == 3.0);
  CHECK(s.norm() == doctest::Approx(std::sqrt(30.0)));
  CHECK(PhaseState::from_flat(s.flat()) == s);
  CHECK_THROWS_AS(PhaseState({1.0}, {1.0, 2.0}), UsageError);
  CHECK_THROWS_AS(PhaseState({}, {}), UsageError);
  CHECK_THROWS_AS(PhaseState({NAN}, {0.0}), UsageError);
  const std::vector<double> odd{1, 2, 3};
  CHECK_THROWS_AS(PhaseState::from_flat(odd), UsageError);
  CHECK(component_name(0, 2) == "q1");
  CHECK(component_name(3, 2) == "p2");
}

TEST_CASE("g function parsing is exact") {
  const auto g = GFunction::parse("1, 1, 10/9");
  CHECK(g.exact_coefficients()[2] == Rational(10, 9));
  CHECK(g.to_string() == "1,1,10/9");
  CHECK(GFunction::parse(g.to_string()).exact_coefficients() == g.exact_coefficients());
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5e-2") == Rational(-3, 200));
  CHECK(parse_rational("3/-6") == Rational(-1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), UsageError);
  CHECK_THROWS_AS(parse_rational("abc"), UsageError);
  CHECK_THROWS_AS(GFunction::parse("0,1"), UsageError);
  CHECK_THROWS_AS(GFunction::parse("-1"), UsageError);
  CHECK(GFunction::parse("1,2,0,0").degree() == 2);
}

TEST_CASE("g function calculus") {
  const auto g = GFunction::parse("1,1,10/9");
  for (double x : {-0.7, -0.1, 0.0, 0.3, 1.2}) {
    CHECK(g.value(x) == doctest::Approx(x + x * x + 10.0 / 9.0 * x * x * x).epsilon(1e-14));
    CHECK(g.derivative(x, 1) == doctest::Approx(1 + 2 * x + 10.0 / 3.0 * x * x).epsilon(1e-14));
    CHECK(g.derivative(x, 2) == doctest::Approx(2 + 20.0 / 3.0 * x).epsilon(1e-14));
    CHECK(g.derivative(x, 4) == 0.0);
    CHECK(g.antiderivative(x) ==
          doctest::Approx(x * x / 2 + x * x * x / 3 + 10.0 / 36.0 * x * x * x * x).epsilon(1e-14));
    // divided difference matches the naive quotient away from the diagonal
    const double y = x + 0.37;
    CHECK(g.antiderivative_slope(x, y) ==
          doctest::Approx((g.antiderivative(x) - g.antiderivative(y)) / (x - y)).epsilon(1e-12));
    CHECK(g.antiderivative_slope(x, x) == doctest::Approx(g.value(x)));
  }
  CHECK(g.derivative_at_zero(1) == 1);
  CHECK(g.derivative_at_zero(2) == 2);
  CHECK(g.derivative_at_zero(3) == Rational(20, 3));
  CHECK(g.derivative_at_zero(5) == 0);
}

TEST_CASE("catalog entries") {
  CHECK(catalog_names() == std::vector<std::string>{"free_particle", "l4_linear", "cherry", "variation_like"});
  CHECK(catalog_build("free_particle").dof() == 1);
  CHECK(catalog_build("cherry").sigma() == 1.0);
  CHECK(catalog_build("free_particle").non_isolated_equilibrium());
  CHECK_FALSE(catalog_build("cherry").non_isolated_equilibrium());
  CHECK_THROWS_AS(catalog_build("jupiter"), UsageError);
  const auto v = catalog_build("variation_like", {2.0, std::nullopt});
  REQUIRE(v.g());
  CHECK(v.g()->exact_coefficients()[1] == 2);
}

TEST_CASE("hamiltonian values at hand-computed points") {
  const std::vector<double> x{0.3, -0.2, 0.5, 0.1};
  const double s2 = std::sqrt(2.0);
  CHECK(catalog_build("l4_linear").hamiltonian(x) ==
        doctest::Approx((0.5 * -0.2 - 0.1 * 0.3) / s2 + 0.5 * (0.09 + 0.04)));
  CHECK(catalog_build("cherry").hamiltonian(x) ==
        doctest::Approx(0.5 * (0.09 + 0.25) - (0.04 + 0.01) + (-0.2 * (0.09 - 0.25) - 2 * 0.3 * 0.5 * 0.1)));
  CHECK(catalog_build("variation_like").hamiltonian(x) == doctest::Approx(0.5 * 0.1 + (0.3 + 0.09) * -0.2));
  const std::vector<double> y{0.7, -1.5};
  CHECK(catalog_build("free_particle").hamiltonian(y) == doctest::Approx(1.125));
}

TEST_CASE("field is the symplectic gradient and the Jacobian its derivative") {
  std::mt19937_64 rng(7);
  for (const auto& sys : all_systems()) {
    CAPTURE(sys.name());
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_point(rng, sys.dim(), 0.8);
      const std::size_t n = sys.dof();
      std::vector<double> f(sys.dim()), grad(sys.dim());
      sys.field(x, f);
      sys.gradient(x, grad);

      // finite-difference gradient of H, independent of gradient()
      for (std::size_t k = 0; k < sys.dim(); ++k) {
        const double h = 1e-6;
        auto xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const double fd = (sys.hamiltonian(xp) - sys.hamiltonian(xm)) / (2 * h);
        CHECK(grad[k] == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
      }
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(f[k] == doctest::Approx(grad[n + k]).epsilon(1e-15));
        CHECK(f[n + k] == doctest::Approx(-grad[k]).epsilon(1e-15));
      }
      // H is a first integral: grad H . f = 0
      double dot = 0.0;
      for (std::size_t k = 0; k < sys.dim(); ++k) dot += grad[k] * f[k];
      CHECK(std::abs(dot) < 1e-14);

      std::vector<double> jac(sys.dim() * sys.dim());
      sys.jacobian(x, jac);
      for (std::size_t c = 0; c < sys.dim(); ++c) {
        const double h = 1e-6;
        auto xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        std::vector<double> fp(sys.dim()), fm(sys.dim());
        sys.field(xp, fp);
        sys.field(xm, fm);
        for (std::size_t r = 0; r < sys.dim(); ++r) {
          CHECK(jac[r * sys.dim() + c] == doctest::Approx((fp[r] - fm[r]) / (2 * h)).epsilon(1e-7).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("Hamiltonian Jacobians are infinitesimally symplectic") {
  // A = J S with S symmetric, so J A is symmetric.
  std::mt19937_64 rng(11);
  for (const auto& sys : all_systems()) {
    const std::size_t d = sys.dim(), n = sys.dof();
    const auto x = random_point(rng, d, 0.5);
    std::vector<double> a(d * d);
    sys.jacobian(x, a);
    auto ja = [&](std::size_t r, std::size_t c) { return r < n ? a[(r + n) * d + c] : -a[(r - n) * d + c]; };
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) CHECK(ja(r, c) == doctest::Approx(ja(c, r)).epsilon(1e-14).scale(1.0));
    }
  }
}

TEST_CASE("dimension mismatch is a usage error") {
  const auto sys = catalog_build("cherry");
  const std::vector<double> x{1.0, 2.0};
  std::vector<double> out(4);
  CHECK_THROWS_AS(sys.hamiltonian(x), UsageError);
  CHECK_THROWS_AS(sys.field(x, out), UsageError);
}

TEST_CASE("variation-like system separates into the planar subsystem") {
  const auto g = GFunction::quadratic(1.0);
  const auto sys = catalog_build("variation_like", {std::nullopt, g});
  const auto sub = separated_subsystem(g);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_point(rng, 4, 1.0);
    std::vector<double> f(4), fs(2);
    sys.field(x, f);
    const std::vector<double> y{x[0], x[3]};  // (q1, p2)
    sub.field(y, fs);
    CHECK(f[0] == doctest::Approx(fs[0]).epsilon(1e-15));
    CHECK(f[3] == doctest::Approx(fs[1]).epsilon(1e-15));
  }
}
