#include "doctest.h"

#include <cmath>
#include <random>

#include "hamlab/linalg.hpp"

using namespace hamlab;

namespace {

// Roots r -> monic coefficients of prod (z - r), real roots only.
std::vector<double> from_roots(const std::vector<double>& roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k] += c[k];
      next[k + 1] -= r * c[k];
    }
    c = next;
  }
  return c;
}

const EigenvalueRecord* find(const Spectrum& s, Complex z, double tol) {
  for (const auto& e : s.eigenvalues) {
    if (std::abs(e.value - z) < tol) return &e;
  }
  return nullptr;
}

int total_multiplicity(const Spectrum& s) {
  int m = 0;
  for (const auto& e : s.eigenvalues) m += e.algebraic;
  return m;
}

}  // namespace

TEST_CASE("matrix basics") {
  const SquareMatrix a(2, {1, 2, 3, 4});
  CHECK(a(1, 0) == 3);
  CHECK(a.trace() == 5);
  CHECK(a.determinant() == doctest::Approx(-2));
  CHECK(a.max_norm() == 4);
  CHECK_THROWS_AS(SquareMatrix(2, {1, 2, 3}), UsageError);
}

TEST_CASE("characteristic polynomial of a companion-like matrix") {
  const SquareMatrix a(2, {0, 1, -2, -3});  // z^2 + 3z + 2
  const auto c = characteristic_polynomial(a);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == 1);
  CHECK(c[1] == doctest::Approx(3));
  CHECK(c[2] == doctest::Approx(2));
}

TEST_CASE("characteristic polynomial matches trace and determinant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 30; ++trial) {
    SquareMatrix a(4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) a(r, c) = u(rng);
    const auto p = characteristic_polynomial(a);
    CHECK(p[1] == doctest::Approx(-a.trace()).epsilon(1e-12));
    CHECK(p[4] == doctest::Approx(a.determinant()).epsilon(1e-10));
    // sum of roots is the trace, product the determinant
    const auto roots = polynomial_roots(p);
    Complex sum = 0, prod = 1;
    for (auto z : roots) {
      sum += z;
      prod *= z;
      CHECK(std::abs(polynomial_value(p, z)) < 1e-9);
    }
    CHECK(sum.real() == doctest::Approx(a.trace()).epsilon(1e-9));
    CHECK(std::abs(sum.imag()) < 1e-9);
    CHECK(prod.real() == doctest::Approx(a.determinant()).epsilon(1e-8));
  }
}

TEST_CASE("polynomial roots of known polynomials") {
  const auto roots = polynomial_roots(from_roots({1, 2, 3}));
  std::vector<double> re;
  for (auto z : roots) re.push_back(z.real());
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(1));
  CHECK(re[1] == doctest::Approx(2));
  CHECK(re[2] == doctest::Approx(3));
  const std::vector<double> circle{1, 0, 0, 0, -1};  // z^4 = 1
  for (auto z : polynomial_roots(circle)) CHECK(std::abs(z) == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("numerical rank") {
  const std::vector<Complex> m{1, 2, 2, 4};
  CHECK(numerical_rank(m, 2, 1e-12) == 1);
  const std::vector<Complex> id{1, 0, 0, Complex(0, 1)};
  CHECK(numerical_rank(id, 2, 1e-12) == 2);
  CHECK(numerical_rank(std::vector<Complex>(9, 0.0), 3, 1e-12) == 0);
}

TEST_CASE("diagonal and Jordan matrices") {
  SquareMatrix d(4, {2, 0, 0, 0, 0, 2, 0, 0, 0, 0, -1, 0, 0, 0, 0, 5});
  const auto sd = eigenstructure(d);
  const auto* two = find(sd, 2.0, 1e-9);
  REQUIRE(two);
  CHECK(two->algebraic == 2);
  CHECK(two->geometric == 2);
  CHECK(two->jordan_blocks == std::vector<int>{1, 1});

  SquareMatrix j(4, {3, 1, 0, 0, 0, 3, 1, 0, 0, 0, 3, 0, 0, 0, 0, 3});
  // a 4-fold root is only resolved to about eps^(1/4)
  const auto sj = eigenstructure(j, 1e-3);
  REQUIRE(sj.eigenvalues.size() == 1);
  CHECK(sj.eigenvalues[0].value.real() == doctest::Approx(3).epsilon(1e-9));
  CHECK(sj.eigenvalues[0].algebraic == 4);
  CHECK(sj.eigenvalues[0].geometric == 2);
  CHECK(sj.eigenvalues[0].jordan_blocks == std::vector<int>{3, 1});
}

TEST_CASE("catalog spectra") {
  SUBCASE("free particle: nilpotent block at 0") {
    const auto s = eigenstructure(jacobian_at(catalog_build("free_particle"), PhaseState::zero(1)));
    REQUIRE(s.eigenvalues.size() == 1);
    CHECK(std::abs(s.eigenvalues[0].value) < 1e-12);
    CHECK(s.eigenvalues[0].jordan_blocks == std::vector<int>{2});
    CHECK(classify(s).verdict == SpectralVerdict::kLinearPolynomialGrowth);
  }
  SUBCASE("l4: double eigenvalues with a single block") {
    const auto s = eigenstructure(jacobian_at(catalog_build("l4_linear"), PhaseState::zero(2)));
    REQUIRE(s.eigenvalues.size() == 2);
    for (const auto& e : s.eigenvalues) {
      CHECK(std::abs(e.value.real()) < 1e-12);
      CHECK(std::abs(std::abs(e.value.imag()) - 1 / std::sqrt(2.0)) < 1e-9);
      CHECK(e.jordan_blocks == std::vector<int>{2});
    }
    const auto c = classify(s);
    CHECK(c.verdict == SpectralVerdict::kLinearPolynomialGrowth);
    CHECK(c.imaginary_with_nontrivial_jordan);
  }
  SUBCASE("variation-like: same structure as l4 at frequency 1") {
    const auto s = eigenstructure(jacobian_at(catalog_build("variation_like"), PhaseState::zero(2)));
    CHECK(total_multiplicity(s) == 4);
    for (const auto& e : s.eigenvalues) CHECK(std::abs(std::abs(e.value.imag()) - 1) < 1e-9);
  }
  SUBCASE("hyperbolic matrix is linearly unstable") {
    const SquareMatrix h(2, {0, 1, 1, 0});
    const auto c = classify(eigenstructure(h));
    CHECK(c.verdict == SpectralVerdict::kAsymptoticMotionExists);
    CHECK(c.has_positive_real_part);
    CHECK_FALSE(c.inconclusive_for_nonlinear);
  }
}

TEST_CASE("analytic and finite-difference Jacobians agree") {
  for (const auto& name : catalog_names()) {
    const auto sys = catalog_build(name);
    auto x = sys.equilibrium().flat();
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = 0.1 * (k + 1);
    const auto s = PhaseState::from_flat(x);
    const auto a = jacobian_at(sys, s);
    const auto f = jacobian_at(sys, s, JacobianMethod::kFiniteDifference);
    for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(a.data()[i] == doctest::Approx(f.data()[i]).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("eigenvalues of random symplectic-type matrices come in quadruplets") {
  // Hamiltonian matrices A = J S: spectrum symmetric under z -> -z.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    double s[4][4];
    for (int r = 0; r < 4; ++r)
      for (int c = r; c < 4; ++c) s[r][c] = s[c][r] = u(rng);
    SquareMatrix a(4);
    for (int c = 0; c < 4; ++c) {
      for (int r = 0; r < 2; ++r) {
        a(r, c) = s[r + 2][c];
        a(r + 2, c) = -s[r][c];
      }
    }
    const auto spec = eigenstructure(a);
    CHECK(total_multiplicity(spec) == 4);
    for (const auto& e : spec.eigenvalues) {
      CHECK(find(spec, -e.value, 1e-6) != nullptr);
      CHECK(find(spec, std::conj(e.value), 1e-6) != nullptr);
    }
  }
}
