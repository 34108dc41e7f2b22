#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "hamlab/hamiltonian.hpp"

namespace hamlab {

using Complex = std::complex<double>;

/// Dense row-major d x d real matrix, d in {2, 4} for the catalog.
class SquareMatrix {
 public:
  explicit SquareMatrix(std::size_t d);
  SquareMatrix(std::size_t d, std::vector<double> row_major);

  std::size_t dim() const { return d_; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * d_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return a_[r * d_ + c]; }
  const std::vector<double>& data() const { return a_; }

  double max_norm() const;
  double trace() const;
  double determinant() const;

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t d_;
  std::vector<double> a_;
};

enum class JacobianMethod { kAnalytic, kFiniteDifference };

/// Derivative of the canonical field at s. The finite-difference route uses
/// central differences with step 1e-5.
SquareMatrix jacobian_at(const HamiltonianSystem& sys, const PhaseState& s,
                         JacobianMethod method = JacobianMethod::kAnalytic);

/// Monic characteristic polynomial det(zI - A), coefficients from the
/// leading 1 down to the constant term.
std::vector<double> characteristic_polynomial(const SquareMatrix& a);

Complex polynomial_value(std::span<const double> coeffs, Complex z);

/// All complex roots of a monic polynomial by Durand-Kerner simultaneous
/// iteration. Throws NumericalError when the iteration cap is hit.
std::vector<Complex> polynomial_roots(std::span<const double> coeffs, int max_iterations = 2000);

/// Rank of a complex d x d row-major matrix by row elimination with partial
/// pivoting; pivots at or below `threshold` count as zero.
int numerical_rank(std::vector<Complex> m, std::size_t d, double threshold);

struct EigenvalueRecord {
  Complex value;
  int algebraic = 1;
  int geometric = 1;
  std::vector<int> jordan_blocks;  // sizes, descending
};

struct Spectrum {
  std::vector<EigenvalueRecord> eigenvalues;  // sorted by (re, im)
  double residual_bound = 0.0;                // max |charpoly(lambda)|
  double tol = 1e-7;
};

inline constexpr double kDefaultClusterTol = 1e-7;

/// Eigenvalues with multiplicities and Jordan block sizes.
///
/// Roots of the characteristic polynomial are clustered within `tol`, each
/// cluster is replaced by its mean and polished by Newton's method on the
/// (m-1)-th derivative of the polynomial. Block sizes come from the rank
/// sequence of (A - lambda I)^k. Root finding resolves an m-fold eigenvalue
/// only to about eps^(1/m), so the default tol suits multiplicity up to 2.
Spectrum eigenstructure(const SquareMatrix& a, double tol = kDefaultClusterTol);

enum class SpectralVerdict { kAsymptoticMotionExists, kLinearlyStable, kLinearPolynomialGrowth };

struct SpectralClassification {
  SpectralVerdict verdict;
  bool has_positive_real_part = false;
  bool all_imaginary_semisimple = false;
  bool imaginary_with_nontrivial_jordan = false;
  /// Set whenever no eigenvalue has positive real part: the linear picture
  /// then says nothing definite about the nonlinear equilibrium.
  bool inconclusive_for_nonlinear = false;
};

SpectralClassification classify(const Spectrum& spectrum);

std::string to_string(SpectralVerdict v);

}  // namespace hamlab
