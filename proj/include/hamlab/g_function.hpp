#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hamlab {

using Rational = boost::multiprecision::cpp_rational;

/// Polynomial g(x) = c1 x + c2 x^2 + ... with g(0) = 0 and g'(0) = c1 > 0.
///
/// Coefficients are kept as exact rationals so derivatives at the origin (and
/// anything built from them) are exact; evaluation away from 0 uses doubles.
class GFunction {
 public:
  /// coeffs[k] multiplies x^(k+1). Throws UsageError unless coeffs[0] > 0.
  explicit GFunction(std::vector<Rational> coeffs);

  static GFunction from_doubles(const std::vector<double>& coeffs);
  /// x + sigma x^2
  static GFunction quadratic(double sigma);
  /// Comma-separated tokens, each an integer, a fraction "a/b", or a decimal
  /// ("0.25", "1e-3"), all converted exactly.
  static GFunction parse(std::string_view text);

  double value(double x) const;
  /// order in {0, 1, 2, 3, ...}; order 0 is g itself.
  double derivative(double x, int order) const;
  /// G(x) = integral of g from 0 to x.
  double antiderivative(double x) const;
  /// (G(x) - G(y)) / (x - y) evaluated without cancellation; equals g(x) at x == y.
  double antiderivative_slope(double x, double y) const;

  /// k-th derivative of g at 0, exact: k! c_k.
  Rational derivative_at_zero(int order) const;

  const std::vector<Rational>& exact_coefficients() const { return exact_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.size(); }

  /// Round-trippable text form, e.g. "1,1,10/9".
  std::string to_string() const;

 private:
  std::vector<Rational> exact_;
  std::vector<double> coeffs_;
};

Rational parse_rational(std::string_view token);

}  // namespace hamlab
