#include "hamlab/g_function.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "hamlab/phase_state.hpp"

namespace hamlab {

namespace {

boost::multiprecision::cpp_int parse_integer(std::string_view s) {
  if (s.empty()) throw UsageError("empty integer");
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw UsageError("bad integer '" + std::string(s) + "'");
    }
  }
  // cpp_int reads a leading 0 as an octal prefix
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return boost::multiprecision::cpp_int(std::string(s));
}

Rational pow10(long e) {
  boost::multiprecision::cpp_int ten = 10;
  boost::multiprecision::cpp_int r = boost::multiprecision::pow(ten, static_cast<unsigned>(std::labs(e)));
  return e >= 0 ? Rational(r) : Rational(1) / Rational(r);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view token) {
  std::string_view s = trim(token);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw UsageError("empty coefficient");

  Rational r;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view ds = trim(s.substr(slash + 1));
    if (!ds.empty() && (ds.front() == '-' || ds.front() == '+')) {
      negative = negative != (ds.front() == '-');
      ds.remove_prefix(1);
    }
    const auto den = parse_integer(ds);
    if (den == 0) throw UsageError("zero denominator in '" + std::string(token) + "'");
    r = Rational(parse_integer(trim(s.substr(0, slash))), den);
  } else {
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view es = s.substr(e + 1);
      bool eneg = false;
      if (!es.empty() && (es.front() == '-' || es.front() == '+')) {
        eneg = es.front() == '-';
        es.remove_prefix(1);
      }
      const auto ev = parse_integer(es);
      if (ev > 400) throw UsageError("exponent out of range in '" + std::string(token) + "'");
      exponent = eneg ? -ev.convert_to<long>() : ev.convert_to<long>();
      s = s.substr(0, e);
    }
    std::string digits;
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
      digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
      exponent -= static_cast<long>(s.size() - dot - 1);
    } else {
      digits = std::string(s);
    }
    r = Rational(parse_integer(digits)) * pow10(exponent);
  }
  return negative ? Rational(-r) : r;
}

GFunction::GFunction(std::vector<Rational> coeffs) : exact_(std::move(coeffs)) {
  if (exact_.empty() || exact_[0] <= 0) {
    throw UsageError("g: need g'(0) = c1 > 0");
  }
  while (exact_.size() > 1 && exact_.back() == 0) exact_.pop_back();
  coeffs_.reserve(exact_.size());
  for (const auto& c : exact_) {
    coeffs_.push_back(c.convert_to<double>());
    if (!std::isfinite(coeffs_.back())) throw UsageError("g: coefficient overflows double");
  }
}

GFunction GFunction::from_doubles(const std::vector<double>& coeffs) {
  std::vector<Rational> exact;
  exact.reserve(coeffs.size());
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw UsageError("g: non-finite coefficient");
    exact.emplace_back(c);
  }
  return GFunction(std::move(exact));
}

GFunction GFunction::quadratic(double sigma) { return from_doubles({1.0, sigma}); }

GFunction GFunction::parse(std::string_view text) {
  std::vector<Rational> exact;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    exact.push_back(parse_rational(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return GFunction(std::move(exact));
}

double GFunction::value(double x) const { return derivative(x, 0); }

double GFunction::derivative(double x, int order) const {
  // d^order/dx^order of sum c_k x^(k+1), Horner over the surviving powers.
  double acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const int power = static_cast<int>(k) + 1;
    if (power < order) break;
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= power - j;
    acc = acc * x + coeffs_[k] * falling;
  }
  // Lowest surviving exponent is 1 for g itself, 0 for any derivative.
  return order == 0 ? acc * x : acc;
}

double GFunction::antiderivative(double x) const {
  double acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    acc = acc * x + coeffs_[k] / static_cast<double>(k + 2);
  }
  return acc * x * x;
}

double GFunction::antiderivative_slope(double x, double y) const {
  // (x^m - y^m)/(x - y) = sum_{j<m} x^j y^(m-1-j), with m = k + 2.
  double total = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const std::size_t m = k + 2;
    double s = 0.0;
    double xp = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      s += xp * std::pow(y, static_cast<double>(m - 1 - j));
      xp *= x;
    }
    total += coeffs_[k] / static_cast<double>(m) * s;
  }
  return total;
}

Rational GFunction::derivative_at_zero(int order) const {
  if (order <= 0) return Rational(0);
  const auto k = static_cast<std::size_t>(order);
  if (k > exact_.size()) return Rational(0);
  Rational factorial = 1;
  for (int j = 2; j <= order; ++j) factorial *= j;
  return factorial * exact_[k - 1];
}

std::string GFunction::to_string() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < exact_.size(); ++k) {
    if (k) out << ',';
    out << exact_[k];
  }
  return out.str();
}

}  // namespace hamlab
