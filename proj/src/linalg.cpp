#include "hamlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hamlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFdStep = 1e-5;

std::vector<Complex> to_complex(const SquareMatrix& a, Complex shift) {
  const std::size_t d = a.dim();
  std::vector<Complex> m(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) m[r * d + c] = a(r, c);
    m[r * d + r] -= shift;
  }
  return m;
}

std::vector<Complex> multiply(const std::vector<Complex>& x, const std::vector<Complex>& y,
                              std::size_t d) {
  std::vector<Complex> out(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t k = 0; k < d; ++k) {
      const Complex xrk = x[r * d + k];
      for (std::size_t c = 0; c < d; ++c) out[r * d + c] += xrk * y[k * d + c];
    }
  }
  return out;
}

double max_abs(const std::vector<Complex>& m) {
  double s = 0.0;
  for (const auto& v : m) s = std::max(s, std::abs(v));
  return s;
}

std::vector<double> derivative_coeffs(std::vector<double> c, int times) {
  for (int t = 0; t < times && c.size() > 1; ++t) {
    const std::size_t deg = c.size() - 1;
    std::vector<double> dc(deg);
    for (std::size_t k = 0; k < deg; ++k) dc[k] = c[k] * static_cast<double>(deg - k);
    c = std::move(dc);
  }
  return c;
}

// Newton on the (m-1)-th derivative, which has a simple root where the
// polynomial has a root of multiplicity m.
Complex polish(const std::vector<double>& coeffs, Complex z, int multiplicity) {
  const auto q = derivative_coeffs(coeffs, multiplicity - 1);
  const auto dq = derivative_coeffs(q, 1);
  if (dq.empty()) return z;
  double best = std::abs(polynomial_value(q, z));
  for (int it = 0; it < 8 && best > 0.0; ++it) {
    const Complex slope = polynomial_value(dq, z);
    if (slope == Complex(0.0)) break;
    const Complex next = z - polynomial_value(q, z) / slope;
    const double r = std::abs(polynomial_value(q, next));
    if (!(r < best)) break;
    z = next;
    best = r;
  }
  return z;
}

}  // namespace

SquareMatrix::SquareMatrix(std::size_t d) : d_(d), a_(d * d, 0.0) {}

SquareMatrix::SquareMatrix(std::size_t d, std::vector<double> row_major)
    : d_(d), a_(std::move(row_major)) {
  if (d_ == 0 || a_.size() != d_ * d_) throw UsageError("SquareMatrix: size mismatch");
  for (double v : a_) {
    if (!std::isfinite(v)) throw UsageError("SquareMatrix: non-finite entry");
  }
}

double SquareMatrix::max_norm() const {
  double s = 0.0;
  for (double v : a_) s = std::max(s, std::abs(v));
  return s;
}

double SquareMatrix::trace() const {
  double s = 0.0;
  for (std::size_t k = 0; k < d_; ++k) s += (*this)(k, k);
  return s;
}

double SquareMatrix::determinant() const {
  std::vector<double> m = a_;
  double det = 1.0;
  for (std::size_t col = 0; col < d_; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d_; ++r) {
      if (std::abs(m[r * d_ + col]) > std::abs(m[piv * d_ + col])) piv = r;
    }
    if (m[piv * d_ + col] == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t c = 0; c < d_; ++c) std::swap(m[piv * d_ + c], m[col * d_ + c]);
      det = -det;
    }
    const double p = m[col * d_ + col];
    det *= p;
    for (std::size_t r = col + 1; r < d_; ++r) {
      const double f = m[r * d_ + col] / p;
      for (std::size_t c = col; c < d_; ++c) m[r * d_ + c] -= f * m[col * d_ + c];
    }
  }
  return det;
}

SquareMatrix jacobian_at(const HamiltonianSystem& sys, const PhaseState& s, JacobianMethod method) {
  const std::size_t d = sys.dim();
  if (s.dim() != d) throw UsageError("jacobian_at: dimension mismatch");
  if (method == JacobianMethod::kAnalytic) return SquareMatrix(d, sys.jacobian(s));

  SquareMatrix jac(d);
  std::vector<double> x = s.flat();
  std::vector<double> fp(d), fm(d);
  for (std::size_t c = 0; c < d; ++c) {
    const double saved = x[c];
    x[c] = saved + kFdStep;
    sys.field(x, fp);
    x[c] = saved - kFdStep;
    sys.field(x, fm);
    x[c] = saved;
    for (std::size_t r = 0; r < d; ++r) jac(r, c) = (fp[r] - fm[r]) / (2.0 * kFdStep);
  }
  return jac;
}

std::vector<double> characteristic_polynomial(const SquareMatrix& a) {
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k)/k.
  const std::size_t d = a.dim();
  std::vector<double> c(d + 1, 0.0);
  c[0] = 1.0;
  std::vector<double> m(d * d, 0.0);
  for (std::size_t k = 1; k <= d; ++k) {
    std::vector<double> am(d * d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t col = 0; col < d; ++col) am[r * d + col] += a(r, j) * m[j * d + col];
      }
    }
    for (std::size_t r = 0; r < d; ++r) am[r * d + r] += c[k - 1];
    m = std::move(am);
    double tr = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t j = 0; j < d; ++j) tr += a(r, j) * m[j * d + r];
    }
    c[k] = -tr / static_cast<double>(k);
  }
  return c;
}

Complex polynomial_value(std::span<const double> coeffs, Complex z) {
  Complex acc = 0.0;
  for (double c : coeffs) acc = acc * z + c;
  return acc;
}

std::vector<Complex> polynomial_roots(std::span<const double> coeffs, int max_iterations) {
  if (coeffs.empty() || coeffs[0] != 1.0) throw UsageError("polynomial_roots: expects a monic polynomial");
  const std::size_t deg = coeffs.size() - 1;
  if (deg == 0) return {};

  double bound = 0.0;
  for (std::size_t k = 1; k <= deg; ++k) bound = std::max(bound, std::abs(coeffs[k]));
  const double radius = 1.0 + bound;

  std::vector<Complex> z(deg);
  const Complex seed(0.4, 0.9);
  Complex w = 1.0;
  for (std::size_t i = 0; i < deg; ++i) {
    z[i] = radius * w;
    w *= seed;
  }

  auto backward_scale = [&](Complex x) {
    double s = 0.0;
    const double ax = std::abs(x);
    for (double c : coeffs) s = s * ax + std::abs(c);
    return s;
  };

  for (int it = 0; it < max_iterations; ++it) {
    bool converged = true;
    for (std::size_t i = 0; i < deg; ++i) {
      const Complex pz = polynomial_value(coeffs, z[i]);
      Complex denom = 1.0;
      for (std::size_t j = 0; j < deg; ++j) {
        if (j == i) continue;
        Complex diff = z[i] - z[j];
        if (diff == Complex(0.0)) diff = Complex(kEps * radius, kEps * radius);
        denom *= diff;
      }
      const Complex step = pz / denom;
      z[i] -= step;
      const bool small_step = std::abs(step) <= 4.0 * kEps * std::max(std::abs(z[i]), radius);
      const bool small_residual = std::abs(pz) <= 16.0 * kEps * backward_scale(z[i]);
      if (!small_step && !small_residual) converged = false;
    }
    if (converged) return z;
  }
  throw NumericalError("polynomial_roots: no convergence within " + std::to_string(max_iterations) +
                       " iterations");
}

int numerical_rank(std::vector<Complex> m, std::size_t d, double threshold) {
  if (m.size() != d * d) throw UsageError("numerical_rank: size mismatch");
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < d && row < d; ++col) {
    std::size_t piv = row;
    for (std::size_t r = row + 1; r < d; ++r) {
      if (std::abs(m[r * d + col]) > std::abs(m[piv * d + col])) piv = r;
    }
    if (std::abs(m[piv * d + col]) <= threshold) continue;
    if (piv != row) {
      for (std::size_t c = 0; c < d; ++c) std::swap(m[piv * d + c], m[row * d + c]);
    }
    const Complex p = m[row * d + col];
    for (std::size_t r = row + 1; r < d; ++r) {
      const Complex f = m[r * d + col] / p;
      for (std::size_t c = col; c < d; ++c) m[r * d + c] -= f * m[row * d + c];
    }
    ++row;
    ++rank;
  }
  return rank;
}

Spectrum eigenstructure(const SquareMatrix& a, double tol) {
  if (!(tol > 0.0)) throw UsageError("eigenstructure: tol must be positive");
  const std::size_t d = a.dim();
  const auto coeffs = characteristic_polynomial(a);
  const auto roots = polynomial_roots(coeffs);

  double scale = 1.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  const double cluster_radius = tol * scale;

  // Single-linkage clustering.
  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (std::abs(roots[i] - roots[j]) <= cluster_radius) parent[find(i)] = find(j);
    }
  }
  std::vector<EigenvalueRecord> records;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t root = find(i);
    auto it = std::find(owner.begin(), owner.end(), root);
    if (it == owner.end()) {
      owner.push_back(root);
      records.push_back({roots[i], 1, 1, {}});
    } else {
      auto& rec = records[static_cast<std::size_t>(it - owner.begin())];
      rec.value += roots[i];
      ++rec.algebraic;
    }
  }
  for (auto& rec : records) {
    rec.value /= static_cast<double>(rec.algebraic);
    rec.value = polish(coeffs, rec.value, rec.algebraic);
  }

  // Exact conjugate pairing for a real matrix.
  std::vector<bool> paired(records.size(), false);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (paired[i]) continue;
    auto& ri = records[i];
    if (std::abs(ri.value.imag()) <= cluster_radius) {
      ri.value = Complex(ri.value.real(), 0.0);
      paired[i] = true;
      continue;
    }
    std::size_t best = records.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < records.size(); ++j) {
      if (j == i || paired[j]) continue;
      const double dist = std::abs(records[j].value - std::conj(ri.value));
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best == records.size() || best_dist > cluster_radius ||
        records[best].algebraic != ri.algebraic) {
      throw NumericalError("eigenstructure: conjugate pairing failed");
    }
    const Complex avg = 0.5 * (ri.value + std::conj(records[best].value));
    ri.value = avg;
    records[best].value = std::conj(avg);
    paired[i] = paired[best] = true;
  }

  Spectrum spectrum;
  spectrum.tol = tol;
  for (auto& rec : records) {
    const auto shifted = to_complex(a, rec.value);
    const double norm1 = max_abs(shifted);
    const int rank1 = norm1 == 0.0 ? 0 : numerical_rank(shifted, d, tol * norm1);
    rec.geometric = static_cast<int>(d) - rank1;
    if (rec.algebraic == 1) {
      if (rec.geometric != 1) throw NumericalError("eigenstructure: simple eigenvalue with rank defect != 1");
      rec.jordan_blocks = {1};
    } else {
      // ranks[k] = rank((A - lambda I)^k), ranks[0] = d.
      std::vector<int> ranks = {static_cast<int>(d), rank1};
      auto power = shifted;
      for (int k = 2; k <= rec.algebraic + 1; ++k) {
        power = multiply(power, shifted, d);
        const double nk = max_abs(power);
        ranks.push_back(nk == 0.0 ? 0 : numerical_rank(power, d, tol * nk));
      }
      for (std::size_t k = 1; k < ranks.size(); ++k) {
        if (ranks[k] > ranks[k - 1]) throw NumericalError("eigenstructure: rank sequence increased");
      }
      if (ranks[static_cast<std::size_t>(rec.algebraic)] != static_cast<int>(d) - rec.algebraic) {
        throw NumericalError("eigenstructure: rank sequence does not match algebraic multiplicity");
      }
      // at_least[k] = number of blocks of size >= k.
      const auto m = static_cast<std::size_t>(rec.algebraic);
      std::vector<int> at_least(m + 2, 0);
      for (std::size_t k = 1; k <= m + 1; ++k) at_least[k] = ranks[k - 1] - ranks[k];
      for (std::size_t k = m; k >= 1; --k) {
        for (int b = 0; b < at_least[k] - at_least[k + 1]; ++b) {
          rec.jordan_blocks.push_back(static_cast<int>(k));
        }
      }
      const int total = std::accumulate(rec.jordan_blocks.begin(), rec.jordan_blocks.end(), 0);
      if (total != rec.algebraic || static_cast<int>(rec.jordan_blocks.size()) != rec.geometric) {
        throw NumericalError("eigenstructure: inconsistent Jordan structure");
      }
    }
    spectrum.residual_bound =
        std::max(spectrum.residual_bound, std::abs(polynomial_value(coeffs, rec.value)));
  }

  auto key = [&](const EigenvalueRecord& r) {
    const double re = std::abs(r.value.real()) <= cluster_radius ? 0.0 : r.value.real();
    return std::pair(re, r.value.imag());
  };
  std::sort(records.begin(), records.end(),
            [&](const auto& x, const auto& y) { return key(x) < key(y); });
  spectrum.eigenvalues = std::move(records);
  return spectrum;
}

SpectralClassification classify(const Spectrum& spectrum) {
  SpectralClassification out{SpectralVerdict::kLinearlyStable};
  bool all_imaginary = true;
  bool semisimple_on_axis = true;
  for (const auto& rec : spectrum.eigenvalues) {
    const double re = rec.value.real();
    if (re > spectrum.tol) out.has_positive_real_part = true;
    const bool on_axis = std::abs(re) <= spectrum.tol;
    if (!on_axis) all_imaginary = false;
    if (on_axis && std::any_of(rec.jordan_blocks.begin(), rec.jordan_blocks.end(),
                               [](int b) { return b >= 2; })) {
      semisimple_on_axis = false;
    }
  }
  out.all_imaginary_semisimple = all_imaginary && semisimple_on_axis;
  out.imaginary_with_nontrivial_jordan = !semisimple_on_axis;
  if (out.has_positive_real_part) {
    out.verdict = SpectralVerdict::kAsymptoticMotionExists;
  } else if (!semisimple_on_axis) {
    out.verdict = SpectralVerdict::kLinearPolynomialGrowth;
  } else {
    out.verdict = SpectralVerdict::kLinearlyStable;
  }
  out.inconclusive_for_nonlinear = !out.has_positive_real_part;
  return out;
}

std::string to_string(SpectralVerdict v) {
  switch (v) {
    case SpectralVerdict::kAsymptoticMotionExists: return "ASYMPTOTIC_MOTION_EXISTS";
    case SpectralVerdict::kLinearlyStable: return "LINEARLY_STABLE";
    case SpectralVerdict::kLinearPolynomialGrowth: return "LINEAR_POLYNOMIAL_GROWTH";
  }
  return "?";
}

}  // namespace hamlab
