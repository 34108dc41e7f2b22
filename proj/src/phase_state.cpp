#include "hamlab/phase_state.hpp"

#include <cmath>

namespace hamlab {

PhaseState::PhaseState(std::vector<double> q, std::vector<double> p)
    : q_(std::move(q)), p_(std::move(p)) {
  if (q_.empty() || q_.size() != p_.size()) {
    throw UsageError("PhaseState: q and p must have equal nonzero length");
  }
  for (std::size_t k = 0; k < q_.size(); ++k) {
    if (!std::isfinite(q_[k]) || !std::isfinite(p_[k])) {
      throw UsageError("PhaseState: non-finite component");
    }
  }
}

PhaseState PhaseState::zero(std::size_t n) {
  return PhaseState(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

PhaseState PhaseState::from_flat(std::span<const double> x) {
  if (x.empty() || x.size() % 2 != 0) {
    throw UsageError("PhaseState: flat vector must have even nonzero length");
  }
  const std::size_t n = x.size() / 2;
  return PhaseState(std::vector<double>(x.begin(), x.begin() + n),
                    std::vector<double>(x.begin() + n, x.end()));
}

std::vector<double> PhaseState::flat() const {
  std::vector<double> x(q_);
  x.insert(x.end(), p_.begin(), p_.end());
  return x;
}

double PhaseState::norm() const { return std::hypot(norm2(q_), norm2(p_)); }

double PhaseState::distance(const PhaseState& other) const {
  if (other.dof() != dof()) throw UsageError("PhaseState: dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < dim(); ++k) {
    const double d = (*this)[k] - other[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::string component_name(std::size_t k, std::size_t n) {
  return (k < n ? "q" : "p") + std::to_string(k % n + 1);
}

}  // namespace hamlab
