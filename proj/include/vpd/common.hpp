#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vpd {

using Vec = std::vector<double>;

/// Closed interval, used for per-dimension state/action bounds.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

using Bounds = std::vector<Interval>;

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("l1_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

inline double l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("l2_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return std::sqrt(d);
}

inline double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

inline Vec clamp_to(Vec v, const Bounds& bounds) {
  if (v.size() != bounds.size())
    throw std::invalid_argument("clamp_to: dimension mismatch");
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = clamp(v[i], bounds[i].lo, bounds[i].hi);
  return v;
}

/// Mean squared error between two equally sized vectors, averaged over entries.
inline double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("mse: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a[i] - b[i];
    s += e * e;
  }
  return s / static_cast<double>(a.size());
}

/// Thrown when a distillation run exceeds a safety limit (maps to CLI exit 3).
struct RuntimeAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vpd
