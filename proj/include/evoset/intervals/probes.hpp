#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "evoset/intervals/real_evolution.hpp"

namespace evoset {

using Point = std::vector<double>;

class RangeMismatch : public Error {
 public:
  explicit RangeMismatch(const std::string& what) : Error("range mismatch: " + what) {}
};

namespace probe {

struct DistanceToPoint {
  Point center;
};
struct DistanceToSet {
  std::vector<Point> points;  // finite E_0
};
struct LinearFunctional {
  std::vector<double> coeffs;  // nonzero
};
struct Determinant {
  std::size_t n = 2;  // points are row-major n x n matrices
};
struct InnerProduct {
  Point with;  // nonzero e_0
};

}  // namespace probe

namespace detail {
template <class... Fs>
struct Overload : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overload(Fs...) -> Overload<Fs...>;
}  // namespace detail

inline double euclidean_distance(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw InvalidArgument("dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Determinant by Gaussian elimination with partial pivoting.
inline double determinant(const Point& m, std::size_t n) {
  if (m.size() != n * n) throw InvalidArgument("matrix has wrong size");
  Point a = m;
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (a[piv * n + c] == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
      det = -det;
    }
    det *= a[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
    }
  }
  return det;
}

// Surjective scalar map on an ambient space with a witness sampler:
// sample(t) returns a point whose probe value is exactly t whenever the
// nudging search can reach it (it can for every probe here when t is a
// finite value in range; see the tests).
class ScalarProbe {
 public:
  using Variant = std::variant<probe::DistanceToPoint, probe::DistanceToSet, probe::LinearFunctional,
                               probe::Determinant, probe::InnerProduct>;

  explicit ScalarProbe(Variant v) : v_(std::move(v)) { validate(); }

  // Declared range: [0, inf) for distances, R otherwise.
  IntervalSet range() const {
    return nonnegative() ? IntervalSet::half_line() : IntervalSet::real_line();
  }
  bool nonnegative() const {
    return std::holds_alternative<probe::DistanceToPoint>(v_) || std::holds_alternative<probe::DistanceToSet>(v_);
  }

  std::string name() const {
    switch (v_.index()) {
      case 0: return "distance-to-point";
      case 1: return "distance-to-set";
      case 2: return "linear-functional";
      case 3: return "determinant";
      default: return "inner-product";
    }
  }

  std::size_t dimension() const {
    return std::visit(detail::Overload{
        [](const probe::DistanceToPoint& p) { return p.center.size(); },
        [](const probe::DistanceToSet& p) { return p.points.front().size(); },
        [](const probe::LinearFunctional& p) { return p.coeffs.size(); },
        [](const probe::Determinant& p) { return p.n * p.n; },
        [](const probe::InnerProduct& p) { return p.with.size(); }}, v_);
  }

  double operator()(const Point& x) const {
    if (x.size() != dimension()) throw InvalidArgument("point has wrong dimension for " + name());
    return std::visit(detail::Overload{
        [&](const probe::DistanceToPoint& p) { return euclidean_distance(x, p.center); },
        [&](const probe::DistanceToSet& p) {
          double d = std::numeric_limits<double>::infinity();
          for (const auto& q : p.points) d = std::min(d, euclidean_distance(x, q));
          return d;
        },
        [&](const probe::LinearFunctional& p) { return dot(p.coeffs, x); },
        [&](const probe::Determinant& p) { return determinant(x, p.n); },
        [&](const probe::InnerProduct& p) { return dot(p.with, x); }}, v_);
  }

  // Point with probe value t (nearest reachable value at or above t if
  // rounding makes t itself unreachable along the search coordinate).
  Point sample(double t) const {
    if (!range().contains(t)) throw RangeMismatch("value " + std::to_string(t) + " outside the range of " + name());
    return std::visit(detail::Overload{
        [&](const probe::DistanceToPoint& p) {
          Point x = p.center;
          x[0] += t;
          return nudge(x, 0, t, +1.0);
        },
        [&](const probe::DistanceToSet& p) {
          // Moving from the point with the largest first coordinate along
          // +e_1 keeps every other point at distance >= t.
          const auto& far = *std::max_element(p.points.begin(), p.points.end(),
                                              [](const Point& a, const Point& b) { return a[0] < b[0]; });
          Point x = far;
          x[0] += t;
          return nudge(x, 0, t, +1.0);
        },
        [&](const probe::LinearFunctional& p) {
          const auto j = first_nonzero(p.coeffs);
          Point x(p.coeffs.size(), 0.0);
          x[j] = t / p.coeffs[j];
          return nudge(x, j, t, p.coeffs[j] > 0 ? 1.0 : -1.0);
        },
        [&](const probe::Determinant& p) {
          Point x(p.n * p.n, 0.0);
          for (std::size_t i = 0; i < p.n; ++i) x[i * p.n + i] = 1.0;
          x[p.n * p.n - 1] = t;
          return x;
        },
        [&](const probe::InnerProduct& p) {
          const auto j = first_nonzero(p.with);
          Point x(p.with.size(), 0.0);
          x[j] = t / p.with[j];
          return nudge(x, j, t, p.with[j] > 0 ? 1.0 : -1.0);
        }}, v_);
  }

  const Variant& variant() const { return v_; }

 private:
  static double dot(const std::vector<double>& a, const Point& b) {
    if (a.size() != b.size()) throw InvalidArgument("dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  static std::size_t first_nonzero(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0.0) return i;
    throw InvalidArgument("zero vector");
  }

  // The probe is nondecreasing in coordinate j when moved in direction dir.
  // Step by ulps until the value is exactly t, or the first value above t.
  Point nudge(Point x, std::size_t j, double t, double dir) const {
    const double up = dir * std::numeric_limits<double>::infinity();
    for (int i = 0; i < 256 && (*this)(x) < t; ++i) x[j] = std::nextafter(x[j], up);
    for (int i = 0; i < 256; ++i) {
      if ((*this)(x) <= t) break;
      Point y = x;
      y[j] = std::nextafter(y[j], -up);
      if ((*this)(y) < t) break;
      x = std::move(y);
    }
    return x;
  }

  void validate() const {
    std::visit(detail::Overload{
        [](const probe::DistanceToPoint& p) {
          if (p.center.empty()) throw InvalidArgument("distance probe needs a point");
        },
        [](const probe::DistanceToSet& p) {
          if (p.points.empty()) throw InvalidArgument("distance-to-set needs a nonempty set");
          for (const auto& q : p.points)
            if (q.size() != p.points.front().size() || q.empty()) throw InvalidArgument("inconsistent dimensions");
        },
        [](const probe::LinearFunctional& p) { first_nonzero(p.coeffs); },
        [](const probe::Determinant& p) {
          if (p.n == 0) throw InvalidArgument("determinant needs n >= 1");
        },
        [](const probe::InnerProduct& p) { first_nonzero(p.with); }}, v_);
  }

  Variant v_;
};

// Stages {e : probe(e) in F_k}. Membership is an oracle; nonemptiness is
// certified by witness points; axiom verdicts come from the base.
class ScalarPullbackEvolution {
 public:
  ScalarPullbackEvolution(ScalarProbe probe, RealEvolution base) : probe_(std::move(probe)), base_(std::move(base)) {
    if (base_.carrier() != probe_.range())
      throw RangeMismatch(probe_.name() + " has range " + describe(probe_.range()) + " but the base lives on " +
                          describe(base_.carrier()));
  }

  const ScalarProbe& probe() const { return probe_; }
  const RealEvolution& base() const { return base_; }

  const IntervalSet& base_stage(std::size_t k) const {
    const auto& s = base_.stage(k);
    if (!s.subset_of(probe_.range()))
      throw RangeMismatch("base stage " + std::to_string(k) + " leaves the range of " + probe_.name());
    return s;
  }

  bool contains(const Point& e, std::size_t k) const { return base_stage(k).contains(probe_(e)); }

  // Every k <= horizon at which e is a member.
  std::vector<std::size_t> occurrences(const Point& e, std::size_t horizon) const {
    std::vector<std::size_t> ks;
    const double v = probe_(e);
    for (std::size_t k = 1; k <= horizon; ++k)
      if (base_stage(k).contains(v)) ks.push_back(k);
    return ks;
  }

  std::optional<Point> witness(std::size_t k) const {
    const auto& s = base_stage(k);
    if (s.empty()) return std::nullopt;
    return probe_.sample(s.sample());
  }

  RealAxiomReport check_axioms(std::size_t horizon) const { return check_real_axioms(base_, horizon); }

 private:
  static std::string describe(const IntervalSet& s) {
    if (s == IntervalSet::real_line()) return "R";
    if (s == IntervalSet::half_line()) return "[0,inf)";
    return "a bounded carrier";
  }

  ScalarProbe probe_;
  RealEvolution base_;
};

}  // namespace evoset
