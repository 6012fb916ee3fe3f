#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

#include "evoset/errors.hpp"

namespace evoset {

class EmptySet : public Error {
 public:
  EmptySet() : Error("sample requested from an empty interval set") {}
};

// Half-open interval [lo, hi) with lo < hi. Infinite endpoints are allowed
// for carriers such as [0, inf).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of half-open intervals in canonical form: sorted, disjoint,
// and with no two parts touching. All comparisons are exact.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(double lo, double hi) { add(lo, hi); }
  explicit IntervalSet(std::vector<Interval> parts) {
    for (const auto& p : parts)
      if (std::isnan(p.lo) || std::isnan(p.hi)) throw InvalidArgument("interval endpoint is NaN");
    std::erase_if(parts, [](const Interval& p) { return !(p.lo < p.hi); });
    std::sort(parts.begin(), parts.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    for (const auto& p : parts) {
      if (!parts_.empty() && p.lo <= parts_.back().hi)
        parts_.back().hi = std::max(parts_.back().hi, p.hi);
      else
        parts_.push_back(p);
    }
  }

  static IntervalSet real_line() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  static IntervalSet half_line() { return {0.0, std::numeric_limits<double>::infinity()}; }

  // Closed [lo, hi] stored as [lo, next double above hi).
  static IntervalSet closed(double lo, double hi) {
    return {lo, std::nextafter(hi, std::numeric_limits<double>::infinity())};
  }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool nonempty() const { return !parts_.empty(); }

  double measure() const {
    double m = 0.0;
    for (const auto& p : parts_) m += p.length();
    return m;
  }

  bool contains(double x) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](double v, const Interval& p) { return v < p.lo; });
    return it != parts_.begin() && std::prev(it)->contains(x);
  }

  double sample() const {
    if (parts_.empty()) throw EmptySet();
    return parts_.front().lo;
  }

  double inf() const { return parts_.empty() ? std::numeric_limits<double>::infinity() : parts_.front().lo; }
  double sup() const { return parts_.empty() ? -std::numeric_limits<double>::infinity() : parts_.back().hi; }

  bool subset_of(const IntervalSet& other) const { return (*this - other).empty(); }

  friend IntervalSet operator|(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> all;
    all.reserve(a.parts_.size() + b.parts_.size());
    std::merge(a.parts_.begin(), a.parts_.end(), b.parts_.begin(), b.parts_.end(), std::back_inserter(all),
               [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    IntervalSet out;
    for (const auto& p : all) {
      if (!out.parts_.empty() && p.lo <= out.parts_.back().hi)
        out.parts_.back().hi = std::max(out.parts_.back().hi, p.hi);
      else
        out.parts_.push_back(p);
    }
    return out;
  }

  friend IntervalSet operator&(const IntervalSet& a, const IntervalSet& b) {
    IntervalSet out;
    std::size_t i = 0, j = 0;
    while (i < a.parts_.size() && j < b.parts_.size()) {
      const auto& x = a.parts_[i];
      const auto& y = b.parts_[j];
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (lo < hi) out.parts_.push_back({lo, hi});
      if (x.hi < y.hi) ++i; else ++j;
    }
    return out;
  }

  friend IntervalSet operator-(const IntervalSet& a, const IntervalSet& b) {
    IntervalSet out;
    std::size_t j = 0;
    for (auto cur : a.parts_) {
      while (j < b.parts_.size() && b.parts_[j].hi <= cur.lo) ++j;
      std::size_t k = j;
      while (k < b.parts_.size() && b.parts_[k].lo < cur.hi) {
        const auto& cut = b.parts_[k];
        if (cut.lo > cur.lo) out.parts_.push_back({cur.lo, cut.lo});
        cur.lo = std::max(cur.lo, cut.hi);
        if (cur.lo >= cur.hi) break;
        ++k;
      }
      if (cur.lo < cur.hi) out.parts_.push_back(cur);
    }
    return out;
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

  friend std::ostream& operator<<(std::ostream& os, const IntervalSet& s) {
    if (s.parts_.empty()) return os << "{}";
    for (std::size_t i = 0; i < s.parts_.size(); ++i)
      os << (i ? " u " : "") << '[' << s.parts_[i].lo << ',' << s.parts_[i].hi << ')';
    return os;
  }

 private:
  void add(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi)) throw InvalidArgument("interval endpoint is NaN");
    if (!(lo < hi)) return;
    *this = *this | IntervalSet::raw(lo, hi);
  }
  static IntervalSet raw(double lo, double hi) {
    IntervalSet s;
    s.parts_.push_back({lo, hi});
    return s;
  }

  std::vector<Interval> parts_;
};

}  // namespace evoset
