#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "evoset/axioms.hpp"
#include "evoset/evolution.hpp"
#include "evoset/intervals/interval_set.hpp"

namespace evoset {

class BadWindow : public Error {
 public:
  BadWindow(double w, double s)
      : Error("sliding window needs 0 < step < width (width=" + std::to_string(w) + ", step=" + std::to_string(s) + ")") {}
};

using RealStageGenerator = std::function<IntervalSet(std::size_t)>;

// Evolution whose stages are interval sets inside a carrier (R, [0,inf),
// or a bounded set for measure models). Same memo contract as Evolution.
class RealEvolution {
 public:
  RealEvolution(IntervalSet carrier, RealStageGenerator gen)
      : carrier_(std::move(carrier)), memo_(std::make_shared<detail::PrefixMemo<IntervalSet>>(std::move(gen))) {}

  const IntervalSet& carrier() const { return carrier_; }
  const IntervalSet& stage(std::size_t k) const { return memo_->at(k); }

  std::vector<IntervalSet> prefix(std::size_t n) const {
    std::vector<IntervalSet> out;
    out.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) out.push_back(stage(k));
    return out;
  }

 private:
  IntervalSet carrier_;
  std::shared_ptr<detail::PrefixMemo<IntervalSet>> memo_;
};

// F_k = [(k-1)s, (k-1)s + w) on [0, inf).
inline RealEvolution sliding_window_evolution(double width, double step) {
  if (!(step > 0.0 && step < width)) throw BadWindow(width, step);
  return RealEvolution(IntervalSet::half_line(), [=](std::size_t k) {
    const double lo = static_cast<double>(k - 1) * step;
    return IntervalSet(lo, lo + width);
  });
}

// Two windows marching away from 0 in both directions; an evolution on R:
// F_k = [(k-1)s, (k-1)s + w) u [-(k-1)s - w, -(k-1)s).
inline RealEvolution symmetric_window_evolution(double width, double step) {
  if (!(step > 0.0 && step < width)) throw BadWindow(width, step);
  return RealEvolution(IntervalSet::real_line(), [=](std::size_t k) {
    const double lo = static_cast<double>(k - 1) * step;
    return IntervalSet(lo, lo + width) | IntervalSet(-lo - width, -lo);
  });
}

// F_k = union of closed shells [n, n+1] for n in index(k); each shell is
// stored as [n, nextafter(n+1)).
inline RealEvolution shell_evolution(const Evolution& index) {
  return RealEvolution(IntervalSet::half_line(), [index](std::size_t k) {
    std::vector<Interval> parts;
    for (const auto& e : index.stage(k)) {
      if (!e.is_integer() || e.as_integer() < 0) throw InvalidArgument("shell index must be a natural number");
      const auto n = static_cast<double>(e.as_integer());
      parts.push_back({n, std::nextafter(n + 1.0, std::numeric_limits<double>::infinity())});
    }
    return IntervalSet(std::move(parts));
  });
}

// Axiom report for a real evolution. The prefix is cut into elementary
// cells between consecutive stage endpoints; every stage is a union of
// cells, so the discrete checker decides conditions 1-3 exactly. Element
// ids in the report are cell indices into `cells`.
struct RealAxiomReport {
  AxiomReport report;
  std::vector<Interval> cells;
  double uncovered_measure = 0.0;  // carrier measure not reached by any examined stage
};

// Elementary cells between consecutive endpoints of a list of interval
// sets, and each set rewritten as the ids of the cells it covers.
struct CellDecomposition {
  std::vector<Interval> cells;
  std::vector<Stage> stages;
};

inline CellDecomposition discretize(const std::vector<IntervalSet>& stages) {
  std::vector<double> cuts;
  for (const auto& s : stages)
    for (const auto& p : s.parts()) {
      cuts.push_back(p.lo);
      cuts.push_back(p.hi);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  CellDecomposition out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.cells.push_back({cuts[i], cuts[i + 1]});
  out.stages.reserve(stages.size());
  for (const auto& s : stages) {
    std::vector<ElementId> ids;
    for (const auto& p : s.parts()) {
      const auto first = std::lower_bound(cuts.begin(), cuts.end(), p.lo) - cuts.begin();
      const auto last = std::lower_bound(cuts.begin(), cuts.end(), p.hi) - cuts.begin();
      for (auto c = first; c < last; ++c) ids.emplace_back(static_cast<std::int64_t>(c));
    }
    out.stages.push_back(Stage::from_sorted_unique(std::move(ids)));
  }
  return out;
}

inline RealAxiomReport check_real_stage_sequence(const std::vector<IntervalSet>& stages, const IntervalSet& carrier) {
  auto dec = discretize(stages);
  RealAxiomReport out;
  out.cells = std::move(dec.cells);
  CoverageSpec cov;
  cov.mode = CoverageSpec::Mode::UnionOfStages;
  out.report = check_stage_sequence(dec.stages, cov);

  IntervalSet seen;
  for (const auto& s : stages) seen = seen | s;
  const auto outside = seen - carrier;
  if (outside.nonempty()) {
    detail::fail(out.report, {4, 0, std::nullopt, "stages leave the carrier", {}});
  }
  const auto missing = carrier - seen;
  out.uncovered_measure = missing.measure();
  out.report.coverage = missing.empty() ? Verdict::Pass : Verdict::Unknown;
  out.report.coverage_note = missing.empty() ? "carrier fully covered" : "carrier not covered within the horizon";
  Verdict v4 = out.report.coverage;
  for (const auto& e : out.report.elements) v4 = combine(v4, e.disappearance);
  if (out.report.verdicts[3] != Verdict::Fail) out.report.verdicts[3] = v4;
  return out;
}

inline RealAxiomReport check_real_axioms(const RealEvolution& evo, std::size_t horizon) {
  if (horizon < 3) throw InvalidArgument("check_axioms needs horizon >= 3");
  return check_real_stage_sequence(evo.prefix(horizon), evo.carrier());
}

}  // namespace evoset
