#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evoset/axioms.hpp"
#include "evoset/chronology.hpp"
#include "evoset/evolution.hpp"
#include "evoset/intervals/real_evolution.hpp"
#include "evoset/measure/integrand.hpp"

namespace evoset {

class WeightMissing : public Error {
 public:
  explicit WeightMissing(ElementId e) : Error("no weight for element " + e.to_string()), element(std::move(e)) {}
  ElementId element;
};

inline constexpr double kWeightSumTolerance = 1e-9;
inline constexpr double kMeasureTolerance = 1e-12;

// Probability on a discrete ground: an explicit weight table, or a rule
// over integer ids (e.g. the geometric weights 2^{-(x+1)} on N_0).
class DiscreteMeasure {
 public:
  using Rule = std::function<std::optional<double>(const ElementId&)>;

  static DiscreteMeasure table(std::map<ElementId, double> weights, const std::optional<Ground>& ground = {}) {
    double total = 0.0;
    for (const auto& [e, w] : weights) {
      if (!(w >= 0.0)) throw InvalidArgument("negative weight at " + e.to_string());
      if (ground && !ground->contains(e)) throw InvalidArgument("weighted element " + e.to_string() + " outside ground");
      total += w;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance)
      throw InvalidArgument("weights sum to " + std::to_string(total) + ", not 1");
    DiscreteMeasure m;
    auto shared = std::make_shared<const std::map<ElementId, double>>(std::move(weights));
    m.rule_ = [shared](const ElementId& e) -> std::optional<double> {
      auto it = shared->find(e);
      if (it == shared->end()) return std::nullopt;
      return it->second;
    };
    m.name_ = "table";
    return m;
  }

  // w(x) = 2^{-(x - start + 1)} on the integers >= start.
  static DiscreteMeasure geometric(std::int64_t start = 0) {
    DiscreteMeasure m;
    m.rule_ = [start](const ElementId& e) -> std::optional<double> {
      if (!e.is_integer() || e.as_integer() < start) return std::nullopt;
      return std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(e.as_integer() - start + 1, 1100)));
    };
    m.name_ = "geometric";
    return m;
  }

  static DiscreteMeasure rule(Rule r, std::string name) {
    DiscreteMeasure m;
    m.rule_ = std::move(r);
    m.name_ = std::move(name);
    return m;
  }

  double weight(const ElementId& e) const {
    auto w = rule_(e);
    if (!w) throw WeightMissing(e);
    return *w;
  }

  // Sum in ascending element order (stages are sorted).
  double operator()(const Stage& s) const {
    double total = 0.0;
    for (const auto& e : s) total += weight(e);
    return total;
  }

  const std::string& name() const { return name_; }

 private:
  Rule rule_;
  std::string name_;
};

// Lebesgue measure restricted to a carrier of total length 1.
class LebesgueModel {
 public:
  LebesgueModel(IntervalSet carrier, RealEvolution stages) : carrier_(std::move(carrier)), stages_(std::move(stages)) {
    if (std::abs(carrier_.measure() - 1.0) > kWeightSumTolerance)
      throw InvalidArgument("Lebesgue carrier must have measure 1");
  }

  const IntervalSet& carrier() const { return carrier_; }
  const RealEvolution& evolution() const { return stages_; }
  IntervalSet stage(std::size_t k) const { return stages_.stage(k) & carrier_; }
  double mu(std::size_t k) const { return stage(k).measure(); }

 private:
  IntervalSet carrier_;
  RealEvolution stages_;
};

// mu(E_k) for 1 <= k < horizon.
inline std::vector<double> mu_trace(const Evolution& evo, const DiscreteMeasure& mu, std::size_t horizon) {
  std::vector<double> out;
  for (std::size_t k = 1; k < horizon; ++k) out.push_back(mu(evo.stage(k)));
  return out;
}

inline std::vector<double> mu_trace(const LebesgueModel& model, std::size_t horizon) {
  std::vector<double> out;
  for (std::size_t k = 1; k < horizon; ++k) out.push_back(model.mu(k));
  return out;
}

struct DecayReport {
  std::size_t horizon = 0;
  double epsilon = 0.0;
  std::vector<double> mu;                         // k = 1..H-1
  std::vector<std::optional<std::int64_t>> lifespan_bound;  // d_k, empty when some lifespan is still open
  std::optional<std::size_t> threshold_index;     // K: mu(E_k) < eps for K <= k < H
  bool decays() const { return threshold_index.has_value(); }
  std::vector<ElementId> premise_violations;      // alive in every examined stage
  bool tail_below_head = false;                   // max over last quarter < max over first quarter
  Verdict disjoint_tail = Verdict::Pass;          // E_k n E_n empty for n >= k + d_k + 1
  std::optional<std::pair<std::size_t, std::size_t>> disjoint_tail_witness;
};

namespace detail {

inline DecayReport decay_from_stages(const std::vector<Stage>& stages, std::vector<double> mu, double eps) {
  const std::size_t h = stages.size();
  DecayReport rep;
  rep.horizon = h;
  rep.epsilon = eps;
  rep.mu = std::move(mu);

  CoverageSpec cov;
  cov.mode = CoverageSpec::Mode::UnionOfStages;
  const auto axioms = check_stage_sequence(stages, cov);
  const auto chron = chronology_from_report(axioms);
  for (const auto& rec : axioms.elements)
    if (rec.first == 1 && rec.last == h && rec.contiguous()) rep.premise_violations.push_back(rec.id);

  for (std::size_t k = 1; k < h; ++k) {
    std::optional<std::int64_t> d = 0;
    for (const auto& e : stages[k - 1]) {
      auto it = chron.lifespans.find(e);
      if (it == chron.lifespans.end()) {
        d.reset();
        break;
      }
      d = std::max(*d, it->second.disappear - it->second.appear);
    }
    rep.lifespan_bound.push_back(d);
    if (d && rep.disjoint_tail == Verdict::Pass) {
      for (auto n = k + static_cast<std::size_t>(*d) + 1; n <= h; ++n) {
        if (!(stages[k - 1] & stages[n - 1]).empty()) {
          rep.disjoint_tail = Verdict::Fail;
          rep.disjoint_tail_witness = {k, n};
          break;
        }
      }
    }
  }

  for (std::size_t k = rep.mu.size(); k-- > 0;) {
    if (rep.mu[k] >= eps) break;
    rep.threshold_index = k + 1;
  }

  const std::size_t q = rep.mu.size() / 4;
  if (q > 0) {
    const double head = *std::max_element(rep.mu.begin(), rep.mu.begin() + static_cast<std::ptrdiff_t>(q));
    const double tail = *std::max_element(rep.mu.end() - static_cast<std::ptrdiff_t>(q), rep.mu.end());
    rep.tail_below_head = tail < head;
  }
  return rep;
}

}  // namespace detail

// Measure decay over the prefix: stage measures for k < H, per-stage
// lifespan bounds d_k from intervals closed by E_H, the first index K
// after which mu(E_k) < eps, and the disjoint-tail mechanism.
inline DecayReport decay_check(const Evolution& evo, const DiscreteMeasure& mu, std::size_t horizon, double eps) {
  if (horizon < 8) throw InvalidArgument("decay_check needs horizon >= 8");
  if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive");
  return detail::decay_from_stages(evo.prefix(horizon), mu_trace(evo, mu, horizon), eps);
}

inline DecayReport decay_check(const LebesgueModel& model, std::size_t horizon, double eps) {
  if (horizon < 8) throw InvalidArgument("decay_check needs horizon >= 8");
  if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive");
  std::vector<IntervalSet> stages;
  for (std::size_t k = 1; k <= horizon; ++k) stages.push_back(model.stage(k));
  const auto cells = discretize(stages);
  return detail::decay_from_stages(cells.stages, mu_trace(model, horizon), eps);
}

struct IntegralTrace {
  std::vector<double> integral;  // k = 1..H-1
  std::vector<double> mu;
  std::vector<double> sup_abs;   // max |phi_k| over the stage (discrete models only)
  std::optional<double> bound;
  std::vector<std::size_t> bound_violations;  // stages with |integral| > C mu + 1e-12
  std::vector<std::size_t> sampled_bound_violations;  // stages where |phi_k(x)| > C at some element
  bool persistent_mass = false;  // |integral| >= delta over the whole last quarter
  bool needs_unbounded = false;  // persistent mass while mu decays: phi_k cannot stay bounded
};

namespace detail {

inline void finish_diagnostics(IntegralTrace& t, double delta) {
  const std::size_t q = t.integral.size() / 4;
  if (q == 0) return;
  t.persistent_mass = std::all_of(t.integral.end() - static_cast<std::ptrdiff_t>(q), t.integral.end(),
                                  [&](double v) { return std::abs(v) >= delta; });
  const double mu_tail = *std::max_element(t.mu.end() - static_cast<std::ptrdiff_t>(q), t.mu.end());
  t.needs_unbounded = t.persistent_mass && mu_tail < delta;
}

inline void check_bound(IntegralTrace& t, std::size_t k) {
  if (!t.bound) return;
  if (std::abs(t.integral[k - 1]) > *t.bound * t.mu[k - 1] + kMeasureTolerance) t.bound_violations.push_back(k);
}

inline double element_value(const ElementId& e) {
  if (!e.is_integer()) throw CatalogUnsupported("integrands need integer element ids, got " + e.to_string());
  return static_cast<double>(e.as_integer());
}

}  // namespace detail

// Sum over x in E_k of phi_k(x) w(x) for 1 <= k < H, plus diagnostics.
inline IntegralTrace stage_integral(const Evolution& evo, const DiscreteMeasure& mu, const StageIntegrand& phi,
                                    std::size_t horizon, double delta = 1e-3) {
  IntegralTrace t;
  t.bound = phi.bound;
  for (std::size_t k = 1; k < horizon; ++k) {
    const auto f = phi.at(k);
    double s = 0.0, m = 0.0, sup = 0.0;
    bool sampled_violation = false;
    for (const auto& e : evo.stage(k)) {
      const double w = mu.weight(e);
      const double v = f(detail::element_value(e));
      s += v * w;
      m += w;
      sup = std::max(sup, std::abs(v));
      if (phi.bound && std::abs(v) > *phi.bound) sampled_violation = true;
    }
    t.integral.push_back(s);
    t.mu.push_back(m);
    t.sup_abs.push_back(sup);
    if (sampled_violation) t.sampled_bound_violations.push_back(k);
    detail::check_bound(t, k);
  }
  detail::finish_diagnostics(t, delta);
  return t;
}

// Exact integral over the interval parts of E_k for 1 <= k < H.
inline IntegralTrace stage_integral(const LebesgueModel& model, const StageIntegrand& phi, std::size_t horizon,
                                    double delta = 1e-3) {
  IntegralTrace t;
  t.bound = phi.bound;
  for (std::size_t k = 1; k < horizon; ++k) {
    const auto s = model.stage(k);
    t.integral.push_back(phi.at(k).integral(s));
    t.mu.push_back(s.measure());
    t.sup_abs.push_back(std::numeric_limits<double>::quiet_NaN());
    detail::check_bound(t, k);
  }
  detail::finish_diagnostics(t, delta);
  return t;
}

}  // namespace evoset
