#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evoset/axioms.hpp"
#include "evoset/evolution.hpp"

namespace evoset {

struct Lifespan {
  std::int64_t appear = 0;     // A(x), first stage index (0 allowed as constructor input)
  std::int64_t disappear = 0;  // D(x), one past the last stage index
  friend bool operator==(const Lifespan&, const Lifespan&) = default;
};

class ChronologyInfeasible : public Error {
 public:
  ChronologyInfeasible(ElementId e, Lifespan l)
      : Error("chronology infeasible at " + e.to_string() + ": A=" + std::to_string(l.appear) +
              " D=" + std::to_string(l.disappear) + " violates A+2 <= D"),
        element(std::move(e)),
        lifespan(l) {}
  ElementId element;
  Lifespan lifespan;
};

class SurjectivityGap : public Error {
 public:
  enum class Side { Appearance, Disappearance };
  SurjectivityGap(std::int64_t k_, Side s)
      : Error(std::string("no element realises ") + (s == Side::Appearance ? "appearance " : "disappearance ") +
              std::to_string(k_)),
        k(k_),
        side(s) {}
  std::int64_t k;
  Side side;
};

// Appearance/disappearance maps. Finite chronologies list every element;
// rule chronologies describe an infinite integer ground lazily and must
// say how far into the enumeration a stage can reach.
class Chronology {
 public:
  using Rule = std::function<Lifespan(std::int64_t)>;
  // reach(k) = n: every element alive at some stage <= k is among the first n
  // ground elements.
  using Reach = std::function<std::size_t(std::size_t)>;

  Chronology() = default;
  explicit Chronology(std::map<ElementId, Lifespan> entries) : entries_(std::move(entries)) {}
  Chronology(std::int64_t ground_start, Rule rule, Reach reach)
      : rule_(std::move(rule)), reach_(std::move(reach)), start_(ground_start) {}

  bool is_finite() const { return !rule_; }
  const std::map<ElementId, Lifespan>& entries() const { return entries_; }

  std::optional<Lifespan> at(const ElementId& e) const {
    if (rule_) {
      if (!e.is_integer() || e.as_integer() < start_) return std::nullopt;
      return rule_(e.as_integer());
    }
    auto it = entries_.find(e);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  Ground ground() const {
    if (rule_) return Ground::naturals_from(start_);
    std::vector<ElementId> xs;
    for (const auto& [e, _] : entries_) xs.push_back(e);
    return Ground::finite(std::move(xs));
  }

  // Elements that may be alive at stage k, in enumeration order.
  std::vector<ElementId> candidates(std::size_t k) const {
    if (!rule_) {
      std::vector<ElementId> xs;
      for (const auto& [e, _] : entries_) xs.push_back(e);
      return xs;
    }
    return Ground::naturals_from(start_).prefix(reach_(k));
  }

  // Stages start at 1, so an element with A = 0 is first observed at 1.
  Chronology observable() const {
    if (rule_) {
      auto rule = rule_;
      return Chronology(start_, [rule](std::int64_t x) {
        auto l = rule(x);
        l.appear = std::max<std::int64_t>(l.appear, 1);
        return l;
      }, reach_);
    }
    auto copy = entries_;
    for (auto& [_, l] : copy) l.appear = std::max<std::int64_t>(l.appear, 1);
    return Chronology(std::move(copy));
  }

 private:
  std::map<ElementId, Lifespan> entries_;
  Rule rule_;
  Reach reach_;
  std::int64_t start_ = 0;
};

// Lifespans observed on the prefix E_1..E_H. Elements whose run is still
// open at E_H, or whose run is broken, are listed as undetermined.
struct ObservedChronology {
  std::map<ElementId, Lifespan> lifespans;
  std::vector<ElementId> undetermined;
  std::size_t horizon = 0;
};

inline ObservedChronology chronology_from_report(const AxiomReport& report) {
  ObservedChronology out;
  out.horizon = report.horizon;
  for (const auto& rec : report.elements) {
    if (rec.contiguous() && rec.disappearance == Verdict::Pass) {
      out.lifespans.emplace(rec.id, Lifespan{static_cast<std::int64_t>(rec.first),
                                             static_cast<std::int64_t>(rec.last) + 1});
    } else {
      out.undetermined.push_back(rec.id);
    }
  }
  return out;
}

inline ObservedChronology chronology_of(const Evolution& evo, std::size_t horizon) {
  return chronology_from_report(check_axioms(evo, horizon));
}

// Verifies that A realises every k in 0..H-1 and D every k in 2..H.
inline void check_surjectivity(const Chronology& chron, std::size_t horizon) {
  const auto h = static_cast<std::int64_t>(horizon);
  std::vector<bool> appear(static_cast<std::size_t>(h), false);
  std::vector<bool> disappear(static_cast<std::size_t>(h) + 1, false);
  const auto scan = [&](const ElementId& e) {
    const auto l = *chron.at(e);
    if (l.appear >= 0 && l.appear < h) appear[static_cast<std::size_t>(l.appear)] = true;
    if (l.disappear >= 2 && l.disappear <= h) disappear[static_cast<std::size_t>(l.disappear)] = true;
  };
  for (const auto& e : chron.candidates(horizon)) scan(e);
  for (std::int64_t k = 0; k < h; ++k) {
    if (!appear[static_cast<std::size_t>(k)]) throw SurjectivityGap(k, SurjectivityGap::Side::Appearance);
  }
  for (std::int64_t k = 2; k <= h; ++k) {
    if (!disappear[static_cast<std::size_t>(k)]) throw SurjectivityGap(k, SurjectivityGap::Side::Disappearance);
  }
}

// E_k = {x : A(x) <= k < D(x)} for k >= 1. Feasibility (A+2 <= D) is
// checked for every listed element, or for the enumerated reach of a rule
// chronology up to verify_horizon. Surjectivity is checked to
// verify_horizon when it is nonzero.
inline Evolution from_chronology(const Chronology& chron, std::size_t verify_horizon = 0) {
  const auto check_feasible = [](const ElementId& e, const Lifespan& l) {
    if (l.disappear < l.appear + 2) throw ChronologyInfeasible(e, l);
  };
  if (chron.is_finite()) {
    for (const auto& [e, l] : chron.entries()) check_feasible(e, l);
  } else if (verify_horizon > 0) {
    for (const auto& e : chron.candidates(verify_horizon)) check_feasible(e, *chron.at(e));
  }
  if (verify_horizon > 0) check_surjectivity(chron, verify_horizon);

  return Evolution(chron.ground(), [chron](std::size_t k) {
    const auto kk = static_cast<std::int64_t>(k);
    std::vector<ElementId> xs;
    for (const auto& e : chron.candidates(k)) {
      const auto l = *chron.at(e);
      if (l.appear <= kk && kk < l.disappear) xs.push_back(e);
    }
    return Stage(std::move(xs));
  });
}

}  // namespace evoset
