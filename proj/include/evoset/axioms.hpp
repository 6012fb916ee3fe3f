#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evoset/element.hpp"
#include "evoset/evolution.hpp"
#include "evoset/verdict.hpp"

namespace evoset {

struct Violation {
  int condition = 0;           // 1..4
  std::size_t index = 0;       // stage index n (pair (n, n+1) for condition 2)
  std::optional<ElementId> element;
  std::string what;
  std::vector<Stage> witness;  // concrete sets backing the finding
};

// Occurrence summary for one observed element within the examined prefix.
struct ElementRecord {
  ElementId id;
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t count = 0;
  bool contiguous() const { return count == last - first + 1; }
  Verdict disappearance = Verdict::Unknown;
};

struct AxiomReport {
  std::size_t horizon = 0;
  std::array<Verdict, 4> verdicts{Verdict::Pass, Verdict::Pass, Verdict::Pass, Verdict::Pass};
  std::vector<Violation> violations;  // FAIL findings only, each with a witness
  std::vector<ElementRecord> elements;  // sorted by id
  Verdict coverage = Verdict::Pass;     // appearance part of condition 4
  std::vector<ElementId> unseen;        // ground elements (or samples) never observed
  std::string coverage_note;

  Verdict verdict(int condition) const { return verdicts.at(static_cast<std::size_t>(condition - 1)); }

  // Verdict restricted to claims a finite prefix can decide.
  Verdict decided(int condition) const {
    return verdict(condition) == Verdict::Fail ? Verdict::Fail : Verdict::Pass;
  }

  std::size_t fail_count() const { return violations.size(); }

  std::size_t unknown_count() const {
    std::size_t n = coverage == Verdict::Unknown ? 1 : 0;
    for (const auto& e : elements) n += e.disappearance == Verdict::Unknown;
    return n;
  }

  bool any_fail() const { return !violations.empty(); }

  const ElementRecord* find(const ElementId& id) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), id,
                               [](const ElementRecord& r, const ElementId& x) { return r.id < x; });
    return it != elements.end() && it->id == id ? &*it : nullptr;
  }
};

// How the appearance clause of condition 4 is judged.
struct CoverageSpec {
  enum class Mode { Ground, UnionOfStages } mode = Mode::Ground;
  std::optional<Ground> ground;
  std::size_t sample = 32;  // ground elements probed when the ground is infinite
};

namespace detail {

inline void fail(AxiomReport& r, Violation v) {
  r.verdicts.at(static_cast<std::size_t>(v.condition - 1)) = Verdict::Fail;
  r.violations.push_back(std::move(v));
}

}  // namespace detail

// Checks the four evolution conditions on stages[0..H-1] (stage indices 1..H).
inline AxiomReport check_stage_sequence(std::span<const Stage> stages, const CoverageSpec& coverage = {}) {
  AxiomReport r;
  r.horizon = stages.size();
  const std::size_t h = stages.size();

  // Condition 1: an empty stage is followed only by empty stages.
  for (std::size_t i = 0; i + 1 < h; ++i) {
    if (stages[i].empty() && !stages[i + 1].empty()) {
      detail::fail(r, {1, i + 1, std::nullopt,
                       "stage " + std::to_string(i + 1) + " is empty but stage " + std::to_string(i + 2) + " is not",
                       {stages[i], stages[i + 1]}});
    }
  }

  // Condition 2: consecutive nonempty stages overlap and both churn.
  for (std::size_t i = 0; i + 1 < h; ++i) {
    const auto& a = stages[i];
    const auto& b = stages[i + 1];
    if (a.empty() || b.empty()) continue;
    const auto n = std::to_string(i + 1);
    const auto m = std::to_string(i + 2);
    if (auto s = a & b; s.empty()) detail::fail(r, {2, i + 1, std::nullopt, "E_" + n + " & E_" + m + " is empty", {s}});
    if (auto s = a - b; s.empty()) detail::fail(r, {2, i + 1, std::nullopt, "E_" + n + " \\ E_" + m + " is empty", {s}});
    if (auto s = b - a; s.empty()) detail::fail(r, {2, i + 1, std::nullopt, "E_" + m + " \\ E_" + n + " is empty", {s}});
  }

  // Occurrence records.
  std::map<ElementId, ElementRecord> occ;
  for (std::size_t i = 0; i < h; ++i) {
    for (const auto& e : stages[i]) {
      auto [it, inserted] = occ.try_emplace(e);
      auto& rec = it->second;
      if (inserted) {
        rec.id = e;
        rec.first = i + 1;
      }
      rec.last = i + 1;
      ++rec.count;
    }
  }

  r.elements.reserve(occ.size());
  for (auto& [id, rec] : occ) {
    // Condition 3: occurrences form one contiguous run.
    if (!rec.contiguous()) {
      std::size_t gap = rec.first;
      while (gap <= rec.last && stages[gap - 1].contains(id)) ++gap;
      detail::fail(r, {3, gap, id,
                       "element " + id.to_string() + " present at " + std::to_string(rec.first) + " and " +
                           std::to_string(rec.last) + " but absent at " + std::to_string(gap),
                       {stages[rec.first - 1], stages[gap - 1]}});
    }
    // Condition 4 (disappearance): decided once the element is absent at E_H.
    rec.disappearance = rec.last < h ? Verdict::Pass : Verdict::Unknown;
    r.elements.push_back(rec);
  }

  // Condition 4 (appearance): every ground element occurs somewhere.
  if (coverage.mode == CoverageSpec::Mode::UnionOfStages || !coverage.ground) {
    r.coverage = Verdict::Pass;
    r.coverage_note = "ground taken as the union of the examined stages";
  } else {
    const auto& g = *coverage.ground;
    if (g.is_finite()) {
      for (const auto& e : g.elements())
        if (!occ.contains(e)) r.unseen.push_back(e);
      r.coverage = r.unseen.empty() ? Verdict::Pass : Verdict::Unknown;
      r.coverage_note = r.unseen.empty() ? "finite ground fully covered"
                                         : std::to_string(r.unseen.size()) + " ground elements not yet seen";
    } else {
      for (const auto& e : g.prefix(coverage.sample))
        if (!occ.contains(e)) r.unseen.push_back(e);
      r.coverage = Verdict::Unknown;
      r.coverage_note = "infinite ground; sampled " + std::to_string(coverage.sample) + " elements, " +
                        std::to_string(r.unseen.size()) + " unseen";
    }
    for (const auto& [id, rec] : occ) {
      if (!g.contains(id)) {
        detail::fail(r, {4, rec.first, id, "element " + id.to_string() + " lies outside the declared ground",
                         {stages[rec.first - 1]}});
      }
    }
  }

  Verdict v4 = r.coverage;
  for (const auto& e : r.elements) v4 = combine(v4, e.disappearance);
  r.verdicts[3] = combine(r.verdicts[3], v4);
  return r;
}

// Axiom check over the prefix E_1..E_H of an evolution.
inline AxiomReport check_axioms(const Evolution& evo, std::size_t horizon) {
  if (horizon < 3) throw InvalidArgument("check_axioms needs horizon >= 3");
  const auto stages = evo.prefix(horizon);
  CoverageSpec cov;
  cov.ground = evo.ground();
  return check_stage_sequence(stages, cov);
}

}  // namespace evoset
