#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evoset/evolution.hpp"
#include "evoset/genealogy/model.hpp"
#include "evoset/verdict.hpp"

namespace evoset {

class FoundersInvalid : public Error {
 public:
  using Error::Error;
};

struct Generation {
  Stage males;
  Stage females;
  Stage all() const { return males | females; }
};

// Couple-to-child link recorded while iterating (including children that
// were already placed earlier, so loops stay visible to ancestry_check).
struct Link {
  Couple parents;
  ElementId child;
};

struct GenerationTrace {
  std::vector<Generation> generations;  // generations[0] is (M_1, F_1)
  std::vector<Link> links;
  Stage stage0;  // E_1 u (ground \ union of all stages), reported only

  // E_k = M_k u F_k u M_{k+1} u F_{k+1}, k >= 1.
  Stage stage(std::size_t k) const {
    Stage s;
    if (k >= 1 && k <= generations.size()) s = generations[k - 1].all();
    if (k < generations.size()) s = s | generations[k].all();
    return s;
  }
};

struct PlacementViolation {
  std::size_t generation = 0;  // k of the parents' generation
  Couple parents;
  ElementId child;
  std::size_t earlier = 0;     // generation i <= k already holding the child
};

struct GenerationalResult {
  GenerationTrace trace;
  Evolution evolution;
  std::vector<PlacementViolation> placement_violations;
  Verdict placement() const { return placement_violations.empty() ? Verdict::Pass : Verdict::Fail; }
};

// Iterates G_{k+1} = union over x in M_k n M_* of rho^{-1}(m(x)),
// M_{k+1} = (G_{k+1} n M) \ (M_1 u ... u M_k), likewise for F, until the
// generation is empty (or `max_generations` is reached).
inline GenerationalResult generational_evolution(const GenealogyModel& model, const Stage& m1, const Stage& f1,
                                                 std::size_t max_generations = 0) {
  const auto fs = founders(model);
  if (m1.empty() || f1.empty()) throw FoundersInvalid("founder sets must be nonempty");
  if (!m1.subset_of(fs.males)) throw FoundersInvalid("M_1 must consist of male founders");
  if (!f1.subset_of(fs.females)) throw FoundersInvalid("F_1 must consist of female founders");

  if (max_generations == 0) max_generations = model.ground().size() + 2;
  GenerationalResult out{GenerationTrace{}, Evolution(Ground::finite(model.ground()), [](std::size_t) { return Stage{}; }), {}};
  auto& tr = out.trace;
  tr.generations.push_back({m1, f1});

  std::map<ElementId, std::size_t> placed;  // element -> generation index (1-based)
  for (const auto& e : m1) placed.emplace(e, 1);
  for (const auto& e : f1) placed.emplace(e, 1);

  while (tr.generations.size() < max_generations) {
    const std::size_t k = tr.generations.size();
    const auto& current = tr.generations.back();
    std::vector<ElementId> g;
    for (const auto& x : current.males) {
      const auto c = model.couple_of(x);
      if (!c) continue;  // unmarried males have no children
      for (const auto& child : model.children_of(*c)) {
        tr.links.push_back({*c, child});
        if (auto it = placed.find(child); it != placed.end() && it->second <= k)
          out.placement_violations.push_back({k, *c, child, it->second});
        g.push_back(child);
      }
    }
    Stage next(std::move(g));
    std::vector<ElementId> males, females;
    for (const auto& e : next) {
      if (placed.contains(e)) continue;
      (model.sex(e) == Sex::Male ? males : females).push_back(e);
    }
    Generation gen{Stage(std::move(males)), Stage(std::move(females))};
    if (gen.males.empty() && gen.females.empty()) break;
    for (const auto& e : gen.all()) placed.emplace(e, k + 1);
    tr.generations.push_back(std::move(gen));
  }

  Stage covered;
  for (const auto& g : tr.generations) covered = covered | g.all();
  tr.stage0 = tr.stage(1) | (model.ground() - covered);

  auto shared = std::make_shared<const GenerationTrace>(tr);
  out.evolution = Evolution(Ground::finite(model.ground()), [shared](std::size_t k) { return shared->stage(k); });
  return out;
}

// Uses every founder as M_1 and F_1.
inline GenerationalResult generational_evolution(const GenealogyModel& model) {
  const auto fs = founders(model);
  return generational_evolution(model, fs.males, fs.females);
}

}  // namespace evoset
