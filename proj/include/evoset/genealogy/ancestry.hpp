#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evoset/genealogy/generations.hpp"

namespace evoset {

struct AncestryReport {
  Verdict disjoint_generations = Verdict::Pass;
  Verdict disjoint_children = Verdict::Pass;
  Verdict acyclic = Verdict::Pass;
  std::vector<std::string> findings;        // one line per violation
  std::vector<ElementId> cycle;             // ancestor chain ending where it started
  bool ok() const {
    return disjoint_generations == Verdict::Pass && disjoint_children == Verdict::Pass && acyclic == Verdict::Pass;
  }
};

// (a) generations pairwise disjoint, (b) distinct couples have disjoint
// children, (c) the parent -> child relation of the trace has no cycle.
inline AncestryReport ancestry_check(const GenerationTrace& trace) {
  AncestryReport rep;

  std::map<ElementId, std::size_t> where;
  for (std::size_t i = 0; i < trace.generations.size(); ++i) {
    for (const auto& e : trace.generations[i].all()) {
      auto [it, fresh] = where.emplace(e, i + 1);
      if (!fresh) {
        rep.disjoint_generations = Verdict::Fail;
        rep.findings.push_back("element " + e.to_string() + " in generations " + std::to_string(it->second) +
                               " and " + std::to_string(i + 1));
      }
    }
  }

  std::map<ElementId, Couple> parent_of;
  std::map<ElementId, std::vector<ElementId>> edges;
  for (const auto& l : trace.links) {
    auto [it, fresh] = parent_of.emplace(l.child, l.parents);
    if (!fresh && it->second != l.parents) {
      rep.disjoint_children = Verdict::Fail;
      rep.findings.push_back("child " + l.child.to_string() + " shared by couples (" + it->second.male.to_string() +
                             "," + it->second.female.to_string() + ") and (" + l.parents.male.to_string() + "," +
                             l.parents.female.to_string() + ")");
    }
    edges[l.parents.male].push_back(l.child);
    edges[l.parents.female].push_back(l.child);
  }

  // Iterative DFS with colours; a grey target closes a cycle.
  enum Colour { White, Grey, Black };
  std::map<ElementId, Colour> colour;
  for (const auto& [root, _] : edges) {
    if (colour[root] != White) continue;
    std::vector<std::pair<ElementId, std::size_t>> stack{{root, 0}};
    colour[root] = Grey;
    while (!stack.empty() && rep.acyclic == Verdict::Pass) {
      auto& [node, next] = stack.back();
      const auto it = edges.find(node);
      if (it == edges.end() || next >= it->second.size()) {
        colour[node] = Black;
        stack.pop_back();
        continue;
      }
      const auto child = it->second[next++];
      if (colour[child] == Grey) {
        rep.acyclic = Verdict::Fail;
        auto from = std::find_if(stack.begin(), stack.end(), [&](const auto& p) { return p.first == child; });
        for (; from != stack.end(); ++from) rep.cycle.push_back(from->first);
        rep.cycle.push_back(child);
        std::string chain;
        for (const auto& e : rep.cycle) chain += (chain.empty() ? "" : " -> ") + e.to_string();
        rep.findings.push_back("descendant cycle: " + chain);
      } else if (colour[child] == White) {
        colour[child] = Grey;
        stack.emplace_back(child, 0);
      }
    }
    if (rep.acyclic == Verdict::Fail) break;
  }
  return rep;
}

}  // namespace evoset
