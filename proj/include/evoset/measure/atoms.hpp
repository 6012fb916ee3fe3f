#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "evoset/evolution.hpp"
#include "evoset/measure/measure.hpp"
#include "evoset/pullback.hpp"

namespace evoset {

class AtomsOverlap : public Error {
 public:
  AtomsOverlap(std::size_t i_, std::size_t j_, ElementId e)
      : Error("atoms G_" + std::to_string(i_) + " and G_" + std::to_string(j_) + " share " + e.to_string()),
        i(i_), j(j_), element(std::move(e)) {}
  std::size_t i, j;
  ElementId element;
};

class ZeroWeightAtom : public Error {
 public:
  explicit ZeroWeightAtom(std::size_t k_) : Error("atom G_" + std::to_string(k_) + " has zero weight"), k(k_) {}
  std::size_t k;
};

class NotInvertible : public Error {
 public:
  NotInvertible(const std::string& what, ElementId e) : Error("map not invertible: " + what), element(std::move(e)) {}
  ElementId element;
};

using AtomFamily = std::function<Stage(std::size_t)>;

// G_k = {a k + b}, k >= 1.
inline AtomFamily arithmetic_atoms(std::int64_t a, std::int64_t b) {
  return [=](std::size_t k) { return Stage{ElementId(a * static_cast<std::int64_t>(k) + b)}; };
}

// Order-preserving bijection between the non-atoms of N_0 and N_0, given
// an atom predicate. forward(x) is the rank of x among non-atoms; inverse(n)
// the n-th non-atom. Tables grow on demand under a lock.
inline Bijection complement_enumeration(std::function<bool(std::int64_t)> is_atom) {
  struct Table {
    std::function<bool(std::int64_t)> is_atom;
    std::mutex mutex;
    std::vector<std::int64_t> non_atoms;
    std::int64_t scanned = 0;
    std::int64_t nth(std::int64_t n) {
      std::lock_guard lock(mutex);
      while (static_cast<std::int64_t>(non_atoms.size()) <= n) {
        if (!is_atom(scanned)) non_atoms.push_back(scanned);
        ++scanned;
      }
      return non_atoms[static_cast<std::size_t>(n)];
    }
    std::int64_t rank(std::int64_t x) {
      if (is_atom(x)) return -1;
      std::int64_t n = 0;
      while (nth(n) < x) ++n;
      return n;
    }
  };
  auto t = std::make_shared<Table>();
  t->is_atom = std::move(is_atom);
  return {[t](const ElementId& x) {
            const auto r = x.is_integer() && x.as_integer() >= 0 ? t->rank(x.as_integer()) : -1;
            return r < 0 ? ElementId("<atom>") : ElementId(r);
          },
          [t](const ElementId& n) {
            if (!n.is_integer() || n.as_integer() < 0) return ElementId("<none>");
            return ElementId(t->nth(n.as_integer()));
          }};
}

// Stages f^{-1}(F_k) u G_k where f : E \ (union of atoms) -> E is a
// bijection given with its inverse. Atoms are checked for disjointness and
// positive weight, and f for invertibility on every base element, up to
// `verify_horizon`.
inline Evolution atom_augmented_evolution(const Evolution& base, const AtomFamily& atoms, const Bijection& f,
                                          const DiscreteMeasure& mu, std::size_t verify_horizon) {
  std::map<ElementId, std::size_t> owner;
  for (std::size_t k = 1; k <= verify_horizon; ++k) {
    const auto g = atoms(k);
    double w = 0.0;
    for (const auto& e : g) {
      if (auto [it, fresh] = owner.emplace(e, k); !fresh) throw AtomsOverlap(it->second, k, e);
      w += mu.weight(e);
    }
    if (!(w > 0.0)) throw ZeroWeightAtom(k);
  }
  for (std::size_t k = 1; k <= verify_horizon; ++k) {
    for (const auto& e : base.stage(k)) {
      const auto x = f.inverse(e);
      if (owner.contains(x)) throw NotInvertible("inverse of " + e.to_string() + " is an atom", e);
      if (f.forward(x) != e) throw NotInvertible("f(inverse(" + e.to_string() + ")) != " + e.to_string(), e);
    }
  }
  return Evolution(base.ground(), [base, atoms, f](std::size_t k) {
    std::vector<ElementId> xs;
    for (const auto& e : base.stage(k)) xs.push_back(f.inverse(e));
    for (const auto& a : atoms(k)) xs.push_back(a);
    return Stage(std::move(xs));
  });
}

}  // namespace evoset
