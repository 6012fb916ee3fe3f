#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evoset/evolution.hpp"
#include "evoset/verdict.hpp"

namespace evoset {

class SurjectivityViolated : public Error {
 public:
  explicit SurjectivityViolated(ElementId e)
      : Error("element " + e.to_string() + " has no preimage"), element(std::move(e)) {}
  ElementId element;
};

class NotABijection : public Error {
 public:
  NotABijection(std::string what, std::vector<ElementId> w) : Error(std::move(what)), witness(std::move(w)) {}
  std::vector<ElementId> witness;
};

// Map f : F -> E. The preimage function is the surjectivity witness: it
// must list every y with f(y) = e.
struct MapDescriptor {
  Ground domain;
  std::function<ElementId(const ElementId&)> forward;
  std::function<std::vector<ElementId>(const ElementId&)> preimage;

  // Finite map given as pairs (y, f(y)).
  static MapDescriptor from_pairs(const std::map<ElementId, ElementId>& pairs) {
    auto fwd = std::make_shared<const std::map<ElementId, ElementId>>(pairs);
    auto inv = std::make_shared<std::map<ElementId, std::vector<ElementId>>>();
    std::vector<ElementId> dom;
    for (const auto& [y, e] : pairs) {
      (*inv)[e].push_back(y);
      dom.push_back(y);
    }
    std::shared_ptr<const std::map<ElementId, std::vector<ElementId>>> cinv = inv;
    return {Ground::finite(std::move(dom)),
            [fwd](const ElementId& y) {
              auto it = fwd->find(y);
              if (it == fwd->end()) throw InvalidArgument("map undefined at " + y.to_string());
              return it->second;
            },
            [cinv](const ElementId& e) {
              auto it = cinv->find(e);
              return it == cinv->end() ? std::vector<ElementId>{} : it->second;
            }};
  }

  static MapDescriptor identity(const Ground& g) {
    return {g, [](const ElementId& y) { return y; }, [](const ElementId& e) { return std::vector<ElementId>{e}; }};
  }
};

// Stages f^{-1}(E_k) on the domain of f. For a finite codomain ground every
// element must have a preimage.
inline Evolution pullback(const MapDescriptor& f, const Evolution& base) {
  if (base.ground().is_finite()) {
    for (const auto& e : base.ground().elements())
      if (f.preimage(e).empty()) throw SurjectivityViolated(e);
  }
  return Evolution(f.domain, [f, base](std::size_t k) {
    std::vector<ElementId> xs;
    for (const auto& e : base.stage(k)) {
      auto pre = f.preimage(e);
      if (pre.empty()) throw SurjectivityViolated(e);
      xs.insert(xs.end(), pre.begin(), pre.end());
    }
    return Stage(std::move(xs));
  });
}

// Bijection g : E -> F with its inverse.
struct Bijection {
  std::function<ElementId(const ElementId&)> forward;
  std::function<ElementId(const ElementId&)> inverse;

  static Bijection identity() {
    return {[](const ElementId& x) { return x; }, [](const ElementId& x) { return x; }};
  }
};

struct IsoReport {
  Verdict verdict = Verdict::Pass;
  std::size_t mismatch_stage = 0;
  Stage image;               // f(E_k) at the mismatch
  Stage target;              // F_k at the mismatch
  Stage symmetric_difference;
};

// Compares f(E_k) with F_k for 1 <= k < horizon. Invertibility is checked
// on both finite grounds, and on every element touched otherwise.
inline IsoReport is_isoevolved(const Evolution& e_evo, const Evolution& f_evo, const Bijection& bij,
                               std::size_t horizon) {
  const auto check_pair = [&](const ElementId& x) {
    const auto y = bij.forward(x);
    if (bij.inverse(y) != x)
      throw NotABijection("inverse(f(" + x.to_string() + ")) != " + x.to_string(), {x, y});
  };
  const auto check_back = [&](const ElementId& y) {
    const auto x = bij.inverse(y);
    if (bij.forward(x) != y)
      throw NotABijection("f(inverse(" + y.to_string() + ")) != " + y.to_string(), {y, x});
  };
  if (e_evo.ground().is_finite()) {
    std::map<ElementId, ElementId> seen;
    for (const auto& x : e_evo.ground().elements()) {
      const auto y = bij.forward(x);
      if (auto [it, fresh] = seen.emplace(y, x); !fresh)
        throw NotABijection("collision at " + y.to_string(), {it->second, x, y});
      if (!f_evo.ground().contains(y)) throw NotABijection("image outside target ground", {x, y});
      check_pair(x);
    }
    if (f_evo.ground().is_finite()) {
      for (const auto& y : f_evo.ground().elements())
        if (!seen.contains(y)) throw NotABijection("gap: " + y.to_string() + " has no preimage", {y});
    }
  }

  IsoReport rep;
  for (std::size_t k = 1; k < horizon; ++k) {
    std::vector<ElementId> img;
    for (const auto& x : e_evo.stage(k)) {
      check_pair(x);
      img.push_back(bij.forward(x));
    }
    for (const auto& y : f_evo.stage(k)) check_back(y);
    Stage image(std::move(img));
    const auto& target = f_evo.stage(k);
    if (image != target) {
      rep.verdict = Verdict::Fail;
      rep.mismatch_stage = k;
      rep.symmetric_difference = (image - target) | (target - image);
      rep.image = std::move(image);
      rep.target = target;
      return rep;
    }
  }
  return rep;
}

}  // namespace evoset
