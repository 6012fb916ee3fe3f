#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "evoset/axioms.hpp"
#include "evoset/evolution.hpp"

namespace evoset {

class ZeroVectorRejected : public Error {
 public:
  ZeroVectorRejected() : Error("the zero vector is not part of a span evolution's ground") {}
};

// Finitely supported vector over a fixed basis e_1, e_2, ...; zero
// coefficients are dropped and the zero vector is rejected.
class SupportVector {
 public:
  explicit SupportVector(const std::map<std::int64_t, double>& coords) {
    for (const auto& [i, c] : coords)
      if (c != 0.0) coords_.emplace(i, c);
    if (coords_.empty()) throw ZeroVectorRejected();
  }

  static SupportVector basis(std::int64_t i) { return SupportVector({{i, 1.0}}); }

  const std::map<std::int64_t, double>& coords() const { return coords_; }

  Stage support() const {
    std::vector<ElementId> xs;
    for (const auto& [i, _] : coords_) xs.emplace_back(i);
    return Stage::from_sorted_unique(std::move(xs));
  }

 private:
  std::map<std::int64_t, double> coords_;
};

// E_k = [F_k] minus the zero vector, for an index evolution F_k on N.
class SpanEvolution {
 public:
  explicit SpanEvolution(Evolution index) : index_(std::move(index)) {}

  const Evolution& index() const { return index_; }

  bool contains(const SupportVector& v, std::size_t k) const { return v.support().subset_of(index_.stage(k)); }

  std::vector<std::size_t> occurrences(const SupportVector& v, std::size_t horizon) const {
    std::vector<std::size_t> ks;
    const auto supp = v.support();
    for (std::size_t k = 1; k <= horizon; ++k)
      if (supp.subset_of(index_.stage(k))) ks.push_back(k);
    return ks;
  }

  // Sum of the basis vectors indexed by F_k, when F_k is nonempty.
  std::optional<SupportVector> witness(std::size_t k) const {
    const auto& s = index_.stage(k);
    if (s.empty()) return std::nullopt;
    std::map<std::int64_t, double> c;
    for (const auto& e : s) c.emplace(e.as_integer(), 1.0);
    return SupportVector(c);
  }

  AxiomReport check_axioms(std::size_t horizon) const { return evoset::check_axioms(index_, horizon); }

 private:
  Evolution index_;
};

}  // namespace evoset
