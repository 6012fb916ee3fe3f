#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "evoset/axioms.hpp"

namespace evoset {

enum class ReduceVerdict { Reducible, NotFoundWithinBounds };

struct ReduceResult {
  ReduceVerdict verdict = ReduceVerdict::NotFoundWithinBounds;
  std::vector<std::size_t> indices;  // witness stage indices, ascending
  std::size_t stride = 0;            // nonzero when the witness is arithmetic
  std::size_t candidates_tried = 0;
  bool exhaustive = false;
};

namespace detail {

inline bool passes_as_evolution(const std::vector<Stage>& stages, const std::vector<std::size_t>& idx) {
  std::vector<Stage> sub;
  sub.reserve(idx.size());
  for (auto i : idx) sub.push_back(stages[i - 1]);
  CoverageSpec cov;
  cov.mode = CoverageSpec::Mode::UnionOfStages;
  return !check_stage_sequence(sub, cov).any_fail();
}

}  // namespace detail

// Bounded search for a proper subsequence of E_1..E_{H-1} (at least three
// stages, skipping at least one index) that is itself an evolution
// relative to the union of its stages. Arithmetic subsequences are tried
// first by increasing stride; for H <= 12 every other gapped subset
// follows. Failure never means irreducible.
inline ReduceResult find_reducing_subsequence(const Evolution& evo, std::size_t horizon) {
  ReduceResult res;
  if (horizon < 4) return res;
  const std::size_t last = horizon - 1;
  const auto stages = evo.prefix(last);

  for (std::size_t s = 2; s <= std::max<std::size_t>(2, horizon / 3); ++s) {
    for (std::size_t start = 1; start <= s; ++start) {
      std::vector<std::size_t> idx;
      for (auto i = start; i <= last; i += s) idx.push_back(i);
      if (idx.size() < 3) continue;
      ++res.candidates_tried;
      if (detail::passes_as_evolution(stages, idx)) {
        res.verdict = ReduceVerdict::Reducible;
        res.indices = std::move(idx);
        res.stride = s;
        return res;
      }
    }
  }

  if (horizon <= 12) {
    res.exhaustive = true;
    const std::uint32_t full = (1u << last) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      std::vector<std::size_t> idx;
      for (std::size_t b = 0; b < last; ++b)
        if (mask & (1u << b)) idx.push_back(b + 1);
      if (idx.size() < 3 || idx.back() - idx.front() + 1 == idx.size()) continue;  // contiguous runs are not proper
      ++res.candidates_tried;
      if (detail::passes_as_evolution(stages, idx)) {
        res.verdict = ReduceVerdict::Reducible;
        res.indices = std::move(idx);
        return res;
      }
    }
  }
  return res;
}

}  // namespace evoset
