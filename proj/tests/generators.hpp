#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "evoset/chronology.hpp"
#include "evoset/measure/measure.hpp"
#include "evoset/pullback.hpp"

namespace gen {

using Rng = std::mt19937_64;

// A hits every value in 0..n through a spine x_a with lifespan exactly 2;
// extra elements get lifespan 2 + Geometric(1/2).
inline std::map<evoset::ElementId, evoset::Lifespan> chronology(Rng& rng, std::int64_t n) {
  std::geometric_distribution<int> jitter(0.5);
  std::uniform_int_distribution<std::int64_t> appear(0, n);
  std::uniform_int_distribution<std::int64_t> extras(0, n);
  std::map<evoset::ElementId, evoset::Lifespan> out;
  std::int64_t id = 0;
  for (std::int64_t a = 0; a <= n; ++a) out.emplace(id++, evoset::Lifespan{a, a + 2});
  for (auto i = extras(rng); i > 0; --i) {
    const auto a = appear(rng);
    out.emplace(id++, evoset::Lifespan{a, a + 2 + jitter(rng)});
  }
  return out;
}

// Arbitrary stage sequence over {0..m-1}; usually not an evolution.
inline std::vector<evoset::Stage> noise_stages(Rng& rng, std::size_t count, std::int64_t m) {
  std::bernoulli_distribution coin(0.4);
  std::vector<evoset::Stage> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<evoset::ElementId> xs;
    for (std::int64_t x = 0; x < m; ++x)
      if (coin(rng)) xs.push_back(x);
    out.emplace_back(std::move(xs));
  }
  return out;
}

// Random surjection from a fresh string-labelled domain onto `codomain`.
inline std::map<evoset::ElementId, evoset::ElementId> surjection(Rng& rng, const evoset::Stage& codomain) {
  std::map<evoset::ElementId, evoset::ElementId> f;
  std::uniform_int_distribution<std::size_t> pick(0, codomain.size() - 1);
  std::uniform_int_distribution<int> more(0, static_cast<int>(codomain.size()));
  int id = 0;
  const auto label = [&] { return evoset::ElementId("y" + std::to_string(id++)); };
  for (const auto& e : codomain) f.emplace(label(), e);
  for (int i = more(rng); i > 0; --i) f.emplace(label(), codomain.elements()[pick(rng)]);
  return f;
}

// Normalised random weights on a finite ground.
inline std::map<evoset::ElementId, double> weights(Rng& rng, const evoset::Stage& ground) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::map<evoset::ElementId, double> w;
  double total = 0;
  for (const auto& e : ground) total += w[e] = u(rng);
  for (auto& [_, v] : w) v /= total;
  return w;
}

}  // namespace gen
