#pragma once

// Constructive witness for convergence "by the evolution" on (0, 1).
//
// The carrier is cut into M equal dyadic cells. The churn cells are the
// ones with the smallest |integral|; every other cell is core: born at
// stage 1 and alive through the whole horizon. Churn cells provide the
// per-stage births and deaths required of an evolution: P of them are born
// at stage 1, one more at each later stage (largest |integral| first, so
// the unborn tail shrinks fastest), and one dies after each stage. The
// dying cell is picked greedily among those at least floor(sqrt(k)) stages
// old so that the running sum of dead integrals stays as close to 0 as
// possible. M is doubled until the churn cells' total |integral| is at
// most tol / 2, which bounds both the dead prefix and the unborn tail:
//
//   integral over E_k = I - dead_k - unborn_k,  |dead_k| + |unborn_k| <= tol / 2.
//
// Every point eventually dying forces the integrals to 0 for integrable phi
// with I != 0, so the witness is a finite-horizon one: core cells are
// still alive at E_H and their disappearance is reported as UNKNOWN.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <bit>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "evoset/intervals/real_evolution.hpp"
#include "evoset/measure/integrand.hpp"

namespace evoset {

class SignObstruction : public Error {
 public:
  SignObstruction()
      : Error("integrand is bounded and of one sign with nonzero integral; no evolution can carry its integral") {}
};

struct ConvergentResult {
  IntervalSet carrier;
  double total = 0.0;                 // I
  std::vector<IntervalSet> stages;    // E_1..E_H
  std::vector<double> integral;       // k = 1..H
  std::vector<double> dead;           // integral of cells dead before stage k
  std::vector<double> unborn;         // integral of cells born after stage k
  std::optional<std::size_t> threshold_index;  // K
  double sup_error = 0.0;             // sup over K <= k < H of |integral_k - I|
  double max_telescoping_residual = 0.0;
  std::size_t cells = 0;
  std::size_t churn_cells = 0;
  RealAxiomReport axioms;
  std::string label = "constructive witness (finite horizon)";
};

inline ConvergentResult construct_convergent_evolution(const Integrand& phi, double tol, std::size_t horizon) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (horizon < 3) throw InvalidArgument("horizon must be >= 3");
  ConvergentResult res;
  res.carrier = IntervalSet(0.0, 1.0);
  res.total = phi.integral(0.0, 1.0);
  if (res.total != 0.0 && phi.bounded_on(res.carrier) && !phi.attains_both_signs(res.carrier))
    throw SignObstruction();

  const std::size_t h = horizon;
  const auto pool = static_cast<std::size_t>(std::sqrt(static_cast<double>(h))) + 2;
  const std::size_t churn = pool + (h - 1);

  std::size_t m = std::bit_ceil(std::max<std::size_t>(1024, 4 * churn));
  std::vector<double> cell_int;
  std::vector<std::size_t> order;
  for (;; m *= 2) {
    if (m > (std::size_t{1} << 24)) throw InvalidArgument("tolerance not reachable with 2^24 cells");
    cell_int.resize(m);
    for (std::size_t j = 0; j < m; ++j)
      cell_int[j] = phi.integral(static_cast<double>(j) / static_cast<double>(m),
                                 static_cast<double>(j + 1) / static_cast<double>(m));
    order.resize(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(cell_int[a]) < std::abs(cell_int[b]); });
    double budget = 0.0;
    for (std::size_t i = 0; i < churn; ++i) budget += std::abs(cell_int[order[i]]);
    if (budget <= 0.5 * tol) break;
  }
  res.cells = m;
  res.churn_cells = churn;

  // Churn cells in birth order: largest |integral| first.
  std::vector<std::size_t> births(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(churn));
  std::reverse(births.begin(), births.end());
  std::vector<bool> is_churn(m, false);
  for (auto c : births) is_churn[c] = true;

  const auto cell = [m](std::size_t j) {
    return Interval{static_cast<double>(j) / static_cast<double>(m), static_cast<double>(j + 1) / static_cast<double>(m)};
  };
  std::vector<Interval> core_parts;
  for (std::size_t j = 0; j < m; ++j)
    if (!is_churn[j]) core_parts.push_back(cell(j));
  const IntervalSet core(std::move(core_parts));

  struct Alive {
    std::size_t cell;
    std::size_t born;
  };
  std::vector<Alive> alive;
  std::size_t next_birth = 0;
  double unborn = 0.0;
  for (auto c : births) unborn += cell_int[c];
  double dead = 0.0;

  for (std::size_t k = 1; k <= h; ++k) {
    const std::size_t born_now = k == 1 ? pool : 1;
    for (std::size_t i = 0; i < born_now && next_birth < births.size(); ++i) {
      const auto c = births[next_birth++];
      alive.push_back({c, k});
      unborn -= cell_int[c];
    }

    std::vector<Interval> parts;
    for (const auto& a : alive) parts.push_back(cell(a.cell));
    auto stage = core | IntervalSet(std::move(parts));
    res.integral.push_back(phi.integral(stage));
    res.dead.push_back(dead);
    res.unborn.push_back(unborn);
    res.stages.push_back(std::move(stage));

    if (k == h) break;
    // Kill one sufficiently old cell, balancing the dead sum toward 0.
    const auto min_age = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(k))));
    std::size_t pick = alive.size();
    for (std::size_t i = 0; i < alive.size(); ++i) {
      if (k - alive[i].born + 1 < min_age) continue;
      if (pick == alive.size()) {
        pick = i;
        continue;
      }
      const double cand = std::abs(dead + cell_int[alive[i].cell]);
      const double best = std::abs(dead + cell_int[alive[pick].cell]);
      if (cand < best || (cand == best && alive[i].born < alive[pick].born)) pick = i;
    }
    if (pick == alive.size()) throw Error("convergent scheduler found no eligible cell to retire");
    dead += cell_int[alive[pick].cell];
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pick));
  }

  for (std::size_t k = 1; k <= h; ++k) {
    const double r = res.integral[k - 1] + res.dead[k - 1] + res.unborn[k - 1] - res.total;
    res.max_telescoping_residual = std::max(res.max_telescoping_residual, std::abs(r));
  }
  for (std::size_t k = h - 1; k >= 1; --k) {
    if (std::abs(res.integral[k - 1] - res.total) > tol) break;
    res.threshold_index = k;
  }
  if (res.threshold_index) {
    for (std::size_t k = *res.threshold_index; k < h; ++k)
      res.sup_error = std::max(res.sup_error, std::abs(res.integral[k - 1] - res.total));
  }
  res.axioms = check_real_stage_sequence(res.stages, res.carrier);
  return res;
}

}  // namespace evoset
