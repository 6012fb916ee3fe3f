#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evoset/element.hpp"
#include "evoset/errors.hpp"

namespace evoset {

// Enumerable ground set: either an explicit finite list or the integers
// counting up from some start (a lazy enumeration of a countable set).
class Ground {
 public:
  static Ground finite(std::vector<ElementId> xs) {
    Ground g;
    g.finite_ = Stage(std::move(xs));
    return g;
  }
  static Ground finite(Stage s) {
    Ground g;
    g.finite_ = std::move(s);
    return g;
  }
  static Ground naturals_from(std::int64_t start) {
    Ground g;
    g.start_ = start;
    return g;
  }

  bool is_finite() const { return finite_.has_value(); }
  const Stage& elements() const { return *finite_; }
  std::int64_t start() const { return start_; }

  bool contains(const ElementId& e) const {
    if (finite_) return finite_->contains(e);
    return e.is_integer() && e.as_integer() >= start_;
  }

  // First n ground elements in enumeration order.
  std::vector<ElementId> prefix(std::size_t n) const {
    if (finite_) {
      const auto& xs = finite_->elements();
      return {xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(std::min(n, xs.size()))};
    }
    std::vector<ElementId> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(start_ + static_cast<std::int64_t>(i));
    return out;
  }

  std::string describe() const {
    if (finite_) return "finite(" + std::to_string(finite_->size()) + ")";
    return "integers>=" + std::to_string(start_);
  }

 private:
  std::optional<Stage> finite_;
  std::int64_t start_ = 0;
};

using StageGenerator = std::function<Stage(std::size_t)>;

namespace detail {

// Lazily materialized sequence x_1, x_2, ... Items are produced in order
// under one lock; references stay valid because the deque only grows at
// the back.
template <class T>
class PrefixMemo {
 public:
  explicit PrefixMemo(std::function<T(std::size_t)> gen) : generator_(std::move(gen)) {}

  const T& at(std::size_t k) {
    if (k == 0) throw InvalidArgument("stage index must be >= 1");
    std::lock_guard lock(mutex_);
    while (memo_.size() < k) memo_.push_back(generator_(memo_.size() + 1));
    return memo_[k - 1];
  }

  std::size_t size() {
    std::lock_guard lock(mutex_);
    return memo_.size();
  }

 private:
  std::function<T(std::size_t)> generator_;
  std::mutex mutex_;
  std::deque<T> memo_;
};

struct EvolutionState {
  EvolutionState(Ground g, StageGenerator gen) : ground(std::move(g)), memo(std::move(gen)) {}
  Ground ground;
  PrefixMemo<Stage> memo;
};

}  // namespace detail

// A sequence of stages E_1, E_2, ... over a ground set. Copies share the
// memoized prefix; stages are materialized in order under a single lock
// and never change afterwards.
class Evolution {
 public:
  Evolution(Ground ground, StageGenerator generator)
      : state_(std::make_shared<detail::EvolutionState>(std::move(ground), std::move(generator))) {}

  const Ground& ground() const { return state_->ground; }

  const Stage& stage(std::size_t k) const { return state_->memo.at(k); }

  // Stages 1..n as a vector (copies).
  std::vector<Stage> prefix(std::size_t n) const {
    std::vector<Stage> out;
    out.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) out.push_back(stage(k));
    return out;
  }

  std::size_t materialized() const { return state_->memo.size(); }

 private:
  std::shared_ptr<detail::EvolutionState> state_;
};

// E_n = {n, ..., (n+1)^2} on the positive integers.
inline Evolution example_square_evolution() {
  return Evolution(Ground::naturals_from(1), [](std::size_t n) {
    const auto v = static_cast<std::int64_t>(n);
    return Stage::range(v, (v + 1) * (v + 1));
  });
}

// Integer window E_k = {offset + (k-1)step, ..., offset + (k-1)step + width - 1}.
// Width 2, step 1, offset 0 gives E_k = {k-1, k}.
inline Evolution int_window_evolution(std::int64_t width, std::int64_t step, std::int64_t offset = 0) {
  if (width < 1 || step < 1) throw InvalidArgument("int window needs width >= 1 and step >= 1");
  return Evolution(Ground::naturals_from(offset), [=](std::size_t k) {
    const auto lo = offset + static_cast<std::int64_t>(k - 1) * step;
    return Stage::range(lo, lo + width - 1);
  });
}

// Explicit finite list of stages; stages past the list are empty.
inline Evolution explicit_evolution(std::vector<Stage> stages, std::optional<Ground> ground = std::nullopt) {
  if (!ground) {
    Stage all;
    for (const auto& s : stages) all = all | s;
    ground = Ground::finite(all);
  }
  auto shared = std::make_shared<const std::vector<Stage>>(std::move(stages));
  return Evolution(*ground, [shared](std::size_t k) {
    return k <= shared->size() ? (*shared)[k - 1] : Stage{};
  });
}

}  // namespace evoset
