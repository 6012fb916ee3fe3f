#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace evoset {

// Opaque element token. Integers order before strings; within a kind the
// natural order applies, so every emitted set has a stable order.
class ElementId {
 public:
  ElementId() = default;
  ElementId(std::int64_t v) : token_(v) {}   // NOLINT(implicit)
  ElementId(int v) : token_(std::int64_t{v}) {}  // NOLINT(implicit)
  ElementId(std::string s) : token_(std::move(s)) {}  // NOLINT(implicit)
  ElementId(const char* s) : token_(std::string(s)) {}  // NOLINT(implicit)

  bool is_integer() const { return token_.index() == 0; }
  std::int64_t as_integer() const { return std::get<std::int64_t>(token_); }
  const std::string& as_string() const { return std::get<std::string>(token_); }

  std::string to_string() const {
    return is_integer() ? std::to_string(as_integer()) : as_string();
  }

  friend auto operator<=>(const ElementId&, const ElementId&) = default;
  friend bool operator==(const ElementId&, const ElementId&) = default;

  friend std::ostream& operator<<(std::ostream& os, const ElementId& e) {
    return os << e.to_string();
  }

 private:
  std::variant<std::int64_t, std::string> token_{std::int64_t{0}};
};

// A finite set of elements kept as a sorted, duplicate-free vector.
class Stage {
 public:
  using value_type = ElementId;
  using const_iterator = std::vector<ElementId>::const_iterator;

  Stage() = default;
  Stage(std::initializer_list<ElementId> xs) : items_(xs) { normalize(); }
  explicit Stage(std::vector<ElementId> xs) : items_(std::move(xs)) { normalize(); }

  static Stage from_sorted_unique(std::vector<ElementId> xs) {
    Stage s;
    s.items_ = std::move(xs);
    return s;
  }

  static Stage range(std::int64_t first, std::int64_t last) {
    std::vector<ElementId> xs;
    if (last >= first) xs.reserve(static_cast<std::size_t>(last - first + 1));
    for (auto v = first; v <= last; ++v) xs.emplace_back(v);
    return from_sorted_unique(std::move(xs));
  }

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  const std::vector<ElementId>& elements() const { return items_; }

  bool contains(const ElementId& e) const {
    return std::binary_search(items_.begin(), items_.end(), e);
  }

  bool subset_of(const Stage& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
  }

  friend Stage operator&(const Stage& a, const Stage& b) {
    std::vector<ElementId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return from_sorted_unique(std::move(out));
  }
  friend Stage operator|(const Stage& a, const Stage& b) {
    std::vector<ElementId> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return from_sorted_unique(std::move(out));
  }
  friend Stage operator-(const Stage& a, const Stage& b) {
    std::vector<ElementId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return from_sorted_unique(std::move(out));
  }

  friend bool operator==(const Stage&, const Stage&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Stage& s) {
    os << '{';
    for (std::size_t i = 0; i < s.items_.size(); ++i) os << (i ? "," : "") << s.items_[i];
    return os << '}';
  }

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<ElementId> items_;
};

}  // namespace evoset
