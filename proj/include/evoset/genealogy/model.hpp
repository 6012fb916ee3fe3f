#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evoset/element.hpp"
#include "evoset/errors.hpp"
#include "evoset/genealogy/primes.hpp"

namespace evoset {

enum class Sex { Male, Female };

class ModelInvalid : public Error {
 public:
  using Error::Error;
};

struct Couple {
  ElementId male;
  ElementId female;
  friend auto operator<=>(const Couple&, const Couple&) = default;
  friend bool operator==(const Couple&, const Couple&) = default;
};

// Population with a sex partition M u F, a marriage bijection m : M_* -> F_*
// and a partial reproduction map rho (child -> mother, values in F).
class GenealogyModel {
 public:
  GenealogyModel(const std::vector<std::pair<ElementId, Sex>>& people,
                 const std::vector<std::pair<ElementId, ElementId>>& marriages,
                 const std::vector<std::pair<ElementId, ElementId>>& reproduction) {
    std::vector<ElementId> all, males, females;
    for (const auto& [id, sex] : people) {
      if (!sex_.emplace(id, sex).second) throw ModelInvalid("element " + id.to_string() + " declared twice");
      all.push_back(id);
      (sex == Sex::Male ? males : females).push_back(id);
    }
    ground_ = Stage(std::move(all));
    males_ = Stage(std::move(males));
    females_ = Stage(std::move(females));

    std::vector<ElementId> mstar, fstar;
    for (const auto& [x, y] : marriages) {
      require_sex(x, Sex::Male, "marriage");
      require_sex(y, Sex::Female, "marriage");
      if (!husband_to_wife_.emplace(x, y).second) throw ModelInvalid("male " + x.to_string() + " married twice");
      if (!wife_to_husband_.emplace(y, x).second) throw ModelInvalid("female " + y.to_string() + " married twice");
      mstar.push_back(x);
      fstar.push_back(y);
    }
    married_males_ = Stage(std::move(mstar));
    married_females_ = Stage(std::move(fstar));

    std::map<ElementId, std::vector<ElementId>> kids;
    for (const auto& [child, mother] : reproduction) {
      if (!sex_.contains(child)) throw ModelInvalid("reproduction references undeclared " + child.to_string());
      require_sex(mother, Sex::Female, "reproduction value");
      if (!mother_.emplace(child, mother).second) throw ModelInvalid("element " + child.to_string() + " has two mothers");
      kids[mother].push_back(child);
    }
    for (auto& [m, xs] : kids) children_by_mother_.emplace(m, Stage(std::move(xs)));
  }

  // Built-in family: ground {1..N}, odd males, even females, m(x) = x + 1,
  // rho(y) = 2 pi(y) with pi counting primes <= y, kept where 2 pi(y) <= N
  // is a married female.
  static GenealogyModel prime_model(std::int64_t bound) {
    if (bound < 4) throw InvalidArgument("prime model needs bound >= 4");
    const auto pi = prime_counts(static_cast<std::size_t>(bound));
    std::vector<std::pair<ElementId, Sex>> people;
    std::vector<std::pair<ElementId, ElementId>> marriages;
    std::vector<std::pair<ElementId, ElementId>> repro;
    for (std::int64_t y = 1; y <= bound; ++y) {
      people.emplace_back(y, y % 2 ? Sex::Male : Sex::Female);
      if (y % 2 && y + 1 <= bound) marriages.emplace_back(y, y + 1);
    }
    for (std::int64_t y = 1; y <= bound; ++y) {
      const auto mother = 2 * pi[static_cast<std::size_t>(y)];
      if (mother >= 2 && mother <= bound) repro.emplace_back(y, mother);
    }
    return GenealogyModel(people, marriages, repro);
  }

  const Stage& ground() const { return ground_; }
  const Stage& males() const { return males_; }
  const Stage& females() const { return females_; }
  const Stage& married_males() const { return married_males_; }
  const Stage& married_females() const { return married_females_; }

  Sex sex(const ElementId& e) const {
    auto it = sex_.find(e);
    if (it == sex_.end()) throw InvalidArgument("unknown element " + e.to_string());
    return it->second;
  }

  std::optional<ElementId> spouse_of(const ElementId& male) const {
    auto it = husband_to_wife_.find(male);
    if (it == husband_to_wife_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<ElementId> husband_of(const ElementId& female) const {
    auto it = wife_to_husband_.find(female);
    if (it == wife_to_husband_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<ElementId> mother_of(const ElementId& child) const {
    auto it = mother_.find(child);
    if (it == mother_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<Couple> couple_of(const ElementId& male) const {
    if (auto f = spouse_of(male)) return Couple{male, *f};
    return std::nullopt;
  }

  std::vector<Couple> couples() const {
    std::vector<Couple> out;
    for (const auto& [x, y] : husband_to_wife_) out.push_back({x, y});
    return out;
  }

  // rho^{-1}(m(x)); empty when nobody has that mother.
  Stage children_of(const Couple& c) const {
    auto wife = spouse_of(c.male);
    if (!wife || *wife != c.female)
      throw InvalidArgument("(" + c.male.to_string() + "," + c.female.to_string() + ") is not a couple");
    auto it = children_by_mother_.find(c.female);
    return it == children_by_mother_.end() ? Stage{} : it->second;
  }

  // Elements that are some couple's child: rho^{-1}(F_*).
  Stage children_of_couples() const {
    Stage out;
    for (const auto& f : married_females_)
      if (auto it = children_by_mother_.find(f); it != children_by_mother_.end()) out = out | it->second;
    return out;
  }

 private:
  void require_sex(const ElementId& e, Sex s, const char* where) const {
    auto it = sex_.find(e);
    if (it == sex_.end()) throw ModelInvalid(std::string(where) + " references undeclared " + e.to_string());
    if (it->second != s)
      throw ModelInvalid(std::string(where) + ": " + e.to_string() + " must be " + (s == Sex::Male ? "male" : "female"));
  }

  Stage ground_, males_, females_, married_males_, married_females_;
  std::map<ElementId, Sex> sex_;
  std::map<ElementId, ElementId> husband_to_wife_, wife_to_husband_, mother_;
  std::map<ElementId, Stage> children_by_mother_;
};

struct Founders {
  Stage males;
  Stage females;
};

// Elements of M (resp. F) that are no couple's child.
inline Founders founders(const GenealogyModel& model) {
  const auto kids = model.children_of_couples();
  return {model.males() - kids, model.females() - kids};
}

// Three-generation example used throughout the tests and the CLI.
inline GenealogyModel toy_genealogy() {
  return GenealogyModel({{"m1", Sex::Male}, {"m2", Sex::Male}, {"m3", Sex::Male},
                         {"f1", Sex::Female}, {"f2", Sex::Female}, {"f3", Sex::Female}},
                        {{"m1", "f1"}, {"m2", "f2"}, {"m3", "f3"}},
                        {{"m2", "f1"}, {"f2", "f1"}, {"m3", "f2"}, {"f3", "f2"}});
}

}  // namespace evoset
