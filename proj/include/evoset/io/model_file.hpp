#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "evoset/chronology.hpp"
#include "evoset/evolution.hpp"
#include "evoset/genealogy/generations.hpp"
#include "evoset/intervals/probes.hpp"
#include "evoset/intervals/span.hpp"
#include "evoset/measure/atoms.hpp"
#include "evoset/measure/measure.hpp"

namespace evoset::io {

using Json = nlohmann::ordered_json;

class SchemaError : public Error {
 public:
  SchemaError(std::string ptr, std::string reason)
      : Error("schema error at " + (ptr.empty() ? std::string("/") : ptr) + ": " + reason),
        pointer(std::move(ptr)),
        why(std::move(reason)) {}
  std::string pointer;
  std::string why;
};

class UnknownKind : public Error {
 public:
  explicit UnknownKind(std::string k) : Error("unknown model kind '" + k + "'"), kind(std::move(k)) {}
  std::string kind;
};

inline constexpr std::size_t kMaxExplicitElements = 1'000'000;

struct ConvergentSpec {
  Integrand phi;
  std::string phi_text;
  double tol = 0.05;
  std::size_t horizon = 2000;
};

struct GenealogySpec {
  GenealogyModel model;
  std::optional<Stage> m1, f1;
};

// A validated model file. Exactly one of the evolution slots is set,
// according to the kind.
struct ModelFile {
  std::string kind;
  Json source;
  std::string digest;

  std::optional<Evolution> discrete;
  std::optional<RealEvolution> real;
  std::optional<ScalarPullbackEvolution> pullback;
  std::optional<SpanEvolution> span;
  std::optional<GenealogySpec> genealogy;
  std::optional<ConvergentSpec> convergent;

  std::optional<DiscreteMeasure> measure;
  std::optional<IntervalSet> lebesgue_carrier;
  std::optional<StageIntegrand> integrand;
  std::string integrand_text;
};

// FNV-1a 64 over the compact dump, as 16 hex digits.
inline std::string digest_of(const Json& j) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

// A JSON value together with its pointer, for located errors.
class Node {
 public:
  Node(const Json& j, std::string ptr) : j_(&j), ptr_(std::move(ptr)) {}

  const Json& json() const { return *j_; }
  const std::string& pointer() const { return ptr_; }
  [[noreturn]] void fail(const std::string& why) const { throw SchemaError(ptr_, why); }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Node at(const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    if (!j_->contains(key)) throw SchemaError(ptr_ + "/" + key, "required field missing");
    return {(*j_)[key], ptr_ + "/" + key};
  }
  Node at(std::size_t i) const { return {(*j_)[i], ptr_ + "/" + std::to_string(i)}; }

  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }

  double number() const {
    if (!j_->is_number()) fail("expected a number");
    return j_->get<double>();
  }
  std::int64_t integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<std::int64_t>();
  }
  std::int64_t integer_in(std::int64_t lo, std::int64_t hi) const {
    const auto v = integer();
    if (v < lo || v > hi) fail("expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected a boolean");
    return j_->get<bool>();
  }
  ElementId element() const {
    if (j_->is_number_integer()) return ElementId(j_->get<std::int64_t>());
    if (j_->is_string()) return ElementId(j_->get<std::string>());
    fail("expected an element id (integer or string)");
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).number());
    return out;
  }
  Stage stage() const {
    std::vector<ElementId> xs;
    for (std::size_t i = 0; i < size(); ++i) xs.push_back(at(i).element());
    return Stage(std::move(xs));
  }
  IntervalSet intervals() const {
    std::vector<Interval> parts;
    for (std::size_t i = 0; i < size(); ++i) {
      const auto p = at(i);
      if (p.size() != 2) p.fail("interval must be [lo, hi]");
      const double lo = p.at(0).number(), hi = p.at(1).number();
      if (!(lo < hi)) p.fail("interval needs lo < hi");
      parts.push_back({lo, hi});
    }
    return IntervalSet(std::move(parts));
  }

 private:
  const Json* j_;
  std::string ptr_;
};

template <class F>
auto located(const Node& n, F&& f) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const UnknownKind&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

ModelFile parse_node(const Node& n);

inline Evolution require_discrete(const Node& n) {
  auto m = parse_node(n);
  if (!m.discrete) n.fail("expected a discrete evolution model, got kind '" + m.kind + "'");
  return *m.discrete;
}

inline RealEvolution require_real(const Node& n) {
  auto m = parse_node(n);
  if (!m.real) n.fail("expected a real evolution model, got kind '" + m.kind + "'");
  return *m.real;
}

inline ScalarProbe parse_probe(const Node& n) {
  const auto type = n.at("type").string();
  return located(n, [&] {
    if (type == "distance-to-point") return ScalarProbe(probe::DistanceToPoint{n.at("point").numbers()});
    if (type == "distance-to-set") {
      const auto pts = n.at("points");
      std::vector<Point> ps;
      for (std::size_t i = 0; i < pts.size(); ++i) ps.push_back(pts.at(i).numbers());
      return ScalarProbe(probe::DistanceToSet{ps});
    }
    if (type == "linear-functional") return ScalarProbe(probe::LinearFunctional{n.at("coeffs").numbers()});
    if (type == "determinant")
      return ScalarProbe(probe::Determinant{static_cast<std::size_t>(n.at("n").integer_in(1, 16))});
    if (type == "inner-product") return ScalarProbe(probe::InnerProduct{n.at("with").numbers()});
    n.at("type").fail("unknown probe type '" + type + "'");
  });
}

inline void parse_measure(const Node& n, ModelFile& m) {
  const auto type = n.at("type").string();
  if (type == "geometric") {
    m.measure = DiscreteMeasure::geometric(n.has("start") ? n.at("start").integer() : 0);
  } else if (type == "weights") {
    const auto ws = n.at("weights");
    std::map<ElementId, double> table;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const auto p = ws.at(i);
      if (p.size() != 2) p.fail("weight entry must be [id, weight]");
      if (!table.emplace(p.at(0).element(), p.at(1).number()).second) p.fail("duplicate weight");
    }
    std::optional<Ground> g;
    if (m.discrete) g = m.discrete->ground();
    m.measure = located(n, [&] { return DiscreteMeasure::table(std::move(table), g); });
  } else if (type == "lebesgue") {
    auto carrier = n.has("carrier") ? n.at("carrier").intervals() : IntervalSet(0.0, 1.0);
    if (std::abs(carrier.measure() - 1.0) > kWeightSumTolerance) n.at("carrier").fail("carrier must have measure 1");
    m.lebesgue_carrier = carrier;
  } else {
    n.at("type").fail("unknown measure type '" + type + "'");
  }
}

inline ModelFile parse_node(const Node& n) {
  if (!n.json().is_object()) n.fail("model must be a JSON object");
  ModelFile m;
  m.kind = n.at("kind").string();
  m.source = n.json();
  m.digest = digest_of(n.json());
  const auto& k = m.kind;

  if (k == "example-square") {
    m.discrete = example_square_evolution();
  } else if (k == "int-window") {
    const auto w = n.has("width") ? n.at("width").integer_in(1, 1 << 20) : 2;
    const auto s = n.has("step") ? n.at("step").integer_in(1, 1 << 20) : 1;
    const auto o = n.has("offset") ? n.at("offset").integer() : 0;
    m.discrete = int_window_evolution(w, s, o);
  } else if (k == "chronology") {
    const auto es = n.at("entries");
    std::map<ElementId, Lifespan> entries;
    for (std::size_t i = 0; i < es.size(); ++i) {
      const auto e = es.at(i);
      Lifespan l{e.at("appear").integer_in(0, 1 << 30), e.at("disappear").integer_in(0, 1 << 30)};
      if (!entries.emplace(e.at("id").element(), l).second) e.at("id").fail("duplicate element");
    }
    const auto vh = n.has("verify_horizon") ? static_cast<std::size_t>(n.at("verify_horizon").integer_in(0, 1 << 20)) : 0;
    m.discrete = located(n, [&] { return from_chronology(Chronology(std::move(entries)), vh); });
  } else if (k == "explicit-stages") {
    const bool real = n.has("domain") && n.at("domain").string() == "real";
    if (n.has("domain") && !real && n.at("domain").string() != "discrete") n.at("domain").fail("domain must be discrete or real");
    const auto ss = n.at("stages");
    std::size_t listed = 0;
    if (real) {
      auto carrier = n.has("carrier") ? n.at("carrier").intervals() : IntervalSet::real_line();
      std::vector<IntervalSet> stages;
      for (std::size_t i = 0; i < ss.size(); ++i) {
        stages.push_back(ss.at(i).intervals());
        listed += stages.back().parts().size();
        if (listed > kMaxExplicitElements) ss.at(i).fail("more than 10^6 listed intervals");
      }
      auto shared = std::make_shared<const std::vector<IntervalSet>>(std::move(stages));
      m.real = RealEvolution(carrier, [shared](std::size_t i) {
        return i <= shared->size() ? (*shared)[i - 1] : IntervalSet{};
      });
    } else {
      std::vector<Stage> stages;
      for (std::size_t i = 0; i < ss.size(); ++i) {
        stages.push_back(ss.at(i).stage());
        listed += stages.back().size();
        if (listed > kMaxExplicitElements) ss.at(i).fail("more than 10^6 listed elements");
      }
      std::optional<Ground> g;
      if (n.has("ground")) g = Ground::finite(n.at("ground").stage());
      m.discrete = explicit_evolution(std::move(stages), g);
    }
  } else if (k == "sliding-window") {
    const double w = n.at("width").number(), s = n.at("step").number();
    const bool sym = n.has("symmetric") && n.at("symmetric").boolean();
    m.real = located(n, [&] { return sym ? symmetric_window_evolution(w, s) : sliding_window_evolution(w, s); });
  } else if (k == "shell") {
    m.real = shell_evolution(require_discrete(n.at("index")));
  } else if (k == "scalar-pullback") {
    auto probe = parse_probe(n.at("probe"));
    auto base = require_real(n.at("base"));
    m.pullback = located(n, [&] { return ScalarPullbackEvolution(std::move(probe), std::move(base)); });
  } else if (k == "span") {
    m.span = SpanEvolution(require_discrete(n.at("index")));
  } else if (k == "genealogy") {
    const auto es = n.at("elements");
    std::vector<std::pair<ElementId, Sex>> people;
    for (std::size_t i = 0; i < es.size(); ++i) {
      const auto e = es.at(i);
      const auto sex = e.at("sex").string();
      if (sex != "M" && sex != "F") e.at("sex").fail("sex must be \"M\" or \"F\"");
      people.emplace_back(e.at("id").element(), sex == "M" ? Sex::Male : Sex::Female);
    }
    const auto pairs = [](const Node& list) {
      std::vector<std::pair<ElementId, ElementId>> out;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto p = list.at(i);
        if (p.size() != 2) p.fail("expected a pair");
        out.emplace_back(p.at(0).element(), p.at(1).element());
      }
      return out;
    };
    const auto marriages = n.has("marriages") ? pairs(n.at("marriages")) : decltype(pairs(n)){};
    const auto repro = n.has("reproduction") ? pairs(n.at("reproduction")) : decltype(pairs(n)){};
    GenealogySpec spec{located(n, [&] { return GenealogyModel(people, marriages, repro); }), std::nullopt, std::nullopt};
    if (n.has("founders")) {
      const auto f = n.at("founders");
      spec.m1 = f.at("M").stage();
      spec.f1 = f.at("F").stage();
    }
    m.genealogy = std::move(spec);
  } else if (k == "prime-genealogy") {
    const auto bound = n.at("bound").integer_in(4, 10'000'000);
    m.genealogy = GenealogySpec{GenealogyModel::prime_model(bound), std::nullopt, std::nullopt};
  } else if (k == "atom-augmented") {
    auto base = require_discrete(n.at("base"));
    const auto atoms = n.at("atoms");
    const auto a = atoms.at("a").integer_in(2, 1 << 20);
    const auto b = atoms.at("b").integer();
    if (a + b < 0) atoms.fail("atoms must be natural numbers (a + b >= 0)");
    const auto vh = n.has("verify_horizon") ? static_cast<std::size_t>(n.at("verify_horizon").integer_in(1, 1 << 16)) : 64;
    if (!n.has("measure")) n.fail("atom-augmented models need a measure block");
    parse_measure(n.at("measure"), m);
    if (!m.measure) n.at("measure").fail("atom-augmented models need a discrete measure");
    const auto is_atom = [a, b](std::int64_t x) { return x - b >= a && (x - b) % a == 0; };
    m.discrete = located(n, [&] {
      return atom_augmented_evolution(base, arithmetic_atoms(a, b), complement_enumeration(is_atom), *m.measure, vh);
    });
  } else if (k == "lebesgue-convergent") {
    ConvergentSpec c;
    c.phi_text = n.at("phi").string();
    c.phi = located(n.at("phi"), [&] { return parse_integrand(c.phi_text); });
    if (n.has("tol")) c.tol = n.at("tol").number();
    if (!(c.tol > 0.0)) n.at("tol").fail("tol must be positive");
    if (n.has("horizon")) c.horizon = static_cast<std::size_t>(n.at("horizon").integer_in(3, 1 << 20));
    m.convergent = std::move(c);
  } else {
    throw UnknownKind(k);
  }

  if (n.has("measure") && k != "atom-augmented") parse_measure(n.at("measure"), m);
  if (n.has("integrand")) {
    const auto in = n.at("integrand");
    m.integrand_text = in.at("phi").string();
    auto phi = located(in.at("phi"), [&] { return parse_integrand(m.integrand_text); });
    std::optional<double> bound;
    if (in.has("bound")) {
      bound = in.at("bound").number();
      if (!(*bound > 0.0)) in.at("bound").fail("bound must be positive");
    }
    m.integrand = StageIntegrand::fixed(std::move(phi), bound);
  }
  return m;
}

}  // namespace detail

// Built-in models addressable by name instead of a path.
inline std::optional<Json> builtin_model(const std::string& name) {
  if (name == "example-square") return Json{{"kind", "example-square"}, {"measure", {{"type", "geometric"}, {"start", 0}}}};
  if (name == "geom-pair")
    return Json{{"kind", "int-window"}, {"width", 2}, {"step", 1}, {"offset", 0}, {"measure", {{"type", "geometric"}}}};
  if (name == "quad-window") return Json{{"kind", "int-window"}, {"width", 4}, {"step", 1}, {"offset", 1}};
  if (name == "prime-genealogy") return Json{{"kind", "prime-genealogy"}, {"bound", 100}};
  if (name == "toy-genealogy") {
    const auto pairs = [](std::initializer_list<std::pair<const char*, const char*>> ps) {
      Json out = Json::array();
      for (const auto& [a, b] : ps) out.push_back(Json::array({a, b}));
      return out;
    };
    Json people = Json::array();
    for (const char* id : {"m1", "m2", "m3"}) people.push_back({{"id", id}, {"sex", "M"}});
    for (const char* id : {"f1", "f2", "f3"}) people.push_back({{"id", id}, {"sex", "F"}});
    return Json{{"kind", "genealogy"},
                {"elements", people},
                {"marriages", pairs({{"m1", "f1"}, {"m2", "f2"}, {"m3", "f3"}})},
                {"reproduction", pairs({{"m2", "f1"}, {"f2", "f1"}, {"m3", "f2"}, {"f3", "f2"}})},
                {"founders", {{"M", Json::array({"m1"})}, {"F", Json::array({"f1"})}}}};
  }
  return std::nullopt;
}

inline ModelFile parse_model_json(const Json& j) { return detail::parse_node(detail::Node(j, "")); }

inline ModelFile parse_model_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_model_json(j);
}

// Path to a JSON file, or the name of a built-in model.
inline ModelFile parse_model(const std::string& path_or_name) {
  if (auto b = builtin_model(path_or_name)) return parse_model_json(*b);
  std::ifstream in(path_or_name, std::ios::binary);
  if (!in) throw SchemaError("", "cannot open model file '" + path_or_name + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_text(ss.str());
}

}  // namespace evoset::io
