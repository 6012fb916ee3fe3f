#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "evoset/axioms.hpp"
#include "evoset/genealogy/ancestry.hpp"
#include "evoset/intervals/real_evolution.hpp"
#include "evoset/measure/convergent.hpp"
#include "evoset/measure/measure.hpp"
#include "evoset/reducibility.hpp"

namespace evoset::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const ElementId& e) {
  if (e.is_integer()) return e.as_integer();
  return e.as_string();
}

inline Json to_json(const Stage& s) {
  Json a = Json::array();
  for (const auto& e : s) a.push_back(to_json(e));
  return a;
}

inline Json to_json(const IntervalSet& s) {
  Json a = Json::array();
  for (const auto& p : s.parts()) a.push_back(Json::array({p.lo, p.hi}));
  return a;
}

inline ElementId element_from_json(const Json& j) {
  if (j.is_number_integer()) return ElementId(j.get<std::int64_t>());
  return ElementId(j.get<std::string>());
}

inline Stage stage_from_json(const Json& j) {
  std::vector<ElementId> xs;
  for (const auto& e : j) xs.push_back(element_from_json(e));
  return Stage(std::move(xs));
}

// Caps long witness lists so reports stay readable.
inline constexpr std::size_t kMaxListed = 32;

inline Json to_json(const AxiomReport& r, const std::vector<Interval>* cells = nullptr) {
  Json j;
  j["horizon"] = r.horizon;
  Json verdicts, decided;
  for (int c = 1; c <= 4; ++c) {
    verdicts[std::to_string(c)] = std::string(to_string(r.verdict(c)));
    decided[std::to_string(c)] = std::string(to_string(r.decided(c)));
  }
  j["verdicts"] = verdicts;
  j["decided"] = decided;
  j["fail_count"] = r.fail_count();
  j["unknown_count"] = r.unknown_count();

  std::size_t pass = 0, unknown = 0;
  for (const auto& e : r.elements) (e.disappearance == Verdict::Pass ? pass : unknown)++;
  j["elements"] = {{"observed", r.elements.size()}, {"disappearance_pass", pass}, {"disappearance_unknown", unknown}};

  const auto element_json = [&](const ElementId& e) -> Json {
    if (cells && e.is_integer()) {
      const auto& c = (*cells)[static_cast<std::size_t>(e.as_integer())];
      return Json::array({c.lo, c.hi});
    }
    return to_json(e);
  };
  const auto stage_json = [&](const Stage& s) {
    if (!cells) return to_json(s);
    Json a = Json::array();
    for (const auto& e : s) a.push_back(element_json(e));
    return a;
  };

  Json vs = Json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < kMaxListed; ++i) {
    const auto& v = r.violations[i];
    Json jv{{"condition", v.condition}, {"index", v.index}, {"what", v.what}};
    if (v.element) jv["element"] = element_json(*v.element);
    Json w = Json::array();
    for (const auto& s : v.witness) w.push_back(stage_json(s));
    jv["witness"] = w;
    vs.push_back(jv);
  }
  j["violations"] = vs;

  Json cov{{"verdict", std::string(to_string(r.coverage))}, {"note", r.coverage_note}};
  Json unseen = Json::array();
  for (std::size_t i = 0; i < r.unseen.size() && i < kMaxListed; ++i) unseen.push_back(to_json(r.unseen[i]));
  cov["unseen"] = unseen;
  j["coverage"] = cov;
  return j;
}

inline Json to_json(const RealAxiomReport& r) {
  Json j = to_json(r.report, &r.cells);
  j["cells"] = r.cells.size();
  j["uncovered_measure"] = r.uncovered_measure;
  return j;
}

inline Json optional_number(const std::optional<std::int64_t>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json to_json(const DecayReport& r) {
  Json j;
  j["horizon"] = r.horizon;
  j["epsilon"] = r.epsilon;
  j["mu"] = r.mu;
  Json d = Json::array();
  for (const auto& v : r.lifespan_bound) d.push_back(optional_number(v));
  j["lifespan_bound"] = d;
  j["decays"] = r.decays();
  j["threshold_index"] = r.threshold_index ? Json(*r.threshold_index) : Json(nullptr);
  Json pv = Json::array();
  for (const auto& e : r.premise_violations) pv.push_back(to_json(e));
  j["premise_violations"] = pv;
  j["tail_below_head"] = r.tail_below_head;
  j["disjoint_tail"] = std::string(to_string(r.disjoint_tail));
  if (r.disjoint_tail_witness)
    j["disjoint_tail_witness"] = Json::array({r.disjoint_tail_witness->first, r.disjoint_tail_witness->second});
  return j;
}

inline Json to_json(const IntegralTrace& t) {
  Json j;
  j["integral"] = t.integral;
  j["bound"] = t.bound ? Json(*t.bound) : Json(nullptr);
  j["bound_violations"] = t.bound_violations;
  j["sampled_bound_violations"] = t.sampled_bound_violations;
  j["persistent_mass"] = t.persistent_mass;
  j["needs_unbounded"] = t.needs_unbounded;
  return j;
}

inline Json to_json(const ReduceResult& r) {
  Json j;
  j["verdict"] = r.verdict == ReduceVerdict::Reducible ? "REDUCIBLE" : "NOT-FOUND-WITHIN-BOUNDS";
  j["indices"] = r.indices;
  j["stride"] = r.stride;
  j["candidates_tried"] = r.candidates_tried;
  j["exhaustive"] = r.exhaustive;
  j["ground"] = "union of subsequence stages";
  return j;
}

inline Json to_json(const GenerationTrace& t) {
  Json gens = Json::array();
  for (const auto& g : t.generations) gens.push_back({{"M", to_json(g.males)}, {"F", to_json(g.females)}});
  Json links = Json::array();
  for (const auto& l : t.links)
    links.push_back({{"male", to_json(l.parents.male)}, {"female", to_json(l.parents.female)}, {"child", to_json(l.child)}});
  return Json{{"generations", gens}, {"links", links}, {"stage0", to_json(t.stage0)}};
}

inline GenerationTrace trace_from_json(const Json& j) {
  GenerationTrace t;
  for (const auto& g : j.at("generations")) t.generations.push_back({stage_from_json(g.at("M")), stage_from_json(g.at("F"))});
  if (j.contains("links"))
    for (const auto& l : j.at("links"))
      t.links.push_back({{element_from_json(l.at("male")), element_from_json(l.at("female"))}, element_from_json(l.at("child"))});
  if (j.contains("stage0")) t.stage0 = stage_from_json(j.at("stage0"));
  return t;
}

inline Json to_json(const AncestryReport& r) {
  Json cyc = Json::array();
  for (const auto& e : r.cycle) cyc.push_back(to_json(e));
  return Json{{"disjoint_generations", std::string(to_string(r.disjoint_generations))},
              {"disjoint_children", std::string(to_string(r.disjoint_children))},
              {"acyclic", std::string(to_string(r.acyclic))},
              {"findings", r.findings},
              {"cycle", cyc}};
}

// One CSV row; absent fields are left blank.
struct TraceRow {
  std::size_t k = 0;
  std::optional<std::size_t> cardinality;
  std::optional<double> measure;
  std::optional<double> integral;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Header `k,cardinality,measure,integral`, LF endings, 17 significant digits.
inline std::string csv_text(const std::vector<TraceRow>& rows) {
  std::string out = "k,cardinality,measure,integral\n";
  for (const auto& r : rows) {
    out += std::to_string(r.k);
    out += ',';
    if (r.cardinality) out += std::to_string(*r.cardinality);
    out += ',';
    if (r.measure) out += format_double(*r.measure);
    out += ',';
    if (r.integral) out += format_double(*r.integral);
    out += '\n';
  }
  return out;
}

inline void emit_csv(const std::vector<TraceRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  const auto text = csv_text(rows);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for " + path);
}

}  // namespace evoset::io
