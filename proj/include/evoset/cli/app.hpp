#pragma once

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evoset/axioms.hpp"
#include "evoset/genealogy/ancestry.hpp"
#include "evoset/io/model_file.hpp"
#include "evoset/io/reports.hpp"
#include "evoset/measure/convergent.hpp"
#include "evoset/reducibility.hpp"

namespace evoset::cli {

using io::Json;

// Result of one command: exit code 0 (no FAIL), 1 (a FAIL verdict), or 2
// (invalid input), with the report text and diagnostics.
struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

namespace detail {

struct Options {
  std::string model;
  std::size_t horizon = 64;
  double epsilon = 1e-3;
  std::string csv;
  std::string phi;
  double tol = 0.05;
  std::string out;
  std::string emit_trace;
  std::string load_trace;
  bool timing = false;
};

inline Json header(const std::string& command, const std::vector<std::string>& argv, const io::ModelFile* m) {
  Json j;
  j["command"] = command;
  j["argv"] = argv;
  if (m) {
    j["kind"] = m->kind;
    j["digest"] = m->digest;
  }
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline GenerationalResult run_generations(const io::GenealogySpec& g) {
  if (g.m1 && g.f1) return generational_evolution(g.model, *g.m1, *g.f1);
  return generational_evolution(g.model);
}

inline int cmd_check(const Options& o, Json& rep) {
  const auto m = io::parse_model(o.model);
  rep.update(header("check", rep["argv"], &m));
  bool fail = false;
  if (m.discrete) {
    const auto r = check_axioms(*m.discrete, o.horizon);
    rep["axioms"] = io::to_json(r);
    fail = r.any_fail();
  } else if (m.real) {
    const auto r = check_real_axioms(*m.real, o.horizon);
    rep["axioms"] = io::to_json(r);
    fail = r.report.any_fail();
  } else if (m.pullback) {
    const auto r = m.pullback->check_axioms(o.horizon);
    rep["axioms"] = io::to_json(r);
    rep["axioms_source"] = "base evolution (pullback along a surjective probe)";
    std::size_t sound = 0, nonempty = 0;
    for (std::size_t k = 1; k <= o.horizon; ++k) {
      if (auto w = m.pullback->witness(k)) {
        ++nonempty;
        sound += m.pullback->contains(*w, k);
      }
    }
    rep["witnesses"] = {{"nonempty_stages", nonempty}, {"sound", sound}};
    fail = r.report.any_fail() || sound != nonempty;
  } else if (m.span) {
    const auto r = m.span->check_axioms(o.horizon);
    rep["axioms"] = io::to_json(r);
    rep["axioms_source"] = "index evolution (zero vector excluded from the ground)";
    fail = r.any_fail();
  } else if (m.genealogy) {
    const auto g = run_generations(*m.genealogy);
    const auto r = check_axioms(g.evolution, o.horizon);
    rep["axioms"] = io::to_json(r);
    fail = r.any_fail();
  } else if (m.convergent) {
    const auto c = construct_convergent_evolution(m.convergent->phi, m.convergent->tol, m.convergent->horizon);
    rep["axioms"] = io::to_json(c.axioms);
    fail = c.axioms.report.any_fail();
  }
  return fail ? 1 : 0;
}

inline std::vector<io::TraceRow> trace_rows(const io::ModelFile& m, std::size_t horizon) {
  std::vector<io::TraceRow> rows;
  std::optional<Evolution> discrete = m.discrete;
  if (m.genealogy) discrete = run_generations(*m.genealogy).evolution;
  for (std::size_t k = 1; k < horizon; ++k) {
    io::TraceRow row;
    row.k = k;
    if (discrete) {
      const auto& s = discrete->stage(k);
      row.cardinality = s.size();
      if (m.measure) {
        row.measure = (*m.measure)(s);
        if (m.integrand) {
          const auto phi = m.integrand->at(k);
          double total = 0.0;
          for (const auto& e : s) total += phi(static_cast<double>(e.as_integer())) * m.measure->weight(e);
          row.integral = total;
        }
      }
    } else if (m.real) {
      auto s = m.real->stage(k);
      if (m.lebesgue_carrier) s = s & *m.lebesgue_carrier;
      row.measure = s.measure();
      if (m.integrand) row.integral = m.integrand->at(k).integral(s);
    }
    rows.push_back(row);
  }
  return rows;
}

inline int cmd_trace(const Options& o, Json& rep, std::string& out) {
  const auto m = io::parse_model(o.model);
  rep.update(header("trace", rep["argv"], &m));
  const auto rows = trace_rows(m, o.horizon);
  if (o.csv.empty()) {
    out = io::csv_text(rows);
    return 0;
  }
  io::emit_csv(rows, o.csv);
  rep["rows"] = rows.size();
  rep["csv"] = o.csv;
  return 0;
}

inline int cmd_genealogy(const Options& o, Json& rep) {
  if (!o.load_trace.empty()) {
    std::ifstream in(o.load_trace);
    if (!in) throw io::SchemaError("", "cannot open trace file '" + o.load_trace + "'");
    Json j;
    try {
      j = Json::parse(in);
      const auto t = io::trace_from_json(j);
      const auto a = ancestry_check(t);
      rep["ancestry"] = io::to_json(a);
      return a.ok() ? 0 : 1;
    } catch (const nlohmann::json::exception& e) {
      throw io::SchemaError("", std::string("invalid trace file: ") + e.what());
    }
  }
  const auto m = io::parse_model(o.model);
  rep.update(header("genealogy", rep["argv"], &m));
  if (!m.genealogy) throw io::SchemaError("/kind", "genealogy command needs a genealogy or prime-genealogy model");
  const auto fs = founders(m.genealogy->model);
  rep["founders"] = {{"M", io::to_json(fs.males)}, {"F", io::to_json(fs.females)}};
  const auto g = run_generations(*m.genealogy);
  rep["trace"] = io::to_json(g.trace);
  Json stages = Json::array();
  for (std::size_t k = 1; k < o.horizon; ++k) stages.push_back(io::to_json(g.evolution.stage(k)));
  rep["stages"] = stages;
  Json pv = Json::array();
  for (const auto& v : g.placement_violations)
    pv.push_back({{"generation", v.generation},
                  {"couple", Json::array({io::to_json(v.parents.male), io::to_json(v.parents.female)})},
                  {"child", io::to_json(v.child)},
                  {"earlier_generation", v.earlier}});
  rep["placement"] = {{"verdict", std::string(to_string(g.placement()))}, {"violations", pv}};
  const auto a = ancestry_check(g.trace);
  rep["ancestry"] = io::to_json(a);
  rep["axioms"] = io::to_json(check_axioms(g.evolution, std::max<std::size_t>(3, o.horizon)));
  if (!o.emit_trace.empty()) {
    std::ofstream f(o.emit_trace, std::ios::binary | std::ios::trunc);
    f << io::to_json(g.trace).dump(2) << "\n";
  }
  return g.placement() == Verdict::Pass && a.ok() ? 0 : 1;
}

inline int cmd_measure(const Options& o, Json& rep) {
  const auto m = io::parse_model(o.model);
  rep.update(header("measure", rep["argv"], &m));
  if (m.discrete && m.measure) {
    const auto d = decay_check(*m.discrete, *m.measure, o.horizon, o.epsilon);
    rep["decay"] = io::to_json(d);
    bool bad = !d.decays();
    if (m.integrand) {
      const auto t = stage_integral(*m.discrete, *m.measure, *m.integrand, o.horizon);
      rep["integral"] = io::to_json(t);
      bad = bad || !t.bound_violations.empty();
    }
    return bad ? 1 : 0;
  }
  if (m.real && m.lebesgue_carrier) {
    const LebesgueModel lm(*m.lebesgue_carrier, *m.real);
    const auto d = decay_check(lm, o.horizon, o.epsilon);
    rep["decay"] = io::to_json(d);
    bool bad = !d.decays();
    if (m.integrand) {
      const auto t = stage_integral(lm, *m.integrand, o.horizon);
      rep["integral"] = io::to_json(t);
      bad = bad || !t.bound_violations.empty();
    }
    return bad ? 1 : 0;
  }
  throw io::SchemaError("/measure", "measure command needs a discrete model with weights or a real model with a lebesgue carrier");
}

inline Json convergent_json(const ConvergentResult& c, std::size_t horizon) {
  Json j;
  j["label"] = c.label;
  j["total_integral"] = c.total;
  j["horizon"] = horizon;
  j["threshold_index"] = c.threshold_index ? Json(*c.threshold_index) : Json(nullptr);
  j["sup_error"] = c.sup_error;
  j["max_telescoping_residual"] = c.max_telescoping_residual;
  j["cells"] = c.cells;
  j["churn_cells"] = c.churn_cells;
  j["axioms"] = io::to_json(c.axioms);
  return j;
}

inline int cmd_construct(const Options& o, Json& rep) {
  rep.update(header("construct-convergent", rep["argv"], nullptr));
  const auto phi = parse_integrand(o.phi);
  const auto c = construct_convergent_evolution(phi, o.tol, o.horizon);
  rep["result"] = convergent_json(c, o.horizon);
  if (!o.out.empty()) {
    Json stages = Json::array();
    for (const auto& s : c.stages) stages.push_back(io::to_json(s));
    Json model{{"kind", "explicit-stages"},
               {"domain", "real"},
               {"carrier", io::to_json(c.carrier)},
               {"stages", stages},
               {"measure", {{"type", "lebesgue"}, {"carrier", io::to_json(c.carrier)}}},
               {"integrand", {{"phi", phi.describe()}}}};
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + o.out);
    f << model.dump() << "\n";
    rep["out"] = o.out;
  }
  const auto& r = c.axioms.report;
  const bool ok = c.threshold_index && r.verdict(1) == Verdict::Pass && r.verdict(2) == Verdict::Pass &&
                  r.verdict(3) == Verdict::Pass && !r.any_fail();
  return ok ? 0 : 1;
}

inline int cmd_reduce(const Options& o, Json& rep) {
  const auto m = io::parse_model(o.model);
  rep.update(header("reduce", rep["argv"], &m));
  std::optional<Evolution> evo = m.discrete;
  if (m.genealogy) evo = run_generations(*m.genealogy).evolution;
  if (!evo) throw io::SchemaError("/kind", "reduce needs a discrete evolution model");
  rep["reduce"] = io::to_json(find_reducing_subsequence(*evo, o.horizon));
  return 0;
}

}  // namespace detail

inline CommandResult run_command(const std::vector<std::string>& argv) {
  CommandResult res;
  detail::Options o;
  CLI::App app{"Evolutions on sets: axiom checks, constructions and measure experiments", "evoset"};
  app.require_subcommand(1);
  app.add_flag("--timing", o.timing, "Include wall-clock timing in the report");

  auto* check = app.add_subcommand("check", "Axiom report for a model");
  check->add_option("model", o.model, "Model file or built-in name")->required();
  check->add_option("--horizon", o.horizon, "Number of stages examined")->check(CLI::Range(3, 1 << 20));

  auto* trace = app.add_subcommand("trace", "Per-stage cardinality/measure/integral as CSV");
  trace->add_option("model", o.model)->required();
  trace->add_option("--horizon", o.horizon)->check(CLI::Range(2, 1 << 20));
  trace->add_option("--csv", o.csv, "Output CSV path (stdout when omitted)");

  auto* gen = app.add_subcommand("genealogy", "Generational trace and ancestry report");
  gen->add_option("model", o.model);
  gen->add_option("--horizon", o.horizon)->check(CLI::Range(3, 1 << 20));
  gen->add_option("--emit-trace", o.emit_trace, "Write the generation trace as JSON");
  gen->add_option("--load-trace", o.load_trace, "Run the ancestry check on a trace file");

  auto* meas = app.add_subcommand("measure", "Measure decay report and integral trace");
  meas->add_option("model", o.model)->required();
  meas->add_option("--horizon", o.horizon)->check(CLI::Range(8, 1 << 20));
  meas->add_option("--epsilon", o.epsilon)->check(CLI::PositiveNumber);

  auto* cons = app.add_subcommand("construct-convergent", "Build a stage family whose integrals approach the total");
  cons->add_option("--phi", o.phi, "Integrand descriptor, e.g. pow:-0.5+const:-1")->required();
  cons->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  o.horizon = 64;
  cons->add_option("--horizon", o.horizon)->check(CLI::Range(3, 1 << 20));
  cons->add_option("--out", o.out, "Write the family as an explicit-stages model");

  auto* red = app.add_subcommand("reduce", "Bounded search for a reducing subsequence");
  red->add_option("model", o.model)->required();
  red->add_option("--horizon", o.horizon)->check(CLI::Range(3, 1 << 20));

  std::vector<const char*> cargv{"evoset"};
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    res.exit_code = app.exit(e, out, err) == 0 ? 0 : 2;
    res.out = out.str();
    res.err = err.str();
    return res;
  }
  if (gen->parsed() && o.model.empty() && o.load_trace.empty()) {
    res.exit_code = 2;
    res.err = "genealogy: a model or --load-trace is required\n";
    return res;
  }

  Json rep;
  rep["argv"] = argv;
  std::string raw;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (check->parsed()) res.exit_code = detail::cmd_check(o, rep);
    else if (trace->parsed()) res.exit_code = detail::cmd_trace(o, rep, raw);
    else if (gen->parsed()) res.exit_code = detail::cmd_genealogy(o, rep);
    else if (meas->parsed()) res.exit_code = detail::cmd_measure(o, rep);
    else if (cons->parsed()) res.exit_code = detail::cmd_construct(o, rep);
    else if (red->parsed()) res.exit_code = detail::cmd_reduce(o, rep);
  } catch (const Error& e) {
    res.exit_code = 2;
    res.err = std::string("error: ") + e.what() + "\n";
    return res;
  }
  if (!raw.empty()) {
    res.out = raw;
    return res;
  }
  if (o.timing) {
    const auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep["timing_ms"] = dt;
  }
  rep["exit_code"] = res.exit_code;
  res.out = detail::dump(rep);
  return res;
}

}  // namespace evoset::cli
