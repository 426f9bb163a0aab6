// Copyright 2026 The hopsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hopsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "hopsim/behavior.hpp"
#include "hopsim/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hopsim {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string kind_name(PlanKind kind) {
  switch (kind) {
    case PlanKind::MonoMaterial: return "mono";
    case PlanKind::DensitySweep: return "sweep-density";
    case PlanKind::ModulusSweep: return "sweep-modulus";
    case PlanKind::Gradient: return "gradient";
    case PlanKind::StabilityHeatmap: return "heatmap";
  }
  throw std::logic_error("kind_name: unhandled kind");
}

PlanKind kind_from_name(const std::string& name) {
  if (name == "mono") return PlanKind::MonoMaterial;
  if (name == "sweep-density") return PlanKind::DensitySweep;
  if (name == "sweep-modulus") return PlanKind::ModulusSweep;
  if (name == "gradient") return PlanKind::Gradient;
  if (name == "heatmap") return PlanKind::StabilityHeatmap;
  throw std::runtime_error("manifest names unknown plan kind: " + name);
}

// Bounding box of the two Ashby class rectangles.
struct UnionBounds {
  double density_min, density_max, modulus_min, modulus_max;
};

UnionBounds ashby_union(const Config& config) {
  const AshbyBounds& mc = config.catalog.bounds(AshbyClass::MetalCeramic);
  const AshbyBounds& pn = config.catalog.bounds(AshbyClass::PolymerNatural);
  return {std::min(mc.density_min_kg_m3, pn.density_min_kg_m3),
          std::max(mc.density_max_kg_m3, pn.density_max_kg_m3),
          std::min(mc.modulus_min_pa, pn.modulus_min_pa),
          std::max(mc.modulus_max_pa, pn.modulus_max_pa)};
}

void require_inside_union(const Config& config, double density_kg_m3,
                          double modulus_pa, const std::string& what) {
  const UnionBounds u = ashby_union(config);
  if (density_kg_m3 < u.density_min || density_kg_m3 > u.density_max ||
      modulus_pa < u.modulus_min || modulus_pa > u.modulus_max) {
    throw std::invalid_argument(what + " lies outside the material chart (" +
                                fmt_compact(density_kg_m3) + " kg/m^3, " +
                                fmt_compact(modulus_pa) + " Pa)");
  }
}

MaterialSpec synthetic_material(const Config& config, const std::string& name,
                                double density_kg_m3, double modulus_pa) {
  MaterialSpec m;
  m.name = name;
  m.density_kg_m3 = density_kg_m3;
  m.modulus_pa = modulus_pa;
  m.ashby = config.catalog.bounds(AshbyClass::PolymerNatural)
                    .contains(density_kg_m3, modulus_pa)
                ? AshbyClass::PolymerNatural
                : AshbyClass::MetalCeramic;
  return m;
}

void validate_behaviors(const Config& config,
                        const std::vector<std::string>& behaviors) {
  if (behaviors.empty()) {
    throw std::invalid_argument("plan needs at least one behavior");
  }
  for (const std::string& name : behaviors) {
    (void)make_behavior(name, config);  // throws on unknown names
  }
}

ExperimentPlan base_plan(const Config& config, PlanKind kind,
                         const DtPolicy& dt, const std::string& out_dir) {
  ExperimentPlan plan;
  plan.kind = kind;
  plan.dt = dt;
  plan.out_dir = out_dir;
  plan.fingerprint = config_fingerprint(config);
  if (!dt.automatic && !(dt.fixed_dt_s > 0.0)) {
    throw std::invalid_argument("fixed dt policy needs a positive step");
  }
  return plan;
}

std::string run_dir_name(const RunRecord& rec) {
  return rec.design + "_" + rec.behavior;
}

json material_to_json(const MaterialSpec& m) {
  return json{{"name", m.name},
              {"density_kg_m3", m.density_kg_m3},
              {"modulus_pa", m.modulus_pa},
              {"rigid", m.rigid}};
}

MaterialSpec material_from_json(const json& j) {
  MaterialSpec m;
  m.name = j.at("name").get<std::string>();
  m.density_kg_m3 = j.at("density_kg_m3").get<double>();
  m.modulus_pa = j.at("modulus_pa").get<double>();
  m.rigid = j.at("rigid").get<bool>();
  return m;
}

void write_manifest(const SuiteResult& suite) {
  const ExperimentPlan& plan = suite.plan;
  json designs = json::array();
  for (const LegDesign& d : plan.designs) {
    json mats = json::array();
    for (const MaterialSpec& m : d.materials) mats.push_back(material_to_json(m));
    designs.push_back(json{{"label", d.label}, {"materials", mats}});
  }
  json records = json::array();
  for (const RunRecord& r : suite.records) {
    records.push_back(json{{"design", r.design},
                           {"behavior", r.behavior},
                           {"dir", r.dir},
                           {"trace", r.trace_path},
                           {"metrics", r.metrics_path},
                           {"dt_s", r.dt_s},
                           {"wall_ms", r.wall_ms},
                           {"completed", r.completed},
                           {"fault", r.fault}});
  }
  const json doc{{"kind", kind_name(plan.kind)},
                 {"fingerprint", plan.fingerprint},
                 {"dt_policy", plan.dt.automatic ? "auto" : "fixed"},
                 {"fixed_dt_s", plan.dt.fixed_dt_s},
                 {"behaviors", plan.behaviors},
                 {"designs", designs},
                 {"records", records},
                 {"failures", suite.failures}};
  const fs::path path = fs::path(plan.out_dir) / "manifest.json";
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << doc.dump(2) << "\n";
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

struct CycleSamples {
  std::vector<double> tracking, power, jerk, hop;
};

CycleSamples cycle_samples(const MetricsReport& report) {
  CycleSamples s;
  for (const HopCycleMetrics& c : report.cycles) {
    s.tracking.push_back(c.tracking_error_m);
    s.power.push_back(c.power_w);
    s.jerk.push_back(c.jerk_m_s3);
    s.hop.push_back(c.hop_height_m);
  }
  return s;
}

const RunRecord* find_completed(const SuiteResult& suite,
                                const std::string& design,
                                const std::string& behavior) {
  for (const RunRecord& r : suite.records) {
    if (r.design == design && r.behavior == behavior && r.completed) {
      return &r;
    }
  }
  return nullptr;
}

constexpr char kComparisonHeader[] =
    "design,baseline,behavior,n,n_base,"
    "track_mean,track_base_mean,track_u,track_p,track_star,"
    "power_mean,power_base_mean,power_u,power_p,power_star,"
    "jerk_mean,jerk_base_mean,jerk_u,jerk_p,jerk_star,"
    "hop_mean,hop_base_mean,hop_u,hop_p,hop_star";

void append_comparison_row(std::ofstream& out, const RunRecord& run,
                           const RunRecord& base) {
  const CycleSamples a = cycle_samples(run.metrics);
  const CycleSamples b = cycle_samples(base.metrics);
  out << run.design << "," << base.design << "," << run.behavior << ","
      << a.tracking.size() << "," << b.tracking.size();
  auto block = [&](const std::vector<double>& xs, const std::vector<double>& ys,
                   double mean_x, double mean_y) {
    const RankTestResult t = mann_whitney_u(xs, ys);
    out << "," << fmt17(mean_x) << "," << fmt17(mean_y) << "," << fmt17(t.u1)
        << "," << fmt17(t.p_two_sided) << ","
        << (t.p_two_sided < 0.05 ? "*" : "");
  };
  block(a.tracking, b.tracking, run.metrics.tracking_error.mean,
        base.metrics.tracking_error.mean);
  block(a.power, b.power, run.metrics.power.mean, base.metrics.power.mean);
  block(a.jerk, b.jerk, run.metrics.jerk.mean, base.metrics.jerk.mean);
  block(a.hop, b.hop, run.metrics.hop_height.mean,
        base.metrics.hop_height.mean);
  out << "\n";
}

void write_comparison_csv(const SuiteResult& suite,
                          const std::string& baseline,
                          const std::vector<std::pair<std::string, std::string>>&
                              extra_pairs) {
  const fs::path path = fs::path(suite.plan.out_dir) / "comparison.csv";
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << kComparisonHeader << "\n";
  for (const LegDesign& d : suite.plan.designs) {
    if (d.label == baseline) continue;
    for (const std::string& behavior : suite.plan.behaviors) {
      const RunRecord* run = find_completed(suite, d.label, behavior);
      const RunRecord* base = find_completed(suite, baseline, behavior);
      if (run != nullptr && base != nullptr) {
        append_comparison_row(out, *run, *base);
      }
    }
  }
  for (const auto& [lhs, rhs] : extra_pairs) {
    for (const std::string& behavior : suite.plan.behaviors) {
      const RunRecord* run = find_completed(suite, lhs, behavior);
      const RunRecord* base = find_completed(suite, rhs, behavior);
      if (run != nullptr && base != nullptr) {
        append_comparison_row(out, *run, *base);
      }
    }
  }
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

void write_trend_csv(const SuiteResult& suite) {
  // One row per design; the axis of interest is whichever property the
  // plan swept, but both are recorded.
  std::vector<std::size_t> order(suite.plan.designs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const bool by_density = suite.plan.kind == PlanKind::DensitySweep;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    const MaterialSpec& a = suite.plan.designs[l].materials.at(0);
    const MaterialSpec& b = suite.plan.designs[r].materials.at(0);
    return by_density ? a.density_kg_m3 < b.density_kg_m3
                      : a.modulus_pa < b.modulus_pa;
  });
  const fs::path path = fs::path(suite.plan.out_dir) / "trend.csv";
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "design,density_kg_m3,modulus_pa,behavior,cycles,hop_mean,"
         "track_mean,track_median,power_mean,jerk_mean\n";
  for (const std::size_t i : order) {
    const LegDesign& d = suite.plan.designs[i];
    const MaterialSpec& m = d.materials.at(0);
    for (const std::string& behavior : suite.plan.behaviors) {
      const RunRecord* run = find_completed(suite, d.label, behavior);
      if (run == nullptr) continue;
      const MetricsReport& rep = run->metrics;
      out << d.label << "," << fmt17(m.density_kg_m3) << ","
          << fmt17(m.modulus_pa) << "," << behavior << ","
          << rep.cycles.size() << "," << fmt17(rep.hop_height.mean) << ","
          << fmt17(rep.tracking_error.mean) << ","
          << fmt17(rep.tracking_error.median) << ","
          << fmt17(rep.power.mean) << "," << fmt17(rep.jerk.mean) << "\n";
    }
  }
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

}  // namespace

SegmentedLeg design_leg(const Config& config, const LegDesign& design) {
  if (design.materials.empty()) {
    throw std::invalid_argument("design " + design.label + " has no materials");
  }
  if (design.materials.size() == 1) {
    return mono_leg(config, design.materials.front());
  }
  return gradient_leg(config, design.materials);
}

ExperimentPlan mono_plan(const Config& config,
                         const std::vector<std::string>& materials,
                         const std::vector<std::string>& behaviors,
                         const DtPolicy& dt, const std::string& out_dir) {
  ExperimentPlan plan = base_plan(config, PlanKind::MonoMaterial, dt, out_dir);
  if (materials.empty()) {
    throw std::invalid_argument("mono plan needs at least one material");
  }
  for (const std::string& name : materials) {
    if (!config.catalog.contains(name)) {
      throw std::invalid_argument("material not in catalog: " + name);
    }
    plan.designs.push_back({name, {config.catalog.at(name)}});
  }
  validate_behaviors(config, behaviors);
  plan.behaviors = behaviors;
  return plan;
}

ExperimentPlan density_sweep_plan(const Config& config,
                                  const std::string& behavior,
                                  const DtPolicy& dt,
                                  const std::string& out_dir) {
  ExperimentPlan plan = base_plan(config, PlanKind::DensitySweep, dt, out_dir);
  if (config.sweep.density_values_kg_m3.empty()) {
    throw std::invalid_argument("density sweep has no values");
  }
  for (const double rho : config.sweep.density_values_kg_m3) {
    require_inside_union(config, rho, config.sweep.density_sweep_modulus_pa,
                         "density sweep value");
    const std::string label = "rho" + fmt_compact(rho);
    plan.designs.push_back(
        {label, {synthetic_material(config, label, rho,
                                    config.sweep.density_sweep_modulus_pa)}});
  }
  validate_behaviors(config, {behavior});
  plan.behaviors = {behavior};
  return plan;
}

ExperimentPlan modulus_sweep_plan(const Config& config,
                                  const std::string& behavior,
                                  const DtPolicy& dt,
                                  const std::string& out_dir) {
  ExperimentPlan plan = base_plan(config, PlanKind::ModulusSweep, dt, out_dir);
  if (config.sweep.modulus_values_pa.empty()) {
    throw std::invalid_argument("modulus sweep has no values");
  }
  for (const double e : config.sweep.modulus_values_pa) {
    require_inside_union(config, config.sweep.modulus_sweep_density_kg_m3, e,
                         "modulus sweep value");
    const std::string label = "e" + fmt_compact(e / 1.0e9) + "gpa";
    plan.designs.push_back(
        {label, {synthetic_material(config, label,
                                    config.sweep.modulus_sweep_density_kg_m3,
                                    e)}});
  }
  validate_behaviors(config, {behavior});
  plan.behaviors = {behavior};
  return plan;
}

ExperimentPlan gradient_plan(const Config& config,
                             const std::vector<std::string>& behaviors,
                             const DtPolicy& dt, const std::string& out_dir) {
  ExperimentPlan plan = base_plan(config, PlanKind::Gradient, dt, out_dir);
  const std::vector<double>& rhos = config.sweep.gradient_densities_kg_m3;
  if (rhos.size() < 2) {
    throw std::invalid_argument("gradient needs at least two densities");
  }
  std::vector<MaterialSpec> inc, dec;
  for (const double rho : rhos) {
    require_inside_union(config, rho, config.sweep.gradient_modulus_pa,
                         "gradient density");
    inc.push_back(synthetic_material(config, "grad" + fmt_compact(rho), rho,
                                     config.sweep.gradient_modulus_pa));
  }
  dec.assign(inc.rbegin(), inc.rend());
  for (const char* name : {"pvc", "ti", "ss", "md"}) {
    if (!config.catalog.contains(name)) {
      throw std::invalid_argument(std::string("catalog lacks material: ") +
                                  name);
    }
  }
  const std::vector<MaterialSpec> stack{config.catalog.at("pvc"),
                                        config.catalog.at("ti"),
                                        config.catalog.at("ss")};
  const std::vector<MaterialSpec> reverse_stack{stack.rbegin(), stack.rend()};
  plan.designs.push_back({"rho-inc", inc});
  plan.designs.push_back({"rho-dec", dec});
  plan.designs.push_back({"pvc-ti-ss", stack});
  plan.designs.push_back({"ss-ti-pvc", reverse_stack});
  plan.designs.push_back({"ss", {config.catalog.at("ss")}});
  plan.designs.push_back({"md", {config.catalog.at("md")}});
  validate_behaviors(config, behaviors);
  plan.behaviors = behaviors;
  return plan;
}

ExperimentPlan heatmap_plan(const Config& config, const std::string& out_dir) {
  ExperimentPlan plan =
      base_plan(config, PlanKind::StabilityHeatmap, DtPolicy{}, out_dir);
  const StabilityConfig& sc = config.stability;
  require_inside_union(config, sc.grid_density_min_kg_m3, sc.grid_modulus_min_pa,
                       "grid corner");
  require_inside_union(config, sc.grid_density_max_kg_m3, sc.grid_modulus_max_pa,
                       "grid corner");
  return plan;
}

SuiteResult run_suite(const Config& config, const ExperimentPlan& plan) {
  if (plan.kind == PlanKind::StabilityHeatmap) {
    throw std::invalid_argument("run_suite does not execute heatmap plans");
  }
  if (plan.designs.empty() || plan.behaviors.empty()) {
    throw std::invalid_argument("plan has no runs");
  }
  fs::create_directories(fs::path(plan.out_dir) / "runs");

  SuiteResult suite;
  suite.plan = plan;

  // One leg and one timestep per design; the step never exceeds half the
  // measured stability limit under the automatic policy.
  std::vector<SegmentedLeg> legs;
  std::vector<double> design_dt(plan.designs.size(),
                                std::numeric_limits<double>::quiet_NaN());
  legs.reserve(plan.designs.size());
  for (std::size_t i = 0; i < plan.designs.size(); ++i) {
    legs.push_back(design_leg(config, plan.designs[i]));
    if (plan.dt.automatic) {
      try {
        const double dt_max =
            max_stable_dt(hopping_trial(config, legs[i]), config.stability);
        design_dt[i] =
            resolve_dt(config.sim.auto_dt_fraction * dt_max,
                       config.sim.sample_period_s)
                .dt_s;
      } catch (const AllUnstable&) {
        // NaN: every run of this design is recorded as failed below.
      }
    } else {
      design_dt[i] =
          resolve_dt(plan.dt.fixed_dt_s, config.sim.sample_period_s).dt_s;
    }
  }

  std::vector<std::size_t> design_of;
  for (std::size_t i = 0; i < plan.designs.size(); ++i) {
    for (const std::string& behavior : plan.behaviors) {
      RunRecord rec;
      rec.design = plan.designs[i].label;
      rec.behavior = behavior;
      rec.dir = (fs::path("runs") / run_dir_name(rec)).string();
      rec.trace_path = (fs::path(rec.dir) / "trace.csv").string();
      rec.dt_s = design_dt[i];
      suite.records.push_back(rec);
      design_of.push_back(i);
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= suite.records.size()) return;
      RunRecord& rec = suite.records[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        if (!std::isfinite(rec.dt_s)) {
          throw AllUnstable("no stable timestep found for " + rec.design);
        }
        const BehaviorSpec behavior = make_behavior(rec.behavior, config);
        const RunResult result = run_simulation(
            config, legs[design_of[i]], behavior, rec.dt_s);
        fs::create_directories(fs::path(plan.out_dir) / rec.dir);
        write_trace_csv((fs::path(plan.out_dir) / rec.trace_path).string(),
                        result.trace);
        if (result.unstable) {
          rec.fault = result.fault;
        } else {
          MetricsReport report = compute_metrics(
              result.trace, behavior, behavior.cutoff_s,
              config.controller.min_stance_s, config.controller.min_flight_s);
          report.fingerprint = plan.fingerprint;
          rec.metrics_path = (fs::path(rec.dir) / "metrics.csv").string();
          write_metrics_csv(
              (fs::path(plan.out_dir) / rec.metrics_path).string(), report);
          rec.metrics = std::move(report);
          rec.completed = true;
        }
      } catch (const std::exception& e) {
        rec.fault = e.what();
      }
      rec.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    }
  };
  const int n_workers = std::max(1, config.harness.workers);
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const RunRecord& r : suite.records) {
    if (!r.completed) ++suite.failures;
  }
  write_manifest(suite);
  return suite;
}

StabilityGrid run_heatmap(const Config& config, const ExperimentPlan& plan) {
  if (plan.kind != PlanKind::StabilityHeatmap) {
    throw std::invalid_argument("run_heatmap needs a heatmap plan");
  }
  fs::create_directories(plan.out_dir);
  const fs::path csv_path = fs::path(plan.out_dir) / "grid.csv";

  StabilityGrid seed;
  bool have_seed = false;
  if (fs::exists(csv_path)) {
    try {
      seed = read_grid_csv(csv_path.string());
      have_seed = true;
    } catch (const std::exception&) {
      // Unreadable checkpoint: recompute everything.
    }
  }

  auto checkpoint = [&](const StabilityGrid& grid, int completed) {
    if (completed % 20 != 0) return;
    const fs::path tmp = csv_path.string() + ".tmp";
    write_grid_csv(tmp.string(), grid);
    fs::rename(tmp, csv_path);
  };
  const StabilityGrid grid =
      sweep_grid(config, config.harness.workers,
                 have_seed ? &seed : nullptr, checkpoint);
  write_grid_csv(csv_path.string(), grid);

  json meta{{"fingerprint", plan.fingerprint},
            {"rows", grid.rows()},
            {"cols", grid.cols()},
            {"density_kg_m3", grid.density_kg_m3},
            {"modulus_pa", grid.modulus_pa}};
  try {
    const LogLogFit fit = fit_grid(grid);
    meta["fit"] = json{{"intercept", fit.intercept},
                       {"density_slope", fit.density_slope},
                       {"modulus_slope", fit.modulus_slope},
                       {"r_squared", fit.r_squared},
                       {"cells_used", fit.cells_used}};
  } catch (const std::exception& e) {
    meta["fit"] = nullptr;
    meta["fit_error"] = e.what();
  }
  const fs::path meta_path = fs::path(plan.out_dir) / "grid_meta.json";
  std::ofstream out(meta_path);
  if (!out) {
    throw std::runtime_error("cannot open " + meta_path.string() +
                             " for writing");
  }
  out << meta.dump(2) << "\n";
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + meta_path.string());
  }
  return grid;
}

SuiteResult load_suite(const std::string& out_dir) {
  const fs::path path = fs::path(out_dir) / "manifest.json";
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed manifest " + path.string() + ": " +
                             e.what());
  }
  SuiteResult suite;
  suite.plan.kind = kind_from_name(doc.at("kind").get<std::string>());
  suite.plan.out_dir = out_dir;
  suite.plan.fingerprint = doc.at("fingerprint").get<std::string>();
  suite.plan.dt.automatic = doc.at("dt_policy").get<std::string>() == "auto";
  suite.plan.dt.fixed_dt_s = doc.at("fixed_dt_s").get<double>();
  suite.plan.behaviors =
      doc.at("behaviors").get<std::vector<std::string>>();
  for (const json& jd : doc.at("designs")) {
    LegDesign d;
    d.label = jd.at("label").get<std::string>();
    for (const json& jm : jd.at("materials")) {
      d.materials.push_back(material_from_json(jm));
    }
    suite.plan.designs.push_back(std::move(d));
  }
  for (const json& jr : doc.at("records")) {
    RunRecord rec;
    rec.design = jr.at("design").get<std::string>();
    rec.behavior = jr.at("behavior").get<std::string>();
    rec.dir = jr.at("dir").get<std::string>();
    rec.trace_path = jr.at("trace").get<std::string>();
    rec.metrics_path = jr.at("metrics").get<std::string>();
    rec.dt_s = jr.at("dt_s").get<double>();
    rec.wall_ms = jr.at("wall_ms").get<double>();
    rec.completed = jr.at("completed").get<bool>();
    rec.fault = jr.at("fault").get<std::string>();
    if (rec.completed) {
      rec.metrics = read_metrics_csv(
          (fs::path(out_dir) / rec.metrics_path).string());
    } else {
      ++suite.failures;
    }
    suite.records.push_back(std::move(rec));
  }
  return suite;
}

void write_suite_reports(const Config& config, const SuiteResult& suite) {
  (void)config;
  switch (suite.plan.kind) {
    case PlanKind::MonoMaterial:
      write_comparison_csv(suite, "md", {});
      return;
    case PlanKind::DensitySweep:
    case PlanKind::ModulusSweep:
      write_trend_csv(suite);
      return;
    case PlanKind::Gradient:
      write_comparison_csv(suite, "ss",
                           {{"rho-inc", "rho-dec"},
                            {"pvc-ti-ss", "ss-ti-pvc"}});
      return;
    case PlanKind::StabilityHeatmap:
      return;  // grid.csv and its sidecar are the report
  }
}

}  // namespace hopsim
