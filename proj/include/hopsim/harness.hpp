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

#ifndef HOPSIM_HARNESS_HPP_
#define HOPSIM_HARNESS_HPP_

#include <string>
#include <vector>

#include "hopsim/config.hpp"
#include "hopsim/material.hpp"
#include "hopsim/metrics.hpp"
#include "hopsim/simulation.hpp"
#include "hopsim/stability.hpp"

namespace hopsim {

enum class PlanKind {
  MonoMaterial,      // catalog materials x behaviors, compared against md
  DensitySweep,      // density varies at fixed modulus
  ModulusSweep,      // modulus varies at fixed density
  Gradient,          // segment-graded legs plus mono references, vs ss
  StabilityHeatmap,  // max stable dt over the density x modulus grid
};

// Integration step selection for a plan. Automatic measures each leg's max
// stable dt with the standardized trial and runs at a configured fraction
// of it; fixed uses one step for every run.
struct DtPolicy {
  bool automatic = true;
  double fixed_dt_s = 0.0;  // used only when automatic is false
};

// One experiment arm: a leg described by its segment materials. A single
// entry means a uniform leg (replicated to the configured segment count);
// multiple entries map one-to-one onto segments, hip to foot.
struct LegDesign {
  std::string label;
  std::vector<MaterialSpec> materials;
};

struct ExperimentPlan {
  PlanKind kind = PlanKind::MonoMaterial;
  std::vector<LegDesign> designs;      // empty for StabilityHeatmap
  std::vector<std::string> behaviors;  // behavior names, presentation order
  DtPolicy dt;
  std::string out_dir;
  std::string fingerprint;  // config_fingerprint of the resolved config
};

// Outcome of one (design, behavior) run. Completed runs have a trace and a
// metrics file on disk; failed runs keep their fault reason and whatever
// trace was recorded before the fault.
struct RunRecord {
  std::string design;
  std::string behavior;
  std::string dir;           // run directory, relative to the plan out_dir
  std::string trace_path;    // relative to the plan out_dir
  std::string metrics_path;  // relative to the plan out_dir; empty on fault
  double dt_s = 0.0;
  double wall_ms = 0.0;
  bool completed = false;
  std::string fault;          // empty when completed
  MetricsReport metrics;      // populated for completed runs
};

struct SuiteResult {
  ExperimentPlan plan;
  std::vector<RunRecord> records;  // design-major, behavior-minor order
  int failures = 0;
};

/// Uniform leg for a one-entry design, segment-per-material otherwise.
SegmentedLeg design_leg(const Config& config, const LegDesign& design);

// ----------------------------- plan builders -----------------------------

/// Mono-material plan over catalog names. Every name must resolve in the
/// catalog (std::invalid_argument otherwise).
ExperimentPlan mono_plan(const Config& config,
                         const std::vector<std::string>& materials,
                         const std::vector<std::string>& behaviors,
                         const DtPolicy& dt, const std::string& out_dir);

/// One uniform design per configured density at the fixed sweep modulus.
/// Values must lie inside the union of the Ashby class rectangles.
ExperimentPlan density_sweep_plan(const Config& config,
                                  const std::string& behavior,
                                  const DtPolicy& dt,
                                  const std::string& out_dir);

/// One uniform design per configured modulus at the fixed sweep density.
ExperimentPlan modulus_sweep_plan(const Config& config,
                                  const std::string& behavior,
                                  const DtPolicy& dt,
                                  const std::string& out_dir);

/// The four graded designs (rho-inc, rho-dec, pvc-ti-ss, ss-ti-pvc) plus
/// mono ss and md reference arms.
ExperimentPlan gradient_plan(const Config& config,
                             const std::vector<std::string>& behaviors,
                             const DtPolicy& dt, const std::string& out_dir);

/// Heatmap plan; designs and behaviors stay empty.
ExperimentPlan heatmap_plan(const Config& config, const std::string& out_dir);

// ------------------------------- execution -------------------------------

/// Runs every (design, behavior) pair of a non-heatmap plan concurrently up
/// to config.harness.workers, writing out_dir/runs/<design>_<behavior>/
/// {trace.csv, metrics.csv} and out_dir/manifest.json. Per-run faults are
/// recorded and counted; the suite always finishes.
SuiteResult run_suite(const Config& config, const ExperimentPlan& plan);

/// Runs (or resumes) the stability grid, checkpointing out_dir/grid.csv as
/// cells complete and writing axis metadata to out_dir/grid_meta.json.
/// Finite cells of a pre-existing grid.csv on matching axes are reused.
StabilityGrid run_heatmap(const Config& config, const ExperimentPlan& plan);

/// Reloads a suite from out_dir/manifest.json and the metrics files it
/// references, e.g. to regenerate reports without re-simulating. Throws
/// std::runtime_error when the manifest or a referenced file is missing.
SuiteResult load_suite(const std::string& out_dir);

/// Writes the plan's derived tables next to its runs:
///  - MonoMaterial: comparison.csv, one row per non-baseline design and
///    behavior, Mann-Whitney per metric against md, starred at p < 0.05.
///  - Density/ModulusSweep: trend.csv, one row per design sorted by the
///    swept property.
///  - Gradient: comparison.csv against mono ss, plus the rho-inc/rho-dec
///    and pvc-ti-ss/ss-ti-pvc pairings.
/// Rows cover completed runs only.
void write_suite_reports(const Config& config, const SuiteResult& suite);

}  // namespace hopsim

#endif  // HOPSIM_HARNESS_HPP_
