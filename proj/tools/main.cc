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

// Batch experiment driver. Every subcommand resolves one declarative plan,
// executes it deterministically, and leaves plot-ready CSV tables plus a
// manifest in the output directory. Exit codes: 0 full success, 2 when some
// runs faulted (the suite still finishes), 1 on configuration errors.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hopsim/behavior.hpp"
#include "hopsim/config.hpp"
#include "hopsim/harness.hpp"

namespace {

void print_suite(const hopsim::SuiteResult& suite) {
  for (const hopsim::RunRecord& r : suite.records) {
    if (r.completed) {
      std::printf("ok   %-12s %-9s dt=%-8g cycles=%-3zu track=%-8.3f "
                  "power=%-8.2f hop=%.4f\n",
                  r.design.c_str(), r.behavior.c_str(), r.dt_s,
                  r.metrics.cycles.size(), r.metrics.tracking_error.mean,
                  r.metrics.power.mean, r.metrics.hop_height.mean);
    } else {
      std::printf("FAIL %-12s %-9s dt=%-8g %s\n", r.design.c_str(),
                  r.behavior.c_str(), r.dt_s, r.fault.c_str());
    }
  }
  if (suite.failures > 0) {
    std::printf("%d of %zu runs failed\n", suite.failures,
                suite.records.size());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hopsim: hopping-robot experiments over leg materials.\n"
      "Outputs under --out: runs/<design>_<behavior>/{trace,metrics}.csv,\n"
      "manifest.json, and per-plan report tables."};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string dt_text = "auto";
  int workers = 0;
  double duration_s = 0.0;
  bool seedless = false;
  app.add_option("--config", config_path,
                 "JSON config overriding the built-in defaults");
  app.add_option("--out", out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--dt", dt_text,
                 "integration step in seconds, or 'auto' to run each leg at "
                 "half its measured stability limit")
      ->capture_default_str();
  app.add_option("--workers", workers, "concurrent runs (default from config)");
  app.add_option("--duration", duration_s, "simulation length in seconds");
  app.add_flag("--seedless", seedless,
               "assert that the suite consumes no randomness (always true: "
               "the pipeline is deterministic end to end)");

  std::string material = "md";
  std::string behavior_one = "static";
  CLI::App* simulate = app.add_subcommand(
      "simulate", "one material on one behavior, no comparisons");
  simulate->add_option("--material", material, "catalog material")
      ->capture_default_str();
  simulate->add_option("--behavior", behavior_one, "behavior name")
      ->capture_default_str();

  std::vector<std::string> materials;
  std::vector<std::string> behaviors;
  CLI::App* mono = app.add_subcommand(
      "mono", "mono-material suite, Mann-Whitney compared against md");
  mono->add_option("--materials", materials,
                   "catalog materials (default: whole catalog)")
      ->delimiter(',');
  mono->add_option("--behaviors", behaviors,
                   "behaviors (default: static,forward,ramp,circular)")
      ->delimiter(',');

  std::string sweep_behavior = "forward";
  CLI::App* sweep_density = app.add_subcommand(
      "sweep-density", "density sweep at the configured fixed modulus");
  sweep_density->add_option("--behavior", sweep_behavior, "behavior name")
      ->capture_default_str();
  CLI::App* sweep_modulus = app.add_subcommand(
      "sweep-modulus", "modulus sweep at the configured fixed density");
  sweep_modulus->add_option("--behavior", sweep_behavior, "behavior name")
      ->capture_default_str();

  std::vector<std::string> gradient_behaviors{"ramp"};
  CLI::App* gradient = app.add_subcommand(
      "gradient",
      "graded legs (rho-inc, rho-dec, pvc-ti-ss, ss-ti-pvc) vs mono ss");
  gradient->add_option("--behaviors", gradient_behaviors,
                       "behaviors (default: ramp)")
      ->delimiter(',');

  bool quick = false;
  CLI::App* heatmap = app.add_subcommand(
      "heatmap", "max-stable-dt grid over density x modulus (resumable)");
  heatmap->add_flag("--quick", quick, "4x4 grid instead of the full one");

  CLI::App* report = app.add_subcommand(
      "report", "rebuild report tables from an existing run directory");

  for (CLI::App* sub : app.get_subcommands(
           [](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    hopsim::Config config = config_path.empty()
                                ? hopsim::default_config()
                                : hopsim::load_config(config_path);
    if (workers > 0) config.harness.workers = workers;
    if (duration_s > 0.0) config.sim.duration_s = duration_s;

    hopsim::DtPolicy dt;
    if (dt_text != "auto") {
      dt.automatic = false;
      dt.fixed_dt_s = std::stod(dt_text);
    }

    if (report->parsed()) {
      const hopsim::SuiteResult suite = hopsim::load_suite(out_dir);
      hopsim::write_suite_reports(config, suite);
      print_suite(suite);
      return 0;
    }

    if (heatmap->parsed()) {
      if (quick) {
        config.stability.grid_rows = 4;
        config.stability.grid_cols = 4;
      }
      const hopsim::ExperimentPlan plan =
          hopsim::heatmap_plan(config, out_dir);
      const hopsim::StabilityGrid grid = hopsim::run_heatmap(config, plan);
      std::size_t finite = 0;
      for (const double v : grid.dt_max_s) {
        if (std::isfinite(v)) ++finite;
      }
      std::printf("grid %zux%zu, %zu of %zu cells stable\n", grid.rows(),
                  grid.cols(), finite, grid.dt_max_s.size());
      try {
        const hopsim::LogLogFit fit = hopsim::fit_grid(grid);
        std::printf(
            "log10(dt_max) = %.3f %+.3f*log10(rho) %+.3f*log10(E), "
            "R^2 = %.4f over %zu cells\n",
            fit.intercept, fit.density_slope, fit.modulus_slope,
            fit.r_squared, fit.cells_used);
      } catch (const std::exception& e) {
        std::printf("no trend fit: %s\n", e.what());
      }
      return 0;
    }

    hopsim::ExperimentPlan plan;
    if (simulate->parsed()) {
      plan = hopsim::mono_plan(config, {material}, {behavior_one}, dt,
                               out_dir);
    } else if (mono->parsed()) {
      if (materials.empty()) {
        for (const hopsim::MaterialSpec& m : config.catalog.entries()) {
          materials.push_back(m.name);
        }
      }
      if (behaviors.empty()) behaviors = hopsim::behavior_names();
      plan = hopsim::mono_plan(config, materials, behaviors, dt, out_dir);
    } else if (sweep_density->parsed()) {
      plan = hopsim::density_sweep_plan(config, sweep_behavior, dt, out_dir);
    } else if (sweep_modulus->parsed()) {
      plan = hopsim::modulus_sweep_plan(config, sweep_behavior, dt, out_dir);
    } else {
      plan = hopsim::gradient_plan(config, gradient_behaviors, dt, out_dir);
    }

    const hopsim::SuiteResult suite = hopsim::run_suite(config, plan);
    hopsim::write_suite_reports(config, suite);
    print_suite(suite);
    return suite.failures > 0 ? 2 : 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
