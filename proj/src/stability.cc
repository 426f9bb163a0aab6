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

#include "hopsim/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "hopsim/behavior.hpp"
#include "hopsim/simulation.hpp"

namespace hopsim {

bool StabilityProbe::anomaly() const {
  for (const auto& [dt_hi, stable_hi] : verdicts) {
    if (!stable_hi) continue;
    for (const auto& [dt_lo, stable_lo] : verdicts) {
      if (!stable_lo && dt_lo < dt_hi) return true;
    }
  }
  return false;
}

double max_stable_dt(const TrialFn& trial, const StabilityConfig& probe_config,
                     StabilityProbe* probe) {
  const double top = probe_config.ladder_top_s;
  const double bottom = probe_config.ladder_bottom_s;
  const double factor = probe_config.ladder_factor;
  if (!(top > bottom) || !(bottom > 0.0) || !(factor > 1.0)) {
    throw std::invalid_argument("max_stable_dt: malformed ladder");
  }
  StabilityProbe local;
  StabilityProbe& rec = probe ? *probe : local;
  rec.verdicts.clear();

  auto check = [&](double dt) {
    const bool stable = trial(dt);
    rec.verdicts.emplace_back(dt, stable);
    return stable;
  };

  // Ladder descent: stop at the first stable rung.
  double unstable_above = 0.0;
  double stable_at = 0.0;
  for (double dt = top; dt >= bottom * (1.0 - 1e-12); dt /= factor) {
    if (check(dt)) {
      stable_at = dt;
      break;
    }
    unstable_above = dt;
  }
  if (stable_at == 0.0) {
    throw AllUnstable("unstable at every ladder rung");
  }

  // Geometric bisection between the bracketing rungs. A stable top rung has
  // no upper bracket and is returned directly.
  if (unstable_above > 0.0) {
    double lo = stable_at;
    double hi = unstable_above;
    while ((hi - lo) / lo > probe_config.bisect_rel_tol) {
      const double mid = std::sqrt(lo * hi);
      if (check(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    stable_at = lo;
  }
  rec.dt_max_s = stable_at;
  return stable_at;
}

TrialFn oscillator_trial(double mass_kg, double stiffness_n_m, double zeta,
                         double duration_s) {
  if (!(mass_kg > 0.0) || !(stiffness_n_m > 0.0) || !(duration_s > 0.0) ||
      zeta < 0.0) {
    throw std::invalid_argument("oscillator_trial: bad parameters");
  }
  return [=](double dt_s) {
    const double omega = std::sqrt(stiffness_n_m / mass_kg);
    const double x0 = 1.0;
    double x = x0;
    double v = 0.0;
    const long long steps = std::llround(duration_s / dt_s);
    for (long long i = 0; i < steps; ++i) {
      v += dt_s * (-omega * omega * x - 2.0 * zeta * omega * v);
      x += dt_s * v;
      if (!std::isfinite(x) || std::abs(x) > 1.0e3 * x0) return false;
    }
    return true;
  };
}

TrialFn hopping_trial(const Config& config, const SegmentedLeg& leg) {
  Config trial_config = config;
  trial_config.sim.duration_s = config.stability.trial_duration_s;
  trial_config.sim.cutoff_s = 0.0;  // no metrics are taken from the trial
  const BehaviorSpec behavior = make_behavior("static", trial_config);
  return [trial_config, leg, behavior](double dt_s) {
    const RunResult result =
        run_simulation(trial_config, leg, behavior, dt_s);
    return !result.unstable;
  };
}

TrialFn hopping_trial(const Config& config, const MaterialSpec& material) {
  return hopping_trial(config, mono_leg(config, material));
}

StabilityGrid sweep_grid(const Config& config, int workers,
                         const StabilityGrid* seed,
                         const GridProgress& progress) {
  const StabilityConfig& sc = config.stability;
  if (sc.grid_rows < 1 || sc.grid_cols < 1) {
    throw std::invalid_argument("sweep_grid: grid must be at least 1x1");
  }
  StabilityGrid grid;
  auto log_axis = [](double lo, double hi, int n) {
    std::vector<double> axis(n);
    for (int i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      axis[i] = lo * std::pow(hi / lo, f);
    }
    return axis;
  };
  grid.density_kg_m3 = log_axis(sc.grid_density_min_kg_m3,
                                sc.grid_density_max_kg_m3, sc.grid_rows);
  grid.modulus_pa =
      log_axis(sc.grid_modulus_min_pa, sc.grid_modulus_max_pa, sc.grid_cols);
  grid.dt_max_s.assign(
      static_cast<std::size_t>(sc.grid_rows) * sc.grid_cols,
      std::numeric_limits<double>::quiet_NaN());

  if (seed != nullptr) {
    auto axis_index = [](const std::vector<double>& axis,
                         double value) -> std::ptrdiff_t {
      for (std::size_t i = 0; i < axis.size(); ++i) {
        if (std::abs(axis[i] - value) <= 1e-9 * std::abs(value)) {
          return static_cast<std::ptrdiff_t>(i);
        }
      }
      return -1;
    };
    for (std::size_t r = 0; r < grid.rows(); ++r) {
      const std::ptrdiff_t seed_r =
          axis_index(seed->density_kg_m3, grid.density_kg_m3[r]);
      if (seed_r < 0) continue;
      for (std::size_t c = 0; c < grid.cols(); ++c) {
        const std::ptrdiff_t seed_c =
            axis_index(seed->modulus_pa, grid.modulus_pa[c]);
        if (seed_c < 0) continue;
        const double v = seed->at(static_cast<std::size_t>(seed_r),
                                  static_cast<std::size_t>(seed_c));
        if (std::isfinite(v)) grid.dt_max_s[r * grid.cols() + c] = v;
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex grid_mu;  // guards cell stores against progress snapshots
  int done = 0;
  const std::size_t cells = grid.dt_max_s.size();
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells) return;
      if (std::isfinite(grid.dt_max_s[i])) continue;  // seeded
      const std::size_t row = i / grid.cols();
      const std::size_t col = i % grid.cols();
      MaterialSpec cell;
      cell.name = "grid";
      cell.density_kg_m3 = grid.density_kg_m3[row];
      cell.modulus_pa = grid.modulus_pa[col];
      double dt_max = std::numeric_limits<double>::quiet_NaN();
      try {
        dt_max = max_stable_dt(hopping_trial(config, cell), sc);
      } catch (const AllUnstable&) {
        // NaN sentinel stays in place
      }
      const std::lock_guard<std::mutex> lock(grid_mu);
      grid.dt_max_s[i] = dt_max;
      ++done;
      if (progress) progress(grid, done);
    }
  };
  const int n_workers = std::max(1, workers);
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return grid;
}

LogLogFit fit_grid(const StabilityGrid& grid) {
  // Normal equations for z = a + b*x + c*y over finite cells,
  // x = log10(rho), y = log10(E), z = log10(dt).
  double n = 0.0, sx = 0.0, sy = 0.0, sz = 0.0;
  double sxx = 0.0, sxy = 0.0, syy = 0.0, sxz = 0.0, syz = 0.0;
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      const double dt = grid.at(r, c);
      if (!std::isfinite(dt) || dt <= 0.0) continue;
      const double x = std::log10(grid.density_kg_m3[r]);
      const double y = std::log10(grid.modulus_pa[c]);
      const double z = std::log10(dt);
      n += 1.0;
      sx += x; sy += y; sz += z;
      sxx += x * x; sxy += x * y; syy += y * y;
      sxz += x * z; syz += y * z;
    }
  }
  if (n < 3.0) {
    throw std::invalid_argument("fit_grid: need at least three finite cells");
  }
  // Centered 2x2 system for the slopes.
  const double cxx = sxx - sx * sx / n;
  const double cxy = sxy - sx * sy / n;
  const double cyy = syy - sy * sy / n;
  const double cxz = sxz - sx * sz / n;
  const double cyz = syz - sy * sz / n;
  const double det = cxx * cyy - cxy * cxy;
  if (std::abs(det) < 1e-30) {
    throw std::invalid_argument("fit_grid: degenerate axis spread");
  }
  LogLogFit fit;
  fit.density_slope = (cxz * cyy - cyz * cxy) / det;
  fit.modulus_slope = (cyz * cxx - cxz * cxy) / det;
  fit.intercept = (sz - fit.density_slope * sx - fit.modulus_slope * sy) / n;
  fit.cells_used = static_cast<std::size_t>(n);

  double ss_res = 0.0, ss_tot = 0.0;
  const double z_mean = sz / n;
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      const double dt = grid.at(r, c);
      if (!std::isfinite(dt) || dt <= 0.0) continue;
      const double x = std::log10(grid.density_kg_m3[r]);
      const double y = std::log10(grid.modulus_pa[c]);
      const double z = std::log10(dt);
      const double pred =
          fit.intercept + fit.density_slope * x + fit.modulus_slope * y;
      ss_res += (z - pred) * (z - pred);
      ss_tot += (z - z_mean) * (z - z_mean);
    }
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

void write_grid_csv(const std::string& path, const StabilityGrid& grid) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_grid_csv: cannot open " + path);
  }
  out << "rho_kg_m3,modulus_pa,dt_max_s\n";
  char line[128];
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n",
                    grid.density_kg_m3[r], grid.modulus_pa[c], grid.at(r, c));
      out << line;
    }
  }
  if (!out.flush()) {
    throw std::runtime_error("write_grid_csv: write failed for " + path);
  }
}

StabilityGrid read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_grid_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "rho_kg_m3,modulus_pa,dt_max_s") {
    throw std::runtime_error("read_grid_csv: bad header in " + path);
  }
  StabilityGrid grid;
  std::vector<double> values;
  auto axis_slot = [](std::vector<double>& axis, double v) {
    for (std::size_t i = 0; i < axis.size(); ++i) {
      if (axis[i] == v) return i;
    }
    axis.push_back(v);
    return axis.size() - 1;
  };
  std::vector<std::size_t> row_of, col_of;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string rho_s, e_s, dt_s;
    if (!std::getline(fields, rho_s, ',') || !std::getline(fields, e_s, ',') ||
        !std::getline(fields, dt_s)) {
      throw std::runtime_error("read_grid_csv: short row in " + path);
    }
    row_of.push_back(axis_slot(grid.density_kg_m3, std::strtod(rho_s.c_str(), nullptr)));
    col_of.push_back(axis_slot(grid.modulus_pa, std::strtod(e_s.c_str(), nullptr)));
    values.push_back(std::strtod(dt_s.c_str(), nullptr));
  }
  if (values.size() != grid.rows() * grid.cols()) {
    throw std::runtime_error("read_grid_csv: incomplete grid in " + path);
  }
  grid.dt_max_s.assign(values.size(),
                       std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < values.size(); ++i) {
    grid.dt_max_s[row_of[i] * grid.cols() + col_of[i]] = values[i];
  }
  return grid;
}

}  // namespace hopsim
