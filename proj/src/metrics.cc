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

#include "hopsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hopsim {
namespace {

constexpr char kMetricsColumns[] =
    "cycle_index,t0_s,tf_s,power_w,tracking_error_m,jerk_m_s3,hop_height_m";

// One biquad pass (direct form II transposed), zero initial conditions.
void biquad(const double b[3], const double a[2], std::vector<double>& x) {
  double z1 = 0.0;
  double z2 = 0.0;
  for (double& v : x) {
    const double in = v;
    const double out = b[0] * in + z1;
    z1 = b[1] * in - a[0] * out + z2;
    z2 = b[2] * in - a[1] * out;
    v = out;
  }
}

}  // namespace

std::vector<HopCycle> segment_cycles(const SimTrace& trace, double cutoff_s,
                                     double min_stance_s,
                                     double min_flight_s) {
  const PhaseEvents events =
      detect_phase_events(trace, min_stance_s, min_flight_s);
  std::vector<std::size_t> touchdowns;
  for (std::size_t idx : events.touchdowns) {
    if (trace.t[idx] >= cutoff_s) touchdowns.push_back(idx);
  }
  if (touchdowns.size() < 2) {
    throw NoCycles("fewer than two touchdowns after the settling cutoff");
  }
  std::vector<HopCycle> cycles;
  cycles.reserve(touchdowns.size() - 1);
  for (std::size_t i = 0; i + 1 < touchdowns.size(); ++i) {
    HopCycle c;
    c.index = static_cast<int>(i);
    c.begin = touchdowns[i];
    c.end = touchdowns[i + 1];
    c.t0_s = trace.t[c.begin];
    c.tf_s = trace.t[c.end];
    cycles.push_back(c);
  }
  return cycles;
}

std::vector<double> lowpass_zero_phase(const std::vector<double>& x,
                                       double cutoff_hz,
                                       double sample_rate_hz) {
  if (!(cutoff_hz > 0.0) || !(sample_rate_hz > 0.0) ||
      cutoff_hz >= 0.5 * sample_rate_hz) {
    throw std::invalid_argument(
        "low-pass cutoff must lie in (0, sample_rate/2)");
  }
  if (x.size() < 2) return x;

  // Bilinear-transform Butterworth biquad.
  const double k = std::tan(3.14159265358979323846 * cutoff_hz /
                            sample_rate_hz);
  const double q = std::sqrt(2.0);
  const double d = 1.0 + q * k + k * k;
  const double b[3] = {k * k / d, 2.0 * k * k / d, k * k / d};
  const double a[2] = {2.0 * (k * k - 1.0) / d, (1.0 - q * k + k * k) / d};

  // Odd-reflection padding so the zero initial conditions settle outside
  // the data.
  const std::size_t n = x.size();
  const std::size_t want =
      static_cast<std::size_t>(std::ceil(3.0 * sample_rate_hz / cutoff_hz));
  const std::size_t pad = std::min(n - 1, std::max<std::size_t>(want, 9));
  std::vector<double> y;
  y.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) y.push_back(2.0 * x[0] - x[i]);
  y.insert(y.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) {
    y.push_back(2.0 * x[n - 1] - x[n - 1 - i]);
  }

  biquad(b, a, y);
  std::reverse(y.begin(), y.end());
  biquad(b, a, y);
  std::reverse(y.begin(), y.end());

  return std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(pad),
                             y.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

double cycle_power(const SimTrace& trace, const HopCycle& cycle) {
  if (cycle.samples() == 0) throw EmptyInput("empty cycle");
  double sum = 0.0;
  for (std::size_t i = cycle.begin; i < cycle.end; ++i) {
    const double px = trace.tau1[i] * trace.thetadot_x[i];
    const double py = trace.tau2[i] * trace.thetadot_y[i];
    const double pz = trace.tau3[i] * trace.l_s_dot[i];
    sum += std::sqrt(px * px + py * py + pz * pz);
  }
  return sum / static_cast<double>(cycle.samples());
}

double cycle_tracking_error(const SimTrace& trace, const HopCycle& cycle,
                            const BehaviorSpec& behavior) {
  if (cycle.samples() == 0) throw EmptyInput("empty cycle");
  double sum = 0.0;
  for (std::size_t i = cycle.begin; i < cycle.end; ++i) {
    const Vec2 ref = reference_position(behavior, trace.t[i]);
    const double ex = trace.p_x[i] - ref.x;
    const double ey = trace.p_y[i] - ref.y;
    sum += std::sqrt(ex * ex + ey * ey);
  }
  return sum / static_cast<double>(cycle.samples());
}

double cycle_hop_height(const SimTrace& trace, const HopCycle& cycle) {
  if (cycle.samples() == 0) throw EmptyInput("empty cycle");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = cycle.begin; i < cycle.end; ++i) {
    const double ground = trace.terrain_grade * trace.p_x[i];
    const double h = trace.p_z[i] - trace.standing_height_m - ground;
    best = std::max(best, h);
  }
  return best;
}

std::vector<double> jerk_series(const SimTrace& trace, double cutoff_hz) {
  const std::size_t n = trace.p_z.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> jerk(n, nan);
  if (n < 5) return jerk;
  const double h = trace.sample_period_s;
  const std::vector<double> z =
      lowpass_zero_phase(trace.p_z, cutoff_hz, 1.0 / h);
  const double inv = 1.0 / (2.0 * h * h * h);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    jerk[i] =
        (z[i + 2] - 2.0 * z[i + 1] + 2.0 * z[i - 1] - z[i - 2]) * inv;
  }
  return jerk;
}

double cycle_jerk(const std::vector<double>& jerk, const HopCycle& cycle) {
  if (cycle.samples() < 7) {
    throw CycleTooShort("cycle has fewer than 7 samples");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = cycle.begin; i < cycle.end && i < jerk.size(); ++i) {
    if (std::isfinite(jerk[i])) {
      sum += std::fabs(jerk[i]);
      ++count;
    }
  }
  if (count == 0) throw CycleTooShort("no usable jerk samples in cycle");
  return sum / static_cast<double>(count);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw EmptyInput("quantile of an empty list");
  if (!(q >= 0.0) || !(q <= 1.0)) {
    throw std::invalid_argument("quantile order must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

MetricSummary summarize(const std::vector<double>& values) {
  if (values.empty()) throw EmptyInput("summary of an empty list");
  MetricSummary s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.median = quantile(values, 0.5);
  s.q1 = quantile(values, 0.25);
  s.q3 = quantile(values, 0.75);
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  return s;
}

MetricsReport compute_metrics(const SimTrace& trace,
                              const BehaviorSpec& behavior, double cutoff_s,
                              double min_stance_s, double min_flight_s) {
  MetricsReport report;
  report.fingerprint = trace.fingerprint;
  const std::vector<HopCycle> cycles =
      segment_cycles(trace, cutoff_s, min_stance_s, min_flight_s);
  const std::vector<double> jerk = jerk_series(trace);

  std::vector<double> power, tracking, jerks, heights;
  for (const HopCycle& c : cycles) {
    HopCycleMetrics m;
    m.cycle_index = c.index;
    m.t0_s = c.t0_s;
    m.tf_s = c.tf_s;
    m.power_w = cycle_power(trace, c);
    m.tracking_error_m = cycle_tracking_error(trace, c, behavior);
    m.jerk_m_s3 = cycle_jerk(jerk, c);
    m.hop_height_m = cycle_hop_height(trace, c);
    report.cycles.push_back(m);
    power.push_back(m.power_w);
    tracking.push_back(m.tracking_error_m);
    jerks.push_back(m.jerk_m_s3);
    heights.push_back(m.hop_height_m);
  }
  report.power = summarize(power);
  report.tracking_error = summarize(tracking);
  report.jerk = summarize(jerks);
  report.hop_height = summarize(heights);
  return report;
}

void write_metrics_csv(const std::string& path,
                       const MetricsReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "# fingerprint=" << report.fingerprint << "\n";
  out << kMetricsColumns << "\n";
  char buf[512];
  for (const HopCycleMetrics& m : report.cycles) {
    std::snprintf(buf, sizeof(buf),
                  "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", m.cycle_index,
                  m.t0_s, m.tf_s, m.power_w, m.tracking_error_m, m.jerk_m_s3,
                  m.hop_height_m);
    out << buf;
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

MetricsReport read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  MetricsReport report;
  std::string line;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "fingerprint=";
      const std::size_t at = line.find(key);
      if (at != std::string::npos) {
        std::string rest = line.substr(at + key.size());
        const std::size_t space = rest.find(' ');
        report.fingerprint = rest.substr(0, space);
      }
      continue;
    }
    if (!saw_columns) {
      if (line != kMetricsColumns) {
        throw std::runtime_error("unexpected column header in " + path);
      }
      saw_columns = true;
      continue;
    }
    std::istringstream row(line);
    HopCycleMetrics m;
    char comma;
    row >> m.cycle_index >> comma >> m.t0_s >> comma >> m.tf_s >> comma >>
        m.power_w >> comma >> m.tracking_error_m >> comma >> m.jerk_m_s3 >>
        comma >> m.hop_height_m;
    if (!row) throw std::runtime_error("malformed metrics row in " + path);
    report.cycles.push_back(m);
  }
  if (!saw_columns) throw std::runtime_error("missing header in " + path);
  if (!report.cycles.empty()) {
    std::vector<double> power, tracking, jerks, heights;
    for (const HopCycleMetrics& m : report.cycles) {
      power.push_back(m.power_w);
      tracking.push_back(m.tracking_error_m);
      jerks.push_back(m.jerk_m_s3);
      heights.push_back(m.hop_height_m);
    }
    report.power = summarize(power);
    report.tracking_error = summarize(tracking);
    report.jerk = summarize(jerks);
    report.hop_height = summarize(heights);
  }
  return report;
}

}  // namespace hopsim
