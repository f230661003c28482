#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sisph/harness/cases.hpp"
#include "sisph/harness/io.hpp"
#include "sisph/harness/metrics.hpp"
#include "sisph/integrator.hpp"

namespace sisph::harness {

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  bool write_snapshots = true;
  int threads = 1;
  std::uint64_t seed = 0;
  /// Called after every step.
  std::function<void(const Simulation&, const StepReport&)> on_step;
  /// Called at t = 0 and at every output time.
  std::function<void(const Simulation&)> on_output;
  std::ostream* log = nullptr;
};

struct RunResult {
  Table series;                    // per-output metrics for the case
  std::vector<int> ppe_iterations; // one entry per step
  std::vector<double> step_times;  // simulated time after each step
  std::size_t nonconverged_steps = 0;
  std::optional<CenterlineProfiles> profiles;  // cavity only
  double wall_seconds = 0.0;
  double final_time = 0.0;
  ParticleSet final_state{2};
};

/// Header of the metric series written for a case.
std::vector<std::string> metric_header(MetricSet m);

/// Runs a case to its end time, collecting metrics at every output interval.
/// With an output directory it writes snapshots, the metric CSVs and a run
/// manifest there.
RunResult run_case(CaseSpec spec, const RunOptions& opts = {});

/// Mean of the per-step PPE iteration counts, skipping the first `warmup` steps.
double average_iterations(const std::vector<int>& iterations, std::size_t warmup);

/// Fluid particles outside the open-topped container (side walls and floor).
std::size_t count_penetrations(const ParticleSet& ps, const CaseSpec& spec);

/// Fluid particles flagged free-surface whose pressure is not exactly zero.
std::size_t count_free_surface_pressure_violations(const ParticleSet& ps);

}  // namespace sisph::harness
