#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "idsbed/analysis.hpp"
#include "idsbed/scenario.hpp"

namespace idsbed {

/// Real-time scenario with `components` components, alternating data
/// generators and 2D simulators, one client each.
ScenarioConfig bench_scenario(int components, std::uint64_t seed = 1);

/// Body of the hidden bench-host process: builds the components, starts
/// them, prints "ready" on stdout and runs until SIGTERM/SIGINT.
int bench_host_main(int components);

struct BenchSample {
  double startup_s = 0.0;
  double cpu_percent = 0.0;
  double memory_mb = 0.0;
};

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;
};

struct BenchCycle {
  int components = 0;
  std::vector<BenchSample> rounds;

  Stat startup() const;
  Stat cpu() const;
  Stat memory() const;
};

struct BenchOptions {
  std::vector<int> counts{2, 50, 100, 200};
  int rounds = 3;
  double window_s = 30.0;
  double sample_hz = 1.0;
  /// Executable providing the bench-host subcommand.
  std::filesystem::path host;
};

struct BenchReport {
  std::vector<BenchCycle> cycles;
  LinearFit startup;
  LinearFit cpu;
  LinearFit memory;
  std::vector<std::string> errors;

  std::string to_text() const;
  std::string to_json() const;
};

/// Spawns `host bench-host --components n`, times spawn-to-ready, then
/// samples CPU (utime + stime) and resident memory from /proc at
/// `sample_hz` over `window_s` seconds and averages them.
BenchSample measure_once(const std::filesystem::path& host, int components, double window_s,
                         double sample_hz);

BenchReport run_bench(const BenchOptions& options);

}  // namespace idsbed
