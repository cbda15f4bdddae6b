#include "idsbed/bench.hpp"

#include <csignal>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "idsbed/orchestrator.hpp"

namespace idsbed {

namespace {

using Clock = std::chrono::steady_clock;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

/// utime + stime of a process, in clock ticks.
long long cpu_ticks(pid_t pid) {
  std::ifstream in("/proc/" + std::to_string(pid) + "/stat");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, "cannot read /proc stat");
  const auto close = line.rfind(')');
  std::istringstream fields(line.substr(close + 2));
  std::string tok;
  long long utime = 0;
  long long stime = 0;
  for (int i = 0; i <= 12 && fields >> tok; ++i) {
    if (i == 11) utime = std::stoll(tok);
    if (i == 12) stime = std::stoll(tok);
  }
  return utime + stime;
}

double rss_mb(pid_t pid) {
  std::ifstream in("/proc/" + std::to_string(pid) + "/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmRSS:", 0) == 0) {
      std::istringstream fields(line.substr(6));
      double kb = 0.0;
      fields >> kb;
      return kb / 1024.0;
    }
  }
  throw Error(ErrorKind::Io, "no VmRSS for pid " + std::to_string(pid));
}

Stat stat_of(const std::vector<BenchSample>& rounds, double BenchSample::*field) {
  Stat s;
  if (rounds.empty()) return s;
  for (const auto& r : rounds) s.mean += r.*field;
  s.mean /= static_cast<double>(rounds.size());
  for (const auto& r : rounds) s.stddev += (r.*field - s.mean) * (r.*field - s.mean);
  s.stddev = std::sqrt(s.stddev / static_cast<double>(rounds.size()));
  return s;
}

nlohmann::json fit_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"mse", f.mse}, {"r_squared", f.r_squared}};
}

}  // namespace

ScenarioConfig bench_scenario(int components, std::uint64_t seed) {
  ScenarioConfig config;
  config.seed = seed;
  config.mode = RunMode::RealTime;
  for (int i = 0; i < components; ++i) {
    ClientSpec client;
    char id[32];
    std::snprintf(id, sizeof(id), "bench-%04d", i);
    client.id = id;
    if (i % 2 == 0) {
      GeneratorConfig g;
      g.spec = DistributionSpec::defaults(kAllDistributions[static_cast<std::size_t>(i / 2) % 10]);
      client.components.emplace_back(g);
    } else {
      client.components.emplace_back(Sim2dConfig{});
    }
    config.clients.push_back(std::move(client));
  }
  return config;
}

int bench_host_main(int components) {
  std::signal(SIGTERM, on_signal);
  std::signal(SIGINT, on_signal);
  std::atomic<std::uint64_t> received{0};
  CallbackSink sink([&received](const ClientRequest&) { received.fetch_add(1); });
  RunOptions options;
  options.stop = &g_stop;
  options.on_ready = [] {
    std::fputs("ready\n", stdout);
    std::fflush(stdout);
  };
  run(bench_scenario(components), sink, options);
  return 0;
}

Stat BenchCycle::startup() const { return stat_of(rounds, &BenchSample::startup_s); }
Stat BenchCycle::cpu() const { return stat_of(rounds, &BenchSample::cpu_percent); }
Stat BenchCycle::memory() const { return stat_of(rounds, &BenchSample::memory_mb); }

BenchSample measure_once(const std::filesystem::path& host, int components, double window_s,
                         double sample_hz) {
  int fds[2];
  if (::pipe(fds) != 0) throw Error(ErrorKind::Io, "pipe failed");
  const auto spawned = Clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorKind::Io, "fork failed");
  if (pid == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    const std::string n = std::to_string(components);
    ::execl(host.c_str(), host.c_str(), "bench-host", "--components", n.c_str(),
            static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(fds[1]);

  auto stop_child = [pid, &fds] {
    ::kill(pid, SIGTERM);
    int status = 0;
    ::waitpid(pid, &status, 0);
    ::close(fds[0]);
  };

  std::string out;
  char buf[256];
  while (out.find("ready\n") == std::string::npos) {
    pollfd pfd{fds[0], POLLIN, 0};
    if (::poll(&pfd, 1, 120'000) <= 0) {
      stop_child();
      throw Error(ErrorKind::Io, "bench host did not become ready");
    }
    const ssize_t n = ::read(fds[0], buf, sizeof(buf));
    if (n <= 0) {
      stop_child();
      throw Error(ErrorKind::Io, "bench host exited before ready");
    }
    out.append(buf, static_cast<std::size_t>(n));
  }
  BenchSample sample;
  sample.startup_s = std::chrono::duration<double>(Clock::now() - spawned).count();

  try {
    const double ticks_per_s = static_cast<double>(::sysconf(_SC_CLK_TCK));
    const auto interval = std::chrono::duration<double>(1.0 / sample_hz);
    const int samples = std::max(1, static_cast<int>(std::lround(window_s * sample_hz)));
    long long last_ticks = cpu_ticks(pid);
    auto last_time = Clock::now();
    double cpu_sum = 0.0;
    double mem_sum = 0.0;
    for (int i = 0; i < samples; ++i) {
      std::this_thread::sleep_until(last_time + std::chrono::duration_cast<Clock::duration>(interval));
      const long long ticks = cpu_ticks(pid);
      const auto now = Clock::now();
      const double dt = std::chrono::duration<double>(now - last_time).count();
      cpu_sum += 100.0 * static_cast<double>(ticks - last_ticks) / ticks_per_s / dt;
      mem_sum += rss_mb(pid);
      last_ticks = ticks;
      last_time = now;
    }
    sample.cpu_percent = cpu_sum / samples;
    sample.memory_mb = mem_sum / samples;
  } catch (...) {
    stop_child();
    throw;
  }
  stop_child();
  return sample;
}

BenchReport run_bench(const BenchOptions& options) {
  if (options.counts.size() < 2) {
    throw Error(ErrorKind::ValidationError, "bench needs at least two component counts");
  }
  if (options.rounds < 1 || !(options.window_s > 0.0) || !(options.sample_hz > 0.0)) {
    throw Error(ErrorKind::ValidationError, "rounds, window and sample rate must be positive");
  }
  BenchReport report;
  for (const int n : options.counts) {
    BenchCycle cycle;
    cycle.components = n;
    for (int r = 0; r < options.rounds; ++r) {
      try {
        cycle.rounds.push_back(measure_once(options.host, n, options.window_s, options.sample_hz));
      } catch (const Error& e) {
        report.errors.push_back("n=" + std::to_string(n) + " round " + std::to_string(r + 1) +
                                ": " + e.what());
      }
    }
    if (!cycle.rounds.empty()) report.cycles.push_back(std::move(cycle));
  }
  std::vector<double> xs;
  std::vector<double> st;
  std::vector<double> cpu;
  std::vector<double> mem;
  for (const auto& c : report.cycles) {
    xs.push_back(c.components);
    st.push_back(c.startup().mean);
    cpu.push_back(c.cpu().mean);
    mem.push_back(c.memory().mean);
  }
  if (xs.size() >= 2) {
    report.startup = linear_fit(xs, st);
    report.cpu = linear_fit(xs, cpu);
    report.memory = linear_fit(xs, mem);
  } else {
    report.errors.push_back("fewer than two successful cycles; no fits");
  }
  return report;
}

std::string BenchReport::to_text() const {
  std::ostringstream out;
  out << "components   startup s (sd)      cpu % (sd)       memory MB (sd)\n";
  for (const auto& c : cycles) {
    const auto s = c.startup();
    const auto p = c.cpu();
    const auto m = c.memory();
    char line[160];
    std::snprintf(line, sizeof(line), "%10d   %7.4f (%6.4f)   %6.2f (%5.2f)   %8.2f (%5.2f)\n",
                  c.components, s.mean, s.stddev, p.mean, p.stddev, m.mean, m.stddev);
    out << line;
  }
  auto fit_line = [&out](const char* name, const LinearFit& f) {
    out << name << ": slope " << fixed(f.slope, 6) << ", intercept " << fixed(f.intercept, 4)
        << ", MSE " << fixed(f.mse, 6) << ", R^2 " << fixed(f.r_squared, 4) << '\n';
  };
  out << '\n';
  fit_line("startup", startup);
  fit_line("cpu    ", cpu);
  fit_line("memory ", memory);
  for (const auto& e : errors) out << "error: " << e << '\n';
  return out.str();
}

std::string BenchReport::to_json() const {
  nlohmann::json j;
  j["cycles"] = nlohmann::json::array();
  for (const auto& c : cycles) {
    j["cycles"].push_back({{"components", c.components},
                           {"startup_s", {{"mean", c.startup().mean}, {"sd", c.startup().stddev}}},
                           {"cpu_percent", {{"mean", c.cpu().mean}, {"sd", c.cpu().stddev}}},
                           {"memory_mb", {{"mean", c.memory().mean}, {"sd", c.memory().stddev}}}});
  }
  j["fits"] = {{"startup", fit_json(startup)}, {"cpu", fit_json(cpu)}, {"memory", fit_json(memory)}};
  j["errors"] = errors;
  return j.dump(2);
}

}  // namespace idsbed
