// idsbed command-line tool: generate, analyze, compare, detect, gap, bench.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "idsbed/bench.hpp"
#include "idsbed/experiment.hpp"
#include "idsbed/orchestrator.hpp"
#include "idsbed/reports.hpp"
#include "idsbed/server.hpp"
#include "idsbed/transport.hpp"

namespace fs = std::filesystem;
using namespace idsbed;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

constexpr const char* kOutDirEnv = "IDSBED_OUT_DIR";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path default_out_dir() {
  const char* dir = std::getenv(kOutDirEnv);
  return dir != nullptr && *dir != '\0' ? fs::path(dir) : fs::current_path();
}

/// Relative output paths land in $IDSBED_OUT_DIR when it is set.
fs::path resolve_out(const fs::path& p) {
  if (p.is_absolute() || std::getenv(kOutDirEnv) == nullptr) return p;
  return default_out_dir() / p;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void require_file(const fs::path& path, const char* what) {
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " not found: " + path.string());
}

bool is_usage_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::InvalidParams:
    case ErrorKind::UndefinedMean:
      return true;
    default:
      return false;
  }
}

std::vector<DifficultyLevel> parse_levels(const std::vector<std::string>& names) {
  std::vector<DifficultyLevel> out;
  for (const auto& n : names) {
    const auto l = parse_level(n);
    if (!l) throw UsageError("unknown level '" + n + "'");
    out.push_back(*l);
  }
  return out;
}

// generate ------------------------------------------------------------------

struct GenerateArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mode;
  std::optional<std::uint64_t> records;
  std::optional<std::int64_t> duration_ms;
  bool store = false;
  std::string detect_model;
  std::string listen = "inproc";
  std::string transport = "direct";
  std::string verdicts;
  std::string summary_json;
  bool force = false;
};

int cmd_generate(const GenerateArgs& a) {
  require_file(a.scenario, "scenario file");
  auto config = load_scenario(a.scenario);
  if (a.seed) config.seed = *a.seed;
  if (!a.mode.empty()) {
    const auto mode = parse_run_mode(a.mode);
    if (!mode) throw UsageError("--mode must be 'virtual' or 'realtime'");
    config.mode = *mode;
  }
  if (a.records) config.records = *a.records;
  if (a.duration_ms) config.duration_ms = *a.duration_ms;
  validate(config);

  const bool detect = !a.detect_model.empty();
  const bool store = a.store || !detect;
  fs::path out;
  if (store) {
    out = a.out.empty() ? default_out_dir() / (fs::path(a.scenario).stem().string() + ".log")
                        : resolve_out(a.out);
    if (fs::exists(out) && !a.force) {
      throw UsageError(out.string() + " exists; pass --force to replace it");
    }
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    fs::remove(out);
  }

  IntervalDetector detector;
  if (detect) detector = IntervalDetector::from_json(read_file(a.detect_model));

  ServerConfig sc;
  sc.store = store;
  sc.store_path = out;
  sc.detect = detect;
  sc.detector = detect ? &detector : nullptr;
  sc.clock = config.mode == RunMode::VirtualTime ? ServerClock::Virtual : ServerClock::Wall;
  Server server(sc);

  std::optional<LogWriter> verdict_log;
  if (detect && !a.verdicts.empty()) {
    const auto vpath = resolve_out(a.verdicts);
    if (vpath.has_parent_path()) fs::create_directories(vpath.parent_path());
    fs::remove(vpath);
    verdict_log.emplace(vpath);
    server.on_verdict([&verdict_log](const LogRecord& r, Verdict v) {
      verdict_log->append(serialize_record(r) + "\tverdict=" + std::string(to_string(v)));
    });
  }

  RunSummary summary;
  if (a.listen == "inproc") {
    if (a.transport == "queued") {
      QueuedTransport sink(server);
      summary = run(config, sink);
    } else if (a.transport == "direct") {
      DirectTransport sink(server);
      summary = run(config, sink);
    } else {
      throw UsageError("--transport must be 'direct' or 'queued'");
    }
  } else {
    SocketServer listener(server, parse_endpoint(a.listen));
    Endpoint ep = parse_endpoint(a.listen);
    ep.port = listener.port();
    SocketTransport sink(ep);
    summary = run(config, sink);
    listener.stop();
  }
  server.flush();
  if (verdict_log) verdict_log->flush();

  const auto stats = server.stats();
  std::cout << summary.to_text();
  std::cout << "server: accepted " << stats.accepted << ", rejected " << stats.rejected;
  if (detect) {
    std::cout << ", abstained " << stats.abstained << "\ndetector: precision "
              << stats.confusion.precision() << ", recall " << stats.confusion.recall()
              << " (tp " << stats.confusion.tp << ", fp " << stats.confusion.fp << ", tn "
              << stats.confusion.tn << ", fn " << stats.confusion.fn << ")";
  }
  std::cout << '\n';
  if (store) std::cout << "log: " << out.string() << '\n';
  if (!a.summary_json.empty()) write_file(resolve_out(a.summary_json), summary.to_json());
  return kExitOk;
}

// analyze -------------------------------------------------------------------

int cmd_analyze(const std::string& log, const std::string& json_out) {
  require_file(log, "log file");
  const auto report = analyze_log(log);
  std::cout << report.to_text();
  if (!json_out.empty()) write_file(resolve_out(json_out), report.to_json());
  return kExitOk;
}

// compare -------------------------------------------------------------------

int cmd_compare(const std::vector<std::string>& logs, const std::string& json_out,
                const std::string& heatmap_dir, int width, int height) {
  if (logs.size() < 2) throw UsageError("compare needs a baseline and at least one candidate");
  for (const auto& l : logs) require_file(l, "log file");
  const auto baseline = fingerprint_log(logs[0], width, height);
  std::vector<Fingerprint> candidates;
  for (std::size_t i = 1; i < logs.size(); ++i) {
    candidates.push_back(fingerprint_log(logs[i], width, height));
  }
  const auto report = compare(baseline, candidates);
  std::cout << report.to_text();
  if (!json_out.empty()) write_file(resolve_out(json_out), report.to_json());
  if (!heatmap_dir.empty()) {
    const auto dir = resolve_out(heatmap_dir);
    write_file(dir / "heatmap_1.csv", baseline.heatmap().to_csv());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      write_file(dir / ("heatmap_" + std::to_string(i + 2) + ".csv"),
                 candidates[i].heatmap().to_csv());
    }
  }
  return kExitOk;
}

// detect --------------------------------------------------------------------

int cmd_detect(const std::string& train_log, std::string eval_log, const std::string& model_in,
               double alpha, const std::string& save_model, const std::string& json_out) {
  IntervalDetector detector;
  if (!model_in.empty()) {
    detector = IntervalDetector::from_json(read_file(model_in));
  } else {
    if (train_log.empty()) throw UsageError("detect needs --train LOG or --model FILE");
    require_file(train_log, "training log");
    const auto records = read_log(train_log);
    detector = IntervalDetector::fit(records, alpha);
  }
  if (!save_model.empty()) write_file(resolve_out(save_model), detector.to_json());
  if (eval_log.empty()) eval_log = train_log;
  if (eval_log.empty()) return kExitOk;
  require_file(eval_log, "evaluation log");

  std::array<ScoreReport, kCategoryCount> per{};
  ScoreReport total;
  for_each_record(eval_log, [&](const LogRecord& r) {
    Verdict v = Verdict::Abstain;
    try {
      v = detector.classify(observe(r));
    } catch (const Error&) {
      v = Verdict::Abstain;
    }
    per[index_of(r.category)].add(v, r.label);
    total.add(v, r.label);
  });

  std::printf("%-14s %9s %9s %9s %9s %9s %10s %10s\n", "category", "tp", "fp", "tn", "fn",
              "abstain", "precision", "recall");
  auto line = [](std::string_view name, const ScoreReport& s) {
    std::printf("%-14s %9llu %9llu %9llu %9llu %9llu %9.2f%s %9.2f%s\n", std::string(name).c_str(),
                static_cast<unsigned long long>(s.tp), static_cast<unsigned long long>(s.fp),
                static_cast<unsigned long long>(s.tn), static_cast<unsigned long long>(s.fn),
                static_cast<unsigned long long>(s.abstained), 100.0 * s.precision(),
                s.precision_defined() ? "%" : "*", 100.0 * s.recall(),
                s.recall_defined() ? "%" : "*");
  };
  for (const auto c : kAllCategories) {
    if (per[index_of(c)].total() > 0) line(to_string(c), per[index_of(c)]);
  }
  line("all", total);
  std::printf("(* undefined: no predicted or actual positives; reported as 0)\n");

  if (!json_out.empty()) {
    std::ostringstream js;
    js << "{\n  \"alpha\": " << detector.alpha() << ",\n  \"categories\": {";
    bool first = true;
    for (const auto c : kAllCategories) {
      const auto& s = per[index_of(c)];
      if (s.total() == 0) continue;
      js << (first ? "\n" : ",\n") << "    \"" << to_string(c) << "\": {\"tp\": " << s.tp
         << ", \"fp\": " << s.fp << ", \"tn\": " << s.tn << ", \"fn\": " << s.fn
         << ", \"abstained\": " << s.abstained << ", \"precision\": " << s.precision()
         << ", \"recall\": " << s.recall() << "}";
      first = false;
    }
    js << "\n  }\n}\n";
    write_file(resolve_out(json_out), js.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idsbed: intrusion-detection testbed for simulated vehicle telemetry"};
  app.require_subcommand(1);
  app.footer(std::string("Environment: ") + kOutDirEnv +
             " sets the default directory for output files.");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Run a scenario and store/detect its records");
  generate->add_option("scenario", gen.scenario, "Scenario file (JSON)")->required();
  generate->add_option("--seed", gen.seed, "Override the scenario seed");
  generate->add_option("--out", gen.out, "Log file to write (default $IDSBED_OUT_DIR/<scenario>.log)");
  generate->add_option("--mode", gen.mode, "virtual or realtime (default from scenario)");
  generate->add_option("--records", gen.records, "Stop after this many records");
  generate->add_option("--duration-ms", gen.duration_ms, "Stop after this much (virtual) time");
  generate->add_flag("--store", gen.store, "Store mode (default unless --detect is given alone)");
  generate->add_option("--detect", gen.detect_model, "Detection mode with this detector model");
  generate->add_option("--listen", gen.listen, "inproc or HOST:PORT for a TCP server");
  generate->add_option("--transport", gen.transport, "inproc transport: direct or queued");
  generate->add_option("--verdicts", gen.verdicts, "Write one verdict line per record here");
  generate->add_option("--summary-json", gen.summary_json, "Write the run summary as JSON");
  generate->add_flag("--force", gen.force, "Replace an existing log file");

  std::string analyze_log_path;
  std::string analyze_json;
  auto* analyze = app.add_subcommand("analyze", "Class balance and duplicate report for a log");
  analyze->add_option("log", analyze_log_path, "Log file")->required();
  analyze->add_option("--json", analyze_json, "Also write the report as JSON");

  std::vector<std::string> compare_logs;
  std::string compare_json;
  std::string compare_heatmaps;
  int width = 500;
  int height = 500;
  auto* cmp = app.add_subcommand("compare", "R^2 of candidate logs against a baseline log");
  cmp->add_option("logs", compare_logs, "Baseline log followed by candidate logs")->required();
  cmp->add_option("--json", compare_json, "Also write the report as JSON");
  cmp->add_option("--heatmaps", compare_heatmaps, "Directory for heatmap CSV files");
  cmp->add_option("--width", width, "Environment width in pixels");
  cmp->add_option("--height", height, "Environment height in pixels");

  std::string train_log;
  std::string eval_log;
  std::string model_in;
  std::string save_model;
  std::string detect_json;
  double alpha = kDefaultAlpha;
  auto* detect = app.add_subcommand("detect", "Train and evaluate the interval detector on logs");
  detect->add_option("--train", train_log, "Log whose normal records train the detector");
  detect->add_option("--eval", eval_log, "Log to evaluate (default: the training log)");
  detect->add_option("--model", model_in, "Load a saved model instead of training");
  detect->add_option("--alpha", alpha, "Training tail fraction");
  detect->add_option("--save-model", save_model, "Write the trained model as JSON");
  detect->add_option("--json", detect_json, "Also write the score report as JSON");

  GapOptions gap_opts;
  std::vector<std::string> gap_levels{"easy", "medium", "hard"};
  std::string gap_json;
  auto* gap = app.add_subcommand("gap", "Difficulty-level detection gap experiment");
  gap->add_option("--alpha", gap_opts.alpha, "Training tail fraction");
  gap->add_option("--sets", gap_opts.n_sets, "Sampled sets per level");
  gap->add_option("--set-size", gap_opts.set_size, "Records per sampled set");
  gap->add_option("--pool", gap_opts.pool_size, "Records generated per level");
  gap->add_option("--seed", gap_opts.seed, "Seed");
  gap->add_option("--levels", gap_levels, "Levels to run")->delimiter(',');
  gap->add_option("--threshold", gap_opts.threshold_pp, "Gap threshold in percentage points");
  gap->add_option("--json", gap_json, "Also write the report as JSON");

  BenchOptions bench_opts;
  std::string bench_json;
  auto* bench = app.add_subcommand("bench", "Start-up time, CPU and memory scaling benchmark");
  bench->add_option("--counts", bench_opts.counts, "Component counts")->delimiter(',');
  bench->add_option("--rounds", bench_opts.rounds, "Rounds per count");
  bench->add_option("--window", bench_opts.window_s, "Sampling window in seconds");
  bench->add_option("--hz", bench_opts.sample_hz, "Sampling rate");
  bench->add_option("--json", bench_json, "Also write the report as JSON");

  int host_components = 0;
  auto* host = app.add_subcommand("bench-host", "");
  host->group("");
  host->add_option("--components", host_components)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*analyze) return cmd_analyze(analyze_log_path, analyze_json);
    if (*cmp) return cmd_compare(compare_logs, compare_json, compare_heatmaps, width, height);
    if (*detect) return cmd_detect(train_log, eval_log, model_in, alpha, save_model, detect_json);
    if (*gap) {
      gap_opts.levels = parse_levels(gap_levels);
      const auto report = difficulty_gap_experiment(gap_opts);
      std::cout << report.to_text();
      if (!gap_json.empty()) write_file(resolve_out(gap_json), report.to_json());
      return kExitOk;
    }
    if (*bench) {
      bench_opts.host = fs::canonical("/proc/self/exe");
      const auto report = run_bench(bench_opts);
      std::cout << report.to_text();
      if (!bench_json.empty()) write_file(resolve_out(bench_json), report.to_json());
      return report.errors.empty() ? kExitOk : kExitRuntime;
    }
    if (*host) return bench_host_main(host_components);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return is_usage_kind(e.kind()) ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
