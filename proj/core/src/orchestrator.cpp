#include "idsbed/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <queue>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace idsbed {

namespace {

using Clock = std::chrono::steady_clock;

struct Event {
  std::int64_t vtime;
  std::uint32_t client;
  std::uint32_t component;
  std::uint32_t stream;

  bool operator>(const Event& o) const {
    return std::tie(vtime, client, component, stream) >
           std::tie(o.vtime, o.client, o.component, o.stream);
  }
};

RunSummary run_virtual(const ScenarioConfig& config, RequestSink& sink) {
  auto clients = build_clients(config);
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  for (std::uint32_t ci = 0; ci < clients.size(); ++ci) {
    const auto& comps = clients[ci].components;
    for (std::uint32_t k = 0; k < comps.size(); ++k) {
      for (std::uint32_t s = 0; s < comps[k]->stream_count(); ++s) {
        const auto period = comps[k]->period_ms(s);
        if (period > 0) queue.push({period, ci, k, s});
      }
    }
  }

  const std::int64_t end =
      config.duration_ms.value_or(std::numeric_limits<std::int64_t>::max());
  const std::uint64_t budget =
      config.records.value_or(std::numeric_limits<std::uint64_t>::max());
  RunSummary summary;
  const auto started = Clock::now();
  while (!queue.empty() && summary.records < budget) {
    const Event ev = queue.top();
    if (ev.vtime > end) break;
    queue.pop();
    auto& client = clients[ev.client];
    auto& component = *client.components[ev.component];
    auto emitted = component.emit(ev.stream, ev.vtime);
    summary.add(emitted.category, emitted.label);
    summary.last_vtime_ms = ev.vtime;
    sink.send(ClientRequest{ev.vtime, client.id, emitted.category, std::move(emitted.payload),
                            emitted.label});
    queue.push({ev.vtime + component.period_ms(ev.stream), ev.client, ev.component, ev.stream});
  }
  sink.close();
  summary.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return summary;
}

RunSummary run_realtime(const ScenarioConfig& config, RequestSink& sink,
                        const RunOptions& options) {
  auto clients = build_clients(config);
  const std::uint64_t budget =
      config.records.value_or(std::numeric_limits<std::uint64_t>::max());
  const std::int64_t end =
      config.duration_ms.value_or(std::numeric_limits<std::int64_t>::max());
  std::atomic<std::uint64_t> issued{0};
  std::atomic<bool> failed{false};
  std::mutex merge_mutex;
  RunSummary summary;
  const auto started = Clock::now();

  auto stopped = [&] {
    return failed.load() || (options.stop != nullptr && options.stop->load());
  };

  auto worker = [&](const std::string& id, Component& component) {
    RunSummary local;
    std::vector<std::int64_t> due(component.stream_count());
    for (std::size_t s = 0; s < due.size(); ++s) {
      const auto p = component.period_ms(s);
      due[s] = p > 0 ? p : std::numeric_limits<std::int64_t>::max();
    }
    try {
      while (!stopped()) {
        const auto next = std::min_element(due.begin(), due.end());
        if (*next == std::numeric_limits<std::int64_t>::max() || *next > end) break;
        const auto stream = static_cast<std::size_t>(next - due.begin());
        const std::int64_t t = *next;
        // Sleep in short slices so a stop request is honoured promptly.
        const auto deadline = started + std::chrono::milliseconds(t);
        while (!stopped() && Clock::now() < deadline) {
          std::this_thread::sleep_until(
              std::min(deadline, Clock::now() + std::chrono::milliseconds(100)));
        }
        if (stopped()) break;
        if (issued.fetch_add(1) >= budget) break;
        auto emitted = component.emit(stream, t);
        local.add(emitted.category, emitted.label);
        local.last_vtime_ms = std::max(local.last_vtime_ms, t);
        sink.send(ClientRequest{t, id, emitted.category, std::move(emitted.payload),
                                emitted.label});
        due[stream] += component.period_ms(stream);
      }
    } catch (...) {
      failed = true;
    }
    std::lock_guard lock(merge_mutex);
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      for (std::size_t l = 0; l < 2; ++l) summary.counts[c][l] += local.counts[c][l];
    }
    summary.records += local.records;
    summary.last_vtime_ms = std::max(summary.last_vtime_ms, local.last_vtime_ms);
  };

  std::vector<std::thread> threads;
  for (auto& client : clients) {
    for (auto& comp : client.components) {
      threads.emplace_back(worker, std::cref(client.id), std::ref(*comp));
    }
  }
  if (options.on_ready) options.on_ready();
  for (auto& t : threads) t.join();
  sink.close();
  if (failed) throw Error(ErrorKind::SinkUnavailable, "a component failed to deliver requests");
  summary.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return summary;
}

}  // namespace

std::uint64_t RunSummary::intrusions() const {
  std::uint64_t n = 0;
  for (const auto& c : counts) n += c[1];
  return n;
}

void RunSummary::add(DataCategory c, Label l) {
  ++counts[index_of(c)][static_cast<std::size_t>(l)];
  ++records;
}

std::string RunSummary::to_text() const {
  std::ostringstream out;
  out << "records " << records << " (intrusion " << intrusions() << "), last vtime "
      << last_vtime_ms << " ms, wall " << wall_seconds << " s\n";
  for (const auto c : kAllCategories) {
    const auto n = count(c, Label::Normal);
    const auto i = count(c, Label::Intrusion);
    if (n + i == 0) continue;
    out << "  " << to_string(c) << ": normal " << n << ", intrusion " << i << '\n';
  }
  return out.str();
}

std::string RunSummary::to_json() const {
  nlohmann::json j;
  j["records"] = records;
  j["intrusions"] = intrusions();
  j["last_vtime_ms"] = last_vtime_ms;
  j["wall_seconds"] = wall_seconds;
  for (const auto c : kAllCategories) {
    j["categories"][std::string(to_string(c))] = {{"normal", count(c, Label::Normal)},
                                                  {"intrusion", count(c, Label::Intrusion)}};
  }
  return j.dump(2);
}

Client build_client(const ClientSpec& spec, std::uint64_t scenario_seed) {
  Client client;
  client.id = spec.id;
  for (std::size_t k = 0; k < spec.components.size(); ++k) {
    const auto seed = component_seed(scenario_seed, spec.id, k);
    if (const auto* g = std::get_if<GeneratorConfig>(&spec.components[k])) {
      client.components.push_back(std::make_unique<GeneratorComponent>(*g, seed));
    } else {
      client.components.push_back(
          std::make_unique<Sim2dComponent>(std::get<Sim2dConfig>(spec.components[k]), seed));
    }
  }
  return client;
}

std::vector<Client> build_clients(const ScenarioConfig& config) {
  std::vector<const ClientSpec*> order;
  for (const auto& c : config.clients) order.push_back(&c);
  std::sort(order.begin(), order.end(),
            [](const ClientSpec* a, const ClientSpec* b) { return a->id < b->id; });
  std::vector<Client> clients;
  clients.reserve(order.size());
  for (const auto* spec : order) clients.push_back(build_client(*spec, config.seed));
  return clients;
}

RunSummary run(const ScenarioConfig& config, RequestSink& sink, const RunOptions& options) {
  validate(config);
  if (config.mode == RunMode::VirtualTime) return run_virtual(config, sink);
  return run_realtime(config, sink, options);
}

}  // namespace idsbed
