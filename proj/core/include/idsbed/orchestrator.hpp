#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "idsbed/component.hpp"
#include "idsbed/scenario.hpp"
#include "idsbed/transport.hpp"

namespace idsbed {

struct RunSummary {
  std::array<std::array<std::uint64_t, 2>, kCategoryCount> counts{};  // [category][label]
  std::uint64_t records = 0;
  std::int64_t last_vtime_ms = 0;
  double wall_seconds = 0.0;

  std::uint64_t intrusions() const;
  std::uint64_t count(DataCategory c, Label l) const {
    return counts[index_of(c)][static_cast<std::size_t>(l)];
  }
  void add(DataCategory c, Label l);
  std::string to_text() const;
  std::string to_json() const;
};

/// A built client: its id and its components in declaration order.
struct Client {
  std::string id;
  std::vector<std::unique_ptr<Component>> components;
};

/// Builds components with seeds component_seed(scenario seed, client id, index).
Client build_client(const ClientSpec& spec, std::uint64_t scenario_seed);

/// Clients sorted by id (the virtual-time tie-break order).
std::vector<Client> build_clients(const ScenarioConfig& config);

struct RunOptions {
  /// RealTime only: set from another thread to stop early.
  const std::atomic<bool>* stop = nullptr;
  /// RealTime only: called once every component thread is running.
  std::function<void()> on_ready;
};

/// Virtual time: deterministic discrete-event schedule ordered by
/// (vtime, client id, component index, stream index); the first emission of
/// a stream is at one period. Stops after duration_ms (inclusive) or after
/// exactly `records` requests, whichever comes first.
///
/// Real time: one thread per component on wall-clock timers; requests reach
/// the sink in arrival order.
RunSummary run(const ScenarioConfig& config, RequestSink& sink, const RunOptions& options = {});

}  // namespace idsbed
