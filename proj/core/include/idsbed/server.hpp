#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "idsbed/detector.hpp"
#include "idsbed/record.hpp"

namespace idsbed {

/// Append-only log file. Lines are buffered and written in whole-line
/// batches through an O_APPEND descriptor, so an interrupted run leaves only
/// complete records behind.
class LogWriter {
 public:
  explicit LogWriter(const std::filesystem::path& path, std::size_t flush_bytes = 1 << 16);
  ~LogWriter();
  LogWriter(const LogWriter&) = delete;
  LogWriter& operator=(const LogWriter&) = delete;

  void append(std::string_view line);
  void flush();

 private:
  int fd_ = -1;
  std::size_t flush_bytes_;
  std::string buffer_;
};

enum class ServerClock : std::uint8_t {
  Virtual,  // vtime is the request's send time
  Wall,     // vtime is ms since server start, kept non-decreasing
};

struct ServerConfig {
  bool store = true;
  bool detect = false;
  std::filesystem::path store_path;
  Detector* detector = nullptr;
  ServerClock clock = ServerClock::Virtual;
};

struct ServerStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t abstained = 0;
  /// Verdicts against ground truth (detection mode only).
  ScoreReport confusion;
};

using VerdictCallback = std::function<void(const LogRecord&, Verdict)>;

/// Logging server stub. All ingestion is serialized: one writer owns the log
/// and the detector sees records in ingestion order.
class Server {
 public:
  /// Throws ValidationError when neither mode is active and SinkUnavailable
  /// when the store cannot be opened.
  explicit Server(ServerConfig config);

  /// Enriches the request into a LogRecord, stores it and/or feeds the
  /// detector. Invalid requests are counted and rethrown as MalformedRequest.
  LogRecord ingest(const ClientRequest& request);

  /// Wire form of ingest: nullopt (and a rejection) for malformed lines.
  std::optional<LogRecord> ingest_line(std::string_view line);

  void on_verdict(VerdictCallback callback);
  void flush();
  ServerStats stats() const;
  const ServerConfig& config() const { return config_; }

 private:
  std::int64_t assign_vtime(std::int64_t sent_ms);

  ServerConfig config_;
  std::optional<LogWriter> writer_;
  VerdictCallback on_verdict_;
  mutable std::mutex mutex_;
  ServerStats stats_;
  std::int64_t last_vtime_ = 0;
  std::chrono::steady_clock::time_point started_ = std::chrono::steady_clock::now();
};

}  // namespace idsbed
