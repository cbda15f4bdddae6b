#include "idsbed/server.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

namespace idsbed {

LogWriter::LogWriter(const std::filesystem::path& path, std::size_t flush_bytes)
    : flush_bytes_(flush_bytes) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorKind::SinkUnavailable,
                "cannot open store " + path.string() + ": " + std::strerror(errno));
  }
  buffer_.reserve(flush_bytes_ + 256);
}

LogWriter::~LogWriter() {
  try {
    flush();
  } catch (...) {
  }
  if (fd_ >= 0) ::close(fd_);
}

void LogWriter::append(std::string_view line) {
  buffer_.append(line);
  buffer_.push_back('\n');
  if (buffer_.size() >= flush_bytes_) flush();
}

void LogWriter::flush() {
  const char* data = buffer_.data();
  std::size_t left = buffer_.size();
  while (left > 0) {
    const ssize_t n = ::write(fd_, data, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::Io, std::string("log write failed: ") + std::strerror(errno));
    }
    data += n;
    left -= static_cast<std::size_t>(n);
  }
  buffer_.clear();
}

Server::Server(ServerConfig config) : config_(std::move(config)) {
  if (!config_.store && !config_.detect) {
    throw Error(ErrorKind::ValidationError, "server needs store and/or detect mode");
  }
  if (config_.detect && config_.detector == nullptr) {
    throw Error(ErrorKind::ValidationError, "detect mode needs a detector");
  }
  if (config_.store) writer_.emplace(config_.store_path);
}

std::int64_t Server::assign_vtime(std::int64_t sent_ms) {
  if (config_.clock == ServerClock::Virtual) return sent_ms;
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started_)
                           .count();
  last_vtime_ = std::max<std::int64_t>(last_vtime_, elapsed);
  return last_vtime_;
}

LogRecord Server::ingest(const ClientRequest& request) {
  std::lock_guard lock(mutex_);
  LogRecord record{0, request.client_id, request.category, request.payload, request.label};
  try {
    record.vtime_ms = std::max<std::int64_t>(0, request.sent_ms);
    validate(record);
  } catch (const Error& e) {
    ++stats_.rejected;
    throw Error(ErrorKind::MalformedRequest, e.what());
  }
  record.vtime_ms = assign_vtime(request.sent_ms);
  ++stats_.accepted;
  if (writer_) writer_->append(serialize_record(record));
  if (config_.detect) {
    Verdict verdict = Verdict::Abstain;
    try {
      verdict = config_.detector->classify(observe(record));
    } catch (const std::exception&) {
      verdict = Verdict::Abstain;
    }
    if (verdict == Verdict::Abstain) ++stats_.abstained;
    stats_.confusion.add(verdict, record.label);
    if (on_verdict_) on_verdict_(record, verdict);
  }
  return record;
}

std::optional<LogRecord> Server::ingest_line(std::string_view line) {
  ClientRequest request;
  try {
    request = parse_request(line);
  } catch (const Error&) {
    std::lock_guard lock(mutex_);
    ++stats_.rejected;
    return std::nullopt;
  }
  try {
    return ingest(request);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MalformedRequest) return std::nullopt;
    throw;
  }
}

void Server::on_verdict(VerdictCallback callback) {
  std::lock_guard lock(mutex_);
  on_verdict_ = std::move(callback);
}

void Server::flush() {
  std::lock_guard lock(mutex_);
  if (writer_) writer_->flush();
}

ServerStats Server::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

}  // namespace idsbed
