#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <list>
#include <mutex>
#include <string>
#include <thread>

#include "idsbed/record.hpp"
#include "idsbed/server.hpp"

namespace idsbed {

/// Where clients send their requests.
class RequestSink {
 public:
  virtual ~RequestSink() = default;
  virtual void send(const ClientRequest& request) = 0;
  /// Blocks until every request sent so far has been delivered.
  virtual void close() {}
};

/// In-process call into the server on the sender's thread.
class DirectTransport final : public RequestSink {
 public:
  explicit DirectTransport(Server& server) : server_(server) {}
  void send(const ClientRequest& request) override;

 private:
  Server& server_;
};

/// Adapts a callable; used by experiments that consume requests in memory.
class CallbackSink final : public RequestSink {
 public:
  explicit CallbackSink(std::function<void(const ClientRequest&)> fn) : fn_(std::move(fn)) {}
  void send(const ClientRequest& request) override { fn_(request); }

 private:
  std::function<void(const ClientRequest&)> fn_;
};

/// Multi-producer queue drained by one consumer thread into the server.
class QueuedTransport final : public RequestSink {
 public:
  explicit QueuedTransport(Server& server);
  ~QueuedTransport() override;

  void send(const ClientRequest& request) override;
  void close() override;

 private:
  void drain();

  Server& server_;
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<ClientRequest> queue_;
  bool closed_ = false;
  std::thread consumer_;
};

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

/// Parses "host:port"; throws ValidationError.
Endpoint parse_endpoint(std::string_view text);

/// TCP listener feeding line-delimited requests into the server. Each
/// connection is read on its own thread; ingestion itself is serialized by
/// the server.
class SocketServer {
 public:
  SocketServer(Server& server, const Endpoint& endpoint);
  ~SocketServer();
  SocketServer(const SocketServer&) = delete;
  SocketServer& operator=(const SocketServer&) = delete;

  /// Actual bound port (useful with port 0).
  std::uint16_t port() const { return port_; }

  /// Stops accepting and waits for open connections to reach end of stream.
  void stop();

 private:
  void accept_loop();
  void serve(int fd);

  Server& server_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex conn_mutex_;
  std::list<std::thread> connections_;
};

/// Client side of the socket transport. One connection shared by all
/// senders; writes are buffered and serialized.
class SocketTransport final : public RequestSink {
 public:
  /// Throws SinkUnavailable when the endpoint does not accept connections.
  explicit SocketTransport(const Endpoint& endpoint);
  ~SocketTransport() override;

  void send(const ClientRequest& request) override;
  void close() override;

 private:
  void flush_locked();

  int fd_ = -1;
  std::mutex mutex_;
  std::string buffer_;
};

}  // namespace idsbed
