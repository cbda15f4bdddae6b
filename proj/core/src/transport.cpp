#include "idsbed/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

namespace idsbed {

namespace {

sockaddr_in to_sockaddr(const Endpoint& endpoint) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(endpoint.port);
  const std::string host = endpoint.host == "localhost" ? "127.0.0.1" : endpoint.host;
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw Error(ErrorKind::ValidationError, "not an IPv4 address: " + endpoint.host);
  }
  return addr;
}

std::string errno_text() { return std::strerror(errno); }

}  // namespace

void DirectTransport::send(const ClientRequest& request) {
  try {
    server_.ingest(request);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MalformedRequest) throw;
  }
}

QueuedTransport::QueuedTransport(Server& server) : server_(server) {
  consumer_ = std::thread([this] { drain(); });
}

QueuedTransport::~QueuedTransport() { close(); }

void QueuedTransport::send(const ClientRequest& request) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) throw Error(ErrorKind::SinkUnavailable, "queue is closed");
    queue_.push_back(request);
  }
  ready_.notify_one();
}

void QueuedTransport::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  ready_.notify_one();
  if (consumer_.joinable()) consumer_.join();
}

void QueuedTransport::drain() {
  std::deque<ClientRequest> batch;
  while (true) {
    {
      std::unique_lock lock(mutex_);
      ready_.wait(lock, [this] { return closed_ || !queue_.empty(); });
      if (queue_.empty() && closed_) return;
      batch.swap(queue_);
    }
    for (const auto& request : batch) {
      try {
        server_.ingest(request);
      } catch (const Error&) {
        // Rejections are already counted by the server.
      }
    }
    batch.clear();
  }
}

Endpoint parse_endpoint(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorKind::ValidationError, "expected host:port, got '" + std::string(text) + "'");
  }
  Endpoint ep;
  ep.host = std::string(text.substr(0, colon));
  const auto port = text.substr(colon + 1);
  unsigned value = 0;
  const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc{} || ptr != port.data() + port.size() || value > 65535) {
    throw Error(ErrorKind::ValidationError, "bad port in '" + std::string(text) + "'");
  }
  ep.port = static_cast<std::uint16_t>(value);
  to_sockaddr(ep);
  return ep;
}

SocketServer::SocketServer(Server& server, const Endpoint& endpoint) : server_(server) {
  const auto addr = to_sockaddr(endpoint);
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw Error(ErrorKind::SinkUnavailable, "socket: " + errno_text());
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(listen_fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) < 0 ||
      ::listen(listen_fd_, 64) < 0) {
    const auto why = errno_text();
    ::close(listen_fd_);
    throw Error(ErrorKind::SinkUnavailable,
                "cannot listen on " + endpoint.host + ":" + std::to_string(endpoint.port) +
                    ": " + why);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  acceptor_ = std::thread([this] { accept_loop(); });
}

SocketServer::~SocketServer() { stop(); }

void SocketServer::accept_loop() {
  while (true) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 50);
    if (ready < 0 && errno != EINTR) return;
    if (ready <= 0) {
      if (stopping_) return;
      continue;
    }
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) continue;
    std::lock_guard lock(conn_mutex_);
    connections_.emplace_back([this, fd] { serve(fd); });
  }
}

void SocketServer::serve(int fd) {
  std::string pending;
  char chunk[1 << 16];
  while (true) {
    const ssize_t n = ::read(fd, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    pending.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (auto nl = pending.find('\n', start); nl != std::string::npos;
         nl = pending.find('\n', start)) {
      server_.ingest_line(std::string_view(pending).substr(start, nl - start));
      start = nl + 1;
    }
    pending.erase(0, start);
  }
  if (!pending.empty()) server_.ingest_line(pending);
  ::close(fd);
}

void SocketServer::stop() {
  if (listen_fd_ < 0) return;
  stopping_ = true;
  if (acceptor_.joinable()) acceptor_.join();
  std::list<std::thread> conns;
  {
    std::lock_guard lock(conn_mutex_);
    conns.swap(connections_);
  }
  for (auto& t : conns) t.join();
  ::close(listen_fd_);
  listen_fd_ = -1;
}

SocketTransport::SocketTransport(const Endpoint& endpoint) {
  const auto addr = to_sockaddr(endpoint);
  fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd_ < 0) throw Error(ErrorKind::SinkUnavailable, "socket: " + errno_text());
  if (::connect(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) < 0) {
    const auto why = errno_text();
    ::close(fd_);
    fd_ = -1;
    throw Error(ErrorKind::SinkUnavailable, "cannot connect to " + endpoint.host + ":" +
                                                std::to_string(endpoint.port) + ": " + why);
  }
  buffer_.reserve(1 << 16);
}

SocketTransport::~SocketTransport() {
  try {
    close();
  } catch (...) {
  }
}

void SocketTransport::send(const ClientRequest& request) {
  std::lock_guard lock(mutex_);
  if (fd_ < 0) throw Error(ErrorKind::SinkUnavailable, "transport is closed");
  buffer_.append(serialize_request(request));
  buffer_.push_back('\n');
  if (buffer_.size() >= (1 << 16)) flush_locked();
}

void SocketTransport::flush_locked() {
  const char* data = buffer_.data();
  std::size_t left = buffer_.size();
  while (left > 0) {
    const ssize_t n = ::send(fd_, data, left, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::SinkUnavailable, "send failed: " + errno_text());
    }
    data += n;
    left -= static_cast<std::size_t>(n);
  }
  buffer_.clear();
}

void SocketTransport::close() {
  std::lock_guard lock(mutex_);
  if (fd_ < 0) return;
  flush_locked();
  ::shutdown(fd_, SHUT_WR);
  ::close(fd_);
  fd_ = -1;
}

}  // namespace idsbed
