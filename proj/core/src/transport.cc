/*
 * Copyright 2026 The Photoveil Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "photoveil/transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "photoveil/error.h"

namespace photoveil {

namespace {

[[noreturn]] void SocketFail(const std::string& what) {
  Fail(ErrorCode::kIoError, what + ": " + std::strerror(errno));
}

// Returns false on clean EOF before the first byte.
bool ReadExact(int fd, std::uint8_t* out, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::recv(fd, out + got, n - got, 0);
    if (r == 0) {
      if (got == 0) return false;
      Fail(ErrorCode::kProtocolViolation, "connection closed mid-frame");
    }
    if (r < 0) {
      if (errno == EINTR) continue;
      SocketFail("recv");
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

void WriteAll(int fd, ByteSpan data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t r = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (r < 0) {
      if (errno == EINTR) continue;
      SocketFail("send");
    }
    sent += static_cast<std::size_t>(r);
  }
}

// Reads one frame; nullopt on clean EOF.
std::optional<wire::Message> ReadFrame(int fd) {
  std::uint8_t header[4];
  if (!ReadExact(fd, header, 4)) return std::nullopt;
  const std::uint32_t len = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) |
                            (std::uint32_t{header[2]} << 8) | std::uint32_t{header[3]};
  if (len > wire::kMaxFrameBytes) Fail(ErrorCode::kProtocolViolation, "frame too large");
  std::string text(len, '\0');
  if (len > 0 && !ReadExact(fd, reinterpret_cast<std::uint8_t*>(text.data()), len)) {
    Fail(ErrorCode::kProtocolViolation, "connection closed mid-frame");
  }
  return wire::DecodeBody(text);
}

class Fd {
 public:
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }

 private:
  int fd_;
};

addrinfo* Resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
  if (rc != 0) {
    Fail(ErrorCode::kIoError, "cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  return res;
}

}  // namespace

wire::Message LoopbackTransport::Call(const wire::Message& request) {
  const Bytes req = wire::EncodeFrame(request);
  const wire::Message reply = service_.Handle(wire::DecodeFrame(req));
  Bytes resp = wire::EncodeFrame(reply);
  wire::Message out = wire::DecodeFrame(resp);
  if (record_) {
    frames_.push_back(req);
    frames_.push_back(std::move(resp));
  }
  return out;
}

TcpTransport::TcpTransport(std::string host, std::uint16_t port)
    : host_(std::move(host)), port_(port) {}

wire::Message TcpTransport::Call(const wire::Message& request) {
  addrinfo* res = Resolve(host_, port_, false);
  int fd = -1;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    SocketFail("cannot connect to " + host_ + ":" + std::to_string(port_));
  }
  Fd conn(fd);
  WriteAll(conn.get(), wire::EncodeFrame(request));
  std::optional<wire::Message> reply = ReadFrame(conn.get());
  if (!reply) Fail(ErrorCode::kProtocolViolation, "server closed the connection");
  return std::move(*reply);
}

TcpServer::TcpServer(Service& service, std::string host, std::uint16_t port)
    : service_(service), host_(std::move(host)), port_(port) {}

TcpServer::~TcpServer() { Stop(); }

void TcpServer::Start() {
  addrinfo* res = Resolve(host_, port_, true);
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    listen_fd_ = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (listen_fd_ < 0) continue;
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(listen_fd_, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(listen_fd_, 64) == 0) {
      break;
    }
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  ::freeaddrinfo(res);
  if (listen_fd_ < 0) SocketFail("cannot listen on " + host_ + ":" + std::to_string(port_));
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = addr.ss_family == AF_INET6
              ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
              : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  running_ = true;
  acceptor_ = std::thread([this] { AcceptLoop(); });
}

void TcpServer::AcceptLoop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard lock(workers_mu_);
    if (!running_) {
      ::close(fd);
      break;
    }
    open_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { Serve(fd); });
  }
}

void TcpServer::Serve(int fd) {
  try {
    while (true) {
      std::optional<wire::Message> req = ReadFrame(fd);
      if (!req) break;
      WriteAll(fd, wire::EncodeFrame(service_.Handle(*req)));
    }
  } catch (const Error& e) {
    try {
      WriteAll(fd, wire::EncodeFrame(wire::ErrorMessage(e)));
    } catch (const Error&) {
    }
  }
  std::lock_guard lock(workers_mu_);
  auto it = std::find(open_fds_.begin(), open_fds_.end(), fd);
  if (it != open_fds_.end()) {
    open_fds_.erase(it);
    ::close(fd);
  }
}

void TcpServer::Stop() {
  if (!running_.exchange(false)) return;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (std::thread& t : workers) t.join();
}

void TcpServer::Wait() {
  if (acceptor_.joinable()) acceptor_.join();
}

}  // namespace photoveil
