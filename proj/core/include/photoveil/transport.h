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

#ifndef PHOTOVEIL_TRANSPORT_H_
#define PHOTOVEIL_TRANSPORT_H_

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "photoveil/service.h"
#include "photoveil/wire.h"

namespace photoveil {

class Transport {
 public:
  virtual ~Transport() = default;
  // Sends one request frame and returns the reply (possibly an ERROR).
  virtual wire::Message Call(const wire::Message& request) = 0;
};

// In-process transport that still round-trips every message through its
// byte encoding. Optionally keeps the frames for transcript checks.
class LoopbackTransport final : public Transport {
 public:
  explicit LoopbackTransport(Service& service, bool record = false)
      : service_(service), record_(record) {}

  wire::Message Call(const wire::Message& request) override;

  // Alternating request and reply frames.
  const std::vector<Bytes>& frames() const { return frames_; }

 private:
  Service& service_;
  bool record_;
  std::vector<Bytes> frames_;
};

// One TCP connection per call.
class TcpTransport final : public Transport {
 public:
  TcpTransport(std::string host, std::uint16_t port);
  wire::Message Call(const wire::Message& request) override;

 private:
  std::string host_;
  std::uint16_t port_;
};

// Serves length-prefixed frames; each connection gets its own thread and
// may carry any number of requests. The service must be thread-safe.
class TcpServer {
 public:
  // Port 0 picks a free port; see port() after Start().
  TcpServer(Service& service, std::string host, std::uint16_t port);
  ~TcpServer();

  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  void Start();
  void Stop();
  // Blocks until Stop() is called from another thread.
  void Wait();

  std::uint16_t port() const { return port_; }

 private:
  void AcceptLoop();
  void Serve(int fd);

  Service& service_;
  std::string host_;
  std::uint16_t port_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex workers_mu_;
  std::vector<std::thread> workers_;
  std::vector<int> open_fds_;
};

}  // namespace photoveil

#endif  // PHOTOVEIL_TRANSPORT_H_
