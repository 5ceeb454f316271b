#pragma once

// TCP server: one thread and one Environment per connection. Sessions share
// only what the factory hands out (normally the immutable affect model).

#include <poll.h>

#include <atomic>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <thread>

#include "affectively/core/environment.hpp"
#include "affectively/net/protocol.hpp"
#include "affectively/net/socket.hpp"

namespace affectively::net {

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

inline SpecPayload describe(Environment& probe) {
  SpecPayload s;
  s.game = to_string(probe.game_id());
  s.discrete_branches = probe.action_spec().discrete_branches;
  s.continuous_count = probe.action_spec().continuous_count;
  const Observation o = probe.reset(0);
  s.grid_rows = o.rows;
  s.grid_cols = o.cols;
  s.grid_ids = probe.grid_id_count();
  s.property_count = static_cast<int>(o.properties.size());
  s.max_ticks = probe.clock().max_ticks();
  s.window_ticks = probe.clock().window_ticks();
  s.ticks_per_second = probe.clock().ticks_per_second();
  s.lambda = probe.lambda();
  s.max_score = probe.max_score();
  return s;
}

// Protocol state machine for one connection, independent of the transport.
class Session {
 public:
  explicit Session(EnvFactory factory) : factory_(std::move(factory)) {}

  // Sets *close_after when the connection must be closed after replying.
  Response handle(const std::string& line, bool* close_after) {
    *close_after = false;
    Request req;
    try {
      req = parse_request(line);
    } catch (const ProtocolError& e) {
      if (e.code() == codes::kVersion) *close_after = true;
      return error_response(e.code(), e.what());
    }
    try {
      return dispatch(req, close_after);
    } catch (const LifecycleError& e) {
      return error_response(codes::kLifecycle, e.what());
    } catch (const ValidationError& e) {
      return error_response(codes::kValidation, e.what());
    } catch (const std::exception& e) {
      return error_response(codes::kInternal, e.what());
    }
  }

 private:
  Environment& env() {
    if (!env_) env_ = factory_();
    return *env_;
  }

  Response dispatch(const Request& req, bool* close_after) {
    Response r;
    switch (req.op) {
      case Op::Hello:
        r.type = ResponseType::Hello;
        r.game = to_string(env().game_id());
        break;
      case Op::Spec: {
        r.type = ResponseType::Spec;
        auto probe = factory_();
        r.spec = describe(*probe);
        break;
      }
      case Op::Reset:
        r.type = ResponseType::Observation;
        r.observation = env().reset(req.seed);
        break;
      case Op::Step: {
        Action a = req.action;
        const bool clamped = clamp_continuous(a);
        r.type = ResponseType::Step;
        r.step = env().step(a);
        r.clamped = clamped;
        break;
      }
      case Op::Close:
        r.type = ResponseType::Bye;
        *close_after = true;
        break;
    }
    return r;
  }

  EnvFactory factory_;
  std::unique_ptr<Environment> env_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks an ephemeral port
  int backlog = 16;
};

class Server {
 public:
  Server(EnvFactory factory, ServerOptions options = {}) : factory_(std::move(factory)), options_(std::move(options)) {}
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;
  ~Server() { stop(); }

  void start() {
    if (running_) return;
    bind_and_listen();
    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
  }

  std::uint16_t port() const { return bound_port_; }
  const std::string& host() const { return options_.host; }
  bool running() const { return running_; }
  std::size_t connections_accepted() const { return accepted_; }

  // Blocks until stop() is called from another thread.
  void wait() {
    if (accept_thread_.joinable()) accept_thread_.join();
  }

  void stop() {
    if (!running_.exchange(false)) {
      if (accept_thread_.joinable()) accept_thread_.join();
      return;
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    std::list<std::shared_ptr<Connection>> conns;
    {
      std::lock_guard lock(mu_);
      conns.swap(connections_);
    }
    for (auto& c : conns) c->sock.shutdown();
    for (auto& c : conns) {
      if (c->thread.joinable()) c->thread.join();
    }
    if (listen_fd_ >= 0) {
      ::close(listen_fd_);
      listen_fd_ = -1;
    }
  }

 private:
  struct Connection {
    LineSocket sock;
    std::thread thread;
    std::atomic<bool> finished{false};
  };

  void bind_and_listen() {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(options_.port);
    const char* host = options_.host.empty() ? nullptr : options_.host.c_str();
    if (int rc = ::getaddrinfo(host, service.c_str(), &hints, &res); rc != 0) {
      throw std::runtime_error("cannot resolve bind address " + options_.host + ": " + ::gai_strerror(rc));
    }
    int fd = -1;
    int last_errno = 0;
    for (addrinfo* p = res; p != nullptr; p = p->ai_next) {
      fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
      if (fd < 0) {
        last_errno = errno;
        continue;
      }
      int one = 1;
      ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
      if (::bind(fd, p->ai_addr, p->ai_addrlen) == 0 && ::listen(fd, options_.backlog) == 0) break;
      last_errno = errno;
      ::close(fd);
      fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) {
      errno = last_errno;
      throw socket_error("cannot bind " + options_.host + ":" + service);
    }
    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    if (addr.ss_family == AF_INET) {
      bound_port_ = ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
    } else {
      bound_port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
    }
    listen_fd_ = fd;
  }

  void accept_loop() {
    while (running_) {
      pollfd pfd{listen_fd_, POLLIN, 0};
      int rc = ::poll(&pfd, 1, 100);
      reap();
      if (rc <= 0) continue;
      int cfd = ::accept(listen_fd_, nullptr, nullptr);
      if (cfd < 0) continue;
      auto conn = std::make_shared<Connection>();
      conn->sock = LineSocket(cfd);
      conn->sock.set_nodelay();
      ++accepted_;
      std::lock_guard lock(mu_);
      connections_.push_back(conn);
      conn->thread = std::thread([this, conn] { serve(*conn); });
    }
  }

  void serve(Connection& c) {
    Session session(factory_);
    std::string line;
    try {
      while (c.sock.read_line(line)) {
        if (line.empty()) continue;
        bool close_after = false;
        c.sock.send_line(serialize(session.handle(line, &close_after)));
        if (close_after) break;
      }
    } catch (const std::exception&) {
      // peer went away or sent an oversized line; drop the connection
    }
    c.sock.shutdown();
    c.finished = true;
  }

  void reap() {
    std::lock_guard lock(mu_);
    for (auto it = connections_.begin(); it != connections_.end();) {
      if ((*it)->finished) {
        if ((*it)->thread.joinable()) (*it)->thread.join();
        it = connections_.erase(it);
      } else {
        ++it;
      }
    }
  }

  EnvFactory factory_;
  ServerOptions options_;
  int listen_fd_ = -1;
  std::uint16_t bound_port_ = 0;
  std::atomic<bool> running_{false};
  std::atomic<std::size_t> accepted_{0};
  std::thread accept_thread_;
  std::mutex mu_;
  std::list<std::shared_ptr<Connection>> connections_;
};

}  // namespace affectively::net
