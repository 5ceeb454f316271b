#pragma once

// Client side of the protocol, shaped like the in-process Environment.

#include "affectively/core/errors.hpp"
#include "affectively/net/protocol.hpp"
#include "affectively/net/socket.hpp"

namespace affectively::net {

class RemoteEnvironment {
 public:
  RemoteEnvironment(const std::string& host, std::uint16_t port) : sock_(LineSocket::connect(host, port)) {}

  // Raw exchange: one line out, one response back. No error mapping.
  Response exchange_line(const std::string& line) {
    sock_.send_line(line);
    std::string reply;
    if (!sock_.read_line(reply)) throw ProtocolError(codes::kInternal, "server closed the connection");
    return parse_response(reply);
  }

  Response request(const Request& req) { return checked(exchange_line(serialize(req))); }

  std::string hello() {
    Request q;
    q.op = Op::Hello;
    return expect(request(q), ResponseType::Hello).game;
  }

  SpecPayload spec() {
    Request q;
    q.op = Op::Spec;
    return expect(request(q), ResponseType::Spec).spec;
  }

  Observation reset(std::uint64_t seed) {
    Request q;
    q.op = Op::Reset;
    q.seed = seed;
    return expect(request(q), ResponseType::Observation).observation;
  }

  StepResult step(const Action& action) {
    Request q;
    q.op = Op::Step;
    q.action = action;
    Response r = expect(request(q), ResponseType::Step);
    last_clamped_ = r.clamped;
    return std::move(r.step);
  }

  bool last_clamped() const { return last_clamped_; }

  void close() {
    if (!sock_.is_open()) return;
    Request q;
    q.op = Op::Close;
    try {
      exchange_line(serialize(q));
    } catch (const std::exception&) {
    }
    sock_.close();
  }

  ~RemoteEnvironment() { close(); }

 private:
  // Error responses become the matching in-process exception types.
  static Response checked(Response r) {
    if (r.type != ResponseType::Error) return r;
    if (r.error_code == codes::kLifecycle) throw LifecycleError(r.error_message);
    if (r.error_code == codes::kValidation) throw ValidationError(r.error_message);
    throw ProtocolError(r.error_code, r.error_message);
  }

  static Response expect(Response r, ResponseType t) {
    if (r.type != t) throw ProtocolError(codes::kMalformed, "unexpected response type " + to_string(r.type));
    return r;
  }

  LineSocket sock_;
  bool last_clamped_ = false;
};

}  // namespace affectively::net
