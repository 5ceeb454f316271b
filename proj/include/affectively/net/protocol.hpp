#pragma once

// "affectively/1" wire messages: one JSON object per line. Every request
// gets exactly one response. See README for the field-by-field schema.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "affectively/core/spaces.hpp"

namespace affectively::net {

using json = nlohmann::json;

inline constexpr const char* kProtocolVersion = "affectively/1";

// Error codes carried in error responses.
namespace codes {
inline constexpr const char* kMalformed = "malformed";
inline constexpr const char* kVersion = "version";
inline constexpr const char* kLifecycle = "lifecycle";
inline constexpr const char* kValidation = "validation";
inline constexpr const char* kInternal = "internal";
}  // namespace codes

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string code, const std::string& message) : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

enum class Op { Hello, Spec, Reset, Step, Close };

inline std::string to_string(Op op) {
  switch (op) {
    case Op::Hello: return "hello";
    case Op::Spec: return "spec";
    case Op::Reset: return "reset";
    case Op::Step: return "step";
    case Op::Close: return "close";
  }
  return "?";
}

struct Request {
  std::string version = kProtocolVersion;
  Op op = Op::Hello;
  std::uint64_t seed = 0;  // reset
  Action action;           // step

  bool operator==(const Request&) const = default;
};

struct SpecPayload {
  std::string game;
  std::vector<int> discrete_branches;
  int continuous_count = 0;
  int grid_rows = 0;
  int grid_cols = 0;
  int grid_ids = 0;
  int property_count = 0;
  int max_ticks = 0;
  int window_ticks = 0;
  int ticks_per_second = 0;
  double lambda = 0.0;
  double max_score = 0.0;

  bool operator==(const SpecPayload&) const = default;
};

enum class ResponseType { Hello, Spec, Observation, Step, Bye, Error };

inline std::string to_string(ResponseType t) {
  switch (t) {
    case ResponseType::Hello: return "hello";
    case ResponseType::Spec: return "spec";
    case ResponseType::Observation: return "observation";
    case ResponseType::Step: return "step";
    case ResponseType::Bye: return "bye";
    case ResponseType::Error: return "error";
  }
  return "?";
}

struct Response {
  std::string version = kProtocolVersion;
  ResponseType type = ResponseType::Hello;
  std::string game;          // hello
  SpecPayload spec;          // spec
  Observation observation;   // observation, step
  StepResult step;           // step (its observation field mirrors `observation`)
  bool clamped = false;      // step: a continuous value was clamped into [-1, 1]
  std::string error_code;    // error
  std::string error_message; // error

  bool operator==(const Response&) const = default;
};

inline json observation_to_json(const Observation& o) {
  return {{"rows", o.rows}, {"cols", o.cols}, {"grid", o.grid}, {"properties", o.properties}};
}

inline Observation observation_from_json(const json& j) {
  Observation o;
  o.rows = j.at("rows").get<int>();
  o.cols = j.at("cols").get<int>();
  o.grid = j.at("grid").get<std::vector<int>>();
  o.properties = j.at("properties").get<std::vector<double>>();
  if (o.grid.size() != static_cast<std::size_t>(o.rows) * static_cast<std::size_t>(o.cols)) {
    throw ProtocolError(codes::kMalformed, "observation grid size does not match rows x cols");
  }
  return o;
}

inline std::string serialize(const Request& r) {
  json j{{"v", r.version}, {"op", to_string(r.op)}};
  if (r.op == Op::Reset) j["seed"] = r.seed;
  if (r.op == Op::Step) {
    j["discrete"] = r.action.discrete;
    j["continuous"] = r.action.continuous;
  }
  return j.dump();
}

// Throws ProtocolError(kMalformed) for anything that is not a well-formed
// request of this protocol family, kVersion for another version string.
inline Request parse_request(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ProtocolError(codes::kMalformed, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError(codes::kMalformed, "request must be a JSON object");
  if (!j.contains("v") || !j["v"].is_string()) throw ProtocolError(codes::kMalformed, "missing version field 'v'");
  Request r;
  r.version = j["v"].get<std::string>();
  if (r.version != kProtocolVersion) {
    throw ProtocolError(codes::kVersion,
                        "unsupported protocol version '" + r.version + "', server speaks " + kProtocolVersion);
  }
  if (!j.contains("op") || !j["op"].is_string()) throw ProtocolError(codes::kMalformed, "missing field 'op'");
  const std::string op = j["op"].get<std::string>();
  try {
    if (op == "hello") {
      r.op = Op::Hello;
    } else if (op == "spec") {
      r.op = Op::Spec;
    } else if (op == "reset") {
      r.op = Op::Reset;
      if (!j.contains("seed") || !j["seed"].is_number_integer()) {
        throw ProtocolError(codes::kMalformed, "reset needs an integer 'seed'");
      }
      r.seed = j["seed"].get<std::uint64_t>();
    } else if (op == "step") {
      r.op = Op::Step;
      if (!j.contains("discrete") || !j["discrete"].is_array()) {
        throw ProtocolError(codes::kMalformed, "step needs a 'discrete' array");
      }
      for (const auto& v : j["discrete"]) {
        if (!v.is_number_integer()) throw ProtocolError(codes::kMalformed, "discrete entries must be integers");
        r.action.discrete.push_back(v.get<int>());
      }
      if (j.contains("continuous")) {
        if (!j["continuous"].is_array()) throw ProtocolError(codes::kMalformed, "'continuous' must be an array");
        for (const auto& v : j["continuous"]) {
          if (!v.is_number()) throw ProtocolError(codes::kMalformed, "continuous entries must be numbers");
          r.action.continuous.push_back(v.get<double>());
        }
      }
    } else if (op == "close") {
      r.op = Op::Close;
    } else {
      throw ProtocolError(codes::kMalformed, "unknown op '" + op + "'");
    }
  } catch (const json::exception& e) {
    throw ProtocolError(codes::kMalformed, e.what());
  }
  return r;
}

inline std::string serialize(const Response& r) {
  json j{{"v", r.version}, {"type", to_string(r.type)}};
  switch (r.type) {
    case ResponseType::Hello:
      j["game"] = r.game;
      break;
    case ResponseType::Spec:
      j["game"] = r.spec.game;
      j["discrete"] = r.spec.discrete_branches;
      j["continuous"] = r.spec.continuous_count;
      j["grid"] = {{"rows", r.spec.grid_rows}, {"cols", r.spec.grid_cols}, {"ids", r.spec.grid_ids}};
      j["properties"] = r.spec.property_count;
      j["max_ticks"] = r.spec.max_ticks;
      j["window_ticks"] = r.spec.window_ticks;
      j["ticks_per_second"] = r.spec.ticks_per_second;
      j["lambda"] = r.spec.lambda;
      j["max_score"] = r.spec.max_score;
      break;
    case ResponseType::Observation:
      j["observation"] = observation_to_json(r.observation);
      break;
    case ResponseType::Step:
      j["observation"] = observation_to_json(r.step.observation);
      j["score"] = r.step.score;
      j["behaviour_reward"] = r.step.behaviour_reward;
      j["affect_signal"] = r.step.affect_signal;
      j["affect_reward"] = r.step.affect_reward;
      j["total_reward"] = r.step.total_reward;
      j["done"] = r.step.done;
      j["affect_emitted"] = r.step.affect_emitted;
      j["tick"] = r.step.tick;
      j["clamped"] = r.clamped;
      break;
    case ResponseType::Bye:
      break;
    case ResponseType::Error:
      j["code"] = r.error_code;
      j["message"] = r.error_message;
      break;
  }
  return j.dump();
}

inline Response parse_response(const std::string& line) {
  try {
    const json j = json::parse(line);
    Response r;
    r.version = j.at("v").get<std::string>();
    const std::string type = j.at("type").get<std::string>();
    if (type == "hello") {
      r.type = ResponseType::Hello;
      r.game = j.at("game").get<std::string>();
    } else if (type == "spec") {
      r.type = ResponseType::Spec;
      r.spec.game = j.at("game").get<std::string>();
      r.spec.discrete_branches = j.at("discrete").get<std::vector<int>>();
      r.spec.continuous_count = j.at("continuous").get<int>();
      r.spec.grid_rows = j.at("grid").at("rows").get<int>();
      r.spec.grid_cols = j.at("grid").at("cols").get<int>();
      r.spec.grid_ids = j.at("grid").at("ids").get<int>();
      r.spec.property_count = j.at("properties").get<int>();
      r.spec.max_ticks = j.at("max_ticks").get<int>();
      r.spec.window_ticks = j.at("window_ticks").get<int>();
      r.spec.ticks_per_second = j.at("ticks_per_second").get<int>();
      r.spec.lambda = j.at("lambda").get<double>();
      r.spec.max_score = j.at("max_score").get<double>();
    } else if (type == "observation") {
      r.type = ResponseType::Observation;
      r.observation = observation_from_json(j.at("observation"));
    } else if (type == "step") {
      r.type = ResponseType::Step;
      r.step.observation = observation_from_json(j.at("observation"));
      r.step.score = j.at("score").get<double>();
      r.step.behaviour_reward = j.at("behaviour_reward").get<double>();
      r.step.affect_signal = j.at("affect_signal").get<double>();
      r.step.affect_reward = j.at("affect_reward").get<double>();
      r.step.total_reward = j.at("total_reward").get<double>();
      r.step.done = j.at("done").get<bool>();
      r.step.affect_emitted = j.at("affect_emitted").get<bool>();
      r.step.tick = j.at("tick").get<int>();
      r.clamped = j.at("clamped").get<bool>();
    } else if (type == "bye") {
      r.type = ResponseType::Bye;
    } else if (type == "error") {
      r.type = ResponseType::Error;
      r.error_code = j.at("code").get<std::string>();
      r.error_message = j.at("message").get<std::string>();
    } else {
      throw ProtocolError(codes::kMalformed, "unknown response type '" + type + "'");
    }
    return r;
  } catch (const json::exception& e) {
    throw ProtocolError(codes::kMalformed, std::string("bad response: ") + e.what());
  }
}

inline Response error_response(const std::string& code, const std::string& message) {
  Response r;
  r.type = ResponseType::Error;
  r.error_code = code;
  r.error_message = message;
  return r;
}

// Lenient server-side action handling: continuous values are clamped into
// [-1, 1]; non-finite values and discrete indices are still rejected.
inline bool clamp_continuous(Action& a) {
  bool clamped = false;
  for (double& v : a.continuous) {
    if (!std::isfinite(v)) continue;
    if (v > 1.0) {
      v = 1.0;
      clamped = true;
    } else if (v < -1.0) {
      v = -1.0;
      clamped = true;
    }
  }
  return clamped;
}

}  // namespace affectively::net
