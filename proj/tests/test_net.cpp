#include <gtest/gtest.h>

#include <thread>

#include "test_support.hpp"

using namespace affectively;
using namespace affectively::net;

namespace {

EnvFactory factory_for(GameId g, std::shared_ptr<const affect::AffectModel> model = nullptr, double lambda = 0.0) {
  return [=] { return testing_support::make_env(g, model, lambda); };
}

struct Running {
  explicit Running(EnvFactory f) : server(std::move(f)) { server.start(); }
  Server server;
};

}  // namespace

TEST(Protocol, RequestRoundTrip) {
  Request hello, spec, reset, step, close;
  spec.op = Op::Spec;
  reset.op = Op::Reset;
  reset.seed = 18446744073709551615ull;
  step.op = Op::Step;
  step.action = {{2, 0, 1}, {-0.125, 0.1 + 0.2}};
  close.op = Op::Close;
  for (const Request& r : {hello, spec, reset, step, close}) EXPECT_EQ(parse_request(serialize(r)), r);
}

TEST(Protocol, ResponseRoundTrip) {
  Response hello;
  hello.game = "heist";
  Response spec;
  spec.type = ResponseType::Spec;
  spec.spec = {"pirates", {3, 2}, 0, 11, 11, 14, 12, 1200, 30, 10, 0.5, 20.1};
  Response obs;
  obs.type = ResponseType::Observation;
  obs.observation = {2, 3, {0, 1, 2, 3, 4, 5}, {1.0 / 3.0, -2.5e-300}};
  Response step;
  step.type = ResponseType::Step;
  step.step.observation = obs.observation;
  step.step.score = 7;
  step.step.behaviour_reward = 0.1;
  step.step.affect_signal = 0.7;
  step.step.affect_reward = 0.7;
  step.step.total_reward = std::nextafter(0.4, 1.0);
  step.step.done = true;
  step.step.affect_emitted = true;
  step.step.tick = 1200;
  step.clamped = true;
  Response bye;
  bye.type = ResponseType::Bye;
  const Response err = error_response(codes::kLifecycle, "step before reset");
  for (const Response& r : {hello, spec, obs, step, bye, err}) EXPECT_EQ(parse_response(serialize(r)), r);
}

TEST(Protocol, RejectsMalformedRequests) {
  auto code_of = [](const std::string& line) {
    try {
      parse_request(line);
    } catch (const ProtocolError& e) {
      return e.code();
    }
    return std::string("ok");
  };
  EXPECT_EQ(code_of("{"), codes::kMalformed);
  EXPECT_EQ(code_of("[1,2]"), codes::kMalformed);
  EXPECT_EQ(code_of(R"({"op":"hello"})"), codes::kMalformed);
  EXPECT_EQ(code_of(R"({"v":"affectively/1","op":"dance"})"), codes::kMalformed);
  EXPECT_EQ(code_of(R"({"v":"affectively/1","op":"reset"})"), codes::kMalformed);
  EXPECT_EQ(code_of(R"({"v":"affectively/1","op":"step","discrete":[1.5]})"), codes::kMalformed);
  EXPECT_EQ(code_of(R"({"v":"affectively/2","op":"hello"})"), codes::kVersion);
  EXPECT_EQ(code_of(R"({"v":"affectively/1","op":"step","discrete":[1]})"), "ok");
}

TEST(Protocol, ClampOnlyTouchesFiniteOutOfRange) {
  Action a{{0}, {1.5, -0.25, -7.0}};
  EXPECT_TRUE(clamp_continuous(a));
  EXPECT_EQ(a.continuous, (std::vector<double>{1.0, -0.25, -1.0}));
  Action b{{0}, {0.5, 1.0}};
  EXPECT_FALSE(clamp_continuous(b));
}

// Remote and local environments driven by the same seed and actions agree bit for bit.
TEST(Loopback, RemoteMatchesLocalExactly) {
  for (GameId g : kAllGames) {
    auto model = testing_support::synthetic_model(g);
    Running srv(factory_for(g, model, 0.5));
    RemoteEnvironment remote("127.0.0.1", srv.server.port());
    auto local = testing_support::make_env(g, model, 0.5);
    EXPECT_EQ(remote.hello(), to_string(g));
    const SpecPayload sp = remote.spec();
    EXPECT_EQ(sp.discrete_branches, local->action_spec().discrete_branches);
    EXPECT_EQ(sp.max_ticks, 1200);
    EXPECT_EQ(sp.lambda, 0.5);
    for (std::uint64_t seed : {3ull, 99ull}) {
      EXPECT_EQ(remote.reset(seed), local->reset(seed));
      Rng rng(seed);
      StepResult a, b;
      int n = 0;
      do {
        const Action act = local->sample_action(rng);
        b = local->step(act);
        a = remote.step(act);
        ASSERT_EQ(a, b) << "tick " << n;
        ++n;
      } while (!b.done && n < 400);
    }
  }
}

TEST(Server, LifecycleAndValidationErrorsOverTheWire) {
  Running srv(factory_for(GameId::Heist));
  RemoteEnvironment remote("127.0.0.1", srv.server.port());
  EXPECT_THROW(remote.step({{0, 0, 0}, {0.0, 0.0}}), LifecycleError);
  remote.reset(1);
  EXPECT_THROW(remote.step({{5, 0, 0}, {0.0, 0.0}}), ValidationError);
  EXPECT_THROW(remote.step({{0, 0, 0}, {std::nan(""), 0.0}}), std::exception);
  EXPECT_NO_THROW(remote.step({{0, 0, 0}, {0.0, 0.0}}));
}

TEST(Server, ClampsContinuousAndFlagsIt) {
  Running srv(factory_for(GameId::Heist));
  RemoteEnvironment remote("127.0.0.1", srv.server.port());
  auto local = testing_support::make_env(GameId::Heist);
  remote.reset(5);
  local->reset(5);
  const StepResult a = remote.step({{1, 1, 0}, {1.5, -0.5}});
  EXPECT_TRUE(remote.last_clamped());
  EXPECT_EQ(a, local->step({{1, 1, 0}, {1.0, -0.5}}));
  remote.step({{1, 1, 0}, {0.5, -0.5}});
  EXPECT_FALSE(remote.last_clamped());
  EXPECT_THROW(local->step({{1, 1, 0}, {1.5, -0.5}}), ValidationError) << "in-process stays strict";
}

TEST(Server, MalformedLineKeepsConnectionOpen) {
  Running srv(factory_for(GameId::SolidRally));
  LineSocket s = LineSocket::connect("127.0.0.1", srv.server.port());
  std::string line;
  s.send_line("this is not json");
  ASSERT_TRUE(s.read_line(line));
  Response r = parse_response(line);
  EXPECT_EQ(r.type, ResponseType::Error);
  EXPECT_EQ(r.error_code, codes::kMalformed);
  s.send_line(serialize(Request{}));
  ASSERT_TRUE(s.read_line(line));
  EXPECT_EQ(parse_response(line).game, "solid");
}

TEST(Server, VersionMismatchClosesAfterError) {
  Running srv(factory_for(GameId::SolidRally));
  LineSocket s = LineSocket::connect("127.0.0.1", srv.server.port());
  std::string line;
  s.send_line(R"({"v":"affectively/0","op":"hello"})");
  ASSERT_TRUE(s.read_line(line));
  const Response r = parse_response(line);
  EXPECT_EQ(r.type, ResponseType::Error);
  EXPECT_EQ(r.error_code, codes::kVersion);
  EXPECT_FALSE(s.read_line(line));
}

TEST(Server, CloseSaysByeAndEnds) {
  Running srv(factory_for(GameId::Pirates));
  LineSocket s = LineSocket::connect("127.0.0.1", srv.server.port());
  std::string line;
  Request q;
  q.op = Op::Close;
  s.send_line(serialize(q));
  ASSERT_TRUE(s.read_line(line));
  EXPECT_EQ(parse_response(line).type, ResponseType::Bye);
  EXPECT_FALSE(s.read_line(line));
}

// Interleaved clients on one server each see exactly their own local replay.
TEST(Server, ConcurrentConnectionsAreIsolated) {
  Running srv(factory_for(GameId::Pirates));
  auto drive = [&](std::uint64_t seed, bool* ok) {
    RemoteEnvironment remote("127.0.0.1", srv.server.port());
    auto local = testing_support::make_env(GameId::Pirates);
    *ok = remote.reset(seed) == local->reset(seed);
    Rng rng(seed);
    for (int i = 0; i < 300 && *ok; ++i) {
      const Action a = local->sample_action(rng);
      *ok = remote.step(a) == local->step(a);
    }
  };
  bool ok[4] = {false, false, false, false};
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) threads.emplace_back(drive, 10 + i, &ok[i]);
  for (auto& t : threads) t.join();
  for (bool b : ok) EXPECT_TRUE(b);
  EXPECT_GE(srv.server.connections_accepted(), 4u);
}
