#pragma once

#include "affectively/core/errors.hpp"
#include "affectively/core/rng.hpp"
#include "affectively/core/spaces.hpp"
#include "affectively/core/game.hpp"
#include "affectively/core/environment.hpp"
#include "affectively/reward/blend.hpp"
#include "affectively/games/pirates.hpp"
#include "affectively/games/heist.hpp"
#include "affectively/games/rally.hpp"
#include "affectively/affect/corpus.hpp"
#include "affectively/affect/knn.hpp"
#include "affectively/affect/schedule.hpp"
#include "affectively/affect/synthetic.hpp"
#include "affectively/agents/mlp.hpp"
#include "affectively/agents/actor_critic.hpp"
#include "affectively/agents/policy.hpp"
#include "affectively/agents/ppo.hpp"
#include "affectively/agents/checkpoint.hpp"
#include "affectively/config.hpp"
#include "affectively/eval/stats.hpp"
#include "affectively/eval/harness.hpp"
#include "affectively/eval/report.hpp"
#include "affectively/net/protocol.hpp"
#include "affectively/net/socket.hpp"
#include "affectively/net/server.hpp"
#include "affectively/net/client.hpp"
