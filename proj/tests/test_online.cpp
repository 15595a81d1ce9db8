#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "skyrover/errors.hpp"
#include "skyrover/online_policy.hpp"

using namespace skyrover;

namespace {

struct Team {
  OccupancyGrid3D grid;
  std::vector<Agent> agents;
  std::vector<Cell> current;

  WorldView view() const { return {&grid, agents, current}; }
};

Team line(int n, std::vector<Agent> agents) {
  Team t{OccupancyGrid3D({0, 0, 0}, 1.0, n, 1, 1), std::move(agents), {}};
  for (const auto& a : t.agents) t.current.push_back(a.start);
  return t;
}

Agent agv(int id, int s, int g) { return {id, AgentKind::AGV, {s, 0, 0}, {g, 0, 0}}; }

}  // namespace

TEST(Shield, ContestedCellGoesToLowestId) {
  auto t = line(3, {agv(4, 0, 2), agv(2, 2, 0)});
  auto out = shield_joint_move(t.view(), {{{1, 0, 0}}, {{1, 0, 0}}});
  EXPECT_EQ(out[0], (Cell{0, 0, 0}));  // id 4 falls back
  EXPECT_EQ(out[1], (Cell{1, 0, 0}));
}

TEST(Shield, WaitingOccupantKeepsItsCell) {
  auto t = line(3, {agv(0, 0, 2), agv(1, 1, 1)});
  auto out = shield_joint_move(t.view(), {{{1, 0, 0}}, {}});
  EXPECT_EQ(out[0], (Cell{0, 0, 0}));
  EXPECT_EQ(out[1], (Cell{1, 0, 0}));
}

TEST(Shield, FollowIntoVacatedCell) {
  auto t = line(3, {agv(0, 0, 2), agv(1, 1, 2)});
  auto out = shield_joint_move(t.view(), {{{1, 0, 0}}, {{2, 0, 0}}});
  EXPECT_EQ(out[0], (Cell{1, 0, 0}));
  EXPECT_EQ(out[1], (Cell{2, 0, 0}));
}

TEST(Shield, BlockedChainFallsBackTogether) {
  // 2 wants 1's cell, 1 wants 0's cell, 0 waits: everyone stays
  auto t = line(4, {agv(0, 1, 1), agv(1, 2, 0), agv(2, 3, 0)});
  auto out = shield_joint_move(t.view(), {{}, {{1, 0, 0}}, {{2, 0, 0}}});
  EXPECT_EQ(out, t.current);
}

TEST(Shield, SwapHigherIdYields) {
  OccupancyGrid3D g({0, 0, 0}, 1.0, 2, 2, 1);
  std::vector<Agent> a{{0, AgentKind::AGV, {0, 0, 0}, {1, 0, 0}}, {1, AgentKind::AGV, {1, 0, 0}, {0, 0, 0}}};
  Team t{g, a, {a[0].start, a[1].start}};
  auto out = shield_joint_move(t.view(), {{{1, 0, 0}, {0, 1, 0}}, {{0, 0, 0}, {1, 1, 0}}});
  // 1 sidesteps, 0 then follows into the vacated cell
  EXPECT_EQ(out[1], (Cell{1, 1, 0}));
  EXPECT_EQ(out[0], (Cell{1, 0, 0}));
  // without a sidestep 1 waits, and 0 cannot enter a waiting occupant's cell
  out = shield_joint_move(t.view(), {{{1, 0, 0}}, {{0, 0, 0}}});
  EXPECT_EQ(out, t.current);
}

TEST(Shield, IllegalCandidatesSkipped) {
  OccupancyGrid3D g({0, 0, 0}, 1.0, 3, 3, 2);
  g.set({1, 0, 0}, true);
  std::vector<Agent> a{{0, AgentKind::AGV, {0, 0, 0}, {2, 0, 0}}};
  Team t{g, a, {a[0].start}};
  // obstacle, AGV climb, teleport, out of bounds, then a legal one
  auto out = shield_joint_move(t.view(), {{{1, 0, 0}, {0, 0, 1}, {2, 2, 0}, {-1, 0, 0}, {0, 1, 0}}});
  EXPECT_EQ(out[0], (Cell{0, 1, 0}));
}

TEST(Shield, ResultAlwaysConflictFree) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = oracle::random_grid(rng, 5, 5, 2, 0.2);
    auto agents = oracle::random_agents(rng, g, 5);
    if (!agents) continue;
    Team t{g, *agents, {}};
    for (const auto& a : t.agents) t.current.push_back(a.start);
    std::vector<std::vector<Cell>> cand(t.agents.size());
    for (std::size_t n = 0; n < cand.size(); ++n) {
      auto nb = oracle::neighbours(g, t.agents[n].kind, t.current[n]);
      std::shuffle(nb.begin(), nb.end(), rng);
      cand[n] = nb;
    }
    auto out = shield_joint_move(t.view(), cand);
    std::vector<Path> paths;
    for (std::size_t n = 0; n < out.size(); ++n) {
      EXPECT_TRUE(MotionModel::for_kind(t.agents[n].kind).is_legal(t.current[n], out[n]));
      paths.push_back({t.agents[n].id, {t.current[n], out[n]}});
    }
    EXPECT_TRUE(oracle::brute_conflicts(paths).empty());
  }
}

TEST(Shield, Contracts) {
  auto t = line(3, {agv(0, 0, 2), agv(1, 1, 1)});
  EXPECT_THROW(shield_joint_move(t.view(), {{}}), ContractError);
  t.current[1] = t.current[0];
  EXPECT_THROW(shield_joint_move(t.view(), {{}, {}}), ContractError);
}

TEST(Policies, Registry) {
  auto names = available_policies();
  ASSERT_EQ(names.size(), 2u);
  for (const auto& n : names) EXPECT_EQ(make_policy(n)->name(), n);
  EXPECT_THROW(make_policy("learned"), InvalidInputError);
}

class PolicyRun : public ::testing::TestWithParam<std::string> {};

TEST_P(PolicyRun, SingleAgentDescends) {
  OccupancyGrid3D g({0, 0, 0}, 1.0, 8, 6, 4);
  std::vector<Agent> a{{0, AgentKind::UAV, {0, 0, 0}, {7, 5, 3}}};
  auto policy = make_policy(GetParam());
  policy->load(g, a, 1);
  std::vector<Cell> cur{a[0].start};
  for (int tick = 0; tick < 15; ++tick) {
    auto next = online_policy_step(*policy, WorldView{&g, a, cur});
    EXPECT_EQ(manhattan(next[0], a[0].goal), manhattan(a[0].start, a[0].goal) - tick - 1);
    cur = next;
  }
  EXPECT_EQ(cur[0], a[0].goal);
}

TEST_P(PolicyRun, IndependentAgentsArriveAtManhattanTime) {
  OccupancyGrid3D g({0, 0, 0}, 1.0, 10, 10, 3);
  std::vector<Agent> a{{0, AgentKind::UAV, {0, 0, 2}, {9, 3, 2}}, {1, AgentKind::AGV, {0, 9, 0}, {5, 9, 0}}};
  auto policy = make_policy(GetParam());
  policy->load(g, a, 1);
  std::vector<Cell> cur{a[0].start, a[1].start};
  int ticks = 0;
  while (cur[0] != a[0].goal || cur[1] != a[1].goal) {
    cur = online_policy_step(*policy, WorldView{&g, a, cur});
    ASSERT_LE(++ticks, 50);
  }
  EXPECT_EQ(ticks, std::max(manhattan(a[0].start, a[0].goal), manhattan(a[1].start, a[1].goal)));
}

TEST_P(PolicyRun, AtGoalStays) {
  OccupancyGrid3D g({0, 0, 0}, 1.0, 4, 4, 1);
  std::vector<Agent> a{{0, AgentKind::AGV, {1, 1, 0}, {1, 1, 0}}};
  auto policy = make_policy(GetParam());
  policy->load(g, a, 1);
  std::vector<Cell> cur{a[0].start};
  for (int i = 0; i < 5; ++i) cur = online_policy_step(*policy, WorldView{&g, a, cur});
  EXPECT_EQ(cur[0], a[0].goal);
}

INSTANTIATE_TEST_SUITE_P(All, PolicyRun, ::testing::Values("greedy-shielded", "field-shielded"));

TEST(FieldShielded, RoutesAroundWall) {
  // greedy Manhattan descent stalls behind a U-shaped wall; exact distance fields do not
  OccupancyGrid3D g({0, 0, 0}, 1.0, 7, 7, 1);
  for (int j = 1; j <= 5; ++j) g.set({4, j, 0}, true);
  g.set({3, 1, 0}, true);
  g.set({3, 5, 0}, true);
  std::vector<Agent> a{{0, AgentKind::AGV, {2, 3, 0}, {6, 3, 0}}};
  auto policy = make_policy("field-shielded");
  policy->load(g, a, 1);
  std::vector<Cell> cur{a[0].start};
  int ticks = 0;
  while (cur[0] != a[0].goal && ticks < 40) {
    cur = online_policy_step(*policy, WorldView{&g, a, cur});
    ++ticks;
  }
  EXPECT_EQ(cur[0], a[0].goal);
  EXPECT_EQ(ticks, oracle::bfs_distance(g, AgentKind::AGV, a[0].start, a[0].goal));
}
