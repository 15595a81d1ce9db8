#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "skyrover/errors.hpp"
#include "skyrover/mapf.hpp"

using namespace skyrover;

namespace {

Path P(int id, std::vector<Cell> cells) { return Path{id, std::move(cells)}; }

}  // namespace

TEST(Motion, UavHasSixMovesAndWait) {
  const auto& m = MotionModel::for_kind(AgentKind::UAV);
  ASSERT_EQ(m.moves().size(), 7u);
  EXPECT_EQ(m.moves()[0], (Cell{0, 0, 0}));
  EXPECT_TRUE(m.is_legal({1, 1, 1}, {1, 1, 2}));
  EXPECT_TRUE(m.is_legal({1, 1, 1}, {1, 1, 1}));
  EXPECT_FALSE(m.is_legal({1, 1, 1}, {2, 2, 1}));
  EXPECT_FALSE(m.is_legal({1, 1, 1}, {3, 1, 1}));
}

TEST(Motion, AgvIsPlanar) {
  const auto& m = MotionModel::for_kind(AgentKind::AGV);
  ASSERT_EQ(m.moves().size(), 5u);
  for (Cell d : m.moves()) EXPECT_EQ(d.k, 0);
  EXPECT_FALSE(m.is_legal({1, 1, 0}, {1, 1, 1}));
  EXPECT_TRUE(m.is_legal({1, 1, 0}, {1, 2, 0}));
}

TEST(Kind, Names) {
  EXPECT_EQ(to_string(AgentKind::UAV), "uav");
  EXPECT_EQ(agent_kind_from_string("agv"), AgentKind::AGV);
  EXPECT_THROW(agent_kind_from_string("boat"), Error);
}

TEST(PathCost, ArrivalIgnoresTrailingWaits) {
  EXPECT_EQ(P(0, {{0, 0, 0}}).cost(), 0);
  EXPECT_EQ(P(0, {{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 0, 0}}).cost(), 1);
  // leaving the goal and coming back counts to the final arrival
  EXPECT_EQ(P(0, {{1, 0, 0}, {0, 0, 0}, {1, 0, 0}}).cost(), 2);
}

TEST(PathCost, AtHoldsLastCell) {
  Path p = P(3, {{0, 0, 0}, {1, 0, 0}});
  EXPECT_EQ(p.at(0), (Cell{0, 0, 0}));
  EXPECT_EQ(p.at(1), (Cell{1, 0, 0}));
  EXPECT_EQ(p.at(50), (Cell{1, 0, 0}));
}

TEST(Solution, TotalsRecomputed) {
  auto s = make_solution({P(0, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}), P(1, {{5, 0, 0}, {5, 0, 0}})});
  EXPECT_EQ(s.sum_of_costs, 2);
  EXPECT_EQ(s.makespan, 2);
  auto empty = make_solution({});
  EXPECT_EQ(empty.sum_of_costs, 0);
  EXPECT_EQ(empty.makespan, 0);
}

TEST(Conflicts, Swap) {
  std::vector<Path> paths{P(0, {{0, 0, 0}, {1, 0, 0}}), P(1, {{1, 0, 0}, {0, 0, 0}})};
  auto c = detect_conflicts(paths);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].kind, ConflictKind::Edge);
  EXPECT_EQ(c[0].agents, std::make_pair(0, 1));
  EXPECT_EQ(c[0].time, 1);
  EXPECT_EQ(c[0].cell, (Cell{0, 0, 0}));
  EXPECT_EQ(c[0].to, (Cell{1, 0, 0}));
}

TEST(Conflicts, VertexAfterArrival) {
  // agent 1 finishes at (2,0,0) at t=0; agent 0 passes through at t=2
  std::vector<Path> paths{P(0, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}), P(1, {{2, 0, 0}})};
  auto c = detect_conflicts(paths);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].kind, ConflictKind::Vertex);
  EXPECT_EQ(c[0].time, 2);
  EXPECT_EQ(c[0].cell, (Cell{2, 0, 0}));
}

TEST(Conflicts, HorizonExtendsStayAtGoal) {
  std::vector<Path> paths{P(0, {{0, 0, 0}}), P(1, {{2, 0, 0}, {1, 0, 0}})};
  EXPECT_TRUE(detect_conflicts(paths).empty());
  std::vector<Path> late{P(0, {{0, 0, 0}}), P(1, {{2, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 0, 0}})};
  EXPECT_EQ(detect_conflicts(late).size(), 1u);
}

TEST(Conflicts, FollowingIsNotAConflict) {
  std::vector<Path> paths{P(0, {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}}), P(1, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}})};
  EXPECT_TRUE(detect_conflicts(paths).empty());
}

TEST(Conflicts, SortedAndPermutationInvariant) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Path> paths;
    for (int a = 0; a < 4; ++a) {
      Path p{a, {}};
      Cell c{static_cast<int>(rng() % 3), static_cast<int>(rng() % 3), 0};
      p.cells.push_back(c);
      for (int t = 0; t < 6; ++t) {
        auto moves = MotionModel::for_kind(AgentKind::AGV).moves();
        Cell n = c + moves[rng() % moves.size()];
        if (n.i >= 0 && n.i < 3 && n.j >= 0 && n.j < 3) c = n;
        p.cells.push_back(c);
      }
      paths.push_back(p);
    }
    auto base = detect_conflicts(paths);
    EXPECT_TRUE(std::is_sorted(base.begin(), base.end(), [](const Conflict& x, const Conflict& y) {
      return std::tie(x.time, x.agents.first) < std::tie(y.time, y.agents.first);
    }));
    std::shuffle(paths.begin(), paths.end(), rng);
    EXPECT_EQ(detect_conflicts(paths), base);
    EXPECT_EQ(base.size(), oracle::brute_conflicts(paths).size());
  }
}

class Validate : public ::testing::Test {
 protected:
  OccupancyGrid3D grid{{0, 0, 0}, 1.0, 4, 4, 3};
  std::vector<Agent> agents{{0, AgentKind::UAV, {0, 0, 0}, {2, 0, 0}}, {1, AgentKind::AGV, {0, 3, 0}, {1, 3, 0}}};
};

TEST_F(Validate, CleanSolution) {
  std::vector<Path> paths{P(0, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}), P(1, {{0, 3, 0}, {1, 3, 0}})};
  EXPECT_TRUE(validate_solution(grid, agents, paths).empty());
}

TEST_F(Validate, TeleportIsOneIllegalMove) {
  std::vector<Path> paths{P(0, {{0, 0, 0}, {2, 0, 0}}), P(1, {{0, 3, 0}, {1, 3, 0}})};
  auto v = validate_solution(grid, agents, paths);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::IllegalMove);
  EXPECT_EQ(v[0].agent_id, 0);
  EXPECT_EQ(v[0].time, 1);
}

TEST_F(Validate, AgvClimbIsKinematic) {
  std::vector<Path> paths{P(0, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}),
                          P(1, {{0, 3, 0}, {0, 3, 1}, {0, 3, 0}, {1, 3, 0}})};
  auto v = validate_solution(grid, agents, paths);
  ASSERT_GE(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::Kinematic);
  EXPECT_EQ(v[0].agent_id, 1);
}

TEST_F(Validate, ObstacleStartGoalAndMissing) {
  grid.set({1, 0, 0}, true);
  std::vector<Path> paths{P(0, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}), P(1, {{0, 3, 0}, {0, 2, 0}})};
  auto v = validate_solution(grid, agents, paths);
  auto has = [&](ViolationKind k, int id) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k && x.agent_id == id; });
  };
  EXPECT_TRUE(has(ViolationKind::Obstacle, 0));
  EXPECT_TRUE(has(ViolationKind::GoalMismatch, 1));

  std::vector<Path> one{P(0, {{0, 0, 0}, {0, 1, 0}})};
  auto m = validate_solution(grid, agents, one);
  EXPECT_TRUE(std::any_of(m.begin(), m.end(), [](const Violation& x) { return x.kind == ViolationKind::MissingPath; }));
}

TEST_F(Validate, CollisionReportedOncePerConflict) {
  std::vector<Agent> two{{0, AgentKind::UAV, {0, 0, 0}, {1, 0, 0}}, {1, AgentKind::UAV, {1, 0, 0}, {0, 0, 0}}};
  std::vector<Path> paths{P(0, {{0, 0, 0}, {1, 0, 0}}), P(1, {{1, 0, 0}, {0, 0, 0}})};
  auto v = validate_solution(grid, two, paths);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::Collision);
}

TEST_F(Validate, Roster) {
  EXPECT_TRUE(validate_agents(grid, agents).empty());
  auto bad = agents;
  bad[1].goal = {1, 3, 2};  // AGV above ground
  EXPECT_FALSE(validate_agents(grid, bad).empty());
  bad = agents;
  bad[1].id = 0;
  EXPECT_FALSE(validate_agents(grid, bad).empty());
  bad = agents;
  bad[1].start = bad[0].start;
  EXPECT_FALSE(validate_agents(grid, bad).empty());
  bad = agents;
  bad[0].goal = {9, 0, 0};
  EXPECT_FALSE(validate_agents(grid, bad).empty());
  grid.set({2, 0, 0}, true);
  EXPECT_FALSE(validate_agents(grid, agents).empty());
}
