#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "oracles.hpp"
#include "skyrover/errors.hpp"
#include "skyrover/solvers.hpp"

using namespace skyrover;

namespace {

OccupancyGrid3D empty_grid(int nx, int ny, int nz) { return OccupancyGrid3D({0, 0, 0}, 1.0, nx, ny, nz); }

SearchResult search(const OccupancyGrid3D& g, AgentKind kind, Cell s, Cell goal,
                    std::span<const Constraint> cons = {}, const ReservationTable* rt = nullptr) {
  SpaceTimeQuery q;
  q.grid = &g;
  q.kind = kind;
  q.start = s;
  q.goal = goal;
  q.constraints = cons;
  q.reservations = rt;
  return spacetime_astar(q);
}

// Shortest path length in a tiny space-time graph by enumerating every
// action sequence up to `max_len`, honoring vertex constraints and the
// requirement that the agent never leaves the goal afterwards.
int enumerate_cost(const OccupancyGrid3D& g, Cell s, Cell goal, const std::vector<Constraint>& cons, int max_len) {
  auto banned = [&](Cell c, int t) {
    for (const auto& k : cons)
      if (k.kind == ConflictKind::Vertex && k.cell == c && k.time == t) return true;
    return false;
  };
  int horizon = 0;
  for (const auto& k : cons) horizon = std::max(horizon, k.time);
  int best = -1;
  std::function<void(Cell, int)> rec = [&](Cell c, int t) {
    if (best >= 0 && t >= best) return;
    if (c == goal) {
      bool ok = true;
      for (int u = t; u <= horizon; ++u) ok = ok && !banned(goal, u);
      if (ok) {
        best = t;
        return;
      }
    }
    if (t == max_len) return;
    for (Cell n : oracle::neighbours(g, AgentKind::AGV, c))
      if (!banned(n, t + 1)) rec(n, t + 1);
  };
  if (!banned(s, 0)) rec(s, 0);
  return best;
}

}  // namespace

TEST(Names, Algorithms) {
  EXPECT_EQ(algorithm_from_string("astar"), Algorithm::PrioritizedAStar);
  EXPECT_EQ(algorithm_from_string("cbs"), Algorithm::CBS);
  EXPECT_EQ(algorithm_from_string("online"), Algorithm::Online);
  EXPECT_THROW(algorithm_from_string("dijkstra"), InvalidInputError);
  EXPECT_EQ(to_string(SolveStatus::NoSolution), "no-solution");
}

TEST(Config, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(validate(c));
  c.node_expansion_limit = 0;
  EXPECT_THROW(validate(c), InvalidInputError);
  c = SolverConfig{};
  c.time_limit = 0;
  EXPECT_THROW(validate(c), InvalidInputError);
  c.time_limit = -1;
  EXPECT_THROW(validate(c), InvalidInputError);
}

TEST(SpaceTimeAStar, StartIsGoal) {
  auto g = empty_grid(3, 3, 1);
  auto r = search(g, AgentKind::AGV, {1, 1, 0}, {1, 1, 0});
  ASSERT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(r.path.cells.size(), 1u);
  EXPECT_EQ(r.path.cost(), 0);
}

TEST(SpaceTimeAStar, CornerToCorner) {
  auto g = empty_grid(5, 5, 1);
  auto r = search(g, AgentKind::AGV, {0, 0, 0}, {4, 4, 0});
  ASSERT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(r.path.cost(), 8);
  EXPECT_EQ(r.path.cells.front(), (Cell{0, 0, 0}));
  EXPECT_EQ(r.path.cells.back(), (Cell{4, 4, 0}));
}

TEST(SpaceTimeAStar, UavClimbsOverWall) {
  auto g = empty_grid(3, 1, 2);
  g.set({1, 0, 0}, true);
  auto uav = search(g, AgentKind::UAV, {0, 0, 0}, {2, 0, 0});
  ASSERT_EQ(uav.status, SearchStatus::Found);
  EXPECT_EQ(uav.path.cost(), 4);
  auto agv = search(g, AgentKind::AGV, {0, 0, 0}, {2, 0, 0});
  EXPECT_EQ(agv.status, SearchStatus::NoPath);
}

TEST(SpaceTimeAStar, VertexConstraintForcesWait) {
  auto g = empty_grid(3, 1, 1);
  std::vector<Constraint> cons{{0, ConflictKind::Vertex, 1, {1, 0, 0}, {}}};
  auto r = search(g, AgentKind::AGV, {0, 0, 0}, {2, 0, 0}, cons);
  ASSERT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(r.path.cost(), 3);
  EXPECT_EQ(r.path.cost(), enumerate_cost(g, {0, 0, 0}, {2, 0, 0}, cons, 8));
  EXPECT_NE(r.path.at(1), (Cell{1, 0, 0}));
}

TEST(SpaceTimeAStar, GoalConstraintDelaysFinish) {
  auto g = empty_grid(3, 1, 1);
  std::vector<Constraint> cons{{0, ConflictKind::Vertex, 5, {2, 0, 0}, {}}};
  auto r = search(g, AgentKind::AGV, {0, 0, 0}, {2, 0, 0}, cons);
  ASSERT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(r.path.cost(), enumerate_cost(g, {0, 0, 0}, {2, 0, 0}, cons, 10));
  EXPECT_GE(r.path.cost(), 6);
}

TEST(SpaceTimeAStar, OtherAgentsConstraintsIgnored) {
  auto g = empty_grid(3, 1, 1);
  std::vector<Constraint> cons{{4, ConflictKind::Vertex, 1, {1, 0, 0}, {}}};
  EXPECT_EQ(search(g, AgentKind::AGV, {0, 0, 0}, {2, 0, 0}, cons).path.cost(), 2);
}

TEST(SpaceTimeAStar, EdgeConstraint) {
  auto g = empty_grid(2, 2, 1);
  std::vector<Constraint> cons{{0, ConflictKind::Edge, 1, {0, 0, 0}, {1, 0, 0}}};
  auto r = search(g, AgentKind::AGV, {0, 0, 0}, {1, 0, 0}, cons);
  ASSERT_EQ(r.status, SearchStatus::Found);
  EXPECT_EQ(r.path.cost(), 2);
}

TEST(SpaceTimeAStar, MatchesBfsOnRandomGrids) {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto g = oracle::random_grid(rng, 6, 5, 3, 0.25);
    auto cells = oracle::free_cells(g, false);
    if (cells.size() < 2) continue;
    Cell s = cells[rng() % cells.size()], t = cells[rng() % cells.size()];
    int d = oracle::bfs_distance(g, AgentKind::UAV, s, t);
    auto r = search(g, AgentKind::UAV, s, t);
    if (d < 0) {
      EXPECT_EQ(r.status, SearchStatus::NoPath);
    } else {
      ASSERT_EQ(r.status, SearchStatus::Found);
      EXPECT_EQ(r.path.cost(), d);
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(SpaceTimeAStar, ExpansionLimit) {
  auto g = empty_grid(20, 20, 1);
  SpaceTimeQuery q;
  q.grid = &g;
  q.kind = AgentKind::AGV;
  q.start = {0, 0, 0};
  q.goal = {19, 19, 0};
  q.expansion_limit = 3;
  EXPECT_EQ(spacetime_astar(q).status, SearchStatus::ResourceLimit);
}

TEST(SpaceTimeAStar, BadQueryIsContractError) {
  auto g = empty_grid(3, 3, 2);
  EXPECT_THROW(search(g, AgentKind::AGV, {0, 0, 1}, {2, 2, 0}), ContractError);
  g.set({2, 2, 0}, true);
  EXPECT_THROW(search(g, AgentKind::UAV, {0, 0, 0}, {2, 2, 0}), ContractError);
  SpaceTimeQuery q;
  EXPECT_THROW(spacetime_astar(q), ContractError);
}

TEST(Reservations, VertexEdgeTerminal) {
  ReservationTable rt;
  rt.add_path(Path{0, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}});
  EXPECT_TRUE(rt.vertex_reserved({1, 0, 0}, 1));
  EXPECT_FALSE(rt.vertex_reserved({1, 0, 0}, 2));
  EXPECT_TRUE(rt.edge_reserved({0, 0, 0}, {1, 0, 0}, 1));
  EXPECT_FALSE(rt.edge_reserved({1, 0, 0}, {0, 0, 0}, 1));
  EXPECT_TRUE(rt.terminal_blocked({2, 0, 0}, 2));
  EXPECT_TRUE(rt.terminal_blocked({2, 0, 0}, 100));
  EXPECT_FALSE(rt.terminal_blocked({2, 0, 0}, 1));
  EXPECT_TRUE(rt.has_terminal({2, 0, 0}));
  EXPECT_EQ(rt.max_time(), 2);
  EXPECT_EQ(rt.last_vertex_time({1, 0, 0}), 1);
  EXPECT_EQ(rt.last_vertex_time({5, 5, 5}), -1);
  // head-on swap is blocked, following is not
  EXPECT_TRUE(rt.blocks_move({1, 0, 0}, {0, 0, 0}, 1));
  EXPECT_FALSE(rt.blocks_move({0, 1, 0}, {0, 0, 0}, 2));
}

TEST(Reservations, AvoidedBySearch) {
  auto g = empty_grid(3, 1, 1);
  ReservationTable rt;
  rt.add_path(Path{0, {{1, 0, 0}, {1, 0, 0}, {1, 0, 0}}, });
  // (1,0,0) is someone's goal forever, so (0)->(2) is impossible on a line
  auto r = search(g, AgentKind::AGV, {0, 0, 0}, {2, 0, 0}, {}, &rt);
  EXPECT_NE(r.status, SearchStatus::Found);
}

namespace {

// corridor with a single side pocket: x = 0..2 at y=0, pocket at (1,1)
OccupancyGrid3D pocket_grid() {
  auto g = empty_grid(3, 2, 1);
  g.set({0, 1, 0}, true);
  g.set({2, 1, 0}, true);
  return g;
}

std::vector<Agent> swap_agents() {
  return {{0, AgentKind::AGV, {0, 0, 0}, {2, 0, 0}}, {1, AgentKind::AGV, {2, 0, 0}, {0, 0, 0}}};
}

SolverConfig cfg(Algorithm a) {
  SolverConfig c;
  c.algorithm = a;
  return c;
}

}  // namespace

TEST(Cbs, SwapThroughPocketCostsMoreThanIndependent) {
  auto g = pocket_grid();
  auto agents = swap_agents();
  auto r = cbs_solve(g, agents, cfg(Algorithm::CBS));
  ASSERT_EQ(r.status, SolveStatus::Solved);
  EXPECT_TRUE(validate_solution(g, agents, r.solution->paths).empty());
  EXPECT_GT(r.solution->sum_of_costs, 4);
  EXPECT_EQ(r.solution->sum_of_costs, *oracle::joint_optimal_soc(g, agents));
  EXPECT_GT(r.stats.high_level_expansions, 1u);
}

TEST(Cbs, EmptyRosterAndSingleAgent) {
  auto g = empty_grid(4, 4, 2);
  std::vector<Agent> none;
  auto r = cbs_solve(g, none, cfg(Algorithm::CBS));
  ASSERT_EQ(r.status, SolveStatus::Solved);
  EXPECT_EQ(r.solution->sum_of_costs, 0);
  std::vector<Agent> one{{5, AgentKind::UAV, {0, 0, 0}, {3, 3, 1}}};
  r = cbs_solve(g, one, cfg(Algorithm::CBS));
  ASSERT_EQ(r.status, SolveStatus::Solved);
  EXPECT_EQ(r.solution->sum_of_costs, 7);
  EXPECT_EQ(r.solution->paths[0].agent_id, 5);
}

TEST(Cbs, MatchesJointOracle) {
  std::mt19937_64 rng(23);
  int compared = 0, capped = 0;
  while (compared < 40) {
    auto g = oracle::random_grid(rng, 4, 4, 1 + static_cast<int>(rng() % 2), 0.2);
    auto agents = oracle::random_agents(rng, g, 2 + static_cast<int>(rng() % 2));
    if (!agents) continue;
    auto best = oracle::joint_optimal_soc(g, *agents);
    if (!best) continue;
    // complete but exponential: a few instances with a wide cost gap exceed the cap
    auto c = cfg(Algorithm::CBS);
    c.node_expansion_limit = 20000;
    auto r = cbs_solve(g, *agents, c);
    ++compared;
    if (r.status == SolveStatus::ResourceLimit) {
      ++capped;
      continue;
    }
    ASSERT_EQ(r.status, SolveStatus::Solved);
    EXPECT_TRUE(validate_solution(g, *agents, r.solution->paths).empty());
    EXPECT_EQ(r.solution->sum_of_costs, *best);
  }
  EXPECT_LE(capped, 4);
}

TEST(Cbs, UnreachableGoalIsNoSolution) {
  auto g = empty_grid(3, 1, 1);
  g.set({1, 0, 0}, true);
  std::vector<Agent> a{{0, AgentKind::AGV, {0, 0, 0}, {2, 0, 0}}};
  auto r = cbs_solve(g, a, cfg(Algorithm::CBS));
  EXPECT_EQ(r.status, SolveStatus::NoSolution);
  EXPECT_FALSE(r.solution);
  EXPECT_FALSE(r.diagnostic.empty());
  EXPECT_EQ(prioritized_solve(g, a, cfg(Algorithm::PrioritizedAStar)).status, SolveStatus::NoSolution);
}

TEST(Cbs, ExpansionLimit) {
  auto g = pocket_grid();
  auto agents = swap_agents();
  auto c = cfg(Algorithm::CBS);
  c.node_expansion_limit = 1;
  auto r = cbs_solve(g, agents, c);
  EXPECT_EQ(r.status, SolveStatus::ResourceLimit);
  EXPECT_FALSE(r.solution);
}

TEST(Cbs, ImpossibleSwapHitsLimit) {
  // a line without a pocket has no solution; CBS cannot prove it and must stop
  auto g = empty_grid(2, 1, 1);
  auto agents = std::vector<Agent>{{0, AgentKind::AGV, {0, 0, 0}, {1, 0, 0}}, {1, AgentKind::AGV, {1, 0, 0}, {0, 0, 0}}};
  auto c = cfg(Algorithm::CBS);
  c.node_expansion_limit = 2000;
  auto r = cbs_solve(g, agents, c);
  EXPECT_NE(r.status, SolveStatus::Solved);
}

TEST(Cbs, TimeLimit) {
  auto g = empty_grid(2, 1, 1);
  auto agents = std::vector<Agent>{{0, AgentKind::AGV, {0, 0, 0}, {1, 0, 0}}, {1, AgentKind::AGV, {1, 0, 0}, {0, 0, 0}}};
  auto c = cfg(Algorithm::CBS);
  c.time_limit = 0.05;
  c.node_expansion_limit = std::uint64_t(1) << 40;
  auto r = cbs_solve(g, agents, c);
  EXPECT_EQ(r.status, SolveStatus::ResourceLimit);
  EXPECT_LT(r.stats.seconds, 5.0);
}

TEST(Solvers, InvalidRosterIsContractError) {
  auto g = empty_grid(3, 3, 1);
  std::vector<Agent> a{{0, AgentKind::AGV, {0, 0, 0}, {2, 2, 0}}, {0, AgentKind::AGV, {1, 0, 0}, {0, 2, 0}}};
  EXPECT_THROW(cbs_solve(g, a, cfg(Algorithm::CBS)), ContractError);
  EXPECT_THROW(prioritized_solve(g, a, cfg(Algorithm::PrioritizedAStar)), ContractError);
}

TEST(Solvers, OnlineHasNoOfflineSolve) {
  auto g = empty_grid(3, 3, 1);
  std::vector<Agent> a{{0, AgentKind::AGV, {0, 0, 0}, {2, 2, 0}}};
  EXPECT_THROW(solve(g, a, cfg(Algorithm::Online)), ContractError);
}

TEST(Prioritized, IncompleteWhereCbsSucceeds) {
  // agent 0 takes the corridor first and leaves agent 1 no escape to the pocket
  auto g = pocket_grid();
  auto agents = swap_agents();
  auto r = prioritized_solve(g, agents, cfg(Algorithm::PrioritizedAStar));
  EXPECT_EQ(r.status, SolveStatus::NoSolution);
  EXPECT_NE(r.diagnostic.find("agent 1"), std::string::npos);
  EXPECT_EQ(cbs_solve(g, agents, cfg(Algorithm::CBS)).status, SolveStatus::Solved);
}

TEST(Prioritized, FirstAgentKeepsItsShortestPath) {
  auto g = empty_grid(5, 5, 1);
  std::vector<Agent> agents{{0, AgentKind::AGV, {0, 2, 0}, {4, 2, 0}}, {1, AgentKind::AGV, {2, 0, 0}, {2, 4, 0}}};
  auto r = prioritized_solve(g, agents, cfg(Algorithm::PrioritizedAStar));
  ASSERT_EQ(r.status, SolveStatus::Solved);
  EXPECT_TRUE(validate_solution(g, agents, r.solution->paths).empty());
  EXPECT_EQ(r.solution->paths[0].cost(), 4);
  EXPECT_GE(r.solution->paths[1].cost(), 4);
}

TEST(Prioritized, NeverBeatsCbs) {
  std::mt19937_64 rng(99);
  int both = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto g = oracle::random_grid(rng, 5, 4, 2, 0.2);
    auto agents = oracle::random_agents(rng, g, 3);
    if (!agents) continue;
    auto c = cfg(Algorithm::CBS);
    c.node_expansion_limit = 5000;
    auto opt = cbs_solve(g, *agents, c);
    auto pp = prioritized_solve(g, *agents, cfg(Algorithm::PrioritizedAStar));
    if (pp.status == SolveStatus::Solved) {
      EXPECT_TRUE(validate_solution(g, *agents, pp.solution->paths).empty());
    }
    if (opt.status != SolveStatus::Solved || pp.status != SolveStatus::Solved) continue;
    EXPECT_GE(pp.solution->sum_of_costs, opt.solution->sum_of_costs);
    ++both;
  }
  EXPECT_GT(both, 100);
}

TEST(Solvers, Deterministic) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = oracle::random_grid(rng, 6, 6, 2, 0.15);
    auto agents = oracle::random_agents(rng, g, 4);
    if (!agents) continue;
    for (auto alg : {Algorithm::CBS, Algorithm::PrioritizedAStar}) {
      auto c = cfg(alg);
      c.node_expansion_limit = 5000;
      auto a = solve(g, *agents, c);
      auto b = solve(g, *agents, c);
      EXPECT_EQ(a.status, b.status);
      EXPECT_EQ(a.solution, b.solution);
    }
  }
}
