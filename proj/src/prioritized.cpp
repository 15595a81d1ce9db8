#include "skyrover/errors.hpp"
#include "skyrover/solvers.hpp"

#include <algorithm>
#include <numeric>

namespace skyrover {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::PrioritizedAStar: return "astar";
    case Algorithm::CBS: return "cbs";
    case Algorithm::Online: return "online";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "astar" || name == "astar_prioritized" || name == "prioritized") return Algorithm::PrioritizedAStar;
  if (name == "cbs") return Algorithm::CBS;
  if (name == "online") return Algorithm::Online;
  throw InvalidInputError("unknown algorithm '" + std::string(name) + "' (expected astar, cbs or online)");
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::NoSolution: return "no-solution";
    case SolveStatus::ResourceLimit: return "resource-limit";
  }
  return "unknown";
}

void validate(const SolverConfig& config) {
  if (config.node_expansion_limit == 0) throw InvalidInputError("node_expansion_limit must be positive");
  if (!(config.time_limit > 0.0)) throw InvalidInputError("time_limit must be positive");
}

SolveResult prioritized_solve(const OccupancyGrid3D& grid, std::span<const Agent> agents, const SolverConfig& config) {
  using Clock = std::chrono::steady_clock;
  validate(config);
  if (auto problems = validate_agents(grid, agents); !problems.empty())
    throw ContractError("prioritized_solve: invalid roster: " + problems.front());

  const auto started = Clock::now();
  const auto deadline = started + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(config.time_limit));
  SolveResult result;
  auto finish = [&](SolveStatus status, std::string diagnostic) {
    result.status = status;
    result.diagnostic = std::move(diagnostic);
    result.stats.seconds = std::chrono::duration<double>(Clock::now() - started).count();
    return result;
  };

  std::vector<std::size_t> order(agents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return agents[a].id < agents[b].id; });

  ReservationTable table;
  std::vector<Path> paths(agents.size());
  for (auto slot : order) {
    const Agent& agent = agents[slot];
    SpaceTimeQuery q;
    q.grid = &grid;
    q.kind = agent.kind;
    q.agent_id = agent.id;
    q.start = agent.start;
    q.goal = agent.goal;
    q.reservations = &table;
    q.expansion_limit = config.node_expansion_limit;
    q.deadline = deadline;
    auto r = spacetime_astar(q);
    result.stats.low_level_expansions += r.expansions;
    ++result.stats.high_level_expansions;
    if (r.status == SearchStatus::NoPath)
      return finish(SolveStatus::NoSolution,
                    "agent " + std::to_string(agent.id) + " is blocked by higher-priority agents");
    if (r.status == SearchStatus::ResourceLimit)
      return finish(SolveStatus::ResourceLimit, "search limit hit while planning agent " + std::to_string(agent.id));
    table.add_path(r.path);
    paths[slot] = std::move(r.path);
  }
  result.solution = make_solution(std::move(paths));
  return finish(SolveStatus::Solved, {});
}

SolveResult solve(const OccupancyGrid3D& grid, std::span<const Agent> agents, const SolverConfig& config) {
  switch (config.algorithm) {
    case Algorithm::CBS: return cbs_solve(grid, agents, config);
    case Algorithm::PrioritizedAStar: return prioritized_solve(grid, agents, config);
    case Algorithm::Online: break;
  }
  throw ContractError("solve: the online algorithm runs through a policy, not an offline solver");
}

}  // namespace skyrover
