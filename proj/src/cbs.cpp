#include <algorithm>
#include <queue>
#include <memory>

#include "skyrover/errors.hpp"
#include "skyrover/log.hpp"
#include "skyrover/solvers.hpp"

namespace skyrover {

namespace {

using Clock = std::chrono::steady_clock;

struct CTNode {
  std::vector<Constraint> constraints;
  std::vector<Path> paths;
  long long cost = 0;
  std::size_t conflict_count = 0;
  std::optional<Conflict> first_conflict;
  std::uint64_t order = 0;
};

long long sum_of_costs(const std::vector<Path>& paths) {
  long long total = 0;
  for (const auto& p : paths) total += p.cost();
  return total;
}

// Fills cost and conflict data from the current paths.
void evaluate(CTNode& node) {
  node.cost = sum_of_costs(node.paths);
  auto conflicts = detect_conflicts(node.paths);
  node.conflict_count = conflicts.size();
  node.first_conflict = conflicts.empty() ? std::nullopt : std::optional<Conflict>(conflicts.front());
}

struct WorseNode {
  bool operator()(const std::shared_ptr<CTNode>& a, const std::shared_ptr<CTNode>& b) const {
    if (a->cost != b->cost) return a->cost > b->cost;
    if (a->conflict_count != b->conflict_count) return a->conflict_count > b->conflict_count;
    return a->order > b->order;
  }
};

std::pair<Constraint, Constraint> split(const Conflict& c) {
  if (c.kind == ConflictKind::Vertex)
    return {{c.agents.first, ConflictKind::Vertex, c.time, c.cell, c.cell},
            {c.agents.second, ConflictKind::Vertex, c.time, c.cell, c.cell}};
  return {{c.agents.first, ConflictKind::Edge, c.time, c.cell, c.to},
          {c.agents.second, ConflictKind::Edge, c.time, c.to, c.cell}};
}

}  // namespace

SolveResult cbs_solve(const OccupancyGrid3D& grid, std::span<const Agent> agents, const SolverConfig& config) {
  validate(config);
  if (auto problems = validate_agents(grid, agents); !problems.empty())
    throw ContractError("cbs_solve: invalid roster: " + problems.front());

  const auto started = Clock::now();
  const auto deadline = started + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(config.time_limit));
  SolveResult result;

  auto finish = [&](SolveStatus status, std::string diagnostic) {
    result.status = status;
    result.diagnostic = std::move(diagnostic);
    result.stats.seconds = std::chrono::duration<double>(Clock::now() - started).count();
    return result;
  };

  auto plan = [&](const Agent& agent, const std::vector<Constraint>& constraints) {
    SpaceTimeQuery q;
    q.grid = &grid;
    q.kind = agent.kind;
    q.agent_id = agent.id;
    q.start = agent.start;
    q.goal = agent.goal;
    q.constraints = constraints;
    q.expansion_limit = config.node_expansion_limit;
    q.deadline = deadline;
    auto r = spacetime_astar(q);
    result.stats.low_level_expansions += r.expansions;
    return r;
  };

  auto root = std::make_shared<CTNode>();
  for (const auto& agent : agents) {
    auto r = plan(agent, {});
    if (r.status == SearchStatus::NoPath)
      return finish(SolveStatus::NoSolution, "agent " + std::to_string(agent.id) + " has no path to its goal");
    if (r.status == SearchStatus::ResourceLimit)
      return finish(SolveStatus::ResourceLimit, "low-level search limit hit while planning agent " + std::to_string(agent.id));
    root->paths.push_back(std::move(r.path));
  }
  evaluate(*root);
  result.stats.high_level_generated = 1;

  std::priority_queue<std::shared_ptr<CTNode>, std::vector<std::shared_ptr<CTNode>>, WorseNode> open;
  open.push(root);
  std::uint64_t next_order = 1;
  long long best_lower_bound = root->cost;
  std::size_t fewest_conflicts = root->conflict_count;

  while (!open.empty()) {
    auto node = open.top();
    open.pop();
    best_lower_bound = node->cost;
    if (!node->first_conflict) {
      result.solution = make_solution(node->paths);
      log_debug("cbs: solved with cost " + std::to_string(node->cost) + " after " +
                std::to_string(result.stats.high_level_expansions) + " expansions");
      return finish(SolveStatus::Solved, {});
    }
    if (result.stats.high_level_expansions >= config.node_expansion_limit || Clock::now() > deadline) {
      return finish(SolveStatus::ResourceLimit,
                    "CBS limit hit after " + std::to_string(result.stats.high_level_expansions) +
                        " expansions; best cost bound " + std::to_string(best_lower_bound) + ", fewest conflicts " +
                        std::to_string(fewest_conflicts));
    }
    ++result.stats.high_level_expansions;

    const auto [first, second] = split(*node->first_conflict);
    for (const Constraint& added : {first, second}) {
      auto child = std::make_shared<CTNode>();
      child->constraints = node->constraints;
      child->constraints.push_back(added);
      child->paths = node->paths;
      const auto slot = static_cast<std::size_t>(
          std::find_if(agents.begin(), agents.end(), [&](const Agent& a) { return a.id == added.agent_id; }) -
          agents.begin());
      std::vector<Constraint> mine;
      for (const auto& c : child->constraints)
        if (c.agent_id == added.agent_id) mine.push_back(c);
      auto r = plan(agents[slot], mine);
      if (r.status == SearchStatus::ResourceLimit)
        return finish(SolveStatus::ResourceLimit, "low-level search limit hit while replanning agent " +
                                                      std::to_string(added.agent_id));
      if (r.status == SearchStatus::NoPath) continue;
      child->paths[slot] = std::move(r.path);
      evaluate(*child);
      child->order = next_order++;
      fewest_conflicts = std::min(fewest_conflicts, child->conflict_count);
      ++result.stats.high_level_generated;
      open.push(std::move(child));
    }
  }
  return finish(SolveStatus::NoSolution, "constraint tree exhausted without a conflict-free node");
}

}  // namespace skyrover
