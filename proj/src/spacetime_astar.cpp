#include <algorithm>
#include <queue>

#include "skyrover/errors.hpp"
#include "skyrover/solvers.hpp"

namespace skyrover {

namespace {

struct Node {
  Cell cell;
  int t;
  int g;
  int h;
  int parent;
};

// std::priority_queue keeps the "largest" on top, so this orders worst first:
// higher f, then higher h, then lower g, then lexicographically larger cell.
struct WorseFirst {
  const std::vector<Node>* pool;
  bool operator()(int a, int b) const {
    const Node& x = (*pool)[static_cast<std::size_t>(a)];
    const Node& y = (*pool)[static_cast<std::size_t>(b)];
    if (x.g + x.h != y.g + y.h) return x.g + x.h > y.g + y.h;
    if (x.h != y.h) return x.h > y.h;
    if (x.g != y.g) return x.g < y.g;
    return x.cell > y.cell;
  }
};

}  // namespace

SearchResult spacetime_astar(const SpaceTimeQuery& q) {
  if (q.grid == nullptr) throw ContractError("spacetime_astar: grid is null");
  const OccupancyGrid3D& grid = *q.grid;
  if (!grid.is_free(q.start) || !grid.is_free(q.goal))
    throw ContractError("spacetime_astar: start and goal must be free in-bounds cells");
  if (q.kind == AgentKind::AGV && (q.start.k != 0 || q.goal.k != 0))
    throw ContractError("spacetime_astar: AGV start and goal must be on the ground layer");

  std::unordered_set<detail::TimedCell, detail::TimedCellHash> vertex_cons;
  std::unordered_set<detail::TimedMove, detail::TimedMoveHash> edge_cons;
  int last_constraint = -1;
  int goal_busy_until = -1;  // agent may not rest at goal at or before this time
  for (const auto& c : q.constraints) {
    if (c.agent_id != q.agent_id) continue;
    last_constraint = std::max(last_constraint, c.time);
    if (c.kind == ConflictKind::Vertex) {
      vertex_cons.insert({c.cell, c.time});
      if (c.cell == q.goal) goal_busy_until = std::max(goal_busy_until, c.time);
    } else {
      edge_cons.insert({c.cell, c.to, c.time});
    }
  }
  const ReservationTable* res = q.reservations;
  if (res) {
    if (res->has_terminal(q.goal)) return {SearchStatus::NoPath, {}, 0};
    last_constraint = std::max(last_constraint, res->max_time());
    goal_busy_until = std::max(goal_busy_until, res->last_vertex_time(q.goal));
  }

  auto blocked_at = [&](Cell c, int t) {
    return vertex_cons.count({c, t}) != 0 || (res && (res->vertex_reserved(c, t) || res->terminal_blocked(c, t)));
  };
  if (blocked_at(q.start, q.start_time)) return {SearchStatus::NoPath, {}, 0};

  // Past `last_constraint` nothing depends on time, so later copies of a cell
  // collapse onto one closed-list key.
  const int steady_time = std::max(last_constraint + 1, q.start_time);
  const long long horizon =
      static_cast<long long>(q.start_time) + static_cast<long long>(grid.free_count()) + std::max(last_constraint, 0) + 1;
  const auto& model = MotionModel::for_kind(q.kind);

  auto heuristic = [&](Cell c, int t) { return std::max(manhattan(c, q.goal), goal_busy_until + 1 - t); };

  std::vector<Node> pool;
  pool.reserve(1024);
  std::priority_queue<int, std::vector<int>, WorseFirst> open(WorseFirst{&pool});
  std::unordered_set<detail::TimedCell, detail::TimedCellHash> closed;

  pool.push_back({q.start, q.start_time, 0, heuristic(q.start, q.start_time), -1});
  open.push(0);

  SearchResult result;
  while (!open.empty()) {
    const int idx = open.top();
    open.pop();
    const Node node = pool[static_cast<std::size_t>(idx)];
    if (!closed.insert({node.cell, std::min(node.t, steady_time)}).second) continue;

    if (node.cell == q.goal && node.t > goal_busy_until) {
      result.status = SearchStatus::Found;
      result.path.agent_id = q.agent_id;
      result.path.cells.resize(static_cast<std::size_t>(node.g) + 1);
      for (int n = idx; n >= 0; n = pool[static_cast<std::size_t>(n)].parent)
        result.path.cells[static_cast<std::size_t>(pool[static_cast<std::size_t>(n)].g)] =
            pool[static_cast<std::size_t>(n)].cell;
      return result;
    }

    if (++result.expansions > q.expansion_limit) {
      result.status = SearchStatus::ResourceLimit;
      return result;
    }
    if (q.deadline && (result.expansions & 1023) == 0 && std::chrono::steady_clock::now() > *q.deadline) {
      result.status = SearchStatus::ResourceLimit;
      return result;
    }

    const int nt = node.t + 1;
    if (nt > horizon) continue;
    for (const Cell& move : model.moves()) {
      const Cell next = node.cell + move;
      if (!grid.is_free(next)) continue;
      if (blocked_at(next, nt)) continue;
      if (edge_cons.count({node.cell, next, nt}) != 0) continue;
      if (res && res->edge_reserved(next, node.cell, nt)) continue;
      if (closed.count({next, std::min(nt, steady_time)}) != 0) continue;
      pool.push_back({next, nt, node.g + 1, heuristic(next, nt), idx});
      open.push(static_cast<int>(pool.size() - 1));
    }
  }
  result.status = SearchStatus::NoPath;
  return result;
}

}  // namespace skyrover
