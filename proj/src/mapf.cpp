#include "skyrover/mapf.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "skyrover/errors.hpp"

namespace skyrover {

std::string_view to_string(AgentKind kind) { return kind == AgentKind::UAV ? "uav" : "agv"; }

AgentKind agent_kind_from_string(std::string_view name) {
  if (name == "uav" || name == "UAV") return AgentKind::UAV;
  if (name == "agv" || name == "AGV") return AgentKind::AGV;
  throw InvalidInputError("unknown agent kind '" + std::string(name) + "'");
}

const MotionModel& MotionModel::for_kind(AgentKind kind) {
  static const MotionModel uav(AgentKind::UAV,
                               {{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
  static const MotionModel agv(AgentKind::AGV, {{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}});
  return kind == AgentKind::UAV ? uav : agv;
}

bool MotionModel::is_legal(Cell from, Cell to) const noexcept {
  const Cell d = to - from;
  return std::find(moves_.begin(), moves_.end(), d) != moves_.end();
}

int Path::cost() const {
  if (cells.empty()) return 0;
  int t = static_cast<int>(cells.size()) - 1;
  while (t > 0 && cells[static_cast<std::size_t>(t - 1)] == cells.back()) --t;
  return t;
}

Solution make_solution(std::vector<Path> paths) {
  Solution s;
  s.paths = std::move(paths);
  for (const auto& p : s.paths) {
    const int c = p.cost();
    s.sum_of_costs += c;
    s.makespan = std::max(s.makespan, c);
  }
  return s;
}

std::vector<Conflict> detect_conflicts(std::span<const Path> paths, std::optional<int> horizon) {
  std::vector<Conflict> out;
  if (paths.size() < 2) return out;
  int last = 0;
  for (const auto& p : paths) {
    if (p.cells.empty()) throw ContractError("detect_conflicts: path for agent " + std::to_string(p.agent_id) + " is empty");
    last = std::max(last, static_cast<int>(p.cells.size()) - 1);
  }
  if (horizon) last = *horizon;

  // Roster positions sorted by agent id so pairs come out as (lower, higher).
  std::vector<std::size_t> order(paths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return paths[a].agent_id < paths[b].agent_id; });

  std::unordered_map<Cell, std::vector<std::size_t>, CellHash> now, prev;
  for (int t = 0; t <= last; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    now.clear();
    for (auto idx : order) now[paths[idx].at(ut)].push_back(idx);
    for (const auto& [cell, occupants] : now) {
      for (std::size_t a = 0; a < occupants.size(); ++a)
        for (std::size_t b = a + 1; b < occupants.size(); ++b)
          out.push_back({ConflictKind::Vertex, {paths[occupants[a]].agent_id, paths[occupants[b]].agent_id}, t, cell, cell});
    }
    if (t > 0) {
      for (auto a : order) {
        const Cell from = paths[a].at(ut - 1);
        const Cell to = paths[a].at(ut);
        if (from == to) continue;
        auto it = prev.find(to);
        if (it == prev.end()) continue;
        for (auto b : it->second) {
          if (paths[b].agent_id <= paths[a].agent_id) continue;
          if (paths[b].at(ut) == from)
            out.push_back({ConflictKind::Edge, {paths[a].agent_id, paths[b].agent_id}, t, from, to});
        }
      }
    }
    std::swap(now, prev);
  }

  std::sort(out.begin(), out.end(), [](const Conflict& x, const Conflict& y) {
    return std::tie(x.time, x.agents.first, x.kind, x.agents.second, x.cell, x.to) <
           std::tie(y.time, y.agents.first, y.kind, y.agents.second, y.cell, y.to);
  });
  return out;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MissingPath: return "missing-path";
    case ViolationKind::EmptyPath: return "empty-path";
    case ViolationKind::StartMismatch: return "start-mismatch";
    case ViolationKind::GoalMismatch: return "goal-mismatch";
    case ViolationKind::OutOfBounds: return "out-of-bounds";
    case ViolationKind::Obstacle: return "obstacle";
    case ViolationKind::IllegalMove: return "illegal-move";
    case ViolationKind::Kinematic: return "kinematic";
    case ViolationKind::Collision: return "collision";
  }
  return "unknown";
}

namespace {

std::string describe(Cell c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

}  // namespace

std::vector<Violation> validate_solution(const OccupancyGrid3D& grid, std::span<const Agent> agents,
                                         std::span<const Path> paths) {
  std::vector<Violation> out;
  std::vector<Path> checked;
  for (const auto& agent : agents) {
    auto it = std::find_if(paths.begin(), paths.end(), [&](const Path& p) { return p.agent_id == agent.id; });
    if (it == paths.end()) {
      out.push_back({ViolationKind::MissingPath, agent.id, 0, "no path for agent"});
      continue;
    }
    const Path& path = *it;
    if (path.cells.empty()) {
      out.push_back({ViolationKind::EmptyPath, agent.id, 0, "path is empty"});
      continue;
    }
    checked.push_back(path);
    if (path.cells.front() != agent.start)
      out.push_back({ViolationKind::StartMismatch, agent.id, 0,
                     "path starts at " + describe(path.cells.front()) + ", agent starts at " + describe(agent.start)});
    if (path.cells.back() != agent.goal)
      out.push_back({ViolationKind::GoalMismatch, agent.id, static_cast<int>(path.cells.size()) - 1,
                     "path ends at " + describe(path.cells.back()) + ", goal is " + describe(agent.goal)});

    const auto& model = MotionModel::for_kind(agent.kind);
    std::vector<bool> cell_ok(path.cells.size(), true);
    for (std::size_t t = 0; t < path.cells.size(); ++t) {
      const Cell c = path.cells[t];
      const int ti = static_cast<int>(t);
      if (!grid.in_bounds(c)) {
        out.push_back({ViolationKind::OutOfBounds, agent.id, ti, describe(c) + " is outside the grid"});
        cell_ok[t] = false;
      } else if (grid.occupied(c)) {
        out.push_back({ViolationKind::Obstacle, agent.id, ti, describe(c) + " is an obstacle"});
        cell_ok[t] = false;
      } else if (agent.kind == AgentKind::AGV && c.k != 0) {
        out.push_back({ViolationKind::Kinematic, agent.id, ti, "AGV leaves the ground layer at " + describe(c)});
        cell_ok[t] = false;
      }
    }
    for (std::size_t t = 1; t < path.cells.size(); ++t) {
      if (!cell_ok[t - 1] || !cell_ok[t]) continue;
      if (!model.is_legal(path.cells[t - 1], path.cells[t]))
        out.push_back({ViolationKind::IllegalMove, agent.id, static_cast<int>(t),
                       "illegal move " + describe(path.cells[t - 1]) + " -> " + describe(path.cells[t])});
    }
  }
  for (const auto& c : detect_conflicts(checked)) {
    out.push_back({ViolationKind::Collision, c.agents.first, c.time,
                   std::string(c.kind == ConflictKind::Vertex ? "vertex" : "edge") + " conflict with agent " +
                       std::to_string(c.agents.second) + " at " + describe(c.cell)});
  }
  return out;
}

std::vector<std::string> validate_agents(const OccupancyGrid3D& grid, std::span<const Agent> agents) {
  std::vector<std::string> out;
  std::set<int> ids;
  std::map<Cell, int> starts, goals;
  for (const auto& a : agents) {
    const std::string who = "agent " + std::to_string(a.id);
    if (!ids.insert(a.id).second) out.push_back(who + ": duplicate id");
    for (auto [what, c] : {std::pair{"start", a.start}, std::pair{"goal", a.goal}}) {
      if (!grid.in_bounds(c))
        out.push_back(who + ": " + what + " " + describe(c) + " is outside the grid");
      else if (grid.occupied(c))
        out.push_back(who + ": " + what + " " + describe(c) + " is an obstacle");
      if (a.kind == AgentKind::AGV && c.k != 0)
        out.push_back(who + ": AGV " + what + " " + describe(c) + " is not on the ground layer");
    }
    if (auto [it, fresh] = starts.emplace(a.start, a.id); !fresh)
      out.push_back(who + ": start shared with agent " + std::to_string(it->second));
    if (auto [it, fresh] = goals.emplace(a.goal, a.id); !fresh)
      out.push_back(who + ": goal shared with agent " + std::to_string(it->second));
  }
  return out;
}

}  // namespace skyrover
