#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skyrover/geometry.hpp"
#include "skyrover/voxel_map.hpp"

namespace skyrover {

enum class AgentKind { UAV, AGV };

std::string_view to_string(AgentKind kind);
AgentKind agent_kind_from_string(std::string_view name);

struct Agent {
  int id = 0;
  AgentKind kind = AgentKind::UAV;
  Cell start;
  Cell goal;

  friend bool operator==(const Agent&, const Agent&) = default;
};

/// Unit moves available to a vehicle class. The first entry is always the wait
/// action; the rest follow +x, -x, +y, -y, +z, -z.
class MotionModel {
 public:
  static const MotionModel& for_kind(AgentKind kind);

  AgentKind kind() const noexcept { return kind_; }
  std::span<const Cell> moves() const noexcept { return moves_; }
  /// True when `to` is reachable from `from` in one action (wait included).
  bool is_legal(Cell from, Cell to) const noexcept;

 private:
  MotionModel(AgentKind kind, std::vector<Cell> moves) : kind_(kind), moves_(std::move(moves)) {}
  AgentKind kind_;
  std::vector<Cell> moves_;
};

struct Path {
  int agent_id = 0;
  std::vector<Cell> cells;  // cells[t] is the position at timestep t

  /// Position at t with stay-at-goal semantics beyond the last index.
  Cell at(std::size_t t) const { return t < cells.size() ? cells[t] : cells.back(); }
  /// Arrival time: first index of the terminal run at the final cell.
  int cost() const;
  friend bool operator==(const Path&, const Path&) = default;
};

enum class ConflictKind { Vertex, Edge };

/// `agents.first < agents.second`. For edge conflicts `time` is the arrival
/// timestep of the swap and `cells` is the first agent's (from, to).
struct Conflict {
  ConflictKind kind = ConflictKind::Vertex;
  std::pair<int, int> agents;
  int time = 0;
  Cell cell;
  Cell to;  // edge conflicts only

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

/// Forbids `agent_id` from occupying `cell` at `time` (vertex) or from moving
/// `cell` -> `to` arriving at `time` (edge).
struct Constraint {
  int agent_id = 0;
  ConflictKind kind = ConflictKind::Vertex;
  int time = 0;
  Cell cell;
  Cell to;

  friend bool operator==(const Constraint&, const Constraint&) = default;
  friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

struct Solution {
  std::vector<Path> paths;  // roster order
  long long sum_of_costs = 0;
  int makespan = 0;

  friend bool operator==(const Solution&, const Solution&) = default;
};

/// Builds a Solution with costs recomputed from the paths.
Solution make_solution(std::vector<Path> paths);

/// Every vertex and swap conflict among `paths` up to the longest path (or
/// `horizon` when given), sorted by (time, lower agent id, vertex first,
/// higher agent id).
std::vector<Conflict> detect_conflicts(std::span<const Path> paths, std::optional<int> horizon = std::nullopt);

enum class ViolationKind {
  MissingPath,
  EmptyPath,
  StartMismatch,
  GoalMismatch,
  OutOfBounds,
  Obstacle,
  IllegalMove,
  Kinematic,
  Collision,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int agent_id;
  int time;
  std::string message;
};

/// Empty result means the solution is valid. Collisions are reported once per conflict.
std::vector<Violation> validate_solution(const OccupancyGrid3D& grid, std::span<const Agent> agents,
                                         std::span<const Path> paths);

/// Checks roster-level invariants: in-bounds free starts/goals, ground-locked
/// AGVs, unique ids, distinct starts and goals.
std::vector<std::string> validate_agents(const OccupancyGrid3D& grid, std::span<const Agent> agents);

}  // namespace skyrover
