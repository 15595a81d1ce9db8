#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "skyrover/mapf.hpp"

namespace skyrover {

namespace detail {

struct TimedCell {
  Cell cell;
  int t;
  friend bool operator==(const TimedCell&, const TimedCell&) = default;
};

struct TimedMove {
  Cell from;
  Cell to;
  int t;
  friend bool operator==(const TimedMove&, const TimedMove&) = default;
};

struct TimedCellHash {
  std::size_t operator()(const TimedCell& v) const noexcept {
    return CellHash{}(v.cell) * 31 + static_cast<std::size_t>(v.t);
  }
};

struct TimedMoveHash {
  std::size_t operator()(const TimedMove& v) const noexcept {
    return (CellHash{}(v.from) * 1315423911u) ^ (CellHash{}(v.to) * 31 + static_cast<std::size_t>(v.t));
  }
};

}  // namespace detail

/// Space-time occupancy of already planned agents. Each added path reserves
/// its cells per timestep, its moves, and its final cell from its last timestep on.
class ReservationTable {
 public:
  void add_path(const Path& path, int start_time = 0);

  bool vertex_reserved(Cell c, int t) const;
  /// Someone else moves `from` -> `to` arriving at `t`.
  bool edge_reserved(Cell from, Cell to, int t) const;
  bool terminal_blocked(Cell c, int t) const;

  /// Would moving `from` -> `to` arriving at `t` collide with a reservation?
  bool blocks_move(Cell from, Cell to, int t) const {
    return vertex_reserved(to, t) || terminal_blocked(to, t) || edge_reserved(to, from, t);
  }
  /// Latest time with a vertex reservation at `c`, or -1.
  int last_vertex_time(Cell c) const;
  bool has_terminal(Cell c) const { return terminal_.count(c) != 0; }
  /// Latest timestep carrying any reservation.
  int max_time() const noexcept { return max_time_; }

 private:
  std::unordered_set<detail::TimedCell, detail::TimedCellHash> vertex_;
  std::unordered_set<detail::TimedMove, detail::TimedMoveHash> edge_;
  std::unordered_map<Cell, int, CellHash> terminal_;
  std::unordered_map<Cell, int, CellHash> last_vertex_;
  int max_time_ = -1;
};

enum class Algorithm { PrioritizedAStar, CBS, Online };

std::string_view to_string(Algorithm algorithm);
/// Accepts the CLI names "astar", "cbs" and "online".
Algorithm algorithm_from_string(std::string_view name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::CBS;
  /// Cap on expanded nodes in any one search loop: CT nodes for CBS and
  /// space-time states for each single-agent search.
  std::uint64_t node_expansion_limit = 2'000'000;
  /// Wall-clock budget in seconds for a whole solve.
  double time_limit = 300.0;
  std::uint64_t rng_seed = 0;
  std::string online_policy = "greedy-shielded";

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Throws InvalidInputError when a limit is not strictly positive.
void validate(const SolverConfig& config);

enum class SearchStatus { Found, NoPath, ResourceLimit };

struct SearchResult {
  SearchStatus status = SearchStatus::NoPath;
  Path path;  // cells[0] is the position at start_time
  std::uint64_t expansions = 0;
};

struct SpaceTimeQuery {
  const OccupancyGrid3D* grid = nullptr;
  AgentKind kind = AgentKind::UAV;
  int agent_id = 0;
  Cell start;
  Cell goal;
  /// Only constraints whose agent_id matches are honored.
  std::span<const Constraint> constraints;
  const ReservationTable* reservations = nullptr;
  int start_time = 0;
  std::uint64_t expansion_limit = 2'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Optimal single-agent search over (cell, time) with wait actions. The
/// returned path ends at the first time the agent can rest at its goal forever.
SearchResult spacetime_astar(const SpaceTimeQuery& query);

enum class SolveStatus { Solved, NoSolution, ResourceLimit };

std::string_view to_string(SolveStatus status);

struct SolveStats {
  std::uint64_t high_level_expansions = 0;
  std::uint64_t high_level_generated = 0;
  std::uint64_t low_level_expansions = 0;
  double seconds = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::NoSolution;
  std::optional<Solution> solution;
  std::string diagnostic;
  SolveStats stats;
};

/// Conflict-based search, optimal in sum-of-costs.
SolveResult cbs_solve(const OccupancyGrid3D& grid, std::span<const Agent> agents, const SolverConfig& config);

/// Sequential space-time A* in ascending id order against a growing reservation table.
SolveResult prioritized_solve(const OccupancyGrid3D& grid, std::span<const Agent> agents, const SolverConfig& config);

/// Dispatches on config.algorithm; the online algorithm has no offline solve.
SolveResult solve(const OccupancyGrid3D& grid, std::span<const Agent> agents, const SolverConfig& config);

}  // namespace skyrover
