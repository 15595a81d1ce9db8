#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skyrover/scenario.hpp"
#include "skyrover/sim.hpp"

namespace skyrover {

/// A task script that cannot be compiled against the roster and grid.
class TaskError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

struct Hold {
  int agent_id = 0;
  Cell cell;
  int duration = 0;

  friend bool operator==(const Hold&, const Hold&) = default;
};

struct Episode {
  std::string name;  // "E1", "E2"
  std::vector<Agent> agents;  // roster order, per-episode start and goal
  std::vector<Hold> holds;    // each hold cell equals that agent's episode goal

  friend bool operator==(const Episode&, const Episode&) = default;
};

Cell hover_cell(const TaskScript& script);

/// E1 is the rendezvous (AGV to A, UAV above A). E2 sends the carrier on to B
/// and releases the other vehicle to its roster goal. E2 starts where E1 ends.
std::vector<Episode> compile_task(const TaskScript& script, const std::vector<Agent>& agents,
                                  const OccupancyGrid3D& grid);

struct EpisodeReport {
  std::string name;
  RunMetrics metrics;
  TickLog tick_log;  // includes the post-arrival hold ticks
  std::optional<Solution> solution;
  bool success = false;
};

struct TaskReport {
  std::vector<EpisodeReport> episodes;
  bool rendezvous = false;
  int rendezvous_ticks = 0;  // trailing run of E1 ticks with UAV = AGV + (0,0,hover_offset)
  bool success = false;
  std::string failure;  // empty on success
  std::optional<SolveStatus> failure_status;
};

/// Length of the trailing run of ticks in which `uav` sits `offset` cells above `agv`.
int trailing_rendezvous(const TickLog& log, int agv_id, int uav_id, int offset);

TaskReport run_task(std::shared_ptr<const OccupancyGrid3D> grid, const std::vector<Agent>& agents,
                    const TaskScript& script, const SolverConfig& config);

}  // namespace skyrover
