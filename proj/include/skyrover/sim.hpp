#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skyrover/mapf.hpp"
#include "skyrover/online_policy.hpp"
#include "skyrover/scenario.hpp"
#include "skyrover/solvers.hpp"

namespace skyrover {

/// init() could not produce a plan.
class SolveFailure : public Error {
 public:
  SolveFailure(SolveStatus status, const std::string& diagnostic)
      : Error(std::string(to_string(status)) + ": " + diagnostic), status_(status) {}
  SolveStatus status() const noexcept { return status_; }

 private:
  SolveStatus status_;
};

enum class AgentStatus { EnRoute, AtGoal, Failed };
enum class SimMode { PrecomputedPlan, OnlinePolicy };

std::string_view to_string(AgentStatus status);

struct SimState {
  int tick = 0;
  std::vector<Cell> agent_cells;  // roster order
  std::vector<AgentStatus> status;
  SimMode mode = SimMode::PrecomputedPlan;

  friend bool operator==(const SimState&, const SimState&) = default;
};

/// Joint configuration per tick. `ticks[t][n]` is agent `agent_ids[n]` at tick t.
struct TickLog {
  std::vector<int> agent_ids;
  std::vector<std::vector<Cell>> ticks;

  /// Column `n` as a path.
  Path path_of(std::size_t n) const;
  friend bool operator==(const TickLog&, const TickLog&) = default;
};

struct RunMetrics {
  double computation_time = 0.0;  // solver (or policy load) seconds before the first move
  double success_rate = 0.0;
  int makespan = 0;
  long long sum_of_costs = 0;
  std::vector<int> path_lengths;  // per agent, roster order
  std::size_t succeeded = 0;
};

struct RunRecord {
  const OccupancyGrid3D* grid = nullptr;
  std::span<const Agent> agents;
  const TickLog* log = nullptr;
  double computation_time = 0.0;
};

/// An agent succeeds when its logged trajectory is legal, collision-free and
/// ends on its goal. Success rate is the succeeding fraction of the roster.
RunMetrics collect_metrics(const RunRecord& record);

/// Online runs stop after this many ticks: 4 * (nx + ny + nz).
int default_step_budget(const OccupancyGrid3D& grid);

/// Unified init / step / reset wrapper around a solver or an online policy.
class Simulator {
 public:
  /// Runs the configured solver to completion (precomputed mode) or loads the
  /// policy (online mode). Throws ValidationError or SolveFailure.
  const SimState& init(std::shared_ptr<const OccupancyGrid3D> grid, std::vector<Agent> agents,
                       const SolverConfig& config);
  /// Precomputed mode over an existing plan instead of a solver run. The plan
  /// must pass validate_solution; reset() replays it rather than replanning.
  const SimState& init_plan(std::shared_ptr<const OccupancyGrid3D> grid, std::vector<Agent> agents, Solution plan,
                            double computation_time = 0.0);
  /// Advances every agent one tick. A no-op once every agent is at its goal.
  const SimState& step();
  /// Fresh state for the current roster, replanned from scratch.
  const SimState& reset();
  /// Fresh state for a new roster on the same grid.
  const SimState& reset(std::vector<Agent> agents);
  /// Fresh state for a new grid and roster.
  const SimState& reset(std::shared_ptr<const OccupancyGrid3D> grid, std::vector<Agent> agents);

  /// Steps until every agent is at goal or `budget` ticks have elapsed,
  /// marks stragglers failed and returns the metrics.
  RunMetrics run(std::optional<int> budget = std::nullopt);

  bool at_fixpoint() const;
  const SimState& state() const noexcept { return state_; }
  const TickLog& tick_log() const noexcept { return log_; }
  const std::optional<Solution>& solution() const noexcept { return solution_; }
  const std::vector<Agent>& agents() const noexcept { return agents_; }
  const OccupancyGrid3D& grid() const { return *grid_; }
  const SolverConfig& config() const noexcept { return config_; }
  double computation_time() const noexcept { return computation_time_; }
  const SolveStats& solve_stats() const noexcept { return stats_; }
  RunMetrics metrics() const;

 private:
  void start();

  std::shared_ptr<const OccupancyGrid3D> grid_;
  std::vector<Agent> agents_;
  SolverConfig config_;
  std::unique_ptr<OnlinePolicy> policy_;
  std::optional<Solution> solution_;
  std::optional<Solution> given_plan_;
  SolveStats stats_;
  double computation_time_ = 0.0;
  SimState state_;
  TickLog log_;
};

// ---- executor -----------------------------------------------------------

struct WaypointCommand {
  int agent_id = 0;
  double timestamp = 0.0;
  Vec3 position;
  bool hold = false;

  friend bool operator==(const WaypointCommand&, const WaypointCommand&) = default;
};

struct ExecutorOptions {
  double cell_duration = 1.0;  // seconds per timestep
  double resolution = 1.0;
  Vec3 origin;
};

/// One command per path index at the cell centre, ordered by (timestamp, agent id).
std::vector<WaypointCommand> execute_plan(const Solution& solution, const ExecutorOptions& options);

// ---- file formats -------------------------------------------------------

/// JSON plan: agents with kind and path, totals, and solver seconds (null when omitted).
struct PlanFile {
  std::vector<Agent> agents;  // id and kind are meaningful; start and goal mirror the path ends
  Solution solution;
  std::optional<double> computation_time_s;

  friend bool operator==(const PlanFile&, const PlanFile&) = default;
};

std::string write_plan(const PlanFile& plan);
PlanFile parse_plan(std::string_view json_text);

/// CSV with header agent_id,timestamp_s,x,y,z,hold.
std::string write_waypoints_csv(std::span<const WaypointCommand> commands);
std::vector<WaypointCommand> parse_waypoints_csv(std::string_view text);

/// CSV with header tick,agent_id,i,j,k.
std::string write_tick_log_csv(const TickLog& log);
TickLog parse_tick_log_csv(std::string_view text);

}  // namespace skyrover
