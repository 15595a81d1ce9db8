#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skyrover/errors.hpp"
#include "skyrover/mapf.hpp"
#include "skyrover/solvers.hpp"
#include "skyrover/voxel_map.hpp"

namespace skyrover {

/// A scenario or roster that failed validation. `problems()` lists every issue found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string out = "invalid scenario";
    for (const auto& s : p) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> problems_;
};

enum class TaskKind { InventoryScan, AerialTransfer };

std::string_view to_string(TaskKind kind);
TaskKind task_kind_from_string(std::string_view name);

/// UAV-AGV interaction script: the AGV drives to point A, the UAV hovers
/// `hover_offset` cells above it for `hold_steps` ticks, then either the AGV
/// (inventory scan) or the UAV (aerial transfer) continues to point B.
struct TaskScript {
  TaskKind kind = TaskKind::InventoryScan;
  int agv_id = 0;
  int uav_id = 0;
  Cell point_a;
  Cell point_b;
  int hover_offset = 2;
  int hold_steps = 3;

  friend bool operator==(const TaskScript&, const TaskScript&) = default;
};

/// Inline grid description used instead of a SKYGRID1 file path.
struct GridGenerator {
  std::string kind = "empty";  // "empty" or "warehouse"
  int nx = 1, ny = 1, nz = 1;
  double resolution = 1.0;
  int shelf_rows = 8;     // warehouse only
  int shelf_height = 4;   // warehouse only
  std::uint64_t seed = 1; // warehouse only

  friend bool operator==(const GridGenerator&, const GridGenerator&) = default;
};

struct GridSource {
  std::optional<std::string> path;  // relative paths resolve against the scenario's directory
  std::optional<GridGenerator> generator;

  friend bool operator==(const GridSource&, const GridSource&) = default;
};

struct Scenario {
  GridSource grid;
  std::vector<Agent> agents;
  std::uint64_t seed = 0;
  std::optional<SolverConfig> solver;
  std::optional<TaskScript> task;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Strict JSON reader: unknown keys and wrong types are ValidationErrors.
Scenario parse_scenario(std::string_view json_text);
std::string write_scenario(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);

/// Reads or generates the grid.
OccupancyGrid3D load_grid(const GridSource& source, const std::filesystem::path& base_dir);

/// Throws ValidationError when the roster breaks an Agent invariant on `grid`.
void check_roster(const OccupancyGrid3D& grid, const std::vector<Agent>& agents);

}  // namespace skyrover
