#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "skyrover/mapf.hpp"
#include "skyrover/voxel_map.hpp"

namespace skyrover {

/// Procedural warehouse: rows of shelf blocks running along x, separated by
/// aisles, with cross-aisle gaps every few metres. Layers above the shelves
/// stay open for UAV traffic.
struct WarehouseParams {
  int nx = 80;
  int ny = 60;
  int nz = 10;
  double resolution = 1.0;
  int shelf_rows = 8;
  int shelf_height = 4;
  int uav_count = 6;
  int agv_count = 16;
  std::uint64_t seed = 1;
};

struct WarehouseScenario {
  OccupancyGrid3D grid;
  std::vector<Agent> agents;  // UAVs first, ids 0..n-1
};

OccupancyGrid3D generate_warehouse_grid(const WarehouseParams& params);

/// Grid plus a roster with mutually distinct starts and goals, each pair
/// connected in the static grid. Throws CapacityError when placement fails.
WarehouseScenario generate_warehouse(const WarehouseParams& params);

/// Parses rosters such as "6uav+16agv" or "1uav" into (uav, agv) counts.
std::pair<int, int> parse_roster_spec(std::string_view spec);

/// Uniform integer in [0, bound) from raw engine output, identical on every
/// standard library.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound);

/// Static BFS reachability for one vehicle class.
bool reachable(const OccupancyGrid3D& grid, AgentKind kind, Cell from, Cell to);

}  // namespace skyrover
