#include "skyrover/warehouse.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <string>

#include "skyrover/errors.hpp"

namespace skyrover {

namespace {

constexpr int kMargin = 3;
constexpr int kShelfDepth = 2;
constexpr int kCrossAisle = 3;
constexpr int kPlacementTries = 2000;

}  // namespace

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw ContractError("draw_below: bound must be positive");
  const std::uint64_t max = std::mt19937_64::max();
  const std::uint64_t limit = max - (max % bound + 1) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x <= limit) return x % bound;
  }
}

bool reachable(const OccupancyGrid3D& grid, AgentKind kind, Cell from, Cell to) {
  if (!grid.is_free(from) || !grid.is_free(to)) return false;
  if (from == to) return true;
  std::vector<std::uint8_t> seen(grid.size(), 0);
  std::deque<Cell> queue{from};
  seen[grid.index(from)] = 1;
  const auto& model = MotionModel::for_kind(kind);
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (const Cell& move : model.moves()) {
      const Cell n = c + move;
      if (n == c || !grid.is_free(n) || seen[grid.index(n)]) continue;
      if (n == to) return true;
      seen[grid.index(n)] = 1;
      queue.push_back(n);
    }
  }
  return false;
}

OccupancyGrid3D generate_warehouse_grid(const WarehouseParams& p) {
  if (p.nx < 1 || p.ny < 1 || p.nz < 1) throw InvalidInputError("warehouse dims must be positive");
  if (p.shelf_rows < 0 || p.shelf_height < 0) throw InvalidInputError("shelf parameters must be non-negative");
  OccupancyGrid3D grid({0, 0, 0}, p.resolution, p.nx, p.ny, p.nz);
  if (p.shelf_rows == 0 || p.shelf_height == 0) return grid;

  const int pitch = (p.ny - 2 * kMargin) / p.shelf_rows;
  if (pitch < kShelfDepth + 2 || p.nx < 2 * kMargin + 4)
    throw CapacityError("warehouse dims too small for " + std::to_string(p.shelf_rows) + " shelf rows");

  // Leave at least one open layer above the shelves when the grid has height.
  const int height = std::min(p.shelf_height, std::max(1, p.nz - 1));
  std::mt19937_64 rng(p.seed);
  for (int row = 0; row < p.shelf_rows; ++row) {
    const int y0 = kMargin + row * pitch + (pitch - kShelfDepth) / 2;
    int x = kMargin;
    while (x < p.nx - kMargin) {
      const int length = 6 + static_cast<int>(draw_below(rng, 5));
      const int x1 = std::min(x + length, p.nx - kMargin);
      for (int i = x; i < x1; ++i)
        for (int j = y0; j < y0 + kShelfDepth; ++j)
          for (int k = 0; k < height; ++k) grid.set({i, j, k}, true);
      x = x1 + kCrossAisle;
    }
  }
  return grid;
}

WarehouseScenario generate_warehouse(const WarehouseParams& p) {
  if (p.uav_count < 0 || p.agv_count < 0) throw InvalidInputError("agent counts must be non-negative");
  WarehouseScenario out{generate_warehouse_grid(p), {}};
  const auto& grid = out.grid;

  std::vector<Cell> ground, air;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.raw()[idx]) continue;
    const Cell c = grid.cell_at(idx);
    air.push_back(c);
    if (c.k == 0) ground.push_back(c);
  }

  std::mt19937_64 rng(p.seed ^ 0x5DEECE66DULL);
  std::set<Cell> used;
  auto place = [&](int id, AgentKind kind) {
    const auto& pool = kind == AgentKind::AGV ? ground : air;
    if (pool.size() < 2) throw CapacityError("placement failure: no free cells for agent " + std::to_string(id));
    for (int attempt = 0; attempt < kPlacementTries; ++attempt) {
      const Cell start = pool[draw_below(rng, pool.size())];
      const Cell goal = pool[draw_below(rng, pool.size())];
      if (start == goal || used.count(start) || used.count(goal)) continue;
      if (!reachable(grid, kind, start, goal)) continue;
      used.insert(start);
      used.insert(goal);
      out.agents.push_back({id, kind, start, goal});
      return;
    }
    throw CapacityError("placement failure: could not place agent " + std::to_string(id) + " after " +
                        std::to_string(kPlacementTries) + " attempts");
  };
  int id = 0;
  for (int n = 0; n < p.uav_count; ++n) place(id++, AgentKind::UAV);
  for (int n = 0; n < p.agv_count; ++n) place(id++, AgentKind::AGV);
  return out;
}

std::pair<int, int> parse_roster_spec(std::string_view spec) {
  int uav = 0, agv = 0;
  std::size_t pos = 0;
  if (spec.empty()) throw InvalidInputError("empty roster spec");
  while (pos <= spec.size()) {
    std::size_t end = spec.find('+', pos);
    if (end == std::string_view::npos) end = spec.size();
    const std::string_view part = spec.substr(pos, end - pos);
    std::size_t digits = 0;
    while (digits < part.size() && std::isdigit(static_cast<unsigned char>(part[digits]))) ++digits;
    if (digits == 0 || digits > 6) throw InvalidInputError("bad roster term '" + std::string(part) + "'");
    const int count = std::stoi(std::string(part.substr(0, digits)));
    const std::string_view kind = part.substr(digits);
    if (kind == "uav")
      uav += count;
    else if (kind == "agv")
      agv += count;
    else
      throw InvalidInputError("bad roster term '" + std::string(part) + "' (expected e.g. 6uav+16agv)");
    pos = end + 1;
  }
  return {uav, agv};
}

}  // namespace skyrover
