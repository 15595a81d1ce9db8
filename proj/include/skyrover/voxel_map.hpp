#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skyrover/geometry.hpp"

namespace skyrover {

struct PointCloud {
  std::vector<Vec3> points;
  /// Non-finite points removed while parsing.
  std::size_t dropped = 0;

  std::size_t count() const noexcept { return points.size(); }
};

/// Dense 0/1 voxel grid. Cell (i, j, k) is stored at i + nx * (j + ny * k).
/// Cell (i, j, k) spans [origin + (i, j, k) * resolution, origin + (i+1, j+1, k+1) * resolution).
class OccupancyGrid3D {
 public:
  OccupancyGrid3D() : OccupancyGrid3D({0, 0, 0}, 1.0, 1, 1, 1) {}
  OccupancyGrid3D(Vec3 origin, double resolution, int nx, int ny, int nz);

  Vec3 origin() const noexcept { return origin_; }
  double resolution() const noexcept { return resolution_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int nz() const noexcept { return nz_; }
  std::size_t size() const noexcept { return cells_.size(); }

  bool in_bounds(Cell c) const noexcept {
    return c.i >= 0 && c.j >= 0 && c.k >= 0 && c.i < nx_ && c.j < ny_ && c.k < nz_;
  }
  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.i) +
           static_cast<std::size_t>(nx_) * (static_cast<std::size_t>(c.j) + static_cast<std::size_t>(ny_) * c.k);
  }
  Cell cell_at(std::size_t index) const noexcept;

  bool occupied(Cell c) const noexcept { return cells_[index(c)] != 0; }
  /// In bounds and not an obstacle.
  bool is_free(Cell c) const noexcept { return in_bounds(c) && cells_[index(c)] == 0; }
  void set(Cell c, bool occupied) noexcept { cells_[index(c)] = occupied ? 1 : 0; }
  void set_index(std::size_t index, bool occupied) noexcept { cells_[index] = occupied ? 1 : 0; }

  std::size_t occupied_count() const noexcept;
  std::size_t free_count() const noexcept { return size() - occupied_count(); }

  /// Center of a cell in world coordinates.
  Vec3 cell_center(Cell c) const noexcept;

  const std::vector<std::uint8_t>& raw() const noexcept { return cells_; }

  friend bool operator==(const OccupancyGrid3D&, const OccupancyGrid3D&) = default;

 private:
  Vec3 origin_;
  double resolution_;
  int nx_, ny_, nz_;
  std::vector<std::uint8_t> cells_;
};

/// 2D ground map. Row y = 0 is the bottom (minimum-y) row of the map; PGM files
/// store the top row first, so file row r lands at y = height - 1 - r.
struct GroundMap2D {
  int width = 0;
  int height = 0;
  double resolution = 1.0;
  std::vector<std::uint8_t> occupancy;  // x + width * y

  bool occupied(int x, int y) const { return occupancy[static_cast<std::size_t>(x + width * y)] != 0; }
  friend bool operator==(const GroundMap2D&, const GroundMap2D&) = default;
};

// ---- PCD ----------------------------------------------------------------

enum class PcdEncoding { Ascii, Binary };

/// Reads PCD v0.7 (DATA ascii or binary). x, y, z must be TYPE F SIZE 4.
PointCloud parse_pcd(std::string_view bytes);
std::string write_pcd(const PointCloud& cloud, PcdEncoding encoding);

// ---- PGM ----------------------------------------------------------------

struct PgmOptions {
  /// Pixels strictly below this value are obstacles.
  int occupied_threshold = 128;
  double resolution = 1.0;
};

GroundMap2D parse_pgm(std::string_view bytes, const PgmOptions& options = {});

enum class PgmEncoding { Ascii, Binary };
/// Occupied cells are written as 0, free cells as 255.
std::string write_pgm(const GroundMap2D& map, PgmEncoding encoding);

// ---- rasterization ------------------------------------------------------

struct Bounds {
  Vec3 min;
  Vec3 max;
};

struct RasterizeOptions {
  double resolution = 1.0;
  std::optional<Bounds> bounds;
  /// Cells added on every face when bounds are derived from the cloud.
  int padding = 1;
  std::uint64_t max_cells = std::uint64_t{1} << 28;
};

OccupancyGrid3D rasterize(const PointCloud& cloud, const RasterizeOptions& options);

enum class ExtrudeMode {
  GroundOnly,  // only layer 0 carries the map
  Walls,       // occupied pixels become full-height columns
};

OccupancyGrid3D extrude_ground(const GroundMap2D& map, int nz, ExtrudeMode mode = ExtrudeMode::GroundOnly);

// ---- SKYGRID1 -----------------------------------------------------------

inline constexpr std::string_view kGridMagic = "SKYGRID1\n";

std::string write_grid(const OccupancyGrid3D& grid);
OccupancyGrid3D read_grid(std::string_view bytes);

}  // namespace skyrover
