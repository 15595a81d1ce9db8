#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>

namespace skyrover {

/// Integer voxel coordinate. Ordering is lexicographic on (i, j, k).
struct Cell {
  int i = 0;
  int j = 0;
  int k = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
  friend constexpr Cell operator+(Cell a, Cell b) { return {a.i + b.i, a.j + b.j, a.k + b.k}; }
  friend constexpr Cell operator-(Cell a, Cell b) { return {a.i - b.i, a.j - b.j, a.k - b.k}; }
};

inline std::ostream& operator<<(std::ostream& os, const Cell& c) {
  return os << '(' << c.i << ',' << c.j << ',' << c.k << ')';
}

constexpr int manhattan(Cell a, Cell b) {
  auto abs = [](int v) { return v < 0 ? -v : v; };
  return abs(a.i - b.i) + abs(a.j - b.j) + abs(a.k - b.k);
}

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(c.i);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(c.j);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(c.k);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace skyrover
