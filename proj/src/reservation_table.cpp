#include "skyrover/solvers.hpp"

#include <algorithm>

namespace skyrover {

void ReservationTable::add_path(const Path& path, int start_time) {
  if (path.cells.empty()) return;
  for (std::size_t i = 0; i < path.cells.size(); ++i) {
    const int t = start_time + static_cast<int>(i);
    const Cell c = path.cells[i];
    vertex_.insert({c, t});
    auto [it, fresh] = last_vertex_.emplace(c, t);
    if (!fresh) it->second = std::max(it->second, t);
    if (i > 0 && path.cells[i - 1] != c) edge_.insert({path.cells[i - 1], c, t});
  }
  const int end = start_time + static_cast<int>(path.cells.size()) - 1;
  auto [it, fresh] = terminal_.emplace(path.cells.back(), end);
  if (!fresh) it->second = std::min(it->second, end);
  max_time_ = std::max(max_time_, end);
}

bool ReservationTable::vertex_reserved(Cell c, int t) const { return vertex_.count({c, t}) != 0; }

bool ReservationTable::edge_reserved(Cell from, Cell to, int t) const { return edge_.count({from, to, t}) != 0; }

bool ReservationTable::terminal_blocked(Cell c, int t) const {
  auto it = terminal_.find(c);
  return it != terminal_.end() && t >= it->second;
}

int ReservationTable::last_vertex_time(Cell c) const {
  auto it = last_vertex_.find(c);
  return it == last_vertex_.end() ? -1 : it->second;
}

}  // namespace skyrover
