#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skyrover/mapf.hpp"

namespace skyrover {

/// Everything a policy may look at on one tick. `current[n]` belongs to `agents[n]`.
struct WorldView {
  const OccupancyGrid3D* grid = nullptr;
  std::span<const Agent> agents;
  std::span<const Cell> current;
};

/// A controller queried once per tick for the whole team. Policies return
/// ranked candidate cells per agent; the shield picks the first candidate
/// that keeps the team collision-free and falls back to waiting.
class OnlinePolicy {
 public:
  virtual ~OnlinePolicy() = default;
  virtual std::string_view name() const = 0;
  /// Per-scenario preparation: the counterpart of loading a model file.
  virtual void load(const OccupancyGrid3D& grid, std::span<const Agent> agents, std::uint64_t seed) = 0;
  virtual std::vector<std::vector<Cell>> propose(const WorldView& view) = 0;
  /// Sees the joint move the shield actually applied.
  virtual void observe(std::span<const Cell> /*before*/, std::span<const Cell> /*after*/) {}
};

/// Known names: "greedy-shielded" (Manhattan descent) and "field-shielded"
/// (descent on exact static distance fields with seeded unsticking).
std::unique_ptr<OnlinePolicy> make_policy(std::string_view name);
std::vector<std::string> available_policies();

/// Resolves ranked proposals into a conflict-free joint move. On a contested
/// cell the lowest id proceeds and the others fall back; an agent moving into a
/// cell whose occupant stays put always falls back; in a swap the higher id
/// falls back. Illegal candidates are skipped.
std::vector<Cell> shield_joint_move(const WorldView& view, const std::vector<std::vector<Cell>>& candidates);

/// One policy query followed by the shield.
std::vector<Cell> online_policy_step(OnlinePolicy& policy, const WorldView& view);

}  // namespace skyrover
