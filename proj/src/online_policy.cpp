#include "skyrover/online_policy.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>
#include <unordered_map>

#include "skyrover/errors.hpp"

namespace skyrover {

namespace {

bool legal_step(const OccupancyGrid3D& grid, const Agent& agent, Cell from, Cell to) {
  if (!grid.is_free(to)) return false;
  if (agent.kind == AgentKind::AGV && to.k != 0) return false;
  return MotionModel::for_kind(agent.kind).is_legal(from, to);
}

class GreedyShielded final : public OnlinePolicy {
 public:
  std::string_view name() const override { return "greedy-shielded"; }
  void load(const OccupancyGrid3D&, std::span<const Agent>, std::uint64_t) override {}

  std::vector<std::vector<Cell>> propose(const WorldView& view) override {
    std::vector<std::vector<Cell>> out(view.agents.size());
    for (std::size_t n = 0; n < view.agents.size(); ++n) {
      const Agent& agent = view.agents[n];
      const Cell here = view.current[n];
      if (here == agent.goal) continue;
      int best = manhattan(here, agent.goal);
      std::optional<Cell> pick;
      for (const Cell& move : MotionModel::for_kind(agent.kind).moves()) {
        const Cell next = here + move;
        if (next == here || !legal_step(*view.grid, agent, here, next)) continue;
        if (const int d = manhattan(next, agent.goal); d < best) {
          best = d;
          pick = next;
        }
      }
      if (pick) out[n].push_back(*pick);
    }
    return out;
  }
};

class FieldShielded final : public OnlinePolicy {
 public:
  std::string_view name() const override { return "field-shielded"; }

  void load(const OccupancyGrid3D& grid, std::span<const Agent> agents, std::uint64_t seed) override {
    rng_.seed(seed);
    fields_.clear();
    stalled_.assign(agents.size(), 0);
    for (const auto& agent : agents) fields_.push_back(distance_field(grid, agent));
  }

  std::vector<std::vector<Cell>> propose(const WorldView& view) override {
    if (fields_.size() != view.agents.size()) throw ContractError("field-shielded: policy was loaded for another roster");
    std::vector<std::vector<Cell>> out(view.agents.size());
    for (std::size_t n = 0; n < view.agents.size(); ++n) {
      const Agent& agent = view.agents[n];
      const Cell here = view.current[n];
      if (here == agent.goal) {
        stalled_[n] = 0;
        continue;
      }
      const auto& field = fields_[n];
      const int d_here = field[view.grid->index(here)];
      std::vector<Cell> closer, other;
      for (const Cell& move : MotionModel::for_kind(agent.kind).moves()) {
        const Cell next = here + move;
        if (next == here || !legal_step(*view.grid, agent, here, next)) continue;
        const int d = field[view.grid->index(next)];
        if (d < 0) continue;
        (d < d_here ? closer : other).push_back(next);
      }
      out[n] = closer;
      // Blocked for a while: offer detours in a seeded random order.
      if (stalled_[n] >= kStallTicks) {
        std::shuffle(other.begin(), other.end(), rng_);
        out[n].insert(out[n].end(), other.begin(), other.end());
      }
    }
    return out;
  }

  void observe(std::span<const Cell> before, std::span<const Cell> after) override {
    for (std::size_t n = 0; n < before.size() && n < stalled_.size(); ++n)
      stalled_[n] = before[n] == after[n] ? stalled_[n] + 1 : 0;
  }

 private:
  static constexpr int kStallTicks = 2;

  static std::vector<int> distance_field(const OccupancyGrid3D& grid, const Agent& agent) {
    std::vector<int> dist(grid.size(), -1);
    if (!grid.is_free(agent.goal)) return dist;
    std::deque<Cell> queue{agent.goal};
    dist[grid.index(agent.goal)] = 0;
    const auto& model = MotionModel::for_kind(agent.kind);
    while (!queue.empty()) {
      const Cell c = queue.front();
      queue.pop_front();
      for (const Cell& move : model.moves()) {
        const Cell n = c + move;
        if (n == c || !grid.is_free(n)) continue;
        auto& slot = dist[grid.index(n)];
        if (slot >= 0) continue;
        slot = dist[grid.index(c)] + 1;
        queue.push_back(n);
      }
    }
    return dist;
  }

  std::mt19937_64 rng_;
  std::vector<std::vector<int>> fields_;
  std::vector<int> stalled_;
};

}  // namespace

std::unique_ptr<OnlinePolicy> make_policy(std::string_view name) {
  if (name == "greedy-shielded") return std::make_unique<GreedyShielded>();
  if (name == "field-shielded") return std::make_unique<FieldShielded>();
  throw InvalidInputError("unknown online policy '" + std::string(name) + "'");
}

std::vector<std::string> available_policies() { return {"greedy-shielded", "field-shielded"}; }

std::vector<Cell> shield_joint_move(const WorldView& view, const std::vector<std::vector<Cell>>& candidates) {
  const std::size_t n = view.agents.size();
  if (view.grid == nullptr || view.current.size() != n || candidates.size() != n)
    throw ContractError("shield_joint_move: view and candidates disagree on team size");
  {
    std::vector<Path> now;
    for (std::size_t a = 0; a < n; ++a) now.push_back({view.agents[a].id, {view.current[a]}});
    if (!detect_conflicts(now).empty()) throw ContractError("shield_joint_move: current configuration has a collision");
  }

  // Per agent: legal candidates in rank order, then wait.
  std::vector<std::vector<Cell>> options(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (const Cell& c : candidates[a])
      if (c != view.current[a] && legal_step(*view.grid, view.agents[a], view.current[a], c)) options[a].push_back(c);
    options[a].push_back(view.current[a]);
  }
  std::vector<std::size_t> choice(n, 0);
  auto next = [&](std::size_t a) { return options[a][choice[a]]; };
  auto waiting = [&](std::size_t a) { return choice[a] + 1 == options[a].size(); };
  auto id = [&](std::size_t a) { return view.agents[a].id; };

  for (;;) {
    std::vector<bool> yield(n, false);
    std::unordered_map<Cell, std::vector<std::size_t>, CellHash> by_target;
    std::unordered_map<Cell, std::size_t, CellHash> by_current;
    for (std::size_t a = 0; a < n; ++a) {
      by_target[next(a)].push_back(a);
      by_current[view.current[a]] = a;
    }
    for (const auto& [cell, group] : by_target) {
      if (group.size() < 2) continue;
      auto stayer = std::find_if(group.begin(), group.end(), [&](std::size_t a) { return waiting(a); });
      std::size_t keep = group.front();
      if (stayer != group.end()) {
        keep = *stayer;
      } else {
        for (auto a : group)
          if (id(a) < id(keep)) keep = a;
      }
      for (auto a : group)
        if (a != keep) yield[a] = true;
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (waiting(a)) continue;
      auto it = by_current.find(next(a));
      if (it == by_current.end()) continue;
      const std::size_t b = it->second;
      if (b != a && next(b) == view.current[a]) yield[id(a) > id(b) ? a : b] = true;
    }
    bool changed = false;
    for (std::size_t a = 0; a < n; ++a) {
      if (yield[a] && !waiting(a)) {
        ++choice[a];
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::vector<Cell> out(n);
  for (std::size_t a = 0; a < n; ++a) out[a] = next(a);
  return out;
}

std::vector<Cell> online_policy_step(OnlinePolicy& policy, const WorldView& view) {
  auto moves = shield_joint_move(view, policy.propose(view));
  policy.observe(view.current, moves);
  return moves;
}

}  // namespace skyrover
