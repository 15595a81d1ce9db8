#include "skyrover/tasks.hpp"

#include <algorithm>
#include <sstream>

#include "skyrover/log.hpp"

namespace skyrover {

Cell hover_cell(const TaskScript& script) { return script.point_a + Cell{0, 0, script.hover_offset}; }

namespace {

std::size_t find_agent(const std::vector<Agent>& agents, int id, AgentKind kind, const char* role) {
  auto it = std::find_if(agents.begin(), agents.end(), [&](const Agent& a) { return a.id == id; });
  if (it == agents.end()) throw TaskError(std::string(role) + " " + std::to_string(id) + " is not in the roster");
  if (it->kind != kind)
    throw TaskError(std::string(role) + " " + std::to_string(id) + " is a " + std::string(to_string(it->kind)) +
                    ", expected " + std::string(to_string(kind)));
  return static_cast<std::size_t>(it - agents.begin());
}

void require_free(const OccupancyGrid3D& grid, Cell c, const std::string& what) {
  std::ostringstream os;
  os << c;
  if (!grid.in_bounds(c)) throw TaskError(what + " " + os.str() + " is out of bounds");
  if (grid.occupied(c)) throw TaskError(what + " " + os.str() + " is occupied");
}

void require_valid(const OccupancyGrid3D& grid, const Episode& ep) {
  auto problems = validate_agents(grid, ep.agents);
  if (problems.empty()) return;
  std::string msg = "episode " + ep.name + " is infeasible:";
  for (const auto& p : problems) msg += " " + p + ";";
  msg.pop_back();
  throw TaskError(msg);
}

}  // namespace

std::vector<Episode> compile_task(const TaskScript& script, const std::vector<Agent>& agents,
                                  const OccupancyGrid3D& grid) {
  const std::size_t agv = find_agent(agents, script.agv_id, AgentKind::AGV, "agv_id");
  const std::size_t uav = find_agent(agents, script.uav_id, AgentKind::UAV, "uav_id");
  if (script.hover_offset < 1) throw TaskError("hover_offset must be positive");
  if (script.hold_steps < 1) throw TaskError("hold_steps must be positive");

  require_free(grid, script.point_a, "point A");
  if (script.point_a.k != 0) throw TaskError("point A must be on the ground layer");
  require_free(grid, hover_cell(script), "hover cell");
  require_free(grid, script.point_b, "point B");
  if (script.kind == TaskKind::InventoryScan && script.point_b.k != 0)
    throw TaskError("point B must be on the ground layer for inventory_scan");

  Episode e1{"E1", agents, {}};
  e1.agents[agv].goal = script.point_a;
  e1.agents[uav].goal = hover_cell(script);
  e1.holds = {{script.agv_id, script.point_a, script.hold_steps}, {script.uav_id, hover_cell(script), script.hold_steps}};
  require_valid(grid, e1);

  Episode e2{"E2", agents, {}};
  for (std::size_t n = 0; n < agents.size(); ++n) e2.agents[n].start = e1.agents[n].goal;
  if (script.kind == TaskKind::InventoryScan)
    e2.agents[agv].goal = script.point_b;
  else
    e2.agents[uav].goal = script.point_b;
  require_valid(grid, e2);
  return {e1, e2};
}

int trailing_rendezvous(const TickLog& log, int agv_id, int uav_id, int offset) {
  auto column = [&](int id) {
    auto it = std::find(log.agent_ids.begin(), log.agent_ids.end(), id);
    if (it == log.agent_ids.end()) throw ContractError("agent " + std::to_string(id) + " not in tick log");
    return static_cast<std::size_t>(it - log.agent_ids.begin());
  };
  const std::size_t a = column(agv_id), u = column(uav_id);
  int run = 0;
  for (auto row = log.ticks.rbegin(); row != log.ticks.rend(); ++row) {
    if ((*row)[u] != (*row)[a] + Cell{0, 0, offset}) break;
    ++run;
  }
  return run;
}

TaskReport run_task(std::shared_ptr<const OccupancyGrid3D> grid, const std::vector<Agent>& agents,
                    const TaskScript& script, const SolverConfig& config) {
  if (!grid) throw ContractError("run_task: grid is null");
  auto episodes = compile_task(script, agents, *grid);
  TaskReport report;
  std::optional<std::vector<Cell>> carried;  // final configuration of the previous episode

  for (auto& ep : episodes) {
    if (carried)
      for (std::size_t n = 0; n < ep.agents.size(); ++n) ep.agents[n].start = (*carried)[n];

    EpisodeReport er;
    er.name = ep.name;
    Simulator sim;
    try {
      sim.init(grid, ep.agents, config);
    } catch (const SolveFailure& e) {
      report.failure = ep.name + ": " + e.what();
      report.failure_status = e.status();
      report.episodes.push_back(std::move(er));
      return report;
    }
    sim.run();
    er.tick_log = sim.tick_log();
    int extra = 0;
    for (const auto& h : ep.holds) extra = std::max(extra, h.duration);
    for (int t = 0; t < extra; ++t) er.tick_log.ticks.push_back(er.tick_log.ticks.back());
    er.metrics = collect_metrics({grid.get(), ep.agents, &er.tick_log, sim.computation_time()});
    er.solution = sim.solution();
    er.success = er.metrics.succeeded == ep.agents.size();
    log_debug(ep.name + ": " + std::to_string(er.metrics.succeeded) + "/" + std::to_string(ep.agents.size()) +
              " agents at goal after " + std::to_string(er.tick_log.ticks.size() - 1) + " ticks");
    carried = er.tick_log.ticks.back();

    if (!ep.holds.empty()) {
      report.rendezvous_ticks = trailing_rendezvous(er.tick_log, script.agv_id, script.uav_id, script.hover_offset);
      report.rendezvous = report.rendezvous_ticks >= script.hold_steps;
    }
    const bool ok = er.success;
    report.episodes.push_back(std::move(er));
    if (!ok) {
      report.failure = ep.name + ": not every agent reached its goal";
      return report;
    }
    if (!ep.holds.empty() && !report.rendezvous) {
      report.failure = ep.name + ": rendezvous held for " + std::to_string(report.rendezvous_ticks) + " ticks, need " +
                       std::to_string(script.hold_steps);
      return report;
    }
  }
  report.success = true;
  return report;
}

}  // namespace skyrover
