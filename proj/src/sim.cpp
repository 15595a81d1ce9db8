#include "skyrover/sim.hpp"

#include <algorithm>
#include <chrono>
#include <json.hpp>
#include <set>

#include "skyrover/io_util.hpp"
#include "skyrover/log.hpp"

namespace skyrover {

using json = nlohmann::ordered_json;

std::string_view to_string(AgentStatus status) {
  switch (status) {
    case AgentStatus::EnRoute: return "en-route";
    case AgentStatus::AtGoal: return "at-goal";
    case AgentStatus::Failed: return "failed";
  }
  return "unknown";
}

Path TickLog::path_of(std::size_t n) const {
  Path p;
  p.agent_id = agent_ids.at(n);
  p.cells.reserve(ticks.size());
  for (const auto& row : ticks) p.cells.push_back(row.at(n));
  return p;
}

int default_step_budget(const OccupancyGrid3D& grid) { return 4 * (grid.nx() + grid.ny() + grid.nz()); }

RunMetrics collect_metrics(const RunRecord& record) {
  if (record.grid == nullptr || record.log == nullptr) throw ContractError("collect_metrics: incomplete run record");
  const auto& log = *record.log;
  RunMetrics m;
  m.computation_time = record.computation_time;

  std::vector<Path> paths;
  if (!log.ticks.empty())
    for (std::size_t n = 0; n < log.agent_ids.size(); ++n) paths.push_back(log.path_of(n));

  std::set<int> failed;
  for (const auto& v : validate_solution(*record.grid, record.agents, paths)) failed.insert(v.agent_id);
  for (const auto& c : detect_conflicts(paths)) {
    failed.insert(c.agents.first);
    failed.insert(c.agents.second);
  }

  for (const auto& agent : record.agents) {
    auto it = std::find_if(paths.begin(), paths.end(), [&](const Path& p) { return p.agent_id == agent.id; });
    int length = 0;
    if (it != paths.end()) length = it->cells.back() == agent.goal ? it->cost() : static_cast<int>(it->cells.size()) - 1;
    m.path_lengths.push_back(length);
    m.makespan = std::max(m.makespan, length);
    m.sum_of_costs += length;
    if (!failed.count(agent.id)) ++m.succeeded;
  }
  m.success_rate = record.agents.empty() ? 1.0 : static_cast<double>(m.succeeded) / static_cast<double>(record.agents.size());
  return m;
}

// ---- Simulator ----------------------------------------------------------

const SimState& Simulator::init(std::shared_ptr<const OccupancyGrid3D> grid, std::vector<Agent> agents,
                                const SolverConfig& config) {
  if (!grid) throw ContractError("Simulator::init: grid is null");
  try {
    validate(config);
  } catch (const InvalidInputError& e) {
    throw ValidationError({e.what()});
  }
  check_roster(*grid, agents);
  grid_ = std::move(grid);
  agents_ = std::move(agents);
  config_ = config;
  given_plan_.reset();
  start();
  return state_;
}

const SimState& Simulator::init_plan(std::shared_ptr<const OccupancyGrid3D> grid, std::vector<Agent> agents,
                                     Solution plan, double computation_time) {
  if (!grid) throw ContractError("Simulator::init_plan: grid is null");
  check_roster(*grid, agents);
  if (auto violations = validate_solution(*grid, agents, plan.paths); !violations.empty()) {
    std::vector<std::string> problems;
    for (const auto& v : violations) problems.push_back("agent " + std::to_string(v.agent_id) + ": " + v.message);
    throw ValidationError(std::move(problems));
  }
  std::vector<Path> ordered;
  for (const auto& a : agents)
    ordered.push_back(*std::find_if(plan.paths.begin(), plan.paths.end(), [&](const Path& p) { return p.agent_id == a.id; }));
  plan = make_solution(std::move(ordered));
  grid_ = std::move(grid);
  agents_ = std::move(agents);
  config_ = SolverConfig{};
  given_plan_ = std::move(plan);
  computation_time_ = computation_time;
  start();
  return state_;
}

void Simulator::start() {
  using Clock = std::chrono::steady_clock;
  solution_.reset();
  policy_.reset();
  stats_ = {};
  const bool online = !given_plan_ && config_.algorithm == Algorithm::Online;
  const auto t0 = Clock::now();
  if (given_plan_) {
    solution_ = given_plan_;
  } else if (online) {
    policy_ = make_policy(config_.online_policy);
    policy_->load(*grid_, agents_, config_.rng_seed);
    computation_time_ = std::chrono::duration<double>(Clock::now() - t0).count();
  } else {
    auto result = solve(*grid_, agents_, config_);
    computation_time_ = std::chrono::duration<double>(Clock::now() - t0).count();
    stats_ = result.stats;
    if (result.status != SolveStatus::Solved) throw SolveFailure(result.status, result.diagnostic);
    if (auto violations = validate_solution(*grid_, agents_, result.solution->paths); !violations.empty())
      throw InvariantViolation("solver returned an invalid plan: " + violations.front().message);
    solution_ = std::move(result.solution);
  }

  state_ = {};
  state_.mode = online ? SimMode::OnlinePolicy : SimMode::PrecomputedPlan;
  for (std::size_t n = 0; n < agents_.size(); ++n) {
    state_.agent_cells.push_back(agents_[n].start);
    const bool done = agents_[n].start == agents_[n].goal && (online || solution_->paths[n].cost() == 0);
    state_.status.push_back(done ? AgentStatus::AtGoal : AgentStatus::EnRoute);
  }
  log_ = {};
  for (const auto& a : agents_) log_.agent_ids.push_back(a.id);
  log_.ticks.push_back(state_.agent_cells);
}

bool Simulator::at_fixpoint() const {
  return std::none_of(state_.status.begin(), state_.status.end(), [](AgentStatus s) { return s == AgentStatus::EnRoute; });
}

const SimState& Simulator::step() {
  if (!grid_) throw ContractError("Simulator::step before init");
  if (at_fixpoint()) return state_;

  const std::vector<Cell>& before = state_.agent_cells;
  std::vector<Cell> after(before.size());
  if (state_.mode == SimMode::PrecomputedPlan) {
    for (std::size_t n = 0; n < agents_.size(); ++n)
      after[n] = solution_->paths[n].at(static_cast<std::size_t>(state_.tick) + 1);
  } else {
    WorldView view{grid_.get(), agents_, before};
    after = online_policy_step(*policy_, view);
  }

  std::vector<Path> transition;
  for (std::size_t n = 0; n < agents_.size(); ++n) {
    const Agent& a = agents_[n];
    if (!grid_->is_free(after[n]) || !MotionModel::for_kind(a.kind).is_legal(before[n], after[n]) ||
        (a.kind == AgentKind::AGV && after[n].k != 0))
      throw InvariantViolation("agent " + std::to_string(a.id) + " made an illegal move at tick " +
                               std::to_string(state_.tick + 1));
    transition.push_back({a.id, {before[n], after[n]}});
  }
  if (auto conflicts = detect_conflicts(transition); !conflicts.empty())
    throw InvariantViolation("collision between agents " + std::to_string(conflicts.front().agents.first) + " and " +
                             std::to_string(conflicts.front().agents.second) + " at tick " +
                             std::to_string(state_.tick + 1));

  ++state_.tick;
  state_.agent_cells = std::move(after);
  for (std::size_t n = 0; n < agents_.size(); ++n) {
    const bool on_goal = state_.agent_cells[n] == agents_[n].goal;
    const bool settled = state_.mode == SimMode::OnlinePolicy || state_.tick >= solution_->paths[n].cost();
    state_.status[n] = on_goal && settled ? AgentStatus::AtGoal : AgentStatus::EnRoute;
  }
  log_.ticks.push_back(state_.agent_cells);
  return state_;
}

const SimState& Simulator::reset() {
  if (!grid_) throw ContractError("Simulator::reset before init");
  start();
  return state_;
}

const SimState& Simulator::reset(std::vector<Agent> agents) { return reset(grid_, std::move(agents)); }

const SimState& Simulator::reset(std::shared_ptr<const OccupancyGrid3D> grid, std::vector<Agent> agents) {
  return init(std::move(grid), std::move(agents), config_);
}

RunMetrics Simulator::run(std::optional<int> budget) {
  if (!grid_) throw ContractError("Simulator::run before init");
  int limit = budget.value_or(state_.mode == SimMode::OnlinePolicy ? default_step_budget(*grid_)
                                                                   : (solution_ ? solution_->makespan : 0));
  while (!at_fixpoint() && state_.tick < limit) step();
  for (auto& s : state_.status)
    if (s == AgentStatus::EnRoute) s = AgentStatus::Failed;
  return metrics();
}

RunMetrics Simulator::metrics() const {
  return collect_metrics({grid_.get(), agents_, &log_, computation_time_});
}

// ---- executor -----------------------------------------------------------

std::vector<WaypointCommand> execute_plan(const Solution& solution, const ExecutorOptions& options) {
  if (!(options.cell_duration > 0.0)) throw InvalidInputError("cell_duration must be positive");
  if (!(options.resolution > 0.0)) throw InvalidInputError("resolution must be positive");
  std::vector<WaypointCommand> out;
  for (const auto& path : solution.paths) {
    for (std::size_t t = 0; t < path.cells.size(); ++t) {
      const Cell c = path.cells[t];
      WaypointCommand cmd;
      cmd.agent_id = path.agent_id;
      cmd.timestamp = static_cast<double>(t) * options.cell_duration;
      cmd.position = {options.origin.x + (c.i + 0.5) * options.resolution,
                      options.origin.y + (c.j + 0.5) * options.resolution,
                      options.origin.z + (c.k + 0.5) * options.resolution};
      cmd.hold = t > 0 && path.cells[t - 1] == c;
      out.push_back(cmd);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const WaypointCommand& a, const WaypointCommand& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.agent_id < b.agent_id;
  });
  return out;
}

// ---- plan JSON ----------------------------------------------------------

std::string write_plan(const PlanFile& plan) {
  if (plan.agents.size() != plan.solution.paths.size())
    throw InvalidInputError("plan: agent list and path list differ in length");
  json root;
  json agents = json::array();
  for (std::size_t n = 0; n < plan.agents.size(); ++n) {
    json entry;
    entry["id"] = plan.agents[n].id;
    entry["kind"] = std::string(to_string(plan.agents[n].kind));
    json cells = json::array();
    for (const Cell& c : plan.solution.paths[n].cells) cells.push_back(json::array({c.i, c.j, c.k}));
    entry["path"] = cells;
    agents.push_back(entry);
  }
  root["agents"] = agents;
  root["sum_of_costs"] = plan.solution.sum_of_costs;
  root["makespan"] = plan.solution.makespan;
  root["computation_time_s"] = plan.computation_time_s ? json(*plan.computation_time_s) : json(nullptr);
  return root.dump(2) + "\n";
}

PlanFile parse_plan(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("plan JSON: ") + e.what(), e.byte);
  }
  auto fail = [](const std::string& what) -> ValidationError { return ValidationError({"plan: " + what}); };
  if (!root.is_object()) throw fail("root must be an object");
  for (const auto& [key, value] : root.items())
    if (key != "agents" && key != "sum_of_costs" && key != "makespan" && key != "computation_time_s")
      throw fail("unknown field '" + key + "'");
  if (!root.contains("agents") || !root["agents"].is_array()) throw fail("missing agents array");

  PlanFile plan;
  std::vector<Path> paths;
  for (const auto& entry : root["agents"]) {
    if (!entry.is_object()) throw fail("agent entries must be objects");
    for (const auto& [key, value] : entry.items())
      if (key != "id" && key != "kind" && key != "path") throw fail("unknown agent field '" + key + "'");
    if (!entry.contains("id") || !entry["id"].is_number_integer()) throw fail("agent id must be an integer");
    if (!entry.contains("kind") || !entry["kind"].is_string()) throw fail("agent kind must be a string");
    if (!entry.contains("path") || !entry["path"].is_array() || entry["path"].empty())
      throw fail("agent path must be a non-empty array");
    Path p;
    p.agent_id = entry["id"].get<int>();
    for (const auto& c : entry["path"]) {
      if (!c.is_array() || c.size() != 3 || !c[0].is_number_integer() || !c[1].is_number_integer() ||
          !c[2].is_number_integer())
        throw fail("path cells must be [i, j, k] integer arrays");
      p.cells.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<int>()});
    }
    Agent a;
    a.id = p.agent_id;
    try {
      a.kind = agent_kind_from_string(entry["kind"].get<std::string>());
    } catch (const InvalidInputError& e) {
      throw fail(e.what());
    }
    a.start = p.cells.front();
    a.goal = p.cells.back();
    plan.agents.push_back(a);
    paths.push_back(std::move(p));
  }
  plan.solution = make_solution(std::move(paths));
  if (root.contains("sum_of_costs") &&
      (!root["sum_of_costs"].is_number_integer() || root["sum_of_costs"].get<long long>() != plan.solution.sum_of_costs))
    throw fail("sum_of_costs does not match the paths");
  if (root.contains("makespan") &&
      (!root["makespan"].is_number_integer() || root["makespan"].get<int>() != plan.solution.makespan))
    throw fail("makespan does not match the paths");
  if (root.contains("computation_time_s") && !root["computation_time_s"].is_null()) {
    if (!root["computation_time_s"].is_number()) throw fail("computation_time_s must be a number or null");
    plan.computation_time_s = root["computation_time_s"].get<double>();
  }
  return plan;
}

// ---- CSV ----------------------------------------------------------------

namespace {

std::vector<std::string_view> split_csv_row(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename RowFn>
void for_each_row(std::string_view text, std::string_view header, RowFn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 0) {
      if (line != header) throw ParseError("CSV header must be '" + std::string(header) + "'", pos);
    } else if (!line.empty()) {
      try {
        fn(split_csv_row(line));
      } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " on line " + std::to_string(line_no + 1), pos);
      }
    }
    ++line_no;
    pos = end + 1;
  }
  if (line_no == 0) throw ParseError("CSV is empty", 0);
}

constexpr std::string_view kWaypointHeader = "agent_id,timestamp_s,x,y,z,hold";
constexpr std::string_view kTickHeader = "tick,agent_id,i,j,k";

}  // namespace

std::string write_waypoints_csv(std::span<const WaypointCommand> commands) {
  std::string out(kWaypointHeader);
  out += '\n';
  for (const auto& c : commands) {
    out += std::to_string(c.agent_id) + ',' + format_double(c.timestamp) + ',' + format_double(c.position.x) + ',' +
           format_double(c.position.y) + ',' + format_double(c.position.z) + ',' + (c.hold ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<WaypointCommand> parse_waypoints_csv(std::string_view text) {
  std::vector<WaypointCommand> out;
  for_each_row(text, kWaypointHeader, [&](const std::vector<std::string_view>& f) {
    if (f.size() != 6) throw ParseError("waypoint row needs 6 columns");
    if (f[5] != "0" && f[5] != "1") throw ParseError("hold must be 0 or 1");
    out.push_back({static_cast<int>(parse_int(f[0])),
                   parse_double(f[1]),
                   {parse_double(f[2]), parse_double(f[3]), parse_double(f[4])},
                   f[5] == "1"});
  });
  return out;
}

std::string write_tick_log_csv(const TickLog& log) {
  std::string out(kTickHeader);
  out += '\n';
  for (std::size_t t = 0; t < log.ticks.size(); ++t) {
    for (std::size_t n = 0; n < log.agent_ids.size(); ++n) {
      const Cell c = log.ticks[t][n];
      out += std::to_string(t) + ',' + std::to_string(log.agent_ids[n]) + ',' + std::to_string(c.i) + ',' +
             std::to_string(c.j) + ',' + std::to_string(c.k) + '\n';
    }
  }
  return out;
}

TickLog parse_tick_log_csv(std::string_view text) {
  TickLog log;
  bool first_tick_closed = false;
  std::size_t column = 0;
  for_each_row(text, kTickHeader, [&](const std::vector<std::string_view>& f) {
    if (f.size() != 5) throw ParseError("tick row needs 5 columns");
    const auto tick = static_cast<std::size_t>(parse_int(f[0]));
    const int id = static_cast<int>(parse_int(f[1]));
    const Cell c{static_cast<int>(parse_int(f[2])), static_cast<int>(parse_int(f[3])), static_cast<int>(parse_int(f[4]))};
    if (tick == 0 && !first_tick_closed) {
      if (log.ticks.empty()) log.ticks.emplace_back();
      log.agent_ids.push_back(id);
      log.ticks[0].push_back(c);
      return;
    }
    first_tick_closed = true;
    if (column == 0) {
      if (tick != log.ticks.size()) throw ParseError("ticks must be contiguous");
      log.ticks.emplace_back();
    } else if (tick + 1 != log.ticks.size()) {
      throw ParseError("tick changed before every agent was listed");
    }
    if (id != log.agent_ids[column]) throw ParseError("agent order must match tick 0");
    log.ticks.back().push_back(c);
    column = (column + 1) % log.agent_ids.size();
  });
  if (column != 0) throw ParseError("last tick is incomplete");
  return log;
}

}  // namespace skyrover
