#include "skyrover/scenario.hpp"

#include <algorithm>
#include <initializer_list>
#include <json.hpp>

#include "skyrover/io_util.hpp"
#include "skyrover/warehouse.hpp"

namespace skyrover {

using json = nlohmann::ordered_json;

std::string_view to_string(TaskKind kind) {
  return kind == TaskKind::InventoryScan ? "inventory_scan" : "aerial_transfer";
}

TaskKind task_kind_from_string(std::string_view name) {
  if (name == "inventory_scan") return TaskKind::InventoryScan;
  if (name == "aerial_transfer") return TaskKind::AerialTransfer;
  throw ValidationError({"unknown task kind '" + std::string(name) + "'"});
}

namespace {

void only_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ValidationError({std::string(where) + " must be an object"});
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ValidationError({std::string(where) + ": unknown field '" + key + "'"});
  }
}

const json& required(const json& obj, std::string_view where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError({std::string(where) + ": missing field '" + key + "'"});
  return *it;
}

Cell cell_from(const json& v, std::string_view where) {
  if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number_integer(); }))
    throw ValidationError({std::string(where) + " must be an [i, j, k] integer array"});
  return {v[0].get<int>(), v[1].get<int>(), v[2].get<int>()};
}

json cell_to(Cell c) { return json::array({c.i, c.j, c.k}); }

template <typename T>
T number(const json& v, std::string_view where) {
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ValidationError({std::string(where) + " must be a number"});
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned()) throw ValidationError({std::string(where) + " must be a non-negative integer"});
  } else {
    if (!v.is_number_integer()) throw ValidationError({std::string(where) + " must be an integer"});
  }
  return v.get<T>();
}

std::string text(const json& v, std::string_view where) {
  if (!v.is_string()) throw ValidationError({std::string(where) + " must be a string"});
  return v.get<std::string>();
}

GridGenerator generator_from(const json& g) {
  only_keys(g, "grid", {"generator", "dims", "resolution", "shelf_rows", "shelf_height", "seed"});
  GridGenerator gen;
  gen.kind = text(required(g, "grid", "generator"), "grid.generator");
  if (gen.kind != "empty" && gen.kind != "warehouse")
    throw ValidationError({"grid.generator must be 'empty' or 'warehouse'"});
  const json& dims = required(g, "grid", "dims");
  const Cell d = cell_from(dims, "grid.dims");
  gen.nx = d.i;
  gen.ny = d.j;
  gen.nz = d.k;
  if (gen.nx < 1 || gen.ny < 1 || gen.nz < 1) throw ValidationError({"grid.dims must be positive"});
  if (g.contains("resolution")) gen.resolution = number<double>(g["resolution"], "grid.resolution");
  if (g.contains("shelf_rows")) gen.shelf_rows = number<int>(g["shelf_rows"], "grid.shelf_rows");
  if (g.contains("shelf_height")) gen.shelf_height = number<int>(g["shelf_height"], "grid.shelf_height");
  if (g.contains("seed")) gen.seed = number<std::uint64_t>(g["seed"], "grid.seed");
  return gen;
}

SolverConfig solver_from(const json& s) {
  only_keys(s, "solver", {"algorithm", "node_expansion_limit", "time_limit", "rng_seed", "online_policy"});
  SolverConfig cfg;
  if (s.contains("algorithm")) {
    try {
      cfg.algorithm = algorithm_from_string(text(s["algorithm"], "solver.algorithm"));
    } catch (const InvalidInputError& e) {
      throw ValidationError({e.what()});
    }
  }
  if (s.contains("node_expansion_limit"))
    cfg.node_expansion_limit = number<std::uint64_t>(s["node_expansion_limit"], "solver.node_expansion_limit");
  if (s.contains("time_limit")) cfg.time_limit = number<double>(s["time_limit"], "solver.time_limit");
  if (s.contains("rng_seed")) cfg.rng_seed = number<std::uint64_t>(s["rng_seed"], "solver.rng_seed");
  if (s.contains("online_policy")) cfg.online_policy = text(s["online_policy"], "solver.online_policy");
  try {
    validate(cfg);
  } catch (const InvalidInputError& e) {
    throw ValidationError({std::string("solver: ") + e.what()});
  }
  return cfg;
}

TaskScript task_from(const json& t) {
  only_keys(t, "task", {"kind", "agv_id", "uav_id", "point_a", "point_b", "hover_offset", "hold_steps"});
  TaskScript task;
  task.kind = task_kind_from_string(text(required(t, "task", "kind"), "task.kind"));
  task.agv_id = number<int>(required(t, "task", "agv_id"), "task.agv_id");
  task.uav_id = number<int>(required(t, "task", "uav_id"), "task.uav_id");
  task.point_a = cell_from(required(t, "task", "point_a"), "task.point_a");
  task.point_b = cell_from(required(t, "task", "point_b"), "task.point_b");
  if (t.contains("hover_offset")) task.hover_offset = number<int>(t["hover_offset"], "task.hover_offset");
  if (t.contains("hold_steps")) task.hold_steps = number<int>(t["hold_steps"], "task.hold_steps");
  if (task.hover_offset < 1) throw ValidationError({"task.hover_offset must be positive"});
  if (task.hold_steps < 1) throw ValidationError({"task.hold_steps must be positive"});
  return task;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what(), e.byte);
  }
  only_keys(root, "scenario", {"grid", "agents", "seed", "solver", "task"});
  Scenario s;
  const json& grid = required(root, "scenario", "grid");
  if (grid.is_string())
    s.grid.path = grid.get<std::string>();
  else
    s.grid.generator = generator_from(grid);

  const json& agents = required(root, "scenario", "agents");
  if (!agents.is_array()) throw ValidationError({"scenario.agents must be an array"});
  for (const auto& a : agents) {
    only_keys(a, "agent", {"id", "kind", "start", "goal"});
    Agent agent;
    agent.id = number<int>(required(a, "agent", "id"), "agent.id");
    try {
      agent.kind = agent_kind_from_string(text(required(a, "agent", "kind"), "agent.kind"));
    } catch (const InvalidInputError& e) {
      throw ValidationError({e.what()});
    }
    agent.start = cell_from(required(a, "agent", "start"), "agent.start");
    agent.goal = cell_from(required(a, "agent", "goal"), "agent.goal");
    s.agents.push_back(agent);
  }
  if (root.contains("seed")) s.seed = number<std::uint64_t>(root["seed"], "scenario.seed");
  if (root.contains("solver")) s.solver = solver_from(root["solver"]);
  if (root.contains("task")) s.task = task_from(root["task"]);
  return s;
}

std::string write_scenario(const Scenario& s) {
  json root;
  if (s.grid.path) {
    root["grid"] = *s.grid.path;
  } else if (s.grid.generator) {
    const auto& g = *s.grid.generator;
    json gen;
    gen["generator"] = g.kind;
    gen["dims"] = json::array({g.nx, g.ny, g.nz});
    gen["resolution"] = g.resolution;
    if (g.kind == "warehouse") {
      gen["shelf_rows"] = g.shelf_rows;
      gen["shelf_height"] = g.shelf_height;
      gen["seed"] = g.seed;
    }
    root["grid"] = gen;
  } else {
    throw InvalidInputError("scenario has no grid source");
  }
  root["seed"] = s.seed;
  json agents = json::array();
  for (const auto& a : s.agents) {
    json entry;
    entry["id"] = a.id;
    entry["kind"] = std::string(to_string(a.kind));
    entry["start"] = cell_to(a.start);
    entry["goal"] = cell_to(a.goal);
    agents.push_back(entry);
  }
  root["agents"] = agents;
  if (s.solver) {
    const auto& c = *s.solver;
    json solver;
    solver["algorithm"] = std::string(to_string(c.algorithm));
    solver["node_expansion_limit"] = c.node_expansion_limit;
    solver["time_limit"] = c.time_limit;
    solver["rng_seed"] = c.rng_seed;
    solver["online_policy"] = c.online_policy;
    root["solver"] = solver;
  }
  if (s.task) {
    const auto& t = *s.task;
    json task;
    task["kind"] = std::string(to_string(t.kind));
    task["agv_id"] = t.agv_id;
    task["uav_id"] = t.uav_id;
    task["point_a"] = cell_to(t.point_a);
    task["point_b"] = cell_to(t.point_b);
    task["hover_offset"] = t.hover_offset;
    task["hold_steps"] = t.hold_steps;
    root["task"] = task;
  }
  return root.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

OccupancyGrid3D load_grid(const GridSource& source, const std::filesystem::path& base_dir) {
  if (source.path) {
    std::filesystem::path p(*source.path);
    if (p.is_relative()) p = base_dir / p;
    return read_grid(read_file(p));
  }
  if (!source.generator) throw ValidationError({"scenario has no grid source"});
  const auto& g = *source.generator;
  if (g.kind == "empty") return OccupancyGrid3D({0, 0, 0}, g.resolution, g.nx, g.ny, g.nz);
  WarehouseParams params;
  params.nx = g.nx;
  params.ny = g.ny;
  params.nz = g.nz;
  params.resolution = g.resolution;
  params.shelf_rows = g.shelf_rows;
  params.shelf_height = g.shelf_height;
  params.seed = g.seed;
  return generate_warehouse_grid(params);
}

void check_roster(const OccupancyGrid3D& grid, const std::vector<Agent>& agents) {
  if (auto problems = validate_agents(grid, agents); !problems.empty()) throw ValidationError(std::move(problems));
}

}  // namespace skyrover
