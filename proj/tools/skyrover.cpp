// skyrover command-line front end.
#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skyrover/bench.hpp"
#include "skyrover/io_util.hpp"
#include "skyrover/log.hpp"
#include "skyrover/scenario.hpp"
#include "skyrover/sim.hpp"
#include "skyrover/tasks.hpp"
#include "skyrover/voxel_map.hpp"
#include "skyrover/warehouse.hpp"

namespace fs = std::filesystem;
using namespace skyrover;

namespace {

enum Exit { kOk = 0, kOther = 1, kInput = 2, kCapacity = 3, kNoSolution = 4, kResourceLimit = 5 };

int exit_for(SolveStatus s) { return s == SolveStatus::ResourceLimit ? kResourceLimit : kNoSolution; }

std::string percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", rate * 100.0);
  return buf;
}

// Solver flags shared by solve, sim, task and bench.
struct SolverFlags {
  std::string alg;
  std::optional<double> time_limit;
  std::optional<std::uint64_t> expansion_limit;
  std::optional<std::uint64_t> seed;
  std::string policy;

  void attach(CLI::App* cmd, bool with_alg = true) {
    if (with_alg) cmd->add_option("--alg", alg, "astar | cbs | online");
    cmd->add_option("--time-limit", time_limit, "solver wall-clock limit in seconds");
    cmd->add_option("--expansion-limit", expansion_limit, "node expansion limit per search");
    cmd->add_option("--seed", seed, "rng seed");
    cmd->add_option("--online-policy", policy, "policy name for online mode");
  }

  SolverConfig apply(SolverConfig cfg) const {
    if (!alg.empty()) cfg.algorithm = algorithm_from_string(alg);
    if (time_limit) cfg.time_limit = *time_limit;
    if (expansion_limit) cfg.node_expansion_limit = *expansion_limit;
    if (seed) cfg.rng_seed = *seed;
    if (!policy.empty()) cfg.online_policy = policy;
    validate(cfg);
    return cfg;
  }
};

struct Loaded {
  Scenario scenario;
  std::shared_ptr<const OccupancyGrid3D> grid;
};

Loaded load(const std::string& scenario_path, const std::string& grid_override) {
  Loaded l;
  l.scenario = load_scenario(scenario_path);
  OccupancyGrid3D grid = grid_override.empty()
                             ? load_grid(l.scenario.grid, fs::path(scenario_path).parent_path())
                             : read_grid(read_file(grid_override));
  l.grid = std::make_shared<const OccupancyGrid3D>(std::move(grid));
  return l;
}

std::string metrics_line(const RunMetrics& m, std::size_t agents, bool timing) {
  std::string out = "agents=" + std::to_string(agents) + " success=" + percent(m.success_rate) +
                    " makespan=" + std::to_string(m.makespan) + " sum_of_costs=" + std::to_string(m.sum_of_costs);
  if (timing) out += " comp_time_s=" + format_double(m.computation_time);
  return out;
}

ExecutorOptions executor_for(const OccupancyGrid3D& grid, double cell_duration) {
  return {cell_duration, grid.resolution(), grid.origin()};
}

// ---- gridgen --------------------------------------------------------------

struct GridgenArgs {
  std::string pcd, pgm, out;
  double resolution = 1.0;
  int padding = 1;
  int extrude = 1;
  bool walls = false;
  int threshold = 128;
};

int cmd_gridgen(const GridgenArgs& a) {
  if (a.pcd.empty() == a.pgm.empty()) throw InvalidInputError("gridgen needs exactly one of --pcd or --pgm");
  OccupancyGrid3D grid = [&] {
    if (!a.pcd.empty()) {
      PointCloud cloud = parse_pcd(read_file(a.pcd));
      if (cloud.dropped) log_warn("dropped " + std::to_string(cloud.dropped) + " non-finite points");
      RasterizeOptions opt;
      opt.resolution = a.resolution;
      opt.padding = a.padding;
      return rasterize(cloud, opt);
    }
    PgmOptions opt;
    opt.occupied_threshold = a.threshold;
    opt.resolution = a.resolution;
    return extrude_ground(parse_pgm(read_file(a.pgm), opt), a.extrude,
                          a.walls ? ExtrudeMode::Walls : ExtrudeMode::GroundOnly);
  }();
  write_file(a.out, write_grid(grid));
  std::cout << "grid " << grid.nx() << "x" << grid.ny() << "x" << grid.nz() << " occupied=" << grid.occupied_count()
            << " -> " << a.out << "\n";
  return kOk;
}

// ---- warehouse ------------------------------------------------------------

struct WarehouseArgs {
  std::vector<int> dims{80, 60, 10};
  int shelf_rows = WarehouseParams{}.shelf_rows;
  int shelf_height = WarehouseParams{}.shelf_height;
  std::string agents = "6uav+16agv";
  std::uint64_t seed = 1;
  std::string out, grid_out;
};

int cmd_warehouse(const WarehouseArgs& a) {
  WarehouseParams p;
  p.nx = a.dims[0];
  p.ny = a.dims[1];
  p.nz = a.dims[2];
  p.shelf_rows = a.shelf_rows;
  p.shelf_height = a.shelf_height;
  p.seed = a.seed;
  std::tie(p.uav_count, p.agv_count) = parse_roster_spec(a.agents);
  auto w = generate_warehouse(p);

  const fs::path out(a.out);
  const fs::path grid_path = a.grid_out.empty() ? fs::path(out).replace_extension(".grid") : fs::path(a.grid_out);
  write_file(grid_path, write_grid(w.grid));

  Scenario s;
  // Relative to the scenario file when both live in the same directory.
  const fs::path out_dir = fs::absolute(out).parent_path();
  const fs::path grid_abs = fs::absolute(grid_path);
  s.grid.path = grid_abs.parent_path() == out_dir ? grid_abs.filename().string() : grid_abs.string();
  s.agents = w.agents;
  s.seed = a.seed;
  write_file(out, write_scenario(s));
  std::cout << "warehouse " << p.nx << "x" << p.ny << "x" << p.nz << " agents=" << w.agents.size()
            << " occupied=" << w.grid.occupied_count() << " -> " << a.out << ", " << grid_path.string() << "\n";
  return kOk;
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
  std::string scenario, grid, out;
  SolverFlags solver;
  bool no_timing = false;
};

int cmd_solve(const SolveArgs& a) {
  Loaded l = load(a.scenario, a.grid);
  SolverConfig cfg = a.solver.apply(l.scenario.solver.value_or(SolverConfig{}));
  if (cfg.algorithm == Algorithm::Online)
    throw InvalidInputError("online mode produces no plan; use 'sim --online <policy>'");
  Simulator sim;
  try {
    sim.init(l.grid, l.scenario.agents, cfg);
  } catch (const SolveFailure& e) {
    std::cerr << "skyrover: " << e.what() << "\n";
    std::cout << "status=" << to_string(e.status()) << " alg=" << to_string(cfg.algorithm) << "\n";
    return exit_for(e.status());
  }
  const RunMetrics m = sim.run();
  if (!a.out.empty()) {
    PlanFile plan{sim.agents(), *sim.solution(), std::nullopt};
    if (!a.no_timing) plan.computation_time_s = sim.computation_time();
    write_file(a.out, write_plan(plan));
  }
  std::cout << "status=solved alg=" << to_string(cfg.algorithm) << " " << metrics_line(m, sim.agents().size(), !a.no_timing)
            << "\n";
  return m.success_rate == 1.0 ? kOk : kOther;
}

// ---- sim ------------------------------------------------------------------

struct SimArgs {
  std::string scenario, grid, plan, online, waypoints, tick_log;
  SolverFlags solver;
  double cell_duration = 1.0;
  std::optional<int> budget;
  bool no_timing = false;
};

int cmd_sim(const SimArgs& a) {
  if (!a.plan.empty() && !a.online.empty()) throw InvalidInputError("--plan and --online are mutually exclusive");
  Loaded l = load(a.scenario, a.grid);
  Simulator sim;
  if (!a.plan.empty()) {
    PlanFile plan = parse_plan(read_file(a.plan));
    for (const auto& pa : plan.agents) {
      auto it = std::find_if(l.scenario.agents.begin(), l.scenario.agents.end(),
                             [&](const Agent& s) { return s.id == pa.id; });
      if (it == l.scenario.agents.end() || it->kind != pa.kind)
        throw ValidationError({"plan agent " + std::to_string(pa.id) + " does not match the scenario roster"});
    }
    sim.init_plan(l.grid, l.scenario.agents, plan.solution, plan.computation_time_s.value_or(0.0));
  } else {
    SolverConfig cfg = a.solver.apply(l.scenario.solver.value_or(SolverConfig{}));
    if (!a.online.empty()) {
      cfg.algorithm = Algorithm::Online;
      cfg.online_policy = a.online;
      validate(cfg);
    }
    try {
      sim.init(l.grid, l.scenario.agents, cfg);
    } catch (const SolveFailure& e) {
      std::cerr << "skyrover: " << e.what() << "\n";
      return exit_for(e.status());
    }
  }
  const RunMetrics m = sim.run(a.budget);

  if (!a.tick_log.empty()) write_file(a.tick_log, write_tick_log_csv(sim.tick_log()));
  if (!a.waypoints.empty()) {
    // Online runs have no stored plan; the executed trajectory is lowered instead.
    Solution executed;
    if (sim.solution()) {
      executed = *sim.solution();
    } else {
      std::vector<Path> paths;
      for (std::size_t n = 0; n < sim.agents().size(); ++n) paths.push_back(sim.tick_log().path_of(n));
      executed = make_solution(std::move(paths));
    }
    write_file(a.waypoints, write_waypoints_csv(execute_plan(executed, executor_for(sim.grid(), a.cell_duration))));
  }
  std::size_t at_goal = 0;
  for (auto s : sim.state().status) at_goal += s == AgentStatus::AtGoal;
  std::cout << "ticks=" << sim.state().tick << " at_goal=" << at_goal << "/" << sim.agents().size() << " "
            << metrics_line(m, sim.agents().size(), !a.no_timing) << "\n";
  return m.success_rate == 1.0 ? kOk : kOther;
}

// ---- task -----------------------------------------------------------------

struct TaskArgs {
  std::string scenario, grid, tick_log_prefix;
  SolverFlags solver;
};

int cmd_task(const TaskArgs& a) {
  Loaded l = load(a.scenario, a.grid);
  if (!l.scenario.task) throw ValidationError({"scenario has no task block"});
  SolverConfig cfg = a.solver.apply(l.scenario.solver.value_or(SolverConfig{}));
  const TaskReport r = run_task(l.grid, l.scenario.agents, *l.scenario.task, cfg);
  for (const auto& ep : r.episodes) {
    std::cout << ep.name << ": " << (ep.success ? "ok" : "failed") << " "
              << metrics_line(ep.metrics, ep.metrics.path_lengths.size(), false) << "\n";
    if (!a.tick_log_prefix.empty() && !ep.tick_log.ticks.empty())
      write_file(a.tick_log_prefix + "." + ep.name + ".csv", write_tick_log_csv(ep.tick_log));
  }
  std::cout << "rendezvous=" << (r.rendezvous ? "held" : "missed") << " ticks=" << r.rendezvous_ticks
            << " need=" << l.scenario.task->hold_steps << "\n";
  std::cout << "task " << to_string(l.scenario.task->kind) << ": " << (r.success ? "success" : "failure") << "\n";
  if (r.success) return kOk;
  std::cerr << "skyrover: " << r.failure << "\n";
  return r.failure_status ? exit_for(*r.failure_status) : kOther;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string suite, algs = "astar,cbs,online", out, table;
  int repeats = 1;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::optional<double> time_limit;
  std::optional<std::uint64_t> expansion_limit;
  std::string policy;
  bool no_timing = false;
};

int cmd_bench(const BenchArgs& a) {
  Suite suite = load_suite(a.suite);
  BenchOptions opt;
  opt.algorithms.clear();
  for (std::size_t pos = 0; pos <= a.algs.size();) {
    std::size_t end = a.algs.find(',', pos);
    if (end == std::string::npos) end = a.algs.size();
    opt.algorithms.push_back(algorithm_from_string(a.algs.substr(pos, end - pos)));
    pos = end + 1;
  }
  opt.repeats = a.repeats;
  opt.jobs = a.jobs;
  opt.seed = a.seed;
  opt.timing = !a.no_timing;
  if (!a.policy.empty()) opt.online_policy = a.policy;
  if (a.time_limit) opt.time_limit = *a.time_limit;
  if (a.expansion_limit) opt.node_expansion_limit = *a.expansion_limit;

  const BenchReport report = run_bench(suite, opt, fs::path(a.suite).parent_path());
  const std::string table = write_bench_table(report);
  if (!a.out.empty()) write_file(a.out, write_bench_csv(report.rows));
  if (!a.table.empty()) write_file(a.table, table);
  std::cout << table;
  return kOk;
}

// ---- validate -------------------------------------------------------------

int cmd_validate(const std::string& scenario, const std::string& grid, const std::string& plan_path) {
  Loaded l = load(scenario, grid);
  check_roster(*l.grid, l.scenario.agents);
  if (plan_path.empty()) {
    std::cout << "scenario ok: " << l.scenario.agents.size() << " agents\n";
    return kOk;
  }
  PlanFile plan = parse_plan(read_file(plan_path));
  auto violations = validate_solution(*l.grid, l.scenario.agents, plan.solution.paths);
  for (const auto& v : violations)
    std::cout << to_string(v.kind) << " agent=" << v.agent_id << " t=" << v.time << ": " << v.message << "\n";
  std::cout << (violations.empty() ? "plan ok" : "plan invalid") << "\n";
  return violations.empty() ? kOk : kInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skyrover: 3D UAV/AGV multi-agent path finding"};
  app.require_subcommand(1);

  GridgenArgs gg;
  auto* gridgen = app.add_subcommand("gridgen", "rasterize a PCD cloud or extrude a PGM map into a grid file");
  gridgen->add_option("--pcd", gg.pcd, "PCD v0.7 point cloud");
  gridgen->add_option("--pgm", gg.pgm, "PGM P2/P5 map");
  gridgen->add_option("--resolution", gg.resolution, "metres per cell")->capture_default_str();
  gridgen->add_option("--padding", gg.padding, "cells of padding around the cloud")->capture_default_str();
  gridgen->add_option("--extrude", gg.extrude, "layers for PGM input")->capture_default_str();
  gridgen->add_flag("--walls", gg.walls, "replicate PGM obstacles through all layers");
  gridgen->add_option("--threshold", gg.threshold, "PGM values below this are obstacles")->capture_default_str();
  gridgen->add_option("-o,--output", gg.out, "output grid file")->required();

  WarehouseArgs wa;
  auto* warehouse = app.add_subcommand("warehouse", "generate a warehouse grid and scenario");
  warehouse->add_option("--dims", wa.dims, "nx ny nz")->expected(3)->capture_default_str();
  warehouse->add_option("--shelf-rows", wa.shelf_rows)->capture_default_str();
  warehouse->add_option("--shelf-height", wa.shelf_height)->capture_default_str();
  warehouse->add_option("--agents", wa.agents, "roster, e.g. 6uav+16agv")->capture_default_str();
  warehouse->add_option("--seed", wa.seed)->capture_default_str();
  warehouse->add_option("-o,--output", wa.out, "scenario JSON")->required();
  warehouse->add_option("--grid-out", wa.grid_out, "grid file (default: next to the scenario)");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "plan a scenario");
  solve->add_option("--scenario", sa.scenario)->required();
  solve->add_option("--grid", sa.grid, "grid file overriding the scenario's");
  sa.solver.attach(solve);
  solve->add_option("-o,--output", sa.out, "plan JSON");
  solve->add_flag("--no-timing", sa.no_timing, "write null computation time for byte-stable output");

  SimArgs sm;
  auto* sim = app.add_subcommand("sim", "simulate a plan or an online policy");
  sim->add_option("--scenario", sm.scenario)->required();
  sim->add_option("--grid", sm.grid);
  sim->add_option("--plan", sm.plan, "plan JSON from solve");
  sim->add_option("--online", sm.online, "online policy name");
  sm.solver.attach(sim);
  sim->add_option("--cell-duration", sm.cell_duration, "seconds per tick")->capture_default_str();
  sim->add_option("--budget", sm.budget, "tick budget");
  sim->add_option("--waypoints", sm.waypoints, "waypoint CSV");
  sim->add_option("--tick-log", sm.tick_log, "tick log CSV");
  sim->add_flag("--no-timing", sm.no_timing);

  TaskArgs ta;
  auto* task = app.add_subcommand("task", "run the scenario's task block");
  task->add_option("--scenario", ta.scenario)->required();
  task->add_option("--grid", ta.grid);
  ta.solver.attach(task);
  task->add_option("--tick-log-prefix", ta.tick_log_prefix, "writes <prefix>.E1.csv, <prefix>.E2.csv");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "benchmark algorithms over a suite");
  bench->add_option("--suite", ba.suite)->required();
  bench->add_option("--algs", ba.algs)->capture_default_str();
  bench->add_option("--repeats", ba.repeats)->capture_default_str();
  bench->add_option("--jobs", ba.jobs)->capture_default_str();
  bench->add_option("--seed", ba.seed)->capture_default_str();
  bench->add_option("--time-limit", ba.time_limit);
  bench->add_option("--expansion-limit", ba.expansion_limit);
  bench->add_option("--online-policy", ba.policy);
  bench->add_option("-o,--output", ba.out, "CSV report");
  bench->add_option("--table", ba.table, "human-readable table file");
  bench->add_flag("--no-timing", ba.no_timing);

  std::string v_scenario, v_grid, v_plan;
  auto* validate_cmd = app.add_subcommand("validate", "check a scenario and optionally a plan");
  validate_cmd->add_option("--scenario", v_scenario)->required();
  validate_cmd->add_option("--grid", v_grid);
  validate_cmd->add_option("--plan", v_plan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*gridgen) return cmd_gridgen(gg);
    if (*warehouse) return cmd_warehouse(wa);
    if (*solve) return cmd_solve(sa);
    if (*sim) return cmd_sim(sm);
    if (*task) return cmd_task(ta);
    if (*bench) return cmd_bench(ba);
    if (*validate_cmd) return cmd_validate(v_scenario, v_grid, v_plan);
  } catch (const SolveFailure& e) {
    std::cerr << "skyrover: " << e.what() << "\n";
    return exit_for(e.status());
  } catch (const CapacityError& e) {
    std::cerr << "skyrover: " << e.what() << "\n";
    return kCapacity;
  } catch (const ParseError& e) {
    std::cerr << "skyrover: parse error: " << e.what() << "\n";
    return kInput;
  } catch (const InvariantViolation& e) {
    std::cerr << "skyrover: internal error: " << e.what() << "\n";
    return kOther;
  } catch (const ContractError& e) {
    std::cerr << "skyrover: " << e.what() << "\n";
    return kOther;
  } catch (const Error& e) {
    // parse, format, validation and other input errors
    std::cerr << "skyrover: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "skyrover: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
