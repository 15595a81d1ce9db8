#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skyrover/bench.hpp"
#include "skyrover/io_util.hpp"
#include "skyrover/mapf.hpp"
#include "skyrover/scenario.hpp"
#include "skyrover/sim.hpp"
#include "skyrover/solvers.hpp"
#include "skyrover/tasks.hpp"
#include "skyrover/voxel_map.hpp"
#include "skyrover/warehouse.hpp"

namespace py = pybind11;
using namespace skyrover;

// Cells and points cross the boundary as plain 3-tuples.
namespace pybind11::detail {

template <>
struct type_caster<Cell> {
  PYBIND11_TYPE_CASTER(Cell, const_name("tuple[int, int, int]"));
  bool load(handle src, bool) {
    if (!isinstance<sequence>(src) || isinstance<str>(src)) return false;
    auto seq = reinterpret_borrow<sequence>(src);
    if (seq.size() != 3) return false;
    try {
      value = {seq[0].cast<int>(), seq[1].cast<int>(), seq[2].cast<int>()};
    } catch (const cast_error&) {
      return false;
    }
    return true;
  }
  static handle cast(Cell c, return_value_policy, handle) { return make_tuple(c.i, c.j, c.k).release(); }
};

template <>
struct type_caster<Vec3> {
  PYBIND11_TYPE_CASTER(Vec3, const_name("tuple[float, float, float]"));
  bool load(handle src, bool) {
    if (!isinstance<sequence>(src) || isinstance<str>(src)) return false;
    auto seq = reinterpret_borrow<sequence>(src);
    if (seq.size() != 3) return false;
    try {
      value = {seq[0].cast<double>(), seq[1].cast<double>(), seq[2].cast<double>()};
    } catch (const cast_error&) {
      return false;
    }
    return true;
  }
  static handle cast(Vec3 v, return_value_policy, handle) { return make_tuple(v.x, v.y, v.z).release(); }
};

}  // namespace pybind11::detail

namespace {

py::dict metrics_dict(const RunMetrics& m) {
  py::dict d;
  d["computation_time"] = m.computation_time;
  d["success_rate"] = m.success_rate;
  d["makespan"] = m.makespan;
  d["sum_of_costs"] = m.sum_of_costs;
  d["path_lengths"] = m.path_lengths;
  d["succeeded"] = m.succeeded;
  return d;
}

std::shared_ptr<const OccupancyGrid3D> share(const OccupancyGrid3D& g) { return std::make_shared<const OccupancyGrid3D>(g); }

}  // namespace

PYBIND11_MODULE(_skyrover, m) {
  m.doc() = "3D UAV/AGV multi-agent path finding core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<UnsupportedFormatError>(m, "UnsupportedFormatError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  auto invalid = py::register_exception<InvalidInputError>(m, "InvalidInputError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<ContractError>(m, "ContractError", base.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<SolveFailure>(m, "SolveFailure", base.ptr());
  py::register_exception<TaskError>(m, "TaskError", invalid.ptr());

  // ---- voxel map
  py::class_<OccupancyGrid3D>(m, "OccupancyGrid3D")
      .def(py::init<Vec3, double, int, int, int>(), py::arg("origin"), py::arg("resolution"), py::arg("nx"),
           py::arg("ny"), py::arg("nz"))
      .def_property_readonly("origin", &OccupancyGrid3D::origin)
      .def_property_readonly("resolution", &OccupancyGrid3D::resolution)
      .def_property_readonly("dims", [](const OccupancyGrid3D& g) { return py::make_tuple(g.nx(), g.ny(), g.nz()); })
      .def_property_readonly("size", &OccupancyGrid3D::size)
      .def("in_bounds", &OccupancyGrid3D::in_bounds)
      .def("occupied", &OccupancyGrid3D::occupied)
      .def("is_free", &OccupancyGrid3D::is_free)
      .def("set", &OccupancyGrid3D::set, py::arg("cell"), py::arg("occupied") = true)
      .def("index", &OccupancyGrid3D::index)
      .def("occupied_count", &OccupancyGrid3D::occupied_count)
      .def("cell_center", &OccupancyGrid3D::cell_center)
      .def("to_bytes", [](const OccupancyGrid3D& g) { return py::bytes(write_grid(g)); })
      .def_static("from_bytes", [](const py::bytes& b) { return read_grid(std::string(b)); })
      .def(py::self == py::self)
      .def("__repr__", [](const OccupancyGrid3D& g) {
        return "OccupancyGrid3D(" + std::to_string(g.nx()) + "x" + std::to_string(g.ny()) + "x" +
               std::to_string(g.nz()) + ", occupied=" + std::to_string(g.occupied_count()) + ")";
      });

  m.def("parse_pcd", [](const py::bytes& b) {
    PointCloud c = parse_pcd(std::string(b));
    return py::make_tuple(c.points, c.dropped);
  }, "Returns (points, dropped_count).");
  m.def("write_pcd", [](const std::vector<Vec3>& points, bool binary) {
    return py::bytes(write_pcd(PointCloud{points, 0}, binary ? PcdEncoding::Binary : PcdEncoding::Ascii));
  }, py::arg("points"), py::arg("binary") = false);
  m.def("rasterize", [](const std::vector<Vec3>& points, double resolution, std::optional<std::pair<Vec3, Vec3>> bounds,
                        int padding) {
    RasterizeOptions opt;
    opt.resolution = resolution;
    opt.padding = padding;
    if (bounds) opt.bounds = Bounds{bounds->first, bounds->second};
    return rasterize(PointCloud{points, 0}, opt);
  }, py::arg("points"), py::arg("resolution") = 1.0, py::arg("bounds") = py::none(), py::arg("padding") = 1);
  m.def("pgm_to_grid", [](const py::bytes& b, int nz, bool walls, int threshold, double resolution) {
    PgmOptions opt;
    opt.occupied_threshold = threshold;
    opt.resolution = resolution;
    return extrude_ground(parse_pgm(std::string(b), opt), nz, walls ? ExtrudeMode::Walls : ExtrudeMode::GroundOnly);
  }, py::arg("data"), py::arg("nz") = 1, py::arg("walls") = false, py::arg("threshold") = 128,
        py::arg("resolution") = 1.0);

  // ---- mapf core
  py::enum_<AgentKind>(m, "AgentKind").value("UAV", AgentKind::UAV).value("AGV", AgentKind::AGV);
  py::class_<Agent>(m, "Agent")
      .def(py::init([](int id, AgentKind kind, Cell start, Cell goal) { return Agent{id, kind, start, goal}; }),
           py::arg("id"), py::arg("kind"), py::arg("start"), py::arg("goal"))
      .def_readwrite("id", &Agent::id)
      .def_readwrite("kind", &Agent::kind)
      .def_readwrite("start", &Agent::start)
      .def_readwrite("goal", &Agent::goal)
      .def(py::self == py::self)
      .def("__repr__", [](const Agent& a) {
        return "Agent(" + std::to_string(a.id) + ", " + std::string(to_string(a.kind)) + ")";
      });
  py::class_<Path>(m, "Path")
      .def(py::init([](int id, std::vector<Cell> cells) { return Path{id, std::move(cells)}; }), py::arg("agent_id"),
           py::arg("cells"))
      .def_readwrite("agent_id", &Path::agent_id)
      .def_readwrite("cells", &Path::cells)
      .def("at", &Path::at)
      .def("cost", &Path::cost)
      .def(py::self == py::self);
  py::enum_<ConflictKind>(m, "ConflictKind").value("Vertex", ConflictKind::Vertex).value("Edge", ConflictKind::Edge);
  py::class_<Conflict>(m, "Conflict")
      .def_readonly("kind", &Conflict::kind)
      .def_readonly("agents", &Conflict::agents)
      .def_readonly("time", &Conflict::time)
      .def_readonly("cell", &Conflict::cell)
      .def_readonly("to", &Conflict::to);
  py::class_<Solution>(m, "Solution")
      .def_readonly("paths", &Solution::paths)
      .def_readonly("sum_of_costs", &Solution::sum_of_costs)
      .def_readonly("makespan", &Solution::makespan);
  m.def("make_solution", &make_solution);
  m.def("detect_conflicts", [](const std::vector<Path>& paths) { return detect_conflicts(paths); });
  m.def("validate_solution", [](const OccupancyGrid3D& g, const std::vector<Agent>& agents,
                                const std::vector<Path>& paths) {
    py::list out;
    for (const auto& v : validate_solution(g, agents, paths))
      out.append(py::make_tuple(std::string(to_string(v.kind)), v.agent_id, v.time, v.message));
    return out;
  });

  // ---- solvers
  py::enum_<Algorithm>(m, "Algorithm")
      .value("PrioritizedAStar", Algorithm::PrioritizedAStar)
      .value("CBS", Algorithm::CBS)
      .value("Online", Algorithm::Online);
  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("algorithm", &SolverConfig::algorithm)
      .def_readwrite("node_expansion_limit", &SolverConfig::node_expansion_limit)
      .def_readwrite("time_limit", &SolverConfig::time_limit)
      .def_readwrite("rng_seed", &SolverConfig::rng_seed)
      .def_readwrite("online_policy", &SolverConfig::online_policy);
  m.def("solve", [](const OccupancyGrid3D& g, const std::vector<Agent>& agents, const SolverConfig& cfg) {
    SolveResult r;
    {
      py::gil_scoped_release release;
      r = solve(g, agents, cfg);
    }
    py::dict d;
    d["status"] = std::string(to_string(r.status));
    d["solution"] = r.solution ? py::cast(*r.solution) : py::none();
    d["diagnostic"] = r.diagnostic;
    d["high_level_expansions"] = r.stats.high_level_expansions;
    d["low_level_expansions"] = r.stats.low_level_expansions;
    d["seconds"] = r.stats.seconds;
    return d;
  });
  m.def("available_policies", &available_policies);

  // ---- sim
  py::class_<Simulator>(m, "Simulator")
      .def(py::init<>())
      .def("init", [](Simulator& s, const OccupancyGrid3D& g, std::vector<Agent> agents, const SolverConfig& cfg) {
        s.init(share(g), std::move(agents), cfg);
      })
      .def("step", [](Simulator& s) { s.step(); })
      .def("reset", [](Simulator& s) { s.reset(); })
      .def("run", [](Simulator& s, std::optional<int> budget) { return metrics_dict(s.run(budget)); },
           py::arg("budget") = py::none())
      .def("at_fixpoint", &Simulator::at_fixpoint)
      .def_property_readonly("tick", [](const Simulator& s) { return s.state().tick; })
      .def_property_readonly("cells", [](const Simulator& s) { return s.state().agent_cells; })
      .def_property_readonly("status", [](const Simulator& s) {
        std::vector<std::string> out;
        for (auto st : s.state().status) out.emplace_back(to_string(st));
        return out;
      })
      .def_property_readonly("solution", [](const Simulator& s) { return s.solution(); })
      .def_property_readonly("computation_time", &Simulator::computation_time)
      .def("tick_log_csv", [](const Simulator& s) { return write_tick_log_csv(s.tick_log()); })
      .def("metrics", [](const Simulator& s) { return metrics_dict(s.metrics()); });

  py::class_<WaypointCommand>(m, "WaypointCommand")
      .def_readonly("agent_id", &WaypointCommand::agent_id)
      .def_readonly("timestamp", &WaypointCommand::timestamp)
      .def_readonly("position", &WaypointCommand::position)
      .def_readonly("hold", &WaypointCommand::hold);
  m.def("execute_plan", [](const Solution& s, double cell_duration, double resolution, Vec3 origin) {
    return execute_plan(s, {cell_duration, resolution, origin});
  }, py::arg("solution"), py::arg("cell_duration") = 1.0, py::arg("resolution") = 1.0,
        py::arg("origin") = Vec3{0, 0, 0});
  m.def("waypoints_csv", [](const std::vector<WaypointCommand>& c) { return write_waypoints_csv(c); });

  // ---- scenarios, warehouse, tasks
  m.def("generate_warehouse", [](int nx, int ny, int nz, int shelf_rows, int shelf_height, const std::string& roster,
                                 std::uint64_t seed) {
    WarehouseParams p;
    p.nx = nx;
    p.ny = ny;
    p.nz = nz;
    p.shelf_rows = shelf_rows;
    p.shelf_height = shelf_height;
    p.seed = seed;
    std::tie(p.uav_count, p.agv_count) = parse_roster_spec(roster);
    auto w = generate_warehouse(p);
    return py::make_tuple(std::move(w.grid), std::move(w.agents));
  }, py::arg("nx") = 80, py::arg("ny") = 60, py::arg("nz") = 10, py::arg("shelf_rows") = WarehouseParams{}.shelf_rows,
        py::arg("shelf_height") = WarehouseParams{}.shelf_height, py::arg("agents") = "6uav+16agv",
        py::arg("seed") = 1);
  m.def("load_scenario", [](const std::string& path) {
    Scenario s = load_scenario(path);
    OccupancyGrid3D g = load_grid(s.grid, std::filesystem::path(path).parent_path());
    return py::make_tuple(std::move(g), s.agents);
  }, "Returns (grid, agents).");

  py::enum_<TaskKind>(m, "TaskKind")
      .value("InventoryScan", TaskKind::InventoryScan)
      .value("AerialTransfer", TaskKind::AerialTransfer);
  py::class_<TaskScript>(m, "TaskScript")
      .def(py::init([](TaskKind kind, int agv_id, int uav_id, Cell a, Cell b, int hover_offset, int hold_steps) {
             return TaskScript{kind, agv_id, uav_id, a, b, hover_offset, hold_steps};
           }),
           py::arg("kind"), py::arg("agv_id"), py::arg("uav_id"), py::arg("point_a"), py::arg("point_b"),
           py::arg("hover_offset") = 2, py::arg("hold_steps") = 3);
  m.def("compile_task", [](const TaskScript& t, const std::vector<Agent>& agents, const OccupancyGrid3D& g) {
    py::list out;
    for (const auto& ep : compile_task(t, agents, g)) out.append(py::make_tuple(ep.name, ep.agents));
    return out;
  });
  m.def("run_task", [](const OccupancyGrid3D& g, const std::vector<Agent>& agents, const TaskScript& t,
                       const SolverConfig& cfg) {
    TaskReport r = run_task(share(g), agents, t, cfg);
    py::dict d;
    d["success"] = r.success;
    d["rendezvous"] = r.rendezvous;
    d["rendezvous_ticks"] = r.rendezvous_ticks;
    d["failure"] = r.failure;
    py::list eps;
    for (const auto& ep : r.episodes) {
      py::dict e = metrics_dict(ep.metrics);
      e["name"] = ep.name;
      e["success"] = ep.success;
      e["tick_log_csv"] = write_tick_log_csv(ep.tick_log);
      eps.append(e);
    }
    d["episodes"] = eps;
    return d;
  });
}
