#include "skyrover/bench.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <thread>

#include "skyrover/io_util.hpp"
#include "skyrover/log.hpp"
#include "skyrover/scenario.hpp"
#include "skyrover/sim.hpp"

namespace skyrover {

using json = nlohmann::json;

namespace {

ValidationError suite_error(const std::string& what) { return ValidationError({"suite: " + what}); }

WarehouseParams warehouse_from(const json& w) {
  if (!w.is_object()) throw suite_error("warehouse must be an object");
  WarehouseParams p;
  for (const auto& [key, value] : w.items()) {
    if (key == "dims") {
      if (!value.is_array() || value.size() != 3 ||
          !std::all_of(value.begin(), value.end(), [](const json& v) { return v.is_number_integer(); }))
        throw suite_error("warehouse.dims must be [nx, ny, nz]");
      p.nx = value[0].get<int>();
      p.ny = value[1].get<int>();
      p.nz = value[2].get<int>();
    } else if (key == "shelf_rows" || key == "shelf_height") {
      if (!value.is_number_integer()) throw suite_error("warehouse." + key + " must be an integer");
      (key == "shelf_rows" ? p.shelf_rows : p.shelf_height) = value.get<int>();
    } else if (key == "agents") {
      if (!value.is_string()) throw suite_error("warehouse.agents must be a roster string");
      try {
        std::tie(p.uav_count, p.agv_count) = parse_roster_spec(value.get<std::string>());
      } catch (const InvalidInputError& e) {
        throw suite_error(e.what());
      }
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw suite_error("warehouse.seed must be a non-negative integer");
      p.seed = value.get<std::uint64_t>();
    } else if (key == "resolution") {
      if (!value.is_number()) throw suite_error("warehouse.resolution must be a number");
      p.resolution = value.get<double>();
    } else {
      throw suite_error("unknown warehouse field '" + key + "'");
    }
  }
  return p;
}

struct Instance {
  std::shared_ptr<const OccupancyGrid3D> grid;
  std::vector<Agent> agents;
};

Instance load_instance(const SuiteEntry& entry, const std::filesystem::path& base_dir) {
  if (entry.warehouse) {
    auto w = generate_warehouse(*entry.warehouse);
    return {std::make_shared<const OccupancyGrid3D>(std::move(w.grid)), std::move(w.agents)};
  }
  std::filesystem::path p(*entry.scenario);
  if (p.is_relative()) p = base_dir / p;
  Scenario s = load_scenario(p);
  auto grid = std::make_shared<const OccupancyGrid3D>(load_grid(s.grid, p.parent_path()));
  return {std::move(grid), std::move(s.agents)};
}

std::string csv_time(const std::optional<double>& t) { return t ? format_double(*t) : "omitted"; }

}  // namespace

Suite parse_suite(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("suite JSON: ") + e.what(), e.byte);
  }
  if (!root.is_object() || !root.contains("scenarios") || !root["scenarios"].is_array())
    throw suite_error("expected an object with a 'scenarios' array");
  for (const auto& [key, value] : root.items())
    if (key != "scenarios") throw suite_error("unknown field '" + key + "'");
  Suite suite;
  for (const auto& e : root["scenarios"]) {
    if (!e.is_object()) throw suite_error("scenario entries must be objects");
    SuiteEntry entry;
    for (const auto& [key, value] : e.items()) {
      if (key == "name") {
        if (!value.is_string()) throw suite_error("name must be a string");
        entry.name = value.get<std::string>();
      } else if (key == "scenario") {
        if (!value.is_string()) throw suite_error("scenario must be a file path");
        entry.scenario = value.get<std::string>();
      } else if (key == "warehouse") {
        entry.warehouse = warehouse_from(value);
      } else {
        throw suite_error("unknown entry field '" + key + "'");
      }
    }
    if (entry.name.empty()) throw suite_error("every entry needs a name");
    if (entry.name.find_first_of(",\n\r") != std::string::npos) throw suite_error("names may not contain commas");
    if (entry.scenario.has_value() == entry.warehouse.has_value())
      throw suite_error("entry '" + entry.name + "' needs exactly one of 'scenario' or 'warehouse'");
    suite.entries.push_back(std::move(entry));
  }
  if (suite.entries.empty()) throw suite_error("no scenarios");
  return suite;
}

Suite load_suite(const std::filesystem::path& path) { return parse_suite(read_file(path)); }

double median(std::vector<double> values) {
  if (values.empty()) throw ContractError("median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

std::string environment_note() {
  std::string out;
  struct utsname u {};
  if (uname(&u) == 0) out += std::string(u.sysname) + " " + u.release + " " + u.machine;
  out += ", " + std::to_string(std::max(1u, std::thread::hardware_concurrency())) + " hw threads";
#if defined(__clang__)
  out += ", clang " __clang_version__;
#elif defined(__GNUC__)
  out += ", gcc " __VERSION__;
#endif
#ifdef NDEBUG
  out += ", optimized build";
#else
  out += ", debug build";
#endif
  return out;
}

BenchReport run_bench(const Suite& suite, const BenchOptions& options, const std::filesystem::path& base_dir) {
  if (suite.entries.empty()) throw ValidationError({"suite: no scenarios"});
  if (options.algorithms.empty()) throw ValidationError({"bench: no algorithms"});
  if (options.repeats < 1) throw ValidationError({"bench: repeats must be at least 1"});
  if (options.jobs < 1) throw ValidationError({"bench: jobs must be at least 1"});

  // Instances are built up front so placement errors surface before any solving.
  std::vector<Instance> instances;
  for (const auto& e : suite.entries) instances.push_back(load_instance(e, base_dir));

  const std::size_t n_alg = options.algorithms.size();
  const std::size_t cells = instances.size() * n_alg;
  std::vector<BenchRow> rows(cells);
  std::vector<std::exception_ptr> errors(cells);

  auto run_cell = [&](std::size_t idx) {
    const auto& inst = instances[idx / n_alg];
    SolverConfig cfg;
    cfg.algorithm = options.algorithms[idx % n_alg];
    cfg.rng_seed = options.seed;
    cfg.online_policy = options.online_policy;
    cfg.node_expansion_limit = options.node_expansion_limit;
    cfg.time_limit = options.time_limit;

    BenchRow row;
    row.scenario = suite.entries[idx / n_alg].name;
    row.algorithm = std::string(to_string(cfg.algorithm));
    row.seed = options.seed;
    row.agents = static_cast<int>(inst.agents.size());
    std::vector<double> times;
    for (int r = 0; r < options.repeats; ++r) {
      Simulator sim;
      try {
        sim.init(inst.grid, inst.agents, cfg);
      } catch (const SolveFailure& e) {
        times.push_back(sim.computation_time());
        row.note = e.what();
        row.success_rate = 0.0;
        row.makespan = 0;
        row.sum_of_costs = 0;
        continue;
      }
      const RunMetrics m = sim.run();
      times.push_back(m.computation_time);
      row.success_rate = m.success_rate;
      row.makespan = m.makespan;
      row.sum_of_costs = m.sum_of_costs;
    }
    if (options.timing) row.comp_time_s = median(times);
    log_info(row.scenario + "/" + row.algorithm + ": success " + format_double(row.success_rate));
    rows[idx] = std::move(row);
  };

  const int workers = std::min<int>(options.jobs, static_cast<int>(cells));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cells;) {
          try {
            run_cell(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return {std::move(rows), options.seed, environment_note()};
}

constexpr std::string_view kBenchHeader = "scenario,algorithm,seed,agents,comp_time_s,success_rate,makespan,sum_of_costs";

std::string write_bench_csv(const std::vector<BenchRow>& rows) {
  std::string out(kBenchHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.scenario + ',' + r.algorithm + ',' + std::to_string(r.seed) + ',' + std::to_string(r.agents) + ',' +
           csv_time(r.comp_time_s) + ',' + format_double(r.success_rate) + ',' + std::to_string(r.makespan) + ',' +
           std::to_string(r.sum_of_costs) + '\n';
  }
  return out;
}

std::vector<BenchRow> parse_bench_csv(std::string_view text) {
  std::vector<BenchRow> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t line_start = pos;
    pos = end + 1;
    if (header) {
      if (line != kBenchHeader) throw ParseError("bench CSV header must be '" + std::string(kBenchHeader) + "'", 0);
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    for (std::size_t p = 0;;) {
      const std::size_t c = line.find(',', p);
      f.push_back(line.substr(p, c == std::string_view::npos ? std::string_view::npos : c - p));
      if (c == std::string_view::npos) break;
      p = c + 1;
    }
    if (f.size() != 8) throw ParseError("bench CSV row needs 8 columns", line_start);
    BenchRow r;
    r.scenario = std::string(f[0]);
    r.algorithm = std::string(f[1]);
    r.seed = parse_uint(f[2]);
    r.agents = static_cast<int>(parse_int(f[3]));
    if (f[4] != "omitted") r.comp_time_s = parse_double(f[4]);
    r.success_rate = parse_double(f[5]);
    r.makespan = static_cast<int>(parse_int(f[6]));
    r.sum_of_costs = parse_int(f[7]);
    rows.push_back(std::move(r));
  }
  if (header) throw ParseError("bench CSV is empty", 0);
  return rows;
}

std::string write_bench_table(const BenchReport& report) {
  const std::vector<std::string> head{"Scenario", "Algorithm", "Agents", "Comp. time (s)", "Success (%)", "Makespan",
                                      "Sum of costs"};
  std::vector<std::vector<std::string>> body;
  for (const auto& r : report.rows) {
    std::ostringstream t, s;
    if (r.comp_time_s)
      t << std::fixed << std::setprecision(3) << *r.comp_time_s;
    else
      t << "omitted";
    s << std::fixed << std::setprecision(1) << r.success_rate * 100.0;
    body.push_back({r.scenario, r.algorithm, std::to_string(r.agents), t.str(), s.str(), std::to_string(r.makespan),
                    std::to_string(r.sum_of_costs)});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& row : body) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out += c ? " | " : "";
      out += cells[c] + std::string(width[c] - cells[c].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + '\n';
  };
  std::string out = line(head);
  std::string rule;
  for (std::size_t c = 0; c < head.size(); ++c) rule += (c ? "-+-" : "") + std::string(width[c], '-');
  out += rule + '\n';
  for (const auto& row : body) out += line(row);
  out += "\nseed: " + std::to_string(report.seed) + '\n';
  out += "environment: " + report.environment + '\n';
  for (const auto& r : report.rows)
    if (!r.note.empty()) out += "note: " + r.scenario + "/" + r.algorithm + ": " + r.note + '\n';
  return out;
}

}  // namespace skyrover
