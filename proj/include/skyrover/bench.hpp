#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skyrover/solvers.hpp"
#include "skyrover/warehouse.hpp"

namespace skyrover {

struct SuiteEntry {
  std::string name;
  std::optional<std::string> scenario;  // path, relative to the suite file
  std::optional<WarehouseParams> warehouse;

  friend bool operator==(const SuiteEntry&, const SuiteEntry&) = default;
};

struct Suite {
  std::vector<SuiteEntry> entries;
};

/// {"scenarios": [{"name", "scenario": "file.json"} | {"name", "warehouse": {dims, shelf_rows,
/// shelf_height, agents, seed}}]}. An empty list is an error.
Suite parse_suite(std::string_view json_text);
Suite load_suite(const std::filesystem::path& path);

struct BenchOptions {
  std::vector<Algorithm> algorithms{Algorithm::PrioritizedAStar, Algorithm::CBS, Algorithm::Online};
  int repeats = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool timing = true;
  std::string online_policy = "greedy-shielded";
  std::uint64_t node_expansion_limit = SolverConfig{}.node_expansion_limit;
  double time_limit = SolverConfig{}.time_limit;
};

struct BenchRow {
  std::string scenario;
  std::string algorithm;
  std::uint64_t seed = 0;
  int agents = 0;
  std::optional<double> comp_time_s;  // median over repeats; empty when timing is off
  double success_rate = 0.0;
  int makespan = 0;
  long long sum_of_costs = 0;
  std::string note;  // solver diagnostic on failure, not part of the CSV

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchReport {
  std::vector<BenchRow> rows;  // suite order, then algorithm order
  std::uint64_t seed = 0;
  std::string environment;
};

BenchReport run_bench(const Suite& suite, const BenchOptions& options, const std::filesystem::path& base_dir);

double median(std::vector<double> values);
std::string environment_note();

std::string write_bench_csv(const std::vector<BenchRow>& rows);
std::vector<BenchRow> parse_bench_csv(std::string_view text);
std::string write_bench_table(const BenchReport& report);

}  // namespace skyrover
