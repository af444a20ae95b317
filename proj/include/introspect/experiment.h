#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "introspect/environments.h"
#include "json.hpp"

namespace introspect {

// Invalid experiment description; the CLI maps it to exit code 2.
class SpecError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kCsvSchemaVersion = 1;

struct ExperimentSpec {
  DomainId domain = DomainId::kGrid;
  std::vector<int> sizes;
  int containers = 0;  // drawers/bins only; 0 picks the domain default
  std::vector<std::string> planners;
  int episodes = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::uint64_t node_cap = 5'000'000;
  double time_cap_s = 60;
  double c_ucb = 1.4142135623730951;
  double c_puct = 1.25;
  bool normalize_relational = true;
  std::size_t oracle_state_cap = 20000;
  int workers = 1;
};

// Throws SpecError on missing or ill-typed fields and unknown names.
ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const ExperimentSpec& spec);
// "a..b" or a comma list; throws SpecError.
std::vector<int> parse_sizes(const std::string& s);
// Comma-separated planner names, each validated.
std::vector<std::string> parse_planner_list(const std::string& s);

// Hex digest of everything that influences a row except the seed.
std::string config_fingerprint(const ExperimentSpec& spec, const std::string& planner);

struct ResultRow {
  std::string domain;
  int size = 0;
  std::string planner;
  std::uint64_t seed = 0;
  int episode = 0;
  double ret = 0;
  std::optional<double> normalized;
  std::uint64_t nodes_expanded = 0;
  std::size_t plan_length = 0;
  std::string status;  // SUCCESS, FAILURE, CONTINUE or BUDGET
  double wall_ms = 0;
  std::string fingerprint;
};

std::string csv_header();
std::string csv_line(const ResultRow& r);

struct Moments {
  std::size_t n = 0;
  double mean = 0;
  double stddev = 0;  // population
};
Moments moments(const std::vector<double>& xs);

// Least-squares slope of ln(1 + y) against x; 0 with fewer than two points.
double log_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct CellSummary {
  std::string domain;
  int size = 0;
  std::string planner;
  Moments ret, normalized, nodes, plan_length, wall_ms;
  std::size_t successes = 0;
  std::size_t budget_hits = 0;
};

struct PlannerTrend {
  std::string planner;
  double nodes_log_slope = 0;
  double wall_ms_log_slope = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<CellSummary> cells;
  std::vector<PlannerTrend> trends;
};

// Deterministic functions of the rows.
std::vector<CellSummary> summarize(const std::vector<ResultRow>& rows);
std::vector<PlannerTrend> trends(const std::vector<CellSummary>& cells);
nlohmann::json summary_json(const ExperimentSpec& spec, const ExperimentResult& result);

// Runs every (size, planner, episode) cell. Rows are written to `csv` (after
// the header) one cell at a time in sweep order, whatever the worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream& csv,
                                const std::function<void(const CellSummary&)>& on_cell = {});

struct GoldenCheck {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

// The pinned bins and blocks-world checks, read from `data_dir`'s fixtures.
std::vector<GoldenCheck> verify_goldens(const std::string& data_dir = INTROSPECT_DATA_DIR);
nlohmann::json goldens_json(const std::vector<GoldenCheck>& checks);

}  // namespace introspect
