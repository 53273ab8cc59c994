#include "cofo/benchmark.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "cofo/rng.hpp"

namespace cofo {

namespace {

AllocationResult run_method(Method method, const GroundTruthScenario& sc,
                            const StrategyLibrary& inferred, const TeamSpec& team,
                            const BenchmarkOptions& opt, std::uint64_t run_seed) {
  switch (method) {
    case Method::ours: return solve(inferred, team, opt.solver);
    case Method::nh: return nh_allocate(sc.demos, team, opt.solver);
    case Method::nc: return nc_allocate(inferred, team, opt.solver, run_seed);
    case Method::na: return na_allocate(sc.demos, team, opt.solver);
    case Method::ra:
      return ra_allocate(team, static_cast<int>(inferred.tasks()), run_seed, &inferred,
                         opt.ra_idle_fraction);
  }
  throw ValueError("unknown method");
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw ValueError("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<std::vector<double>> metric_groups(const std::vector<EvaluationRecord>& rows,
                                               const std::vector<std::string>& methods,
                                               bool exact_metric) {
  std::vector<std::vector<double>> groups(methods.size());
  for (std::size_t g = 0; g < methods.size(); ++g) {
    std::map<int, std::pair<double, int>> per_team;  // team -> (sum, count)
    for (const auto& r : rows) {
      if (r.method != methods[g]) continue;
      auto& acc = per_team[r.team_id];
      acc.first += exact_metric ? r.e_exact : r.e_min;
      acc.second += 1;
    }
    for (const auto& [team, acc] : per_team)
      groups[g].push_back(acc.first / static_cast<double>(acc.second));
  }
  return groups;
}

BenchmarkReport run_benchmark(const GroundTruthScenario& scenario,
                              const BenchmarkOptions& options) {
  if (scenario.test_teams.empty()) throw ValueError("scenario has no test teams");
  if (options.methods.empty()) throw ValueError("no methods requested");

  BenchmarkReport report;
  report.inferred = infer_strategies(scenario.demos, options.clustering);
  const SuccessOracle oracle = scenario.oracle();

  const long teams = static_cast<long>(scenario.test_teams.size());
  const long n_methods = static_cast<long>(options.methods.size());
  const long grid = teams * n_methods;
  std::vector<AllocationResult> results(grid);

  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
  for (long g = 0; g < grid; ++g) {
    const long t = g / n_methods;
    const long mi = g % n_methods;
    const std::uint64_t run_seed = Rng::derive(options.seed, static_cast<std::uint64_t>(g));
    results[g] = run_method(options.methods[mi], scenario, report.inferred,
                            scenario.test_teams[t], options, run_seed);
  }

  for (long t = 0; t < teams; ++t)
    for (long mi = 0; mi < n_methods; ++mi) {
      const AllocationResult& res = results[t * n_methods + mi];
      const TeamSpec& team = scenario.test_teams[t];
      for (long task = 0; task < report.inferred.tasks(); ++task) {
        EvaluationRecord row;
        row.method = to_string(options.methods[mi]);
        row.team_id = static_cast<int>(t);
        row.task = static_cast<int>(task);
        row.e_min = e_min(report.inferred.per_task[task], team.traits,
                          res.assignment.rows.row(task).transpose());
        row.e_exact = e_exact(report.inferred.per_task[task], team.traits,
                              res.assignment.rows.row(task).transpose());
        row.utilization = utilization(res.assignment, team, task);
        row.success = judge_success(oracle, team, res.assignment, task);
        row.wall_time = res.wall_time;
        row.status = to_string(res.status);
        report.rows.push_back(std::move(row));
      }
    }

  for (long mi = 0; mi < n_methods; ++mi) {
    const std::string name = to_string(options.methods[mi]);
    std::vector<double> walls, utils;
    std::vector<bool> successes;
    for (const auto& r : report.rows) {
      if (r.method != name) continue;
      utils.push_back(r.utilization);
      successes.push_back(r.success);
    }
    for (long t = 0; t < teams; ++t)
      walls.push_back(results[t * n_methods + mi].wall_time);
    MethodSummary s;
    s.method = options.methods[mi];
    const auto groups_min = metric_groups(report.rows, {name}, false);
    const auto groups_exact = metric_groups(report.rows, {name}, true);
    s.median_e_min = median(groups_min[0]);
    s.median_e_exact = median(groups_exact[0]);
    s.mean_utilization =
        std::accumulate(utils.begin(), utils.end(), 0.0) / static_cast<double>(utils.size());
    s.success_pct = success_rate(successes);
    s.median_wall_time = median(walls);
    report.summaries.push_back(s);
    report.group_names.push_back(name);
  }

  if (options.methods.size() >= 2) {
    report.stats_e_min = dunn_fdr(metric_groups(report.rows, report.group_names, false));
    report.stats_e_exact = dunn_fdr(metric_groups(report.rows, report.group_names, true));
  }
  return report;
}

}  // namespace cofo
