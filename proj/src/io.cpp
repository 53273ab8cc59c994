#include "cofo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cofo::io {

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_to_json(const Eigen::MatrixXi& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const long rows = static_cast<long>(j.size());
  const long cols = rows > 0 ? static_cast<long>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (static_cast<long>(j.at(r).size()) != cols)
      throw ValueError("ragged matrix in JSON input");
    for (long c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

Eigen::MatrixXi int_matrix_from_json(const json& j) {
  const long rows = static_cast<long>(j.size());
  const long cols = rows > 0 ? static_cast<long>(j.at(0).size()) : 0;
  Eigen::MatrixXi m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (static_cast<long>(j.at(r).size()) != cols)
      throw ValueError("ragged matrix in JSON input");
    for (long c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<int>();
  }
  return m;
}

json vector_to_json(const TraitVector& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

TraitVector vector_from_json(const json& j) {
  TraitVector v(static_cast<long>(j.size()));
  for (long i = 0; i < v.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

SolveStatus status_from_string(const std::string& s) {
  for (SolveStatus st : {SolveStatus::optimal, SolveStatus::time_limit_incumbent,
                         SolveStatus::relaxed_optimal, SolveStatus::relaxed_incumbent,
                         SolveStatus::infeasible})
    if (s == to_string(st)) return st;
  throw ValueError("unknown solve status: " + s);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

json to_json(const TeamSpec& team) {
  json j;
  j["species"] = team.traits.species_names;
  j["Q"] = matrix_to_json(team.traits.q);
  json counts = json::array();
  for (long s = 0; s < team.counts.size(); ++s) counts.push_back(team.counts[s]);
  j["counts"] = counts;
  return j;
}

TeamSpec team_from_json(const json& j) {
  TeamSpec team;
  team.traits.species_names = j.at("species").get<std::vector<std::string>>();
  team.traits.q = matrix_from_json(j.at("Q"));
  const auto& counts = j.at("counts");
  team.counts.resize(static_cast<long>(counts.size()));
  for (long s = 0; s < team.counts.size(); ++s) team.counts[s] = counts.at(s).get<int>();
  validate(team);
  return team;
}

json to_json(const DemonstrationSet& demos) {
  json j;
  j["traits"] = demos.trait_names;
  j["tasks"] = demos.tasks;
  json arr = json::array();
  for (const auto& d : demos.demos) {
    json dj = to_json(d.team);
    dj["X"] = matrix_to_json(d.assignment.rows);
    // keep the documented field order: species, Q, X, counts
    json ordered;
    ordered["species"] = dj["species"];
    ordered["Q"] = dj["Q"];
    ordered["X"] = dj["X"];
    ordered["counts"] = dj["counts"];
    arr.push_back(std::move(ordered));
  }
  j["demos"] = std::move(arr);
  return j;
}

DemonstrationSet demonstration_set_from_json(const json& j) {
  DemonstrationSet ds;
  ds.trait_names = j.at("traits").get<std::vector<std::string>>();
  ds.tasks = j.at("tasks").get<int>();
  for (const auto& dj : j.at("demos")) {
    Demonstration d;
    d.team = team_from_json(dj);
    d.assignment.rows = int_matrix_from_json(dj.at("X"));
    ds.demos.push_back(std::move(d));
  }
  validate(ds);
  return ds;
}

json to_json(const StrategyLibrary& lib) {
  json tasks = json::array();
  for (long m = 0; m < lib.tasks(); ++m) {
    json t;
    json strategies = json::array();
    for (const auto& s : lib.per_task[m]) strategies.push_back(vector_to_json(s));
    t["strategies"] = std::move(strategies);
    t["sizes"] = lib.cluster_sizes[m];
    tasks.push_back(std::move(t));
  }
  json j;
  j["tasks"] = std::move(tasks);
  return j;
}

StrategyLibrary library_from_json(const json& j) {
  StrategyLibrary lib;
  for (const auto& t : j.at("tasks")) {
    std::vector<TraitVector> strategies;
    for (const auto& s : t.at("strategies")) strategies.push_back(vector_from_json(s));
    lib.per_task.push_back(std::move(strategies));
    lib.cluster_sizes.push_back(t.at("sizes").get<std::vector<int>>());
  }
  validate(lib);
  return lib;
}

json to_json(const AllocationResult& result) {
  json j;
  j["assignment"] = matrix_to_json(result.assignment.rows);
  j["selectors"] = result.selectors.per_task;
  j["per_task_error"] = result.per_task_error;
  j["objective"] = result.objective;
  j["status"] = to_string(result.status);
  j["wall_time_s"] = result.wall_time;
  j["nodes_explored"] = result.nodes_explored;
  return j;
}

AllocationResult allocation_from_json(const json& j) {
  AllocationResult r;
  r.assignment.rows = int_matrix_from_json(j.at("assignment"));
  r.selectors.per_task = j.at("selectors").get<std::vector<std::vector<int>>>();
  r.per_task_error = j.at("per_task_error").get<std::vector<double>>();
  r.objective = j.at("objective").get<double>();
  r.status = status_from_string(j.at("status").get<std::string>());
  r.wall_time = j.at("wall_time_s").get<double>();
  r.nodes_explored = j.at("nodes_explored").get<long long>();
  return r;
}

json to_json(const GroundTruthScenario& scenario) {
  json j = to_json(scenario.demos);
  json teams = json::array();
  for (const auto& t : scenario.test_teams) teams.push_back(to_json(t));
  j["test_teams"] = std::move(teams);

  json truth;
  truth["strategies"] = to_json(scenario.true_strategies);
  json pool;
  pool["species"] = scenario.species_pool.species_names;
  pool["Q"] = matrix_to_json(scenario.species_pool.q);
  truth["species_pool"] = std::move(pool);
  truth["noise_std"] = vector_to_json(scenario.noise_std);
  truth["flip_probability"] = scenario.flip_probability;
  truth["seed"] = scenario.seed;
  json classes = json::array();
  for (auto c : scenario.test_team_class) classes.push_back(to_string(c));
  truth["test_team_class"] = std::move(classes);
  truth["name"] = scenario.name;
  j["truth"] = std::move(truth);
  return j;
}

GroundTruthScenario scenario_from_json(const json& j) {
  GroundTruthScenario sc;
  sc.demos = demonstration_set_from_json(j);
  for (const auto& t : j.at("test_teams")) sc.test_teams.push_back(team_from_json(t));
  const auto& truth = j.at("truth");
  sc.true_strategies = library_from_json(truth.at("strategies"));
  sc.species_pool.species_names =
      truth.at("species_pool").at("species").get<std::vector<std::string>>();
  sc.species_pool.q = matrix_from_json(truth.at("species_pool").at("Q"));
  sc.noise_std = vector_from_json(truth.at("noise_std"));
  sc.flip_probability = truth.at("flip_probability").get<double>();
  sc.seed = truth.at("seed").get<std::uint64_t>();
  sc.name = truth.value("name", std::string{});
  for (const auto& c : truth.at("test_team_class")) {
    const std::string s = c.get<std::string>();
    if (s == "under")
      sc.test_team_class.push_back(ResourceClass::under_resourced);
    else if (s == "over")
      sc.test_team_class.push_back(ResourceClass::over_resourced);
    else
      sc.test_team_class.push_back(ResourceClass::sufficiently_resourced);
  }
  return sc;
}

json to_json(const StatTestResult& result, const std::vector<std::string>& group_names) {
  json j;
  j["h"] = result.h_statistic;
  j["p"] = result.p_value;
  json pairs = json::array();
  for (const auto& p : result.pairwise) {
    json pj;
    pj["a"] = group_names.at(p.group_a);
    pj["b"] = group_names.at(p.group_b);
    pj["z"] = p.z;
    pj["raw_p"] = p.raw_p;
    pj["adjusted_p"] = p.adjusted_p;
    pairs.push_back(std::move(pj));
  }
  j["pairwise"] = std::move(pairs);
  return j;
}

std::string dendrogram_csv(const std::vector<MergeStep>& steps) {
  std::ostringstream out;
  out << "idx_a,idx_b,distance,new_size\n";
  for (const auto& s : steps)
    out << s.a << ',' << s.b << ',' << fmt(s.distance) << ',' << s.new_size << '\n';
  return out.str();
}

std::string trace_csv(const std::vector<NodeTraceRow>& rows) {
  std::ostringstream out;
  out << "node,depth,bound,incumbent,seconds\n";
  for (const auto& r : rows)
    out << r.node << ',' << r.depth << ',' << fmt(r.bound) << ',' << fmt(r.incumbent) << ','
        << fmt(r.seconds) << '\n';
  return out.str();
}

std::string results_csv(const std::vector<EvaluationRecord>& rows, bool zero_wall) {
  std::ostringstream out;
  out << "method,team_id,task_id,e_min,e_exact,utilization,success,wall_time_s,status\n";
  for (const auto& r : rows)
    out << r.method << ',' << r.team_id << ',' << r.task << ',' << fmt(r.e_min) << ','
        << fmt(r.e_exact) << ',' << fmt(r.utilization) << ',' << (r.success ? 1 : 0) << ','
        << fmt(zero_wall ? 0.0 : r.wall_time) << ',' << r.status << '\n';
  return out.str();
}

std::vector<EvaluationRecord> results_from_csv(const std::string& text) {
  std::vector<EvaluationRecord> rows;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValueError("empty results CSV");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    EvaluationRecord r;
    auto next = [&] {
      if (!std::getline(ls, field, ',')) throw ValueError("short CSV row: " + line);
      return field;
    };
    r.method = next();
    r.team_id = std::stoi(next());
    r.task = std::stoi(next());
    r.e_min = std::stod(next());
    r.e_exact = std::stod(next());
    r.utilization = std::stod(next());
    r.success = std::stoi(next()) != 0;
    r.wall_time = std::stod(next());
    r.status = next();
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValueError("cannot open for writing: " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValueError("cannot open: " + path.string());
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValueError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace cofo::io
