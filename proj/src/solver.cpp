#include "cofo/solver.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace cofo {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Candidate {
  double objective = kInf;
  long robots = 0;
  std::vector<int> z;  // chosen strategy per task, library order
  Eigen::MatrixXi x;

  bool valid() const { return objective < kInf; }
};

// Total order for incumbent updates and the cross-combination reduction:
// objective, then total robots, then lexicographic (z, x). Makes the final
// answer independent of combination scheduling.
bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid()) return a.valid();
  if (!a.valid()) return false;
  if (a.objective != b.objective) return a.objective < b.objective;
  if (a.robots != b.robots) return a.robots < b.robots;
  if (a.z != b.z) return a.z < b.z;
  for (long m = 0; m < a.x.rows(); ++m)
    for (long s = 0; s < a.x.cols(); ++s)
      if (a.x(m, s) != b.x(m, s)) return a.x(m, s) < b.x(m, s);
  return false;
}

void atomic_min(std::atomic<double>& target, double value) {
  double cur = target.load();
  while (value < cur && !target.compare_exchange_weak(cur, value)) {
  }
}

struct Problem {
  Eigen::MatrixXd q;       // S x U
  Eigen::VectorXi caps;    // robots available per species
  double lipschitz = 0.0;  // 2 * lambda_max(Q Q^T)
  double feas_tol = 1e-6;
  Eigen::VectorXd species_norm2;
};

Problem build_problem(const TeamSpec& team, const SolverConfig& cfg) {
  Problem p;
  p.q = team.traits.q;
  p.caps = team.counts;
  p.feas_tol = cfg.feasibility_tolerance;
  const long s = p.q.rows(), u = p.q.cols();
  Eigen::MatrixXd gram = (s <= u) ? Eigen::MatrixXd(p.q * p.q.transpose())
                                  : Eigen::MatrixXd(p.q.transpose() * p.q);
  if (gram.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    p.lipschitz = 2.0 * std::max(0.0, es.eigenvalues().maxCoeff());
  }
  p.species_norm2 = p.q.rowwise().squaredNorm();
  return p;
}

// Projection of one species column onto { lo <= x <= hi, sum(x) <= cap }.
// Requires sum(lo) <= cap, checked by the caller on integer bounds.
void project_species_col(Eigen::MatrixXd& v, long s, const Eigen::MatrixXd& lo,
                         const Eigen::MatrixXd& hi, double cap) {
  const long m_count = v.rows();
  Eigen::VectorXd orig = v.col(s);
  double sum = 0.0;
  for (long m = 0; m < m_count; ++m) {
    v(m, s) = std::clamp(orig[m], lo(m, s), hi(m, s));
    sum += v(m, s);
  }
  if (sum <= cap + 1e-12) return;
  double a = 0.0, b = 0.0;
  for (long m = 0; m < m_count; ++m) b = std::max(b, orig[m] - lo(m, s));
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (a + b);
    double ssum = 0.0;
    for (long m = 0; m < m_count; ++m)
      ssum += std::clamp(orig[m] - mid, lo(m, s), hi(m, s));
    (ssum > cap ? a : b) = mid;
  }
  for (long m = 0; m < m_count; ++m) v(m, s) = std::clamp(orig[m] - b, lo(m, s), hi(m, s));
}

// Exact minimum of <g, y> over the node polytope (separable per species:
// box plus capacity, a fractional knapsack).
double linear_min(const Eigen::MatrixXd& g, const Eigen::MatrixXd& lo,
                  const Eigen::MatrixXd& hi, const Eigen::VectorXi& caps) {
  const long m_count = g.rows(), s_count = g.cols();
  double total = 0.0;
  std::vector<std::pair<double, long>> neg;
  for (long s = 0; s < s_count; ++s) {
    double base = 0.0, used = 0.0;
    neg.clear();
    for (long m = 0; m < m_count; ++m) {
      base += g(m, s) * lo(m, s);
      used += lo(m, s);
      if (g(m, s) < 0.0) neg.emplace_back(g(m, s), m);
    }
    double room = static_cast<double>(caps[s]) - used;
    std::sort(neg.begin(), neg.end());
    for (const auto& [gv, m] : neg) {
      if (room <= 0.0) break;
      const double d = std::min(hi(m, s) - lo(m, s), room);
      base += gv * d;
      room -= d;
    }
    total += base;
  }
  return total;
}

struct Relaxation {
  Eigen::MatrixXd x;       // feasible approximate minimizer
  double value = 0.0;      // objective at x
  double bound = 0.0;      // certified lower bound over the node polytope
};

// Accelerated projected gradient on the continuous relaxation, optionally with
// an extra linear term (used by the dual bound). The returned bound comes from
// the gradient inequality at a feasible point, so it is valid regardless of
// how far the iteration converged.
Relaxation relax_solve(const Problem& prob, const Eigen::MatrixXd& reqs,
                       const Eigen::MatrixXd& lo, const Eigen::MatrixXd& hi,
                       const Eigen::MatrixXd* linear = nullptr, int max_iter = 800) {
  const long s_count = prob.q.rows();
  auto fval = [&](const Eigen::MatrixXd& x) {
    double v = (x * prob.q - reqs).squaredNorm();
    if (linear) v += (linear->array() * x.array()).sum();
    return v;
  };
  auto project = [&](Eigen::MatrixXd v) {
    for (long s = 0; s < s_count; ++s)
      project_species_col(v, s, lo, hi, static_cast<double>(prob.caps[s]));
    return v;
  };

  Relaxation out;
  if (prob.lipschitz <= 0.0) {  // zero capability matrix: objective is linear
    out.x = lo;
    if (linear) {
      const double lin = linear_min(*linear, lo, hi, prob.caps);
      out.value = fval(out.x);
      out.bound = (reqs).squaredNorm() + lin;
      return out;
    }
    out.value = fval(out.x);
    out.bound = out.value;
    return out;
  }

  Eigen::MatrixXd x = project(0.5 * (lo + hi));
  double fx = fval(x);
  Eigen::MatrixXd best_x = x;
  double best_f = fx;
  double best_bound = -kInf;
  const double step = 1.0 / prob.lipschitz;

  Eigen::MatrixXd z = x, xprev = x;
  double t = 1.0, f_prev = fx;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd grad = 2.0 * ((z * prob.q - reqs) * prob.q.transpose());
    if (linear) grad += *linear;
    Eigen::MatrixXd xn = project(z - step * grad);
    const double fn = fval(xn);
    if (fn < best_f) {
      best_f = fn;
      best_x = xn;
    }
    if (it % 4 == 0 || it == max_iter - 1) {
      Eigen::MatrixXd gx = 2.0 * ((xn * prob.q - reqs) * prob.q.transpose());
      if (linear) gx += *linear;
      const double lin = linear_min(gx, lo, hi, prob.caps) - (gx.array() * xn.array()).sum();
      best_bound = std::max(best_bound, fn + lin);
      if (best_f - best_bound <= 1e-8 * std::max(1.0, std::abs(best_f))) break;
    }
    if (fn > f_prev) {  // restart momentum on non-descent
      t = 1.0;
      z = xn;
    } else {
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      z = xn + ((t - 1.0) / tn) * (xn - xprev);
      t = tn;
    }
    xprev = xn;
    f_prev = fn;
  }
  out.x = best_x;
  out.value = best_f;
  out.bound = std::min(best_bound, best_f);
  if (!linear) out.bound = std::max(0.0, out.bound);
  return out;
}

// Lagrangian dual bound for the minimum-requirement constraints: a few Polyak
// subgradient steps on the multipliers, each giving a certified bound through
// the linearized inner problem. Multipliers warm-start from the parent node.
double dominance_dual_bound(const Problem& prob, const Eigen::MatrixXd& reqs,
                            const Eigen::MatrixXd& lo, const Eigen::MatrixXd& hi,
                            Eigen::MatrixXd& lambda, double base_bound,
                            const Eigen::MatrixXd& base_x, double upper) {
  double best = base_bound;
  if (!std::isfinite(upper)) upper = base_bound + std::max(1.0, std::abs(base_bound));
  Eigen::MatrixXd mult = lambda;  // M x U, >= 0
  if (mult.cwiseAbs().sum() == 0.0) {
    const Eigen::MatrixXd violation = reqs - base_x * prob.q;  // subgradient at zero
    const double n2 = violation.squaredNorm();
    if (n2 <= 1e-18 || (violation.array() <= 1e-12).all()) return best;
    mult = ((std::max(0.0, upper - base_bound) / n2) * violation).cwiseMax(0.0);
    if (mult.cwiseAbs().sum() == 0.0) return best;
  }
  for (int it = 0; it < 5; ++it) {
    const Eigen::MatrixXd linear = -(mult * prob.q.transpose());  // M x S
    Relaxation inner = relax_solve(prob, reqs, lo, hi, &linear, 300);
    const double dual_bound = inner.bound + (mult.array() * reqs.array()).sum();
    if (dual_bound > best) {
      best = dual_bound;
      lambda = mult;
    }
    // subgradient: per-task requirement shortfall at the inner minimizer
    const Eigen::MatrixXd violation = reqs - inner.x * prob.q;
    const double norm2 = violation.squaredNorm();
    if (norm2 <= 1e-18) break;
    const double step = std::max(0.0, upper - dual_bound) / norm2;
    if (step <= 0.0) break;
    mult = (mult + step * violation).cwiseMax(0.0);
  }
  return best;
}

bool dominates(const std::vector<Eigen::VectorXd>& y, const Eigen::MatrixXd& reqs, double tol) {
  for (long m = 0; m < reqs.rows(); ++m)
    if ((reqs.row(m).transpose() - y[m]).maxCoeff() > tol) return false;
  return true;
}

std::vector<Eigen::VectorXd> aggregations_of(const Problem& prob, const Eigen::MatrixXi& x) {
  std::vector<Eigen::VectorXd> y;
  y.reserve(x.rows());
  for (long m = 0; m < x.rows(); ++m)
    y.push_back(prob.q.transpose() * x.row(m).transpose().cast<double>());
  return y;
}

// Greedy increments until every task dominates its requirement, or no species
// with positive coverage of a remaining shortfall has headroom left.
bool repair_up(const Problem& prob, const Eigen::MatrixXd& reqs, const Eigen::MatrixXi& hi,
               Eigen::MatrixXi& x, std::vector<Eigen::VectorXd>& y) {
  const long m_count = reqs.rows(), s_count = prob.q.rows();
  Eigen::VectorXi used = x.colwise().sum();
  long guard = 4 * (prob.caps.sum() + 1) * m_count + 16;
  while (guard-- > 0) {
    long worst = -1;
    double worst_val = prob.feas_tol;
    for (long m = 0; m < m_count; ++m) {
      const double v = (reqs.row(m).transpose() - y[m]).maxCoeff();
      if (v > worst_val) {
        worst_val = v;
        worst = m;
      }
    }
    if (worst < 0) return true;
    Eigen::VectorXd d = (reqs.row(worst).transpose() - y[worst]).cwiseMax(0.0);
    long pick = -1;
    double pick_score = 0.0;
    for (long s = 0; s < s_count; ++s) {
      if (x(worst, s) >= hi(worst, s) || used[s] >= prob.caps[s]) continue;
      const double score = prob.q.row(s) * d;
      if (score > pick_score) {
        pick_score = score;
        pick = s;
      }
    }
    if (pick < 0) return false;
    x(worst, pick) += 1;
    used[pick] += 1;
    y[worst] += prob.q.row(pick).transpose();
  }
  return false;
}

// Deterministic local reduction: drop robots whose removal does not increase
// the objective (ties removed too, favoring small coalitions).
void shrink(const Problem& prob, const Eigen::MatrixXd& reqs, const Eigen::MatrixXi& lo,
            Eigen::MatrixXi& x, std::vector<Eigen::VectorXd>& y, bool enforce_min) {
  const long m_count = reqs.rows(), s_count = prob.q.rows();
  bool changed = true;
  while (changed) {
    changed = false;
    for (long m = 0; m < m_count; ++m)
      for (long s = 0; s < s_count; ++s)
        while (x(m, s) > lo(m, s)) {
          const Eigen::VectorXd resid = reqs.row(m).transpose() - y[m];
          const double delta = 2.0 * prob.q.row(s) * resid + prob.species_norm2[s];
          if (delta > 0.0) break;
          if (enforce_min &&
              (reqs.row(m).transpose() - (y[m] - prob.q.row(s).transpose())).maxCoeff() >
                  prob.feas_tol)
            break;
          x(m, s) -= 1;
          y[m] -= prob.q.row(s).transpose();
          changed = true;
        }
  }
}

std::optional<Candidate> make_candidate(const Problem& prob, const Eigen::MatrixXd& reqs,
                                        const std::vector<int>& zidx, const Eigen::MatrixXi& lo,
                                        const Eigen::MatrixXi& hi, const Eigen::MatrixXd& xrel,
                                        bool enforce_min, bool round_up) {
  const long m_count = reqs.rows(), s_count = prob.q.rows();
  Eigen::MatrixXi x(m_count, s_count);
  for (long m = 0; m < m_count; ++m)
    for (long s = 0; s < s_count; ++s) {
      int v = round_up ? static_cast<int>(std::ceil(xrel(m, s) - 1e-9))
                       : static_cast<int>(std::llround(xrel(m, s)));
      if (prob.species_norm2[s] == 0.0) v = lo(m, s);
      x(m, s) = std::clamp(v, lo(m, s), hi(m, s));
    }
  for (long s = 0; s < s_count; ++s) {
    int used = x.col(s).sum();
    while (used > prob.caps[s]) {
      long pick = -1;
      double over = -kInf;
      for (long m = 0; m < m_count; ++m) {
        if (x(m, s) <= lo(m, s)) continue;
        const double o = x(m, s) - xrel(m, s);
        if (o > over) {
          over = o;
          pick = m;
        }
      }
      if (pick < 0) return std::nullopt;
      x(pick, s) -= 1;
      --used;
    }
  }
  auto y = aggregations_of(prob, x);
  if (enforce_min && !dominates(y, reqs, prob.feas_tol) && !repair_up(prob, reqs, hi, x, y))
    return std::nullopt;
  shrink(prob, reqs, lo, x, y, enforce_min);
  if (enforce_min && !dominates(y, reqs, prob.feas_tol)) return std::nullopt;

  Candidate c;
  c.x = x;
  c.z = zidx;
  c.robots = x.sum();
  c.objective = 0.0;
  for (long m = 0; m < m_count; ++m)
    c.objective += (reqs.row(m).transpose() - y[m]).squaredNorm();
  return c;
}

struct NodeEntry {
  double bound = 0.0;
  long long id = 0;
  int depth = 0;
  Eigen::MatrixXi lo, hi;
  Eigen::MatrixXd xrel;
};

struct NodeOrder {
  bool operator()(const NodeEntry& a, const NodeEntry& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

struct SearchLimits {
  Clock::time_point t0;
  Clock::time_point deadline;
  long long node_limit = 0;  // 0 = unlimited
  std::atomic<long long>* nodes = nullptr;
  std::vector<NodeTraceRow>* trace = nullptr;
};

struct ComboOutcome {
  Candidate best;
  bool exhausted = true;
};

double prune_margin(double thr) {
  return thr == kInf ? 0.0 : 1e-9 * std::max(1.0, std::abs(thr));
}

// Exact branch-and-bound for one strategy combination: integer assignment under
// per-species capacity, optionally constrained to dominate the requirements.
ComboOutcome solve_combo(const Problem& prob, const Eigen::MatrixXd& reqs,
                         const std::vector<int>& zidx, bool enforce_min,
                         std::atomic<double>& shared_best, const SearchLimits& lim) {
  const long m_count = reqs.rows(), s_count = prob.q.rows();
  ComboOutcome out;

  if (enforce_min) {
    const Eigen::VectorXd capagg = prob.q.transpose() * prob.caps.cast<double>();
    const Eigen::VectorXd need = reqs.colwise().sum().transpose();
    if ((need - capagg).maxCoeff() > prob.feas_tol) return out;  // capacity cannot dominate
  }

  Candidate local;
  auto thr = [&] {
    return std::min(local.valid() ? local.objective : kInf, shared_best.load());
  };

  std::priority_queue<NodeEntry, std::vector<NodeEntry>, NodeOrder> open;
  bool truncated = false;

  auto eval_node = [&](Eigen::MatrixXi lo, Eigen::MatrixXi hi, int depth) {
    for (long s = 0; s < s_count; ++s)
      if (lo.col(s).sum() > prob.caps[s]) return;
    if (enforce_min) {
      for (long m = 0; m < m_count; ++m) {
        const Eigen::VectorXd maxagg = prob.q.transpose() * hi.row(m).transpose().cast<double>();
        if ((reqs.row(m).transpose() - maxagg).maxCoeff() > prob.feas_tol) return;
      }
    }
    if (Clock::now() > lim.deadline ||
        (lim.node_limit > 0 && lim.nodes->load() >= lim.node_limit)) {
      truncated = true;
      return;
    }
    const long long id = lim.nodes->fetch_add(1);
    Relaxation rel = relax_solve(prob, reqs, lo.cast<double>(), hi.cast<double>());
    double node_best = kInf;
    auto offer = [&](std::optional<Candidate> cand) {
      if (!cand) return;
      node_best = std::min(node_best, cand->objective);
      if (better(*cand, local)) {
        local = *cand;
        atomic_min(shared_best, local.objective);
      }
    };
    offer(make_candidate(prob, reqs, zidx, lo, hi, rel.x, enforce_min, false));
    if (enforce_min) offer(make_candidate(prob, reqs, zidx, lo, hi, rel.x, enforce_min, true));
    if (lim.trace)
      lim.trace->push_back({id, depth, rel.bound, thr(), seconds_since(lim.t0)});

    // gap closed at this node: its own candidate attains the bound
    if (node_best <= rel.bound + 1e-12 * std::max(1.0, rel.bound)) return;

    bool integral = true;
    for (long m = 0; m < m_count && integral; ++m)
      for (long s = 0; s < s_count; ++s)
        if (std::abs(rel.x(m, s) - std::llround(rel.x(m, s))) > 1e-9) {
          integral = false;
          break;
        }
    if (integral) {
      Eigen::MatrixXi xr(m_count, s_count);
      for (long m = 0; m < m_count; ++m)
        for (long s = 0; s < s_count; ++s)
          xr(m, s) = static_cast<int>(std::llround(rel.x(m, s)));
      if (!enforce_min || dominates(aggregations_of(prob, xr), reqs, prob.feas_tol))
        return;  // node solved exactly by its relaxation
    }
    if (rel.bound > thr() + prune_margin(thr())) return;
    // equal-objective subtrees cannot beat the combo-local incumbent; pruning
    // them against the local bound keeps the search deterministic
    if (local.valid() && rel.bound >= local.objective) return;
    open.push({rel.bound, id, depth, std::move(lo), std::move(hi), std::move(rel.x)});
  };

  eval_node(Eigen::MatrixXi::Zero(m_count, s_count),
            prob.caps.transpose().replicate(m_count, 1), 0);

  while (!open.empty() && !truncated) {
    if (Clock::now() > lim.deadline) {
      truncated = true;
      break;
    }
    NodeEntry node = open.top();
    open.pop();
    if (node.bound > thr() + prune_margin(thr())) continue;
    if (local.valid() && node.bound >= local.objective) continue;

    // branch on the most fractional variable; when the relaxation is integral
    // (dominance not yet met), branch toward covering the worst shortfall
    long bm = -1, bs = -1;
    double best_dist = 1e-9;
    for (long m = 0; m < m_count; ++m)
      for (long s = 0; s < s_count; ++s) {
        if (node.lo(m, s) >= node.hi(m, s)) continue;
        const double frac = node.xrel(m, s) - std::floor(node.xrel(m, s));
        const double dist = std::min(frac, 1.0 - frac);
        if (dist > best_dist) {
          best_dist = dist;
          bm = m;
          bs = s;
        }
      }
    if (bm < 0) {
      Eigen::MatrixXi xr(m_count, s_count);
      for (long m = 0; m < m_count; ++m)
        for (long s = 0; s < s_count; ++s)
          xr(m, s) = static_cast<int>(std::llround(node.xrel(m, s)));
      auto y = aggregations_of(prob, xr);
      long worst = -1;
      double worst_val = prob.feas_tol;
      for (long m = 0; m < m_count; ++m) {
        const double v = (reqs.row(m).transpose() - y[m]).maxCoeff();
        if (v > worst_val) {
          worst_val = v;
          worst = m;
        }
      }
      if (worst >= 0) {
        const Eigen::VectorXd d = (reqs.row(worst).transpose() - y[worst]).cwiseMax(0.0);
        double score_best = 0.0;
        for (long s = 0; s < s_count; ++s) {
          if (node.lo(worst, s) >= node.hi(worst, s)) continue;
          const double score = prob.q.row(s) * d;
          if (score > score_best) {
            score_best = score;
            bm = worst;
            bs = s;
          }
        }
      }
      if (bm < 0) {  // any splittable variable at all
        for (long m = 0; m < m_count && bm < 0; ++m)
          for (long s = 0; s < s_count; ++s)
            if (node.lo(m, s) < node.hi(m, s)) {
              bm = m;
              bs = s;
              break;
            }
      }
      if (bm < 0) continue;  // single point, already evaluated
    }

    int v = static_cast<int>(std::floor(node.xrel(bm, bs)));
    v = std::clamp(v, node.lo(bm, bs), node.hi(bm, bs) - 1);
    {
      Eigen::MatrixXi hi2 = node.hi;
      hi2(bm, bs) = v;
      eval_node(node.lo, std::move(hi2), node.depth + 1);
    }
    {
      Eigen::MatrixXi lo2 = node.lo;
      lo2(bm, bs) = v + 1;
      eval_node(std::move(lo2), node.hi, node.depth + 1);
    }
  }

  out.exhausted = !truncated;
  out.best = local;
  return out;
}

struct PhaseResult {
  Candidate best;
  bool complete = true;
};

Candidate zero_candidate(const StrategyLibrary& lib, long s_count) {
  Candidate c;
  const long m_count = lib.tasks();
  c.x = Eigen::MatrixXi::Zero(m_count, s_count);
  c.z.resize(m_count);
  c.robots = 0;
  c.objective = 0.0;
  for (long m = 0; m < m_count; ++m) {
    int pick = 0;
    double best = lib.per_task[m][0].squaredNorm();
    for (long r = 1; r < lib.strategy_count(m); ++r) {
      const double v = lib.per_task[m][r].squaredNorm();
      if (v < best) {
        best = v;
        pick = static_cast<int>(r);
      }
    }
    c.z[m] = pick;
    c.objective += best;
  }
  return c;
}

// Strategy combinations are enumerated lazily in nondecreasing order of the
// sum of per-task certified root bounds; enumeration stops once that sum
// exceeds the incumbent. Combinations in one chunk may be solved in parallel;
// the reduction applies the exact tie-break order.
PhaseResult run_phase(const Problem& prob, const StrategyLibrary& lib, bool enforce_min,
                      const SolverConfig& cfg, const SearchLimits& lim) {
  const long m_count = lib.tasks();
  const long s_count = prob.q.rows();
  const Eigen::VectorXd capagg = prob.q.transpose() * prob.caps.cast<double>();

  std::vector<std::vector<int>> order(m_count);
  std::vector<std::vector<double>> root_bound(m_count);
  std::vector<std::vector<char>> feasible(m_count);
  const Eigen::MatrixXd lo1 = Eigen::MatrixXd::Zero(1, s_count);
  const Eigen::MatrixXd hi1 = prob.caps.cast<double>().transpose();
  for (long m = 0; m < m_count; ++m) {
    std::vector<std::pair<double, int>> items;
    for (long r = 0; r < lib.strategy_count(m); ++r) {
      Eigen::MatrixXd req1 = lib.per_task[m][r].transpose();
      Relaxation rel = relax_solve(prob, req1, lo1, hi1);
      items.emplace_back(std::max(0.0, rel.bound), static_cast<int>(r));
    }
    std::sort(items.begin(), items.end());
    for (const auto& [b, r] : items) {
      order[m].push_back(r);
      root_bound[m].push_back(b);
      feasible[m].push_back(
          !enforce_min ||
          (lib.per_task[m][r].transpose() - capagg.transpose()).maxCoeff() <= prob.feas_tol);
    }
  }

  Candidate best;
  if (!enforce_min) best = zero_candidate(lib, s_count);
  std::atomic<double> shared_best{best.valid() ? best.objective : kInf};

  const bool parallel = cfg.parallel_strategy_combos && lim.trace == nullptr;
  const int threads = parallel ? (cfg.threads > 0 ? cfg.threads : omp_get_max_threads()) : 1;
  const long chunk_cap = parallel ? 4L * std::max(1, threads) : 1L;

  using Idx = std::vector<int>;
  auto sum_bound = [&](const Idx& idx) {
    double b = 0.0;
    for (long m = 0; m < m_count; ++m) b += root_bound[m][idx[m]];
    return b;
  };
  std::priority_queue<std::pair<double, Idx>, std::vector<std::pair<double, Idx>>,
                      std::greater<>> heap;
  std::set<Idx> seen;
  Idx start(m_count, 0);
  heap.emplace(sum_bound(start), start);
  seen.insert(start);

  bool complete = true;
  while (!heap.empty()) {
    if (Clock::now() > lim.deadline) {
      complete = false;
      break;
    }
    struct Job {
      Idx idx;
      std::vector<int> zidx;
      bool skip = false;
    };
    std::vector<Job> chunk;
    while (!heap.empty() && static_cast<long>(chunk.size()) < chunk_cap) {
      const double thr = shared_best.load();
      if (heap.top().first > thr + prune_margin(thr)) {
        heap = {};  // everything left is provably no better than the incumbent
        break;
      }
      auto [b, idx] = heap.top();
      heap.pop();
      for (long m = 0; m < m_count; ++m) {
        if (idx[m] + 1 >= lib.strategy_count(m)) continue;
        Idx nxt = idx;
        nxt[m] += 1;
        if (seen.insert(nxt).second) heap.emplace(sum_bound(nxt), nxt);
      }
      Job job;
      job.idx = idx;
      job.zidx.resize(m_count);
      for (long m = 0; m < m_count; ++m) {
        job.zidx[m] = order[m][idx[m]];
        if (!feasible[m][idx[m]]) job.skip = true;  // dominance impossible even alone
      }
      chunk.push_back(std::move(job));
    }
    if (chunk.empty()) break;

    std::vector<ComboOutcome> outs(chunk.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (parallel && chunk.size() > 1)
    for (long i = 0; i < static_cast<long>(chunk.size()); ++i) {
      if (chunk[i].skip) continue;
      Eigen::MatrixXd reqs(m_count, lib.trait_count());
      for (long m = 0; m < m_count; ++m)
        reqs.row(m) = lib.per_task[m][chunk[i].zidx[m]].transpose();
      outs[i] = solve_combo(prob, reqs, chunk[i].zidx, enforce_min, shared_best, lim);
    }
    for (long i = 0; i < static_cast<long>(chunk.size()); ++i) {
      if (chunk[i].skip) continue;
      if (!outs[i].exhausted) complete = false;
      if (outs[i].best.valid() && better(outs[i].best, best)) {
        best = outs[i].best;
        atomic_min(shared_best, best.objective);
      }
    }
  }
  return {std::move(best), complete};
}

AllocationResult assemble(const StrategyLibrary& lib, const Problem& prob, const Candidate& win,
                          SolveStatus status, double wall, long long nodes) {
  AllocationResult res;
  res.assignment.rows = win.x;
  std::vector<long> sizes;
  for (long m = 0; m < lib.tasks(); ++m) sizes.push_back(lib.strategy_count(m));
  res.selectors = StrategySelector::from_indices(win.z, sizes);
  res.per_task_error.resize(lib.tasks());
  res.objective = 0.0;
  for (long m = 0; m < lib.tasks(); ++m) {
    const Eigen::VectorXd agg = prob.q.transpose() * win.x.row(m).transpose().cast<double>();
    res.per_task_error[m] = (lib.per_task[m][win.z[m]] - agg).squaredNorm();
    res.objective += res.per_task_error[m];
  }
  res.status = status;
  res.wall_time = wall;
  res.nodes_explored = nodes;
  return res;
}

AllocationResult solve_impl(const StrategyLibrary& lib, const TeamSpec& team,
                            const SolverConfig& cfg, bool try_min_requirements) {
  validate(lib);
  validate(team);
  if (lib.trait_count() != team.trait_count())
    throw DimensionError("strategy trait dimension vs team", team.trait_count(),
                         lib.trait_count());
  if (cfg.time_limit <= 0.0) throw ValueError("time limit must be positive");

  const auto t0 = Clock::now();
  std::atomic<long long> nodes{0};
  SearchLimits lim;
  lim.t0 = t0;
  lim.deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                          std::chrono::duration<double>(cfg.time_limit));
  lim.node_limit = cfg.node_limit.value_or(0);
  lim.nodes = &nodes;
  lim.trace = cfg.trace;

  const Problem prob = build_problem(team, cfg);

  if (try_min_requirements) {
    PhaseResult p1 = run_phase(prob, lib, true, cfg, lim);
    if (p1.best.valid()) {
      const SolveStatus st =
          p1.complete ? SolveStatus::optimal : SolveStatus::time_limit_incumbent;
      return assemble(lib, prob, p1.best, st, seconds_since(t0), nodes.load());
    }
    // Under-resourced (or unresolved in time): drop the minimum-requirement
    // constraints and minimize mismatch only.
  }
  PhaseResult p2 = run_phase(prob, lib, false, cfg, lim);
  const SolveStatus st =
      p2.complete ? SolveStatus::relaxed_optimal : SolveStatus::relaxed_incumbent;
  return assemble(lib, prob, p2.best, st, seconds_since(t0), nodes.load());
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::time_limit_incumbent: return "time_limit_incumbent";
    case SolveStatus::relaxed_optimal: return "relaxed_optimal";
    case SolveStatus::relaxed_incumbent: return "relaxed_incumbent";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "infeasible";
}

StrategySelector StrategySelector::from_indices(const std::vector<int>& chosen,
                                                const std::vector<long>& sizes) {
  if (chosen.size() != sizes.size())
    throw DimensionError("selector task count", static_cast<long>(sizes.size()),
                         static_cast<long>(chosen.size()));
  StrategySelector sel;
  sel.per_task.resize(chosen.size());
  for (std::size_t m = 0; m < chosen.size(); ++m) {
    if (chosen[m] < 0 || chosen[m] >= sizes[m])
      throw ValueError("selector index out of range for task " + std::to_string(m));
    sel.per_task[m].assign(sizes[m], 0);
    sel.per_task[m][chosen[m]] = 1;
  }
  return sel;
}

int StrategySelector::chosen(long m) const {
  const auto& z = per_task.at(m);
  for (std::size_t r = 0; r < z.size(); ++r)
    if (z[r] == 1) return static_cast<int>(r);
  throw ValueError("selector for task " + std::to_string(m) + " has no selected strategy");
}

double trait_mismatch(const TraitVector& strategy, const SpeciesTraitMatrix& team,
                      const Eigen::VectorXi& task_row) {
  if (strategy.size() != team.trait_count())
    throw DimensionError("strategy trait dimension", team.trait_count(), strategy.size());
  const TraitVector agg = aggregate_traits(team, task_row);
  return (strategy - agg).squaredNorm();
}

std::vector<double> net_error(const StrategySelector& selectors,
                              const std::vector<std::vector<double>>& mismatches) {
  if (selectors.per_task.size() != mismatches.size())
    throw DimensionError("mismatch task count", selectors.tasks(),
                         static_cast<long>(mismatches.size()));
  std::vector<double> out(mismatches.size());
  for (std::size_t m = 0; m < mismatches.size(); ++m) {
    const auto& z = selectors.per_task[m];
    if (z.size() != mismatches[m].size())
      throw DimensionError("mismatch vector length for task " + std::to_string(m),
                           static_cast<long>(z.size()),
                           static_cast<long>(mismatches[m].size()));
    double e = 0.0;
    for (std::size_t r = 0; r < z.size(); ++r) e += z[r] * mismatches[m][r];
    out[m] = e;
  }
  return out;
}

AllocationResult solve(const StrategyLibrary& library, const TeamSpec& team,
                       const SolverConfig& config) {
  return solve_impl(library, team, config, true);
}

AllocationResult solve_fixed_strategy(const std::vector<TraitVector>& requirements,
                                      const TeamSpec& team, const SolverConfig& config,
                                      bool enforce_min) {
  StrategyLibrary lib;
  lib.per_task.reserve(requirements.size());
  for (const auto& r : requirements) {
    lib.per_task.push_back({r});
    lib.cluster_sizes.push_back({1});
  }
  return solve_impl(lib, team, config, enforce_min);
}

}  // namespace cofo
