#include "heatclf/dirichlet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "heatclf/error.hpp"
#include "heatclf/parallel.hpp"

namespace heatclf {

DirichletProblem::DirichletProblem(const Graph& graph,
                                   std::span<const BoundaryValue> boundary)
    : graph_(&graph), is_boundary_(graph.node_count(), 0) {
  const std::size_t n = graph.node_count();
  if (boundary.empty()) fail("Dirichlet problem needs at least one boundary node");
  std::vector<BoundaryValue> sorted(boundary.begin(), boundary.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.node < b.node; });
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto [node, temp] = sorted[k];
    if (node >= n) {
      fail("boundary node " + std::to_string(node) + " out of range for " +
           std::to_string(n) + " nodes");
    }
    if (k > 0 && sorted[k - 1].node == node) {
      fail("boundary node " + std::to_string(node) + " given more than once");
    }
    if (!std::isfinite(temp)) {
      fail("boundary node " + std::to_string(node) + " has non-finite temperature");
    }
    is_boundary_[node] = 1;
    boundary_.push_back(node);
    boundary_temps_.push_back(temp);
  }
  // A boundary covering every node is accepted; the solution is then the
  // boundary data itself.
  interior_.reserve(n - boundary_.size());
  for (std::size_t u = 0; u < n; ++u) {
    if (!is_boundary_[u]) interior_.push_back(static_cast<NodeId>(u));
  }
}

std::vector<double> DirichletProblem::initial_field(double fill) const {
  std::vector<double> t(node_count(), fill);
  for (std::size_t k = 0; k < boundary_.size(); ++k) {
    t[boundary_[k]] = boundary_temps_[k];
  }
  return t;
}

void SolverOptions::validate() const {
  if (max_iterations < 1) fail("max_iterations must be at least 1");
  if (!(tolerance >= 0.0)) fail("tolerance must be non-negative");
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

void require_boundary_per_component(const DirichletProblem& problem) {
  const auto comps = connected_components(problem.graph());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& nodes = comps[c];
    const bool anchored = std::any_of(nodes.begin(), nodes.end(), [&](NodeId u) {
      return problem.is_boundary(u);
    });
    if (!anchored) {
      fail("connected component " + std::to_string(c) + " (" +
           std::to_string(nodes.size()) + " nodes, first node " +
           std::to_string(nodes.front()) +
           ") has no boundary node; its temperatures are undetermined");
    }
  }
}

namespace {

double sweep_range(const Graph& g, std::span<const NodeId> rows,
                   std::span<const double> cur, std::span<double> next) {
  const auto offsets = g.offsets();
  const auto cols = g.columns();
  const auto vals = g.values();
  const auto deg = g.degrees();
  double change = 0.0;
  for (const NodeId i : rows) {
    double acc = 0.0;
    for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) {
      acc += vals[e] * cur[cols[e]];
    }
    const double value = acc / deg[i];
    change = std::max(change, std::abs(value - cur[i]));
    next[i] = value;
  }
  return change;
}

}  // namespace

double jacobi_sweep(const DirichletProblem& problem, std::span<const double> cur,
                    std::span<double> next, std::size_t threads) {
  const auto interior = problem.interior();
  if (threads <= 1 || interior.size() < 4096) {
    return sweep_range(problem.graph(), interior, cur, next);
  }
  const std::size_t chunk = (interior.size() + threads - 1) / threads;
  std::vector<double> local(threads, 0.0);
  parallel_for(threads, threads, [&](std::size_t t) {
    const std::size_t first = std::min(interior.size(), t * chunk);
    const std::size_t last = std::min(interior.size(), first + chunk);
    local[t] = sweep_range(problem.graph(), interior.subspan(first, last - first),
                           cur, next);
  });
  return *std::max_element(local.begin(), local.end());
}

TemperatureField solve_iterative(const DirichletProblem& problem,
                                 const SolverOptions& opts) {
  opts.validate();
  require_boundary_per_component(problem);

  TemperatureField field;
  std::vector<double> cur = problem.initial_field(0.0);
  std::vector<double> next = cur;
  field.stop = StopReason::MaxIterations;
  if (problem.interior().empty()) {
    field.stop = StopReason::Converged;
  } else {
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
      const double change = jacobi_sweep(problem, cur, next, opts.threads);
      cur.swap(next);
      field.iterations = it + 1;
      field.final_change = change;
      if (opts.record_history) field.change_history.push_back(change);
      if (change < opts.tolerance) {
        field.stop = StopReason::Converged;
        break;
      }
    }
  }
  field.values = std::move(cur);
  field.mean = mean_of(field.values);
  return field;
}

TemperatureField solve_exact(const DirichletProblem& problem,
                             const SolverOptions& opts) {
  const auto interior = problem.interior();
  const std::size_t unknowns = interior.size();
  if (unknowns > opts.exact_guard) {
    fail("exact solve has " + std::to_string(unknowns) +
         " unknowns, above the guard of " + std::to_string(opts.exact_guard) +
         "; use iterative mode");
  }
  require_boundary_per_component(problem);

  const Graph& g = problem.graph();
  std::vector<double> t = problem.initial_field(0.0);
  if (unknowns > 0) {
    std::vector<std::size_t> slot(g.node_count(), unknowns);
    for (std::size_t a = 0; a < unknowns; ++a) slot[interior[a]] = a;

    const auto n_unknowns = static_cast<Eigen::Index>(unknowns);
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n_unknowns, n_unknowns);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_unknowns);
    for (std::size_t a = 0; a < unknowns; ++a) {
      const NodeId i = interior[a];
      const auto cols = g.neighbors(i);
      const auto ws = g.weights(i);
      const double d = g.degree(i);
      for (std::size_t e = 0; e < cols.size(); ++e) {
        const NodeId j = cols[e];
        const double p = ws[e] / d;
        if (problem.is_boundary(j)) {
          rhs(static_cast<Eigen::Index>(a)) += p * t[j];
        } else {
          system(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(slot[j])) -= p;
        }
      }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
      fail_numerical("exact solve: system I - Q is singular (rcond " +
                     std::to_string(rcond) + ")");
    }
    const Eigen::VectorXd x = lu.solve(rhs);
    for (std::size_t a = 0; a < unknowns; ++a) {
      t[interior[a]] = x(static_cast<Eigen::Index>(a));
    }
  }

  TemperatureField field;
  field.values = std::move(t);
  field.mean = mean_of(field.values);
  field.stop = StopReason::Exact;
  return field;
}

TemperatureField solve(const DirichletProblem& problem, const SolverOptions& opts) {
  return opts.mode == SolverMode::Exact ? solve_exact(problem, opts)
                                        : solve_iterative(problem, opts);
}

double residual(const DirichletProblem& problem, std::span<const double> t) {
  if (t.size() != problem.node_count()) {
    fail("residual: field has length " + std::to_string(t.size()) +
         ", graph has " + std::to_string(problem.node_count()) + " nodes");
  }
  const Graph& g = problem.graph();
  double worst = 0.0;
  for (const NodeId i : problem.interior()) {
    const auto cols = g.neighbors(i);
    const auto ws = g.weights(i);
    double acc = 0.0;
    for (std::size_t e = 0; e < cols.size(); ++e) acc += ws[e] * t[cols[e]];
    worst = std::max(worst, std::abs(t[i] - acc / g.degree(i)));
  }
  return worst;
}

}  // namespace heatclf
