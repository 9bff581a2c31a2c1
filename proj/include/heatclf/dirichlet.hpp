#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "heatclf/graph.hpp"

namespace heatclf {

struct BoundaryValue {
  NodeId node;
  double temperature;
};

/// A graph plus a strict, nonempty boundary set with fixed temperatures.
/// Holds a reference to the graph; the graph must outlive the problem.
class DirichletProblem {
 public:
  DirichletProblem(const Graph& graph, std::span<const BoundaryValue> boundary);

  const Graph& graph() const noexcept { return *graph_; }
  std::size_t node_count() const noexcept { return graph_->node_count(); }

  bool is_boundary(NodeId u) const noexcept { return is_boundary_[u] != 0; }
  /// Boundary nodes, ascending.
  std::span<const NodeId> boundary() const noexcept { return boundary_; }
  /// Temperature of boundary()[k].
  std::span<const double> boundary_temperatures() const noexcept {
    return boundary_temps_;
  }
  /// Non-boundary nodes, ascending.
  std::span<const NodeId> interior() const noexcept { return interior_; }

  /// Length-n vector with boundary temperatures in place and `fill` elsewhere.
  std::vector<double> initial_field(double fill = 0.0) const;

 private:
  const Graph* graph_;
  std::vector<char> is_boundary_;
  std::vector<NodeId> boundary_;
  std::vector<double> boundary_temps_;
  std::vector<NodeId> interior_;
};

enum class SolverMode { Iterative, Exact };

struct SolverOptions {
  /// Upper bound on Jacobi sweeps.
  std::size_t max_iterations = 100;
  /// Stop once the sup-norm change of a sweep drops below this.
  double tolerance = 1e-9;
  SolverMode mode = SolverMode::Iterative;
  /// Workers for a single sweep; 1 keeps the sweep sequential.
  std::size_t threads = 1;
  /// Largest interior size accepted by the dense exact solve.
  std::size_t exact_guard = 10'000;
  /// Keep the per-sweep change sequence in TemperatureField::change_history.
  bool record_history = false;

  void validate() const;
};

enum class StopReason { Converged, MaxIterations, Exact };

struct TemperatureField {
  std::vector<double> values;
  double mean = 0.0;
  std::size_t iterations = 0;
  /// Sup-norm change of the last sweep (0 for exact solves).
  double final_change = 0.0;
  StopReason stop = StopReason::Exact;
  std::vector<double> change_history;
};

double mean_of(std::span<const double> values);

/// Jacobi fixed-point iteration T_i <- (PT)_i on interior nodes, starting
/// from 0 on the interior.
TemperatureField solve_iterative(const DirichletProblem& problem,
                                 const SolverOptions& opts = {});

/// Dense direct solve of (I - Q) X = R Y with partial pivoting.
TemperatureField solve_exact(const DirichletProblem& problem,
                             const SolverOptions& opts = {});

/// Dispatches on opts.mode.
TemperatureField solve(const DirichletProblem& problem,
                       const SolverOptions& opts = {});

/// max over interior i of |T_i - (PT)_i|.
double residual(const DirichletProblem& problem, std::span<const double> t);

/// One Jacobi sweep: writes (P cur)_i into next for every interior node and
/// returns the sup-norm change. Boundary entries of `next` are left as-is.
double jacobi_sweep(const DirichletProblem& problem,
                    std::span<const double> cur, std::span<double> next,
                    std::size_t threads = 1);

/// Throws if some connected component has no boundary node.
void require_boundary_per_component(const DirichletProblem& problem);

}  // namespace heatclf
