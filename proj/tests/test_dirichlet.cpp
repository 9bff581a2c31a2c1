#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "heatclf/dirichlet.hpp"
#include "heatclf/error.hpp"
#include "support.hpp"

using namespace heatclf;

namespace {

Graph path(std::size_t n) {
  std::vector<WeightedEdge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    e.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1), 1.0});
  }
  return build_graph(n, e);
}

SolverOptions tight() {
  SolverOptions o;
  o.max_iterations = 100'000;
  o.tolerance = 1e-14;
  return o;
}

SolverOptions exact() {
  SolverOptions o;
  o.mode = SolverMode::Exact;
  return o;
}

/// Random boundary of roughly `fraction` of the nodes (at least one) with
/// temperatures in [0, 1].
std::vector<BoundaryValue> random_boundary(std::size_t n, double fraction, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BoundaryValue> b;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform() < fraction) b.push_back({static_cast<NodeId>(i), rng.uniform()});
  }
  if (b.empty()) b.push_back({0, 1.0});
  return b;
}

}  // namespace

TEST_CASE("solvers: path examples") {
  const Graph p3 = path(3);
  const BoundaryValue b3[] = {{0, 1.0}, {2, 0.0}};
  const DirichletProblem prob3(p3, b3);
  for (const auto& opts : {tight(), exact()}) {
    const auto t = solve(prob3, opts);
    CHECK(t.values[0] == 1.0);
    CHECK(t.values[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t.values[2] == 0.0);
    CHECK(t.mean == doctest::Approx(0.5).epsilon(1e-14));
  }

  const Graph p4 = path(4);
  const BoundaryValue b4[] = {{0, 1.0}, {3, 0.0}};
  const DirichletProblem prob4(p4, b4);
  for (const auto& opts : {tight(), exact()}) {
    const auto t = solve(prob4, opts);
    CHECK(t.values[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(t.values[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("solvers: star with two fixed leaves") {
  // center 0, leaves a=1, b=2, e=3
  const WeightedEdge e[] = {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}};
  const Graph g = build_graph(4, e);
  const BoundaryValue b[] = {{1, 1.0}, {2, 0.0}};
  const DirichletProblem prob(g, b);
  const auto it = solve_iterative(prob, tight());
  const auto ex = solve_exact(prob);
  CHECK(it.values[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(it.values[3] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ex.values[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ex.values[3] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("solve_exact: single unknown is the weighted mean of its neighbours") {
  const WeightedEdge e[] = {{0, 1, 2.0}, {0, 2, 1.0}, {0, 3, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}};
  const Graph g = build_graph(4, e);
  const BoundaryValue b[] = {{1, 1.0}, {2, 0.25}, {3, 0.0}};
  const auto t = solve_exact(DirichletProblem(g, b));
  CHECK(t.values[0] == doctest::Approx((2.0 * 1.0 + 0.25 + 0.0) / 4.0).epsilon(1e-15));
}

TEST_CASE("solvers: errors") {
  const WeightedEdge two[] = {{0, 1, 1.0}, {2, 3, 1.0}};
  const Graph g = build_graph(4, two);
  const BoundaryValue b[] = {{0, 1.0}};
  const DirichletProblem prob(g, b);
  CHECK_THROWS_AS(solve_iterative(prob), Error);
  CHECK_THROWS_AS(solve_exact(prob), Error);
  try {
    solve_iterative(prob);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("component") != std::string::npos);
  }

  const Graph p = path(3);
  const BoundaryValue dup[] = {{0, 1.0}, {0, 0.0}};
  CHECK_THROWS_AS(DirichletProblem(p, dup), Error);
  const BoundaryValue out[] = {{5, 1.0}};
  CHECK_THROWS_AS(DirichletProblem(p, out), Error);
  CHECK_THROWS_AS(DirichletProblem(p, std::span<const BoundaryValue>{}), Error);

  SolverOptions guard = exact();
  guard.exact_guard = 1;
  const BoundaryValue b2[] = {{0, 1.0}};
  const Graph p4 = path(4);
  CHECK_THROWS_AS(solve_exact(DirichletProblem(p4, b2), guard), Error);

  SolverOptions bad;
  bad.max_iterations = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.max_iterations = 1;
  bad.tolerance = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("solve_iterative: stop reasons") {
  const Graph p = path(30);
  const BoundaryValue b[] = {{0, 1.0}, {29, 0.0}};
  const DirichletProblem prob(p, b);
  SolverOptions few;
  few.max_iterations = 3;
  const auto capped = solve_iterative(prob, few);
  CHECK(capped.iterations == 3);
  CHECK(capped.stop == StopReason::MaxIterations);

  const auto done = solve_iterative(prob, tight());
  CHECK(done.stop == StopReason::Converged);
  CHECK(done.final_change < 1e-14);
}

TEST_CASE("residual") {
  const Graph p = path(3);
  const BoundaryValue b[] = {{0, 1.0}, {2, 0.0}};
  const DirichletProblem prob(p, b);
  const std::vector<double> cold = {1.0, 0.0, 0.0};
  CHECK(residual(prob, cold) == 0.5);
  CHECK(residual(prob, solve_exact(prob).values) <= 1e-12);
}

TEST_CASE("property: exact solver agrees with an independent dense oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 10 + 6 * seed;
    const auto edges = testing::random_connected_edges(n, 2 * n, seed);
    const Graph g = build_graph(n, edges);
    const auto b = random_boundary(n, 0.15, seed + 100);
    std::vector<int> is_b(n, 0);
    std::vector<double> vals(n, 0.0);
    for (const auto& x : b) {
      is_b[x.node] = 1;
      vals[x.node] = x.temperature;
    }
    const auto oracle = testing::dense_harmonic(testing::dense_adjacency(n, edges), is_b, vals);
    const auto t = solve_exact(DirichletProblem(g, b));
    CHECK(testing::sup_diff(t.values, oracle) <= 1e-11);
  }
}

TEST_CASE("property: maximum principle and monotone change") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const std::size_t n = 20 + 4 * seed;
    const Graph g = testing::random_connected_graph(n, n, seed * 31);
    const auto b = random_boundary(n, 0.1, seed);
    const DirichletProblem prob(g, b);
    SolverOptions opts;
    opts.max_iterations = 500;
    opts.tolerance = 1e-12;
    opts.record_history = true;
    const auto t = solve_iterative(prob, opts);
    for (const double x : t.values) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
    const auto& h = t.change_history;
    REQUIRE(!h.empty());
    for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] <= h[k - 1] * (1.0 + 1e-12));

    // Every intermediate iterate stays in [0, 1] as well.
    std::vector<double> cur = prob.initial_field(), next(n);
    for (int sweep = 0; sweep < 20; ++sweep) {
      jacobi_sweep(prob, cur, next);
      for (const double x : next) CHECK((x >= 0.0 && x <= 1.0));
      std::swap(cur, next);
    }
  }
}

TEST_CASE("property: linearity in the boundary values") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const std::size_t n = 30 + seed;
    const Graph g = testing::random_connected_graph(n, 2 * n, seed);
    auto b1 = random_boundary(n, 0.2, seed);
    auto b2 = b1;
    Rng rng(seed * 3);
    for (auto& x : b2) x.temperature = rng.uniform();
    const double alpha = 0.7, beta = -1.3;
    auto mix = b1;
    for (std::size_t k = 0; k < mix.size(); ++k) {
      mix[k].temperature = alpha * b1[k].temperature + beta * b2[k].temperature;
    }
    const auto t1 = solve_exact(DirichletProblem(g, b1)).values;
    const auto t2 = solve_exact(DirichletProblem(g, b2)).values;
    const auto tm = solve_exact(DirichletProblem(g, mix)).values;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(tm[i] - (alpha * t1[i] + beta * t2[i])) <= 1e-10);
    }
  }
}

TEST_CASE("property: relabeling nodes permutes the solution") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const std::size_t n = 25 + seed;
    const auto edges = testing::random_connected_edges(n, 2 * n, seed);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed + 9);
    for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng.below(i + 1)]);
    auto pedges = edges;
    for (auto& e : pedges) {
      e.i = perm[e.i];
      e.j = perm[e.j];
    }
    const auto b = random_boundary(n, 0.2, seed);
    auto pb = b;
    for (auto& x : pb) x.node = perm[x.node];

    SolverOptions opts;
    opts.max_iterations = 50;
    const Graph g = build_graph(n, edges);
    const Graph pg = build_graph(n, pedges);
    const auto t = solve_iterative(DirichletProblem(g, b), opts).values;
    const auto pt = solve_iterative(DirichletProblem(pg, pb), opts).values;
    for (std::size_t i = 0; i < n; ++i) CHECK(pt[perm[i]] == doctest::Approx(t[i]).epsilon(1e-13));
  }
}

TEST_CASE("iterative and exact agree; residual bounded by tolerance") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 50 + 10 * seed;
    const Graph g = testing::random_connected_graph(n, 3 * n, seed);
    const auto b = random_boundary(n, 0.05, seed);
    const DirichletProblem prob(g, b);
    SolverOptions opts;
    opts.max_iterations = 10'000;
    opts.tolerance = 1e-8;
    const auto it = solve_iterative(prob, opts);
    CHECK(residual(prob, it.values) <= 1e-6);
    opts.tolerance = 1e-12;
    const auto fine = solve_iterative(prob, opts);
    CHECK(testing::sup_diff(fine.values, solve_exact(prob).values) <= 1e-9);
  }
}

TEST_CASE("parallel sweeps give the same field as serial sweeps") {
  const Graph g = testing::random_connected_graph(6000, 12000, 5);
  const auto b = random_boundary(6000, 0.01, 5);
  const DirichletProblem prob(g, b);
  SolverOptions serial;
  serial.max_iterations = 30;
  SolverOptions par = serial;
  par.threads = 4;
  CHECK(solve_iterative(prob, serial).values == solve_iterative(prob, par).values);
}

TEST_CASE("boundary covering every node is accepted") {
  const Graph p = path(3);
  const BoundaryValue all[] = {{0, 1.0}, {1, 0.0}, {2, 1.0}};
  const DirichletProblem prob(p, all);
  CHECK(prob.interior().empty());
  const auto t = solve_iterative(prob);
  CHECK(t.values == std::vector<double>{1.0, 0.0, 1.0});
  CHECK(solve_exact(prob).values == t.values);
}
