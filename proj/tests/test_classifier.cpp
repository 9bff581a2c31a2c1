#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "heatclf/block_model.hpp"
#include "heatclf/classifier.hpp"
#include "heatclf/error.hpp"
#include "support.hpp"

using namespace heatclf;

namespace {

Graph path3() {
  const WeightedEdge e[] = {{0, 1, 1.0}, {1, 2, 1.0}};
  return build_graph(3, e);
}

/// Two k-cliques joined by one edge between node k-1 and node k.
Graph barbell(std::size_t k) {
  std::vector<WeightedEdge> e;
  for (std::size_t side = 0; side < 2; ++side) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        e.push_back({static_cast<NodeId>(side * k + i), static_cast<NodeId>(side * k + j), 1.0});
      }
    }
  }
  e.push_back({static_cast<NodeId>(k - 1), static_cast<NodeId>(k), 1.0});
  return build_graph(2 * k, e);
}

ClassifyOptions exact_opts() {
  ClassifyOptions o;
  o.solver.mode = SolverMode::Exact;
  return o;
}

SeedSet random_seeds(std::size_t n, Label classes, std::size_t per_label, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i-- > 1;) std::swap(order[i], order[rng.below(i + 1)]);
  std::vector<Seed> s;
  std::size_t next = 0;
  for (Label k = 1; k <= classes; ++k) {
    for (std::size_t c = 0; c < per_label; ++c) s.push_back({order[next++], k});
  }
  return SeedSet(std::move(s), classes);
}

}  // namespace

TEST_CASE("SeedSet validation and counts") {
  SeedSet s({{3, 2}, {1, 1}, {2, 2}}, 2);
  CHECK(s.size() == 3);
  CHECK(s.seeds()[0].node == 1);
  CHECK(s.counts() == std::vector<std::size_t>{1, 2});
  CHECK_THROWS_AS(SeedSet({{0, 3}}, 2), Error);
  CHECK_THROWS_AS(SeedSet({{0, 1}, {0, 2}}, 2), Error);
  CHECK_THROWS_AS(s.check_nodes(3), Error);
}

TEST_CASE("center") {
  CHECK(center(std::vector<double>{1.0, 0.5, 0.0}) == std::vector<double>{0.5, 0.0, -0.5});
  CHECK(center(std::vector<double>{0.3, 0.3, 0.3}) == std::vector<double>{0.0, 0.0, 0.0});
  const auto c = center(std::vector<double>{1.0, 0.6, 0.0, 0.4});
  CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c[1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(c[2] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(c[3] == doctest::Approx(-0.1).epsilon(1e-12));

  Rng rng(4);
  std::vector<double> v(1000);
  for (auto& x : v) x = rng.uniform();
  const auto z = center(v);
  CHECK(std::abs(std::accumulate(z.begin(), z.end(), 0.0) / 1000.0) <= 1e-12);
}

TEST_CASE("diffuse_one_vs_all: degenerate seed sets") {
  const Graph p = path3();
  const SeedSet all({{0, 1}, {1, 2}, {2, 1}}, 2);
  CHECK(diffuse_one_vs_all(p, all, 1).values == std::vector<double>{1.0, 0.0, 1.0});

  const SeedSet one_label({{0, 1}}, 1);
  const auto t = diffuse_one_vs_all(p, one_label, 1, SolverOptions{1000, 1e-15});
  for (const double x : t.values) CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classify: block-model instance, centered labels every block correctly") {
  BlockModelParams params{{2, 2}, {1, 1}, 2.0, 1.0};
  const BlockGraph bg = build_deterministic_block_graph(params);
  const auto r = classify(bg.graph, bg.seeds, Variant::Centered, exact_opts());
  CHECK(r.classification.labels == bg.truth.labels);
  CHECK(r.classification.predicted == std::vector<NodeId>{1, 3});
}

TEST_CASE("classify: seed asymmetry flips vanilla but not centered") {
  BlockModelParams params{{50, 50}, {10, 2}, 2.0, 1.0};
  const BlockGraph bg = build_deterministic_block_graph(params);
  const auto vanilla = classify(bg.graph, bg.seeds, Variant::Vanilla, exact_opts());
  const auto centered = classify(bg.graph, bg.seeds, Variant::Centered, exact_opts());
  for (NodeId u = 52; u < 100; ++u) {
    CHECK(vanilla.classification.labels[u] == 1);
    CHECK(centered.classification.labels[u] == 2);
  }
  for (NodeId u = 10; u < 50; ++u) CHECK(centered.classification.labels[u] == 1);
}

TEST_CASE("classify: all nodes seeds gives empty prediction set and scaled one-hot scores") {
  const Graph p = path3();
  const SeedSet all({{0, 1}, {1, 2}, {2, 2}}, 2);
  const auto r = classify(p, all, Variant::Weighted);
  CHECK(r.classification.predicted.empty());
  CHECK(r.classification.labels == std::vector<Label>{1, 2, 2});
  CHECK(r.scores.at(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(r.scores.at(1, 2) == doctest::Approx(2.0 / 3.0));
  CHECK(r.scores.at(1, 1) == 0.0);
}

TEST_CASE("classify: label without seeds fails before solving") {
  const Graph p = path3();
  const SeedSet s({{0, 1}}, 2);
  CHECK_THROWS_AS(classify(p, s, Variant::Centered), Error);
}

TEST_CASE("classify: ties go to the smallest label; confidence is the score gap") {
  const Graph p = path3();
  const SeedSet s({{0, 1}, {2, 2}}, 2);
  const auto r = classify(p, s, Variant::Vanilla, exact_opts());
  CHECK(r.classification.labels[1] == 1);
  CHECK(std::abs(r.classification.confidence[1]) <= 1e-14);
  CHECK(std::isinf(r.classification.confidence[0]));
}

TEST_CASE("classify: weighted scaling formulas") {
  const Graph g = barbell(4);
  const SeedSet s({{0, 1}, {1, 1}, {2, 1}, {7, 2}}, 2);
  ClassifyOptions mul = exact_opts();
  ClassifyOptions div = exact_opts();
  div.weighted_scaling = WeightedScaling::Divide;
  const auto raw = classify(g, s, Variant::Vanilla, mul);
  const auto m = classify(g, s, Variant::Weighted, mul);
  const auto d = classify(g, s, Variant::Weighted, div);
  for (NodeId u = 0; u < 8; ++u) {
    CHECK(m.scores.at(u, 1) == doctest::Approx(raw.scores.at(u, 1) * 0.75));
    CHECK(m.scores.at(u, 2) == doctest::Approx(raw.scores.at(u, 2) * 0.25));
    CHECK(d.scores.at(u, 1) == doctest::Approx(raw.scores.at(u, 1) / 0.75));
    CHECK(d.scores.at(u, 2) == doctest::Approx(raw.scores.at(u, 2) / 0.25));
  }
}

TEST_CASE("score matrix invariants: centered columns have zero mean, vanilla in [0,1]") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 60 + seed;
    const Graph g = testing::random_connected_graph(n, 2 * n, seed);
    const SeedSet s = random_seeds(n, 3, 2, seed);
    const auto c = classify(g, s, Variant::Centered);
    const auto v = classify(g, s, Variant::Vanilla);
    for (Label k = 1; k <= 3; ++k) {
      const auto col = c.scores.column(k);
      CHECK(std::abs(std::accumulate(col.begin(), col.end(), 0.0) / n) <= 1e-10);
      for (const double x : v.scores.column(k)) CHECK((x >= 0.0 && x <= 1.0));
    }
  }
}

TEST_CASE("property: per-column offsets never change centered output") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 40 + seed;
    const Graph g = testing::random_connected_graph(n, 2 * n, seed);
    const SeedSet s = random_seeds(n, 3, 2, seed);
    const auto v = classify(g, s, Variant::Vanilla);
    const auto c = classify(g, s, Variant::Centered);
    ScoreMatrix shifted = v.scores;
    Rng rng(seed);
    for (Label k = 1; k <= 3; ++k) {
      const double offset = rng.uniform() * 10.0 - 5.0;
      auto col = shifted.column(k);
      for (auto& x : col) x += offset;
      const auto centered = center(std::span<const double>(col.data(), col.size()));
      std::copy(centered.begin(), centered.end(), col.begin());
    }
    const auto out = classify_scores(shifted, s);
    for (NodeId u = 0; u < n; ++u) CHECK(out.labels[u] == c.classification.labels[u]);
  }
}

TEST_CASE("property: centered K=2 matches the mean-threshold binary rule") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 30 + 3 * seed;
    const Graph g = testing::random_connected_graph(n, 2 * n, seed);
    const SeedSet s = random_seeds(n, 2, 1 + seed % 4, seed);
    const auto multi = classify(g, s, Variant::Centered, exact_opts());
    const auto binary = classify_binary(g, s, Threshold::Mean, SolverOptions{1, 0.0, SolverMode::Exact});
    CHECK(multi.classification.labels == binary.classification.labels);
  }
}

TEST_CASE("property: permuting label ids permutes the output") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 50;
    const Graph g = testing::random_connected_graph(n, 2 * n, seed);
    const SeedSet s = random_seeds(n, 4, 2, seed);
    const Label perm[] = {0, 3, 1, 4, 2};  // old label k -> perm[k]
    std::vector<Seed> ps;
    for (const auto& x : s.seeds()) ps.push_back({x.node, perm[x.label]});
    const SeedSet permuted(std::move(ps), 4);
    for (const Variant v : {Variant::Vanilla, Variant::Centered, Variant::Weighted}) {
      const auto a = classify(g, s, v).classification.labels;
      const auto b = classify(g, permuted, v).classification.labels;
      for (NodeId u = 0; u < n; ++u) CHECK(b[u] == perm[a[u]]);
    }
  }
}

TEST_CASE("property: identical inputs give bit-identical output, threads or not") {
  const Graph g = testing::random_connected_graph(300, 600, 77);
  const SeedSet s = random_seeds(300, 5, 3, 77);
  ClassifyOptions one;
  ClassifyOptions many;
  many.threads = 4;
  const auto a = classify(g, s, Variant::Centered, one);
  const auto b = classify(g, s, Variant::Centered, many);
  const auto c = classify(g, s, Variant::Centered, one);
  CHECK(a.scores.data == b.scores.data);
  CHECK(a.scores.data == c.scores.data);
  CHECK(a.classification.labels == b.classification.labels);
}

TEST_CASE("classify_variants matches separate classify calls") {
  const Graph g = testing::random_connected_graph(80, 160, 3);
  const SeedSet s = random_seeds(80, 3, 2, 3);
  const Variant vs[] = {Variant::Vanilla, Variant::Weighted, Variant::Centered};
  const auto all = classify_variants(g, s, vs);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto one = classify(g, s, vs[k]);
    CHECK(all[k].scores.data == one.scores.data);
    CHECK(all[k].classification.labels == one.classification.labels);
  }
}

TEST_CASE("classify_binary: examples") {
  const Graph p = path3();
  const SeedSet s({{0, 1}, {2, 2}}, 2);
  const auto r = classify_binary(p, s, Threshold::Mean, SolverOptions{1, 0.0, SolverMode::Exact});
  CHECK(r.threshold == doctest::Approx(0.5));
  CHECK(r.classification.labels[1] == 2);

  const Graph b = barbell(5);
  const SeedSet bs({{0, 1}, {9, 2}}, 2);
  for (const Threshold th : {Threshold::Half, Threshold::Mean}) {
    const auto out = classify_binary(b, bs, th, SolverOptions{1, 0.0, SolverMode::Exact});
    CHECK(out.field.mean == doctest::Approx(0.5).epsilon(1e-12));
    for (NodeId u = 0; u < 5; ++u) CHECK(out.classification.labels[u] == 1);
    for (NodeId u = 5; u < 10; ++u) CHECK(out.classification.labels[u] == 2);
    CHECK(out.classification.confidence[2] ==
          doctest::Approx(std::abs(out.field.values[2] - out.threshold)));
  }

  const SeedSet three({{0, 1}, {1, 2}, {2, 3}}, 3);
  CHECK_THROWS_AS(classify_binary(p, three, Threshold::Half), Error);
}

TEST_CASE("variant names round-trip") {
  for (const Variant v : {Variant::Vanilla, Variant::Weighted, Variant::Centered}) {
    CHECK(parse_variant(to_string(v)) == v);
  }
  CHECK_THROWS_AS(parse_variant("hot"), Error);
}
