#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "heatclf/graph.hpp"
#include "heatclf/random.hpp"

namespace testing {

using heatclf::NodeId;
using heatclf::WeightedEdge;

/// Random connected weighted graph: a random spanning tree plus `extra` edges.
inline std::vector<WeightedEdge> random_connected_edges(std::size_t n, std::size_t extra,
                                                        std::uint64_t seed, bool unit = false) {
  heatclf::Rng rng(seed);
  std::vector<WeightedEdge> edges;
  const auto weight = [&] { return unit ? 1.0 : 0.25 + 2.0 * rng.uniform(); };
  for (std::size_t v = 1; v < n; ++v) {
    edges.push_back({static_cast<NodeId>(rng.below(v)), static_cast<NodeId>(v), weight()});
  }
  for (std::size_t e = 0; e < extra; ++e) {
    const auto i = static_cast<NodeId>(rng.below(n));
    const auto j = static_cast<NodeId>(rng.below(n));
    edges.push_back({i, j, weight()});
  }
  return edges;
}

inline heatclf::Graph random_connected_graph(std::size_t n, std::size_t extra, std::uint64_t seed,
                                             bool unit = false) {
  const auto edges = random_connected_edges(n, extra, seed, unit);
  return heatclf::build_graph(n, edges);
}

/// Dense symmetric adjacency straight from an edge list (self-loops once).
inline std::vector<std::vector<double>> dense_adjacency(std::size_t n,
                                                        const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) {
    a[e.i][e.j] += e.w;
    if (e.i != e.j) a[e.j][e.i] += e.w;
  }
  return a;
}

/// Gaussian elimination with partial pivoting on a copy; returns x with Ax = b.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

/// Harmonic extension from the dense adjacency: solves L_II x = -L_IB y directly.
inline std::vector<double> dense_harmonic(const std::vector<std::vector<double>>& adj,
                                          const std::vector<int>& is_boundary,
                                          const std::vector<double>& boundary_values) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> interior;
  std::vector<std::size_t> pos(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_boundary[i]) {
      pos[i] = interior.size();
      interior.push_back(i);
    }
  }
  const std::size_t m = interior.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
  std::vector<double> b(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = interior[r];
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) deg += adj[i][j];
    a[r][r] += deg;
    for (std::size_t j = 0; j < n; ++j) {
      if (adj[i][j] == 0.0) continue;
      if (is_boundary[j]) {
        b[r] += adj[i][j] * boundary_values[j];
      } else {
        a[r][pos[j]] -= adj[i][j];
      }
    }
  }
  const auto x = dense_solve(a, b);
  std::vector<double> t = boundary_values;
  for (std::size_t r = 0; r < m; ++r) t[interior[r]] = x[r];
  return t;
}

inline double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace testing
