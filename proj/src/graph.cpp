#include "heatclf/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "heatclf/error.hpp"

namespace heatclf {

double Graph::weight(NodeId i, NodeId j) const noexcept {
  const auto cols = neighbors(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return weights(i)[static_cast<std::size_t>(it - cols.begin())];
}

double Graph::total_weight() const noexcept {
  double total = 0.0;
  for (std::size_t u = 0; u < node_count(); ++u) {
    for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
      total += cols_[e] == u ? 2.0 * weights_[e] : weights_[e];
    }
  }
  return total / 2.0;
}

Graph build_graph(std::size_t n, std::span<const WeightedEdge> edges) {
  if (n >= static_cast<std::size_t>(Subgraph::kAbsent)) {
    fail("graph too large: " + std::to_string(n) + " nodes");
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& [i, j, w] = edges[e];
    if (i >= n || j >= n) {
      fail("edge " + std::to_string(e) + " (" + std::to_string(i) + ", " +
           std::to_string(j) + ") out of range for " + std::to_string(n) +
           " nodes");
    }
    if (!(w > 0.0)) {
      fail("edge " + std::to_string(e) + " (" + std::to_string(i) + ", " +
           std::to_string(j) + ") has non-positive weight " +
           std::to_string(w));
    }
  }

  // Counting pass, then scatter both orientations.
  std::vector<std::size_t> counts(n + 1, 0);
  for (const auto& [i, j, w] : edges) {
    ++counts[i + 1];
    if (i != j) ++counts[j + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
  std::vector<std::pair<NodeId, double>> raw(counts[n]);
  for (const auto& [i, j, w] : edges) {
    raw[cursor[i]++] = {j, w};
    if (i != j) raw[cursor[j]++] = {i, w};
  }

  Graph g;
  g.offsets_.assign(n + 1, 0);
  g.cols_.reserve(raw.size());
  g.weights_.reserve(raw.size());
  for (std::size_t u = 0; u < n; ++u) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(counts[u]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(counts[u + 1]);
    std::sort(first, last,
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (g.cols_.size() > g.offsets_[u] && g.cols_.back() == it->first) {
        g.weights_.back() += it->second;
      } else {
        g.cols_.push_back(it->first);
        g.weights_.push_back(it->second);
      }
    }
    g.offsets_[u + 1] = g.cols_.size();
  }
  g.finish_and_validate();
  return g;
}

void Graph::finish_and_validate() {
  const std::size_t n = offsets_.size() - 1;
  degrees_.assign(n, 0.0);
  std::size_t self_loops = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
      degrees_[u] += weights_[e];
      if (cols_[e] == u) ++self_loops;
    }
  }
  edge_count_ = (cols_.size() - self_loops) / 2 + self_loops;
  for (std::size_t u = 0; u < n; ++u) {
    if (!(degrees_[u] > 0.0)) {
      fail("isolated node " + std::to_string(u) + " (zero degree)");
    }
  }
}

Graph Graph::from_csr(std::vector<std::size_t> offsets, std::vector<NodeId> columns,
                      std::vector<double> weights) {
  if (offsets.empty() || offsets.front() != 0 || offsets.back() != columns.size() ||
      columns.size() != weights.size()) {
    fail("from_csr: inconsistent array sizes");
  }
  const std::size_t n = offsets.size() - 1;
  for (std::size_t u = 0; u < n; ++u) {
    if (offsets[u + 1] < offsets[u]) fail("from_csr: row offsets decrease at row " + std::to_string(u));
    for (std::size_t e = offsets[u]; e < offsets[u + 1]; ++e) {
      if (columns[e] >= n) fail("from_csr: column out of range in row " + std::to_string(u));
      if (e > offsets[u] && columns[e] <= columns[e - 1]) {
        fail("from_csr: row " + std::to_string(u) + " not strictly ascending");
      }
      if (!(weights[e] > 0.0)) fail("from_csr: non-positive weight in row " + std::to_string(u));
    }
  }
  Graph g;
  g.offsets_ = std::move(offsets);
  g.cols_ = std::move(columns);
  g.weights_ = std::move(weights);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t e = g.offsets_[u]; e < g.offsets_[u + 1]; ++e) {
      if (g.weight(g.cols_[e], static_cast<NodeId>(u)) != g.weights_[e]) {
        fail("from_csr: asymmetric entry (" + std::to_string(u) + ", " +
             std::to_string(g.cols_[e]) + ")");
      }
    }
  }
  g.finish_and_validate();
  return g;
}

std::size_t NodePartition::labeled_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](Label l) { return l != kNoLabel; }));
}

std::vector<std::size_t> NodePartition::class_sizes() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(std::max<Label>(classes, 0)), 0);
  for (const Label l : labels) {
    if (l >= 1 && l <= classes) ++out[static_cast<std::size_t>(l - 1)];
  }
  return out;
}

void NodePartition::validate() const {
  for (std::size_t u = 0; u < labels.size(); ++u) {
    if (labels[u] != kNoLabel && (labels[u] < 1 || labels[u] > classes)) {
      fail("node " + std::to_string(u) + " has label " + std::to_string(labels[u]) +
           " outside [1, " + std::to_string(classes) + "]");
    }
  }
}

std::vector<double> transition_apply(const Graph& g, std::span<const double> v) {
  const std::size_t n = g.node_count();
  if (v.size() != n) {
    fail("transition_apply: vector has length " + std::to_string(v.size()) +
         ", graph has " + std::to_string(n) + " nodes");
  }
  const auto offsets = g.offsets();
  const auto cols = g.columns();
  const auto vals = g.values();
  const auto deg = g.degrees();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) {
      acc += vals[e] * v[cols[e]];
    }
    u[i] = acc / deg[i];
  }
  return u;
}

Graph directed_to_bipartite(std::size_t n, std::span<const WeightedEdge> arcs) {
  std::vector<WeightedEdge> lifted;
  lifted.reserve(arcs.size());
  std::vector<bool> touched(2 * n, false);
  for (std::size_t e = 0; e < arcs.size(); ++e) {
    const auto& [i, j, w] = arcs[e];
    if (i >= n || j >= n) {
      fail("arc " + std::to_string(e) + " (" + std::to_string(i) + " -> " +
           std::to_string(j) + ") out of range for " + std::to_string(n) +
           " nodes");
    }
    lifted.push_back({i, static_cast<NodeId>(n + j), w});
    touched[i] = true;
    touched[n + j] = true;
  }
  for (std::size_t u = 0; u < 2 * n; ++u) {
    if (!touched[u]) {
      const bool source = u < n;
      fail("isolated bipartite node " + std::to_string(u) + ": " +
           (source ? "source" : "destination") + " copy of node " +
           std::to_string(source ? u : u - n) + " has no " +
           (source ? "outgoing" : "incoming") + " arcs");
    }
  }
  return build_graph(2 * n, lifted);
}

std::vector<std::size_t> component_ids(const Graph& g) {
  constexpr auto kUnseen = static_cast<std::size_t>(-1);
  const std::size_t n = g.node_count();
  std::vector<std::size_t> id(n, kUnseen);
  std::size_t next = 0;
  std::queue<NodeId> frontier;
  for (std::size_t root = 0; root < n; ++root) {
    if (id[root] != kUnseen) continue;
    id[root] = next;
    frontier.push(static_cast<NodeId>(root));
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop();
      for (const NodeId v : g.neighbors(u)) {
        if (id[v] == kUnseen) {
          id[v] = next;
          frontier.push(v);
        }
      }
    }
    ++next;
  }
  return id;
}

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  const auto id = component_ids(g);
  const std::size_t count =
      id.empty() ? 0 : *std::max_element(id.begin(), id.end()) + 1;
  std::vector<std::vector<NodeId>> out(count);
  for (std::size_t u = 0; u < id.size(); ++u) {
    out[id[u]].push_back(static_cast<NodeId>(u));
  }
  return out;
}

Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> keep) {
  Subgraph sub;
  sub.from_parent.assign(g.node_count(), Subgraph::kAbsent);
  sub.to_parent.assign(keep.begin(), keep.end());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= g.node_count() || (k > 0 && keep[k] <= keep[k - 1])) {
      fail("induced_subgraph: node list must be ascending, unique, in range");
    }
    sub.from_parent[keep[k]] = static_cast<NodeId>(k);
  }
  std::vector<WeightedEdge> edges;
  for (const NodeId u : keep) {
    const auto cols = g.neighbors(u);
    const auto ws = g.weights(u);
    for (std::size_t e = 0; e < cols.size(); ++e) {
      const NodeId v = cols[e];
      if (v < u || sub.from_parent[v] == Subgraph::kAbsent) continue;
      edges.push_back({sub.from_parent[u], sub.from_parent[v], ws[e]});
    }
  }
  sub.graph = build_graph(keep.size(), edges);
  return sub;
}

}  // namespace heatclf
