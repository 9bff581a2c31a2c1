#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "heatclf/types.hpp"

namespace heatclf {

/// Class label per node (kNoLabel when unlabeled) and the class count K.
struct NodePartition {
  std::vector<Label> labels;
  Label classes = 0;

  std::size_t labeled_count() const noexcept;
  /// Nodes per class, index k - 1 for class k.
  std::vector<std::size_t> class_sizes() const;
  /// Throws unless every present label is in [1, classes].
  void validate() const;
};

struct WeightedEdge {
  NodeId i;
  NodeId j;
  double w;
};

/// Immutable undirected weighted graph in compressed-row layout.
///
/// Every undirected edge {i, j} with i != j is stored in both rows; a
/// self-loop is stored once and counts once toward the degree. Weights are
/// strictly positive and every node has positive degree, so the random-walk
/// operator P = D^-1 A is always defined. Safe for concurrent reads.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const noexcept { return degrees_.size(); }

  /// Number of stored adjacency entries (2 per edge, 1 per self-loop).
  std::size_t entry_count() const noexcept { return cols_.size(); }

  /// Number of undirected edges, self-loops included.
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId u) const noexcept {
    return {cols_.data() + offsets_[u], cols_.data() + offsets_[u + 1]};
  }
  std::span<const double> weights(NodeId u) const noexcept {
    return {weights_.data() + offsets_[u], weights_.data() + offsets_[u + 1]};
  }

  double degree(NodeId u) const noexcept { return degrees_[u]; }
  std::span<const double> degrees() const noexcept { return degrees_; }

  /// Stored weight of (i, j), or 0 when absent.
  double weight(NodeId i, NodeId j) const noexcept;

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> columns() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return weights_; }

  double total_weight() const noexcept;

  /// Adopts compressed-row arrays directly. Rows must be strictly ascending,
  /// the pattern symmetric, weights positive, and every degree positive.
  static Graph from_csr(std::vector<std::size_t> offsets,
                        std::vector<NodeId> columns, std::vector<double> weights);

 private:
  friend Graph build_graph(std::size_t, std::span<const WeightedEdge>);
  void finish_and_validate();

  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> cols_;
  std::vector<double> weights_;
  std::vector<double> degrees_;
  std::size_t edge_count_ = 0;
};

/// Builds an undirected graph. Duplicate pairs (in either orientation) are
/// summed. Throws on out-of-range endpoints, non-positive weights, and on any
/// node left with zero degree.
Graph build_graph(std::size_t n, std::span<const WeightedEdge> edges);

/// u = D^-1 A v.
std::vector<double> transition_apply(const Graph& g, std::span<const double> v);

/// Lifts a directed graph to the undirected bipartite graph on 2n nodes with
/// adjacency [[0, A], [A^T, 0]]: arc (i, j, w) becomes edge (i, n + j, w).
/// Node i < n is the source copy of i, node n + i its destination copy.
Graph directed_to_bipartite(std::size_t n, std::span<const WeightedEdge> arcs);

/// Connected components in breadth-first discovery order; each component is
/// sorted ascending.
std::vector<std::vector<NodeId>> connected_components(const Graph& g);

/// Component id per node, numbered as in connected_components().
std::vector<std::size_t> component_ids(const Graph& g);

struct Subgraph {
  Graph graph;
  /// Original id of each subgraph node.
  std::vector<NodeId> to_parent;
  /// Subgraph id of each original node, or kAbsent.
  std::vector<NodeId> from_parent;

  static constexpr NodeId kAbsent = static_cast<NodeId>(-1);
};

/// Subgraph induced by `keep` (ascending, unique). Every kept node must keep
/// at least one incident edge.
Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> keep);

}  // namespace heatclf
