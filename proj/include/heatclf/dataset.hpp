#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "heatclf/classifier.hpp"
#include "heatclf/graph.hpp"

namespace heatclf {

/// Which copy of a node carries its label after the bipartite lift.
enum class CopyRole { Source, Destination };

struct EdgeListOptions {
  bool directed = false;
  /// Read the third column as the edge weight (required when set).
  bool weighted = false;
  std::string comment_prefix = "#";
  /// '\0' auto-detects tab, then comma, then runs of spaces.
  char delimiter = '\0';
  CopyRole role = CopyRole::Source;
};

struct LabelFileOptions {
  /// Keep every label of a repeated node instead of rejecting conflicts.
  bool multi = false;
  std::string comment_prefix = "#";
  char delimiter = '\0';
};

/// Graph plus external-id bookkeeping and optional ground truth.
///
/// For directed inputs the graph is the bipartite lift on 2 * original_count
/// nodes and labels live on the copies selected by `role`.
struct DatasetBundle {
  Graph graph;
  bool directed = false;
  CopyRole role = CopyRole::Source;

  /// External id of each original node, in first-seen order.
  std::vector<std::string> node_names;
  std::unordered_map<std::string, NodeId> node_index;

  /// Per graph node; classes == 0 until labels are loaded.
  NodePartition labels;
  /// Label sets per graph node (filled in multi mode only).
  std::vector<std::vector<Label>> multi_labels;
  /// External name of label k at index k - 1.
  std::vector<std::string> label_names;

  std::size_t original_count() const noexcept { return node_names.size(); }
  /// Graph node that stands for original node `o` (its role copy if directed).
  NodeId graph_node(NodeId original) const noexcept;
  /// Original node behind graph node `u`, or nothing for the non-role copy.
  bool is_role_node(NodeId u) const noexcept;
  NodeId original_of(NodeId u) const noexcept;
  /// Graph nodes that represent original nodes (all nodes if undirected).
  std::vector<NodeId> role_nodes() const;

  Label label_id(const std::string& name) const;
};

DatasetBundle load_edge_list(const std::string& path, const EdgeListOptions& opts = {});
DatasetBundle parse_edge_list(std::istream& in, const EdgeListOptions& opts = {},
                              const std::string& source_name = "<stream>");

void load_labels(DatasetBundle& bundle, const std::string& path,
                 const LabelFileOptions& opts = {});
void parse_labels(DatasetBundle& bundle, std::istream& in, const LabelFileOptions& opts = {},
                  const std::string& source_name = "<stream>");

/// Reads `node label` lines as seeds. Label names must be known to the
/// bundle when labels were loaded; otherwise they define the label set.
SeedSet load_seeds(DatasetBundle& bundle, const std::string& path,
                   const LabelFileOptions& opts = {});

/// Writes every stored edge once (every arc once for directed bundles) as
/// `src<TAB>dst<TAB>weight` with external ids.
void write_edge_list(const DatasetBundle& bundle, std::ostream& out);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace heatclf
