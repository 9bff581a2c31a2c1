#include "heatclf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string_view>

#include "heatclf/error.hpp"

namespace heatclf {

NodeId DatasetBundle::graph_node(NodeId original) const noexcept {
  if (directed && role == CopyRole::Destination) {
    return static_cast<NodeId>(original + original_count());
  }
  return original;
}

bool DatasetBundle::is_role_node(NodeId u) const noexcept {
  if (!directed) return true;
  const bool source = u < original_count();
  return (role == CopyRole::Source) == source;
}

NodeId DatasetBundle::original_of(NodeId u) const noexcept {
  return u < original_count() ? u : static_cast<NodeId>(u - original_count());
}

std::vector<NodeId> DatasetBundle::role_nodes() const {
  std::vector<NodeId> out;
  for (std::size_t o = 0; o < original_count(); ++o) {
    out.push_back(graph_node(static_cast<NodeId>(o)));
  }
  return out;
}

Label DatasetBundle::label_id(const std::string& name) const {
  const auto it = std::find(label_names.begin(), label_names.end(), name);
  if (it == label_names.end()) fail("unknown label '" + name + "'");
  return static_cast<Label>(it - label_names.begin() + 1);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Line reader shared by the edge, label and seed parsers: skips blank and
/// comment lines and splits on the (possibly auto-detected) delimiter.
class FieldReader {
 public:
  FieldReader(std::istream& in, std::string comment_prefix, char delimiter,
              std::string source_name)
      : in_(in),
        comment_(std::move(comment_prefix)),
        delimiter_(delimiter),
        source_(std::move(source_name)) {}

  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, line_)) {
      ++line_number_;
      const std::string_view view = trim(line_);
      if (view.empty()) continue;
      if (!comment_.empty() && view.substr(0, comment_.size()) == comment_) continue;
      if (delimiter_ == '\0') {
        delimiter_ = view.find('\t') != std::string_view::npos   ? '\t'
                     : view.find(',') != std::string_view::npos ? ','
                                                                 : ' ';
      }
      fields.clear();
      if (delimiter_ == ' ') {
        std::size_t pos = 0;
        while (pos < view.size()) {
          const auto start = view.find_first_not_of(" \t", pos);
          if (start == std::string_view::npos) break;
          auto end = view.find_first_of(" \t", start);
          if (end == std::string_view::npos) end = view.size();
          fields.push_back(view.substr(start, end - start));
          pos = end;
        }
      } else {
        std::size_t pos = 0;
        for (;;) {
          const auto end = view.find(delimiter_, pos);
          fields.push_back(trim(view.substr(pos, end - pos)));
          if (end == std::string_view::npos) break;
          pos = end + 1;
        }
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(source_ + ":" + std::to_string(line_number_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::string comment_;
  char delimiter_;
  std::string source_;
  std::string line_;
  std::size_t line_number_ = 0;
};

double parse_weight(std::string_view text, const FieldReader& reader) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    reader.error("malformed weight '" + std::string(text) + "'");
  }
  if (!(value > 0.0)) reader.error("non-positive weight " + std::string(text));
  return value;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open '" + path + "'");
  return in;
}

bool is_integer(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

/// Numeric order when every name is an integer, lexicographic otherwise.
std::vector<std::string> ordered_label_names(const std::set<std::string>& names) {
  std::vector<std::string> out(names.begin(), names.end());
  if (std::all_of(out.begin(), out.end(), is_integer)) {
    std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
      return std::stoll(a) < std::stoll(b);
    });
  }
  return out;
}

struct LabelLine {
  NodeId original;
  std::string label;
};

std::vector<LabelLine> read_label_lines(DatasetBundle& bundle, std::istream& in,
                                        const LabelFileOptions& opts,
                                        const std::string& source_name) {
  FieldReader reader(in, opts.comment_prefix, opts.delimiter, source_name);
  std::vector<std::string_view> fields;
  std::vector<LabelLine> lines;
  std::vector<std::string> unknown;
  while (reader.next(fields)) {
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      reader.error("expected 'node label'");
    }
    const std::string node(fields[0]);
    const auto it = bundle.node_index.find(node);
    if (it == bundle.node_index.end()) {
      unknown.push_back(node);
      continue;
    }
    // Extra columns hold further labels of the same node.
    for (std::size_t f = 1; f < fields.size(); ++f) {
      if (!fields[f].empty()) lines.push_back({it->second, std::string(fields[f])});
    }
  }
  if (!unknown.empty()) {
    std::string list;
    for (std::size_t k = 0; k < unknown.size() && k < 20; ++k) {
      list += (k ? ", " : "") + unknown[k];
    }
    if (unknown.size() > 20) list += ", ...";
    fail(source_name + ": " + std::to_string(unknown.size()) +
         " label line(s) name unknown node ids: " + list);
  }
  return lines;
}

}  // namespace

DatasetBundle parse_edge_list(std::istream& in, const EdgeListOptions& opts,
                              const std::string& source_name) {
  DatasetBundle bundle;
  bundle.directed = opts.directed;
  bundle.role = opts.role;
  FieldReader reader(in, opts.comment_prefix, opts.delimiter, source_name);
  std::vector<std::string_view> fields;
  std::vector<WeightedEdge> edges;
  const auto intern = [&](std::string_view token) {
    const auto [it, inserted] =
        bundle.node_index.try_emplace(std::string(token), static_cast<NodeId>(bundle.node_names.size()));
    if (inserted) bundle.node_names.emplace_back(token);
    return it->second;
  };
  while (reader.next(fields)) {
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      reader.error("expected 'src dst [weight]'");
    }
    if (opts.weighted && fields.size() < 3) reader.error("missing weight column");
    const double w = opts.weighted ? parse_weight(fields[2], reader) : 1.0;
    const NodeId i = intern(fields[0]);
    const NodeId j = intern(fields[1]);
    edges.push_back({i, j, w});
  }
  if (bundle.node_names.empty()) fail(source_name + ": no edges");
  bundle.graph = opts.directed ? directed_to_bipartite(bundle.node_names.size(), edges)
                               : build_graph(bundle.node_names.size(), edges);
  bundle.labels.labels.assign(bundle.graph.node_count(), kNoLabel);
  return bundle;
}

DatasetBundle load_edge_list(const std::string& path, const EdgeListOptions& opts) {
  auto in = open_input(path);
  return parse_edge_list(in, opts, path);
}

void parse_labels(DatasetBundle& bundle, std::istream& in, const LabelFileOptions& opts,
                  const std::string& source_name) {
  const auto lines = read_label_lines(bundle, in, opts, source_name);
  std::set<std::string> names;
  for (const auto& l : lines) names.insert(l.label);
  if (names.empty()) fail(source_name + ": no labels");
  bundle.label_names = ordered_label_names(names);
  std::map<std::string, Label> id;
  for (std::size_t k = 0; k < bundle.label_names.size(); ++k) {
    id[bundle.label_names[k]] = static_cast<Label>(k + 1);
  }

  const std::size_t n = bundle.graph.node_count();
  bundle.labels.classes = static_cast<Label>(bundle.label_names.size());
  bundle.labels.labels.assign(n, kNoLabel);
  bundle.multi_labels.assign(opts.multi ? n : 0, {});
  std::vector<std::string> conflicts;
  for (const auto& l : lines) {
    const NodeId u = bundle.graph_node(l.original);
    const Label label = id.at(l.label);
    if (opts.multi) {
      auto& set = bundle.multi_labels[u];
      if (std::find(set.begin(), set.end(), label) == set.end()) set.push_back(label);
      continue;
    }
    Label& slot = bundle.labels.labels[u];
    if (slot != kNoLabel && slot != label) {
      conflicts.push_back(bundle.node_names[l.original]);
    }
    slot = label;
  }
  if (!conflicts.empty()) {
    std::string list;
    for (std::size_t k = 0; k < conflicts.size() && k < 20; ++k) {
      list += (k ? ", " : "") + conflicts[k];
    }
    fail(source_name + ": conflicting labels for node(s) " + list +
         " (use multi-label mode to keep several labels)");
  }
  if (opts.multi) {
    for (std::size_t u = 0; u < n; ++u) {
      auto& set = bundle.multi_labels[u];
      std::sort(set.begin(), set.end());
      if (!set.empty()) bundle.labels.labels[u] = set.front();
    }
  }
}

void load_labels(DatasetBundle& bundle, const std::string& path, const LabelFileOptions& opts) {
  auto in = open_input(path);
  parse_labels(bundle, in, opts, path);
}

SeedSet load_seeds(DatasetBundle& bundle, const std::string& path,
                   const LabelFileOptions& opts) {
  auto in = open_input(path);
  const auto lines = read_label_lines(bundle, in, opts, path);
  if (lines.empty()) fail(path + ": no seeds");
  if (bundle.label_names.empty()) {
    std::set<std::string> names;
    for (const auto& l : lines) names.insert(l.label);
    bundle.label_names = ordered_label_names(names);
    bundle.labels.classes = static_cast<Label>(bundle.label_names.size());
  }
  std::map<NodeId, Label> chosen;
  for (const auto& l : lines) {
    const NodeId u = bundle.graph_node(l.original);
    const Label label = bundle.label_id(l.label);
    const auto [it, inserted] = chosen.emplace(u, label);
    if (!inserted && it->second != label) {
      fail(path + ": conflicting seed labels for node " + bundle.node_names[l.original]);
    }
  }
  std::vector<Seed> seeds;
  for (const auto& [u, label] : chosen) seeds.push_back({u, label});
  return SeedSet(std::move(seeds), static_cast<Label>(bundle.label_names.size()));
}

void write_edge_list(const DatasetBundle& bundle, std::ostream& out) {
  const Graph& g = bundle.graph;
  const std::size_t n = bundle.original_count();
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    const auto cols = g.neighbors(static_cast<NodeId>(u));
    const auto ws = g.weights(static_cast<NodeId>(u));
    for (std::size_t e = 0; e < cols.size(); ++e) {
      const NodeId v = cols[e];
      if (bundle.directed) {
        if (u >= n) continue;
        out << bundle.node_names[u] << '\t' << bundle.node_names[v - n];
      } else {
        if (v < u) continue;
        out << bundle.node_names[u] << '\t' << bundle.node_names[v];
      }
      out << '\t' << format_double(ws[e]) << '\n';
    }
  }
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace heatclf
