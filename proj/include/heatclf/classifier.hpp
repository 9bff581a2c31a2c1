#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "heatclf/dirichlet.hpp"
#include "heatclf/graph.hpp"

namespace heatclf {

struct Seed {
  NodeId node;
  Label label;
};

/// Labeled nodes with classes 1..K, sorted by node. A label may have no
/// seeds here; classify() rejects that before solving.
class SeedSet {
 public:
  SeedSet() = default;
  SeedSet(std::vector<Seed> seeds, Label classes);

  Label classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return seeds_.size(); }
  std::span<const Seed> seeds() const noexcept { return seeds_; }

  /// Seed count per label, index k - 1 for label k.
  std::vector<std::size_t> counts() const;

  /// Throws unless every node id is below n.
  void check_nodes(std::size_t n) const;

 private:
  std::vector<Seed> seeds_;
  Label classes_ = 0;
};

enum class Variant { Vanilla, Weighted, Centered };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

/// How the weighted variant rescales T^(k) by the label's seed share s_k / s.
enum class WeightedScaling { Multiply, Divide };

/// Dense n x K score matrix, column-major (one column per label).
struct ScoreMatrix {
  std::size_t rows = 0;
  Label classes = 0;
  Variant variant = Variant::Centered;
  std::vector<double> data;

  std::span<const double> column(Label k) const {
    return {data.data() + static_cast<std::size_t>(k - 1) * rows, rows};
  }
  std::span<double> column(Label k) {
    return {data.data() + static_cast<std::size_t>(k - 1) * rows, rows};
  }
  double at(NodeId i, Label k) const { return column(k)[i]; }
};

struct Classification {
  /// One label per node; seeds keep their given label.
  std::vector<Label> labels;
  /// Gap between the best and runner-up score (+inf for seeds and K = 1).
  std::vector<double> confidence;
  /// Non-seed nodes, ascending.
  std::vector<NodeId> predicted;
};

struct DiffusionStats {
  Label label = 0;
  std::size_t iterations = 0;
  double final_change = 0.0;
  double residual = 0.0;
  StopReason stop = StopReason::Exact;
};

struct ClassifyOptions {
  SolverOptions solver;
  /// Workers across the K independent diffusions.
  std::size_t threads = 1;
  WeightedScaling weighted_scaling = WeightedScaling::Multiply;
};

struct ClassifyResult {
  ScoreMatrix scores;
  Classification classification;
  std::vector<DiffusionStats> stats;
};

/// Label-k seeds at temperature 1, every other seed at 0.
TemperatureField diffuse_one_vs_all(const Graph& g, const SeedSet& seeds,
                                    Label k, const SolverOptions& opts = {});

/// Subtracts the mean over all n entries.
TemperatureField center(const TemperatureField& t);
std::vector<double> center(std::span<const double> values);

/// One-vs-all diffusion per label, scored per variant, argmax with ties to the
/// smallest label id.
ClassifyResult classify(const Graph& g, const SeedSet& seeds, Variant variant,
                        const ClassifyOptions& opts = {});

/// Same as classify() for several variants, sharing the K diffusions.
std::vector<ClassifyResult> classify_variants(const Graph& g, const SeedSet& seeds,
                                              std::span<const Variant> variants,
                                              const ClassifyOptions& opts = {});

/// Turns a filled score matrix into labels; exposed for reuse and testing.
Classification classify_scores(const ScoreMatrix& scores, const SeedSet& seeds);

enum class Threshold { Half, Mean };

struct BinaryResult {
  TemperatureField field;
  double threshold = 0.5;
  Classification classification;
};

/// Single diffusion, label-1 seeds hot and label-2 seeds cold. Label 1 iff
/// T_i > threshold; ties go to label 2.
BinaryResult classify_binary(const Graph& g, const SeedSet& seeds,
                             Threshold threshold, const SolverOptions& opts = {});

}  // namespace heatclf
