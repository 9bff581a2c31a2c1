#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heatclf/block_model.hpp"
#include "heatclf/classifier.hpp"
#include "heatclf/dataset.hpp"
#include "heatclf/sampling.hpp"

namespace heatclf {

enum class SourceKind { Sbm, Block, Dataset };

enum class SweepAxis {
  None,
  /// s_1 = value * s_2; other blocks keep their seed counts.
  SeedRatio,
  /// n_1 = value * n_2 (or the total-preserving split when total_nodes is
  /// set); seeds follow block sizes when total_seeds is set.
  SizeRatio,
  /// Dataset runs: the dominant label's seed count is multiplied by value.
  DominantBoost,
};

enum class Task {
  Multiclass,
  /// One binary task per frequent label (label vs rest), averaged.
  BinaryPerLabel,
  /// Closed form vs exact solve on random deterministic block models.
  LemmaGrid,
  /// Centered classification accuracy on a grid of deterministic block models.
  TheoremGrid,
};

std::string_view to_string(SweepAxis axis);
std::string_view to_string(Task task);

struct ExperimentConfig {
  std::string name = "experiment";
  Task task = Task::Multiclass;
  SourceKind source = SourceKind::Sbm;
  BlockModelParams block;
  /// SizeRatio: total node count to preserve (0 = scale block 1 only).
  std::size_t total_nodes = 0;
  /// SizeRatio: seeds spread over blocks in proportion to size (0 = keep).
  std::size_t total_seeds = 0;
  std::shared_ptr<const DatasetBundle> dataset;

  SamplingPolicy policy;
  std::vector<Variant> variants{Variant::Vanilla, Variant::Centered};
  std::size_t repetitions = 10;
  ClassifyOptions classify;
  SweepAxis sweep = SweepAxis::None;
  std::vector<double> sweep_values;
  std::uint64_t master_seed = 1;
  /// Workers across (sweep point, repetition) tasks.
  std::size_t threads = 1;
  /// When false wall_ms is written as 0 so output files are reproducible.
  bool record_timing = true;

  std::size_t top_labels = 3;
  std::size_t grid_points = 50;
  std::size_t grid_max_nodes = 200;
  double grid_tolerance = 1e-10;

  void validate() const;
};

struct ResultRow {
  Variant variant = Variant::Centered;
  double sweep = 0.0;
  std::size_t rep = 0;
  double macro_f1 = 0.0;
  std::vector<double> per_class_f1;
  double accuracy = 0.0;
  /// Time of the shared diffusions of this repetition (same for every variant).
  double wall_ms = 0.0;
  std::size_t iterations = 0;
  /// Hash of the graph and seed set the variant saw.
  std::uint64_t input_hash = 0;
  /// Evaluated nodes left without a prediction (component without seeds).
  std::size_t unreached = 0;
};

struct FailedRun {
  double sweep = 0.0;
  std::size_t rep = 0;
  std::string message;
};

struct Aggregate {
  Variant variant = Variant::Centered;
  double sweep = 0.0;
  double mean = 0.0;
  /// Sample standard deviation (n - 1); 0 for a single repetition.
  double std = 0.0;
  std::size_t count = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<FailedRun> failures;

  /// Mean and std of macro-F1 per (variant, sweep point), recomputed from rows.
  std::vector<Aggregate> aggregates() const;
  /// Aggregate for one cell; count == 0 when absent.
  Aggregate aggregate(Variant variant, double sweep) const;

  /// variant,sweep,rep,macro_f1,accuracy,wall_ms,iters
  void write_csv(std::ostream& out) const;
  /// variant,sweep,mean,std
  void write_aggregate_csv(std::ostream& out) const;
  /// sweep,rep,message
  void write_failures_csv(std::ostream& out) const;
};

/// Runs every (sweep point, repetition); within a repetition all variants see
/// the same graph and seeds. Streams derive from (master seed, sweep index,
/// repetition), so results do not depend on scheduling.
ResultTable run_experiment(const ExperimentConfig& cfg);

/// For each of the `top_labels` most frequent labels of `multi_labels`, a
/// binary task (label vs rest among labeled nodes) with balanced seeding;
/// rows carry the F1 of the positive class averaged over those labels.
ResultTable binary_per_label_experiment(const Graph& g,
                                        const std::vector<std::vector<Label>>& multi_labels,
                                        std::size_t top_labels, const ExperimentConfig& cfg);

/// Outcome of classifying one graph with one seed set, evaluated on the given
/// labeled nodes. Components without seeds are left unpredicted.
struct Evaluation {
  double macro_f1 = 0.0;
  std::vector<double> per_class_f1;
  double accuracy = 0.0;
  std::size_t iterations = 0;
  std::size_t unreached = 0;
  std::vector<Label> predicted;
};

Evaluation classify_and_evaluate(const Graph& g, const NodePartition& truth,
                                 const SeedSet& seeds, Variant variant,
                                 const ClassifyOptions& opts);
/// All variants from one set of diffusions.
std::vector<Evaluation> classify_and_evaluate(const Graph& g, const NodePartition& truth,
                                              const SeedSet& seeds,
                                              std::span<const Variant> variants,
                                              const ClassifyOptions& opts);

struct GridRow {
  std::size_t point = 0;
  BlockModelParams params;
  Label hot = 1;
  /// LemmaGrid: max per-node |exact - closed form|. TheoremGrid: 1 - accuracy.
  double error = 0.0;
  bool pass = false;
};

struct GridReport {
  Task task = Task::LemmaGrid;
  double tolerance = 0.0;
  std::vector<GridRow> rows;

  bool passed() const;
  double worst() const;
  /// point,K,n,sizes,seeds,p,q,hot,error,pass
  void write_csv(std::ostream& out) const;
};

/// Random valid block models with n <= max_nodes (seeded), for LemmaGrid.
std::vector<BlockModelParams> random_block_params(std::size_t count, std::size_t max_nodes,
                                                  std::uint64_t seed);

/// Deterministic grid of two-block models with p > q, seed ratios up to 10
/// and size ratios up to 10, for TheoremGrid.
std::vector<BlockModelParams> theorem_grid_params(std::size_t count);

GridReport run_lemma_grid(const std::vector<BlockModelParams>& params, double tolerance);
GridReport run_theorem_grid(const std::vector<BlockModelParams>& params);

/// FNV-1a over the graph arrays and the seed set.
std::uint64_t input_hash(const Graph& g, const SeedSet& seeds);

}  // namespace heatclf
