#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "heatclf/classifier.hpp"
#include "heatclf/graph.hpp"

namespace heatclf {

/// K blocks of sizes n_k holding s_k seeds each (labeled k); intra-block
/// weight (or probability) p, inter-block q.
struct BlockModelParams {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> seed_counts;
  double p = 0.0;
  double q = 0.0;

  Label classes() const noexcept { return static_cast<Label>(sizes.size()); }
  std::size_t node_count() const noexcept;
  void validate() const;
  /// First node of block k (1-based); nodes are laid out block by block.
  std::size_t block_offset(Label k) const;
};

/// Equilibrium temperatures of the block model's one-vs-all problem.
struct BlockTemperatures {
  Label hot = 1;
  /// Non-seed temperature of each block, index k - 1 for block k.
  std::vector<double> per_block;
  double mean = 0.0;
  /// per_block[k] - mean.
  std::vector<double> deltas;
};

/// Closed-form solution with the seeds of block `hot` at 1 and all other
/// seeds at 0. With c_k = s_k (p - q) + n q:
///
///   mean     = (s_h / n) (n_h (p - q) + n q) / c_h
///              / (1 - sum_k (n_k - s_k) q / c_k)
///   T_h c_h  = s_h (p - q) + n q mean
///   T_k c_k  = n q mean                       (k != h)
BlockTemperatures closed_form_temperatures(const BlockModelParams& params, Label hot);

/// Whether the vanilla (uncentered) rule ranks label `hot` above label `other`
/// on the non-seed nodes of block `hot`, i.e. T^(hot)_hot > T^(other)_hot.
/// Evaluates
///
///   s_h q (n_h (p-q) + n q) / c_h + s_h (p-q) (1 - sum_j (n_j - s_j) q / c_j)
///     > s_o q (n_o (p-q) + n q) / c_o.
///
/// Block `hot` is classified correctly by the vanilla rule iff this holds
/// against every other label.
bool vanilla_consistency_condition(const BlockModelParams& params, Label hot,
                                   Label other);

/// Low-seed-fraction form of the same comparison:
/// s_h (n_h (p-q) + n q) > s_o (n_o (p-q) + n q).
bool vanilla_condition_surrogate(const BlockModelParams& params, Label hot,
                                 Label other);

struct BlockGraph {
  Graph graph;
  NodePartition truth;
  /// First s_k nodes of block k, labeled k.
  SeedSet seeds;
  std::vector<std::string> warnings;
};

/// Complete weighted graph: weight p within a block (a self-loop of weight p
/// on every node included) and q across blocks. Node layout is block by
/// block. Rejects n above `guard`.
BlockGraph build_deterministic_block_graph(const BlockModelParams& params,
                                           std::size_t guard = 5'000);

/// Stochastic block model: every unordered pair of distinct nodes is an edge
/// independently with probability p (same block) or q (different blocks),
/// unit weights. Isolated nodes get their row resampled, up to 100 times.
BlockGraph sbm_generate(const BlockModelParams& params, std::uint64_t rng_seed);

/// Expected degree of a node of block k under sbm_generate.
double sbm_expected_degree(const BlockModelParams& params, Label k);

}  // namespace heatclf
