#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "heatclf/classifier.hpp"
#include "heatclf/graph.hpp"

namespace heatclf {

enum class SamplingKind {
  /// Simple random sample of ceil(fraction * labeled) labeled nodes.
  Uniform,
  /// ceil(fraction * labeled) labeled nodes drawn without replacement, each
  /// draw proportional to degree among the nodes not yet drawn.
  Degree,
  /// ceil(fraction * n) seeds split across labels in proportion to label
  /// frequency (largest remainder, at least one per label), uniform within.
  Balanced,
  /// Exactly counts[k - 1] seeds of label k, uniform within the label.
  ExplicitCounts,
};

std::string_view to_string(SamplingKind kind);
SamplingKind parse_sampling_kind(std::string_view name);

struct SamplingPolicy {
  SamplingKind kind = SamplingKind::Uniform;
  double fraction = 0.01;
  std::vector<std::size_t> counts;
  std::uint64_t rng_seed = 0;
};

/// Samples seeds among labeled nodes. Uniform and degree policies redraw (up
/// to 100 times) until every label present in `labels` has a seed.
SeedSet sample_seeds(const NodePartition& labels, const Graph& g,
                     const SamplingPolicy& policy);

/// Adds uniformly drawn non-seed nodes of `label` until that label has
/// `target` seeds (no-op if it already has as many).
SeedSet grow_label_seeds(const SeedSet& seeds, const NodePartition& labels,
                         Label label, std::size_t target, std::uint64_t rng_seed);

}  // namespace heatclf
