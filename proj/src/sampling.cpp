#include "heatclf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heatclf/error.hpp"
#include "heatclf/random.hpp"

namespace heatclf {

std::string_view to_string(SamplingKind kind) {
  switch (kind) {
    case SamplingKind::Uniform: return "uniform";
    case SamplingKind::Degree: return "degree";
    case SamplingKind::Balanced: return "balanced";
    case SamplingKind::ExplicitCounts: return "explicit";
  }
  return "?";
}

SamplingKind parse_sampling_kind(std::string_view name) {
  if (name == "uniform") return SamplingKind::Uniform;
  if (name == "degree") return SamplingKind::Degree;
  if (name == "balanced") return SamplingKind::Balanced;
  if (name == "explicit" || name == "explicit_counts") return SamplingKind::ExplicitCounts;
  fail("unknown sampling policy '" + std::string(name) +
       "' (expected uniform, degree, balanced or explicit)");
}

namespace {

/// Partial Fisher-Yates: the first `count` entries become the sample.
void shuffle_prefix(std::vector<NodeId>& pool, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
}

std::size_t ceil_fraction(double fraction, std::size_t total) {
  const double raw = std::ceil(fraction * static_cast<double>(total) - 1e-9);
  return std::min(total, static_cast<std::size_t>(std::max(raw, 0.0)));
}

/// Sequential weighted draws without replacement, realized with exponential
/// keys: the smallest `count` values of E_i / w_i (E_i ~ Exp(1)) are
/// distributed as `count` successive draws proportional to w.
std::vector<NodeId> weighted_without_replacement(const std::vector<NodeId>& pool,
                                                 const Graph& g, std::size_t count,
                                                 Rng& rng) {
  std::vector<std::pair<double, NodeId>> keys;
  keys.reserve(pool.size());
  for (const NodeId u : pool) {
    keys.push_back({-std::log1p(-rng.uniform()) / g.degree(u), u});
  }
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(count),
                    keys.end());
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(keys[i].second);
  return out;
}

std::vector<std::vector<NodeId>> nodes_by_label(const NodePartition& labels) {
  std::vector<std::vector<NodeId>> by(static_cast<std::size_t>(labels.classes));
  for (std::size_t u = 0; u < labels.labels.size(); ++u) {
    const Label l = labels.labels[u];
    if (l != kNoLabel) by[static_cast<std::size_t>(l - 1)].push_back(static_cast<NodeId>(u));
  }
  return by;
}

SeedSet from_nodes(const std::vector<NodeId>& nodes, const NodePartition& labels) {
  std::vector<Seed> seeds;
  seeds.reserve(nodes.size());
  for (const NodeId u : nodes) seeds.push_back({u, labels.labels[u]});
  return SeedSet(std::move(seeds), labels.classes);
}

std::vector<NodeId> stratified(const std::vector<std::vector<NodeId>>& by,
                               const std::vector<std::size_t>& quota, Rng& rng) {
  std::vector<NodeId> out;
  for (std::size_t k = 0; k < by.size(); ++k) {
    if (quota[k] > by[k].size()) {
      fail("label " + std::to_string(k + 1) + " needs " + std::to_string(quota[k]) +
           " seeds but has only " + std::to_string(by[k].size()) + " labeled nodes");
    }
    std::vector<NodeId> pool = by[k];
    shuffle_prefix(pool, quota[k], rng);
    out.insert(out.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(quota[k]));
  }
  return out;
}

}  // namespace

SeedSet sample_seeds(const NodePartition& labels, const Graph& g,
                     const SamplingPolicy& policy) {
  labels.validate();
  if (labels.labels.size() != g.node_count()) {
    fail("label vector has " + std::to_string(labels.labels.size()) +
         " entries, graph has " + std::to_string(g.node_count()) + " nodes");
  }
  const auto by = nodes_by_label(labels);
  std::vector<NodeId> labeled;
  for (std::size_t u = 0; u < labels.labels.size(); ++u) {
    if (labels.labels[u] != kNoLabel) labeled.push_back(static_cast<NodeId>(u));
  }
  if (labeled.empty()) fail("no labeled nodes to sample seeds from");
  Rng rng(policy.rng_seed);

  switch (policy.kind) {
    case SamplingKind::Uniform:
    case SamplingKind::Degree: {
      if (!(policy.fraction > 0.0 && policy.fraction <= 1.0)) {
        fail("seed fraction must lie in (0, 1]");
      }
      const std::size_t count = ceil_fraction(policy.fraction, labeled.size());
      for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<NodeId> chosen;
        if (policy.kind == SamplingKind::Uniform) {
          std::vector<NodeId> pool = labeled;
          shuffle_prefix(pool, count, rng);
          chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
        } else {
          chosen = weighted_without_replacement(labeled, g, count, rng);
        }
        std::vector<bool> hit(by.size(), false);
        for (const NodeId u : chosen) hit[static_cast<std::size_t>(labels.labels[u] - 1)] = true;
        bool complete = true;
        for (std::size_t k = 0; k < by.size(); ++k) complete = complete && (hit[k] || by[k].empty());
        if (complete) return from_nodes(chosen, labels);
      }
      fail("some label received no seeds after 100 draws of " + std::to_string(count) +
           " seeds; increase the seed fraction");
    }
    case SamplingKind::Balanced: {
      if (!(policy.fraction > 0.0 && policy.fraction <= 1.0)) {
        fail("seed fraction must lie in (0, 1]");
      }
      const std::size_t total =
          std::min(labeled.size(), ceil_fraction(policy.fraction, g.node_count()));
      std::vector<std::size_t> quota(by.size(), 0);
      std::vector<std::pair<double, std::size_t>> remainder;
      std::size_t assigned = 0;
      for (std::size_t k = 0; k < by.size(); ++k) {
        const double exact = static_cast<double>(total) * static_cast<double>(by[k].size()) /
                             static_cast<double>(labeled.size());
        quota[k] = static_cast<std::size_t>(std::floor(exact));
        assigned += quota[k];
        remainder.push_back({exact - std::floor(exact), k});
      }
      std::stable_sort(remainder.begin(), remainder.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::size_t r = 0; assigned < total && r < remainder.size(); ++r, ++assigned) {
        ++quota[remainder[r].second];
      }
      for (std::size_t k = 0; k < by.size(); ++k) {
        if (!by[k].empty()) quota[k] = std::max<std::size_t>(quota[k], 1);
      }
      return from_nodes(stratified(by, quota, rng), labels);
    }
    case SamplingKind::ExplicitCounts: {
      if (policy.counts.size() != by.size()) {
        fail("explicit seed counts list " + std::to_string(policy.counts.size()) +
             " labels, partition has " + std::to_string(by.size()));
      }
      return from_nodes(stratified(by, policy.counts, rng), labels);
    }
  }
  fail("unhandled sampling policy");
}

SeedSet grow_label_seeds(const SeedSet& seeds, const NodePartition& labels, Label label,
                         std::size_t target, std::uint64_t rng_seed) {
  std::vector<bool> is_seed(labels.labels.size(), false);
  std::size_t have = 0;
  for (const auto& s : seeds.seeds()) {
    is_seed[s.node] = true;
    if (s.label == label) ++have;
  }
  if (have >= target) return seeds;
  std::vector<NodeId> pool;
  for (std::size_t u = 0; u < labels.labels.size(); ++u) {
    if (labels.labels[u] == label && !is_seed[u]) pool.push_back(static_cast<NodeId>(u));
  }
  const std::size_t extra = std::min(pool.size(), target - have);
  Rng rng(rng_seed);
  shuffle_prefix(pool, extra, rng);
  std::vector<Seed> out(seeds.seeds().begin(), seeds.seeds().end());
  for (std::size_t i = 0; i < extra; ++i) out.push_back({pool[i], label});
  return SeedSet(std::move(out), seeds.classes());
}

}  // namespace heatclf
