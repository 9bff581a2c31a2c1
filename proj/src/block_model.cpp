#include "heatclf/block_model.hpp"

#include <cmath>
#include <numeric>

#include "heatclf/error.hpp"
#include "heatclf/random.hpp"

namespace heatclf {

std::size_t BlockModelParams::node_count() const noexcept {
  return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
}

void BlockModelParams::validate() const {
  if (sizes.empty()) fail("block model needs at least one block");
  if (seed_counts.size() != sizes.size()) {
    fail("block model has " + std::to_string(sizes.size()) + " block sizes but " +
         std::to_string(seed_counts.size()) + " seed counts");
  }
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (seed_counts[k] == 0 || seed_counts[k] > sizes[k]) {
      fail("block " + std::to_string(k + 1) + ": need 0 < s_k <= n_k, got s_k = " +
           std::to_string(seed_counts[k]) + ", n_k = " + std::to_string(sizes[k]));
    }
  }
  if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
    fail("block model needs finite p > 0 and q > 0");
  }
}

std::size_t BlockModelParams::block_offset(Label k) const {
  return std::accumulate(sizes.begin(), sizes.begin() + (k - 1), std::size_t{0});
}

namespace {

void check_label(const BlockModelParams& params, Label k, const char* what) {
  if (k < 1 || k > params.classes()) {
    fail(std::string(what) + " label " + std::to_string(k) + " outside [1, " +
         std::to_string(params.classes()) + "]");
  }
}

struct LemmaTerms {
  double n = 0.0;
  std::vector<double> c;  // s_k (p - q) + n q
  double cold_sum = 0.0;  // sum_k (n_k - s_k) q / c_k
};

LemmaTerms lemma_terms(const BlockModelParams& params) {
  LemmaTerms t;
  t.n = static_cast<double>(params.node_count());
  const double gap = params.p - params.q;
  for (std::size_t k = 0; k < params.sizes.size(); ++k) {
    const double s = static_cast<double>(params.seed_counts[k]);
    const double nk = static_cast<double>(params.sizes[k]);
    t.c.push_back(s * gap + t.n * params.q);
    t.cold_sum += (nk - s) * params.q / t.c.back();
  }
  return t;
}

}  // namespace

BlockTemperatures closed_form_temperatures(const BlockModelParams& params, Label hot) {
  params.validate();
  check_label(params, hot, "hot");
  const auto t = lemma_terms(params);
  const double gap = params.p - params.q;
  const auto h = static_cast<std::size_t>(hot - 1);
  const double s_h = static_cast<double>(params.seed_counts[h]);
  const double n_h = static_cast<double>(params.sizes[h]);

  const double denominator = 1.0 - t.cold_sum;
  if (!(denominator > 0.0)) {
    fail_numerical("closed form: mean-temperature denominator is not positive (" +
                   std::to_string(denominator) + ")");
  }
  BlockTemperatures out;
  out.hot = hot;
  out.mean = (s_h / t.n) * (n_h * gap + t.n * params.q) / t.c[h] / denominator;
  for (std::size_t k = 0; k < params.sizes.size(); ++k) {
    const double heat = k == h ? static_cast<double>(params.seed_counts[k]) * gap : 0.0;
    out.per_block.push_back((heat + t.n * out.mean * params.q) / t.c[k]);
    out.deltas.push_back(out.per_block.back() - out.mean);
  }
  return out;
}

bool vanilla_consistency_condition(const BlockModelParams& params, Label hot,
                                   Label other) {
  params.validate();
  check_label(params, hot, "hot");
  check_label(params, other, "other");
  if (hot == other) fail("vanilla condition needs two distinct labels");
  const auto t = lemma_terms(params);
  const double gap = params.p - params.q;
  const auto h = static_cast<std::size_t>(hot - 1);
  const auto o = static_cast<std::size_t>(other - 1);
  const auto side = [&](std::size_t k) {
    const double s = static_cast<double>(params.seed_counts[k]);
    const double nk = static_cast<double>(params.sizes[k]);
    return s * params.q * (nk * gap + t.n * params.q) / t.c[k];
  };
  const double lhs =
      side(h) + static_cast<double>(params.seed_counts[h]) * gap * (1.0 - t.cold_sum);
  return lhs > side(o);
}

bool vanilla_condition_surrogate(const BlockModelParams& params, Label hot,
                                 Label other) {
  params.validate();
  check_label(params, hot, "hot");
  check_label(params, other, "other");
  const double gap = params.p - params.q;
  const double n = static_cast<double>(params.node_count());
  const auto term = [&](Label k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    return static_cast<double>(params.seed_counts[idx]) *
           (static_cast<double>(params.sizes[idx]) * gap + n * params.q);
  };
  return term(hot) > term(other);
}

namespace {

NodePartition block_truth(const BlockModelParams& params) {
  NodePartition truth;
  truth.classes = params.classes();
  for (std::size_t k = 0; k < params.sizes.size(); ++k) {
    truth.labels.insert(truth.labels.end(), params.sizes[k], static_cast<Label>(k + 1));
  }
  return truth;
}

SeedSet leading_seeds(const BlockModelParams& params) {
  std::vector<Seed> seeds;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < params.sizes.size(); ++k) {
    for (std::size_t i = 0; i < params.seed_counts[k]; ++i) {
      seeds.push_back({static_cast<NodeId>(offset + i), static_cast<Label>(k + 1)});
    }
    offset += params.sizes[k];
  }
  return SeedSet(std::move(seeds), params.classes());
}

}  // namespace

BlockGraph build_deterministic_block_graph(const BlockModelParams& params,
                                           std::size_t guard) {
  params.validate();
  const std::size_t n = params.node_count();
  if (n > guard) {
    fail("deterministic block graph has " + std::to_string(n) +
         " nodes, above the guard of " + std::to_string(guard));
  }
  BlockGraph out;
  out.truth = block_truth(params);
  const auto& block = out.truth.labels;

  std::vector<std::size_t> offsets(n + 1);
  std::vector<NodeId> cols(n * n);
  std::vector<double> weights(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i + 1] = (i + 1) * n;
    for (std::size_t j = 0; j < n; ++j) {
      cols[i * n + j] = static_cast<NodeId>(j);
      weights[i * n + j] = block[i] == block[j] ? params.p : params.q;
    }
  }
  out.graph = Graph::from_csr(std::move(offsets), std::move(cols), std::move(weights));
  out.seeds = leading_seeds(params);
  return out;
}

double sbm_expected_degree(const BlockModelParams& params, Label k) {
  const double n = static_cast<double>(params.node_count());
  const double nk = static_cast<double>(params.sizes[static_cast<std::size_t>(k - 1)]);
  return (nk - 1.0) * params.p + (n - nk) * params.q;
}

namespace {

/// Number of failures before the next success of a Bernoulli(prob) sequence.
std::uint64_t geometric_skip(Rng& rng, double prob) {
  if (prob >= 1.0) return 0;
  const double skip = std::floor(std::log1p(-rng.uniform()) / std::log1p(-prob));
  return skip >= 9.0e18 ? ~std::uint64_t{0} >> 1 : static_cast<std::uint64_t>(skip);
}

}  // namespace

BlockGraph sbm_generate(const BlockModelParams& params, std::uint64_t rng_seed) {
  params.validate();
  if (params.p > 1.0 || params.q > 1.0) fail("SBM probabilities must lie in (0, 1]");
  const std::size_t n = params.node_count();
  const std::size_t blocks = params.sizes.size();
  BlockGraph out;
  out.truth = block_truth(params);
  for (std::size_t k = 0; k < blocks; ++k) {
    const double expected = sbm_expected_degree(params, static_cast<Label>(k + 1));
    if (expected < 1.0) {
      out.warnings.push_back("block " + std::to_string(k + 1) + " expected degree " +
                             std::to_string(expected) + " is below 1");
    }
  }

  Rng rng(rng_seed);
  std::vector<WeightedEdge> edges;
  std::vector<std::size_t> degree(n, 0);
  const auto add = [&](std::size_t i, std::size_t j) {
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0});
    ++degree[i];
    ++degree[j];
  };

  std::vector<std::size_t> offset(blocks + 1, 0);
  for (std::size_t k = 0; k < blocks; ++k) offset[k + 1] = offset[k] + params.sizes[k];

  for (std::size_t a = 0; a < blocks; ++a) {
    const std::uint64_t na = params.sizes[a];
    // Pairs inside block a, walked row by row (i > j) with geometric skips.
    {
      const std::uint64_t pairs = na * (na - 1) / 2;
      std::uint64_t row = 1;
      std::uint64_t col = geometric_skip(rng, params.p);
      while (row < na && col < pairs) {
        while (row < na && col >= row) {
          col -= row;
          ++row;
        }
        if (row >= na) break;
        add(offset[a] + row, offset[a] + col);
        const std::uint64_t skip = geometric_skip(rng, params.p);
        if (skip >= pairs) break;
        col += 1 + skip;
      }
    }
    for (std::size_t b = a + 1; b < blocks; ++b) {
      const std::uint64_t nb = params.sizes[b];
      const std::uint64_t total = na * nb;
      std::uint64_t t = geometric_skip(rng, params.q);
      while (t < total) {
        add(offset[a] + t / nb, offset[b] + t % nb);
        const std::uint64_t skip = geometric_skip(rng, params.q);
        if (skip >= total) break;
        t += 1 + skip;
      }
    }
  }

  // Resample the row of every isolated node; block sizes stay as declared.
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] > 0) continue;
    const std::size_t bi = static_cast<std::size_t>(out.truth.labels[i] - 1);
    bool connected = false;
    for (int attempt = 0; attempt < 100 && !connected; ++attempt) {
      for (std::size_t b = 0; b < blocks; ++b) {
        const double prob = b == bi ? params.p : params.q;
        const std::uint64_t len = params.sizes[b];
        std::uint64_t t = geometric_skip(rng, prob);
        while (t < len) {
          const std::size_t j = offset[b] + t;
          if (j != i) {
            add(i, j);
            connected = true;
          }
          const std::uint64_t skip = geometric_skip(rng, prob);
          if (skip >= len) break;
          t += 1 + skip;
        }
      }
    }
    if (!connected) {
      fail("SBM node " + std::to_string(i) + " still isolated after 100 resamples");
    }
  }

  out.graph = build_graph(n, edges);
  out.seeds = leading_seeds(params);
  return out;
}

}  // namespace heatclf
