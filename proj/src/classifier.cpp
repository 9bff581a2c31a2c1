#include "heatclf/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "heatclf/error.hpp"
#include "heatclf/parallel.hpp"

namespace heatclf {

SeedSet::SeedSet(std::vector<Seed> seeds, Label classes)
    : seeds_(std::move(seeds)), classes_(classes) {
  if (classes_ < 1) fail("seed set needs at least one class");
  if (seeds_.empty()) fail("seed set is empty");
  std::sort(seeds_.begin(), seeds_.end(),
            [](const Seed& a, const Seed& b) { return a.node < b.node; });
  for (std::size_t k = 0; k < seeds_.size(); ++k) {
    const auto [node, label] = seeds_[k];
    if (label < 1 || label > classes_) {
      fail("seed node " + std::to_string(node) + " has label " +
           std::to_string(label) + " outside [1, " + std::to_string(classes_) +
           "]");
    }
    if (k > 0 && seeds_[k - 1].node == node) {
      fail("seed node " + std::to_string(node) + " listed more than once");
    }
  }
}

std::vector<std::size_t> SeedSet::counts() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(classes_), 0);
  for (const auto& s : seeds_) ++out[static_cast<std::size_t>(s.label - 1)];
  return out;
}

void SeedSet::check_nodes(std::size_t n) const {
  for (const auto& s : seeds_) {
    if (s.node >= n) {
      fail("seed node " + std::to_string(s.node) + " out of range for " +
           std::to_string(n) + " nodes");
    }
  }
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Vanilla: return "vanilla";
    case Variant::Weighted: return "weighted";
    case Variant::Centered: return "centered";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "vanilla") return Variant::Vanilla;
  if (name == "weighted") return Variant::Weighted;
  if (name == "centered") return Variant::Centered;
  fail("unknown variant '" + std::string(name) +
       "' (expected vanilla, weighted or centered)");
}

TemperatureField diffuse_one_vs_all(const Graph& g, const SeedSet& seeds,
                                    Label k, const SolverOptions& opts) {
  seeds.check_nodes(g.node_count());
  std::vector<BoundaryValue> boundary;
  boundary.reserve(seeds.size());
  bool hot = false;
  for (const auto& s : seeds.seeds()) {
    boundary.push_back({s.node, s.label == k ? 1.0 : 0.0});
    hot = hot || s.label == k;
  }
  if (!hot) fail("label " + std::to_string(k) + " has no seeds");
  const DirichletProblem problem(g, boundary);
  return solve(problem, opts);
}

std::vector<double> center(std::span<const double> values) {
  const double m = mean_of(values);
  std::vector<double> out(values.begin(), values.end());
  for (double& x : out) x -= m;
  return out;
}

TemperatureField center(const TemperatureField& t) {
  TemperatureField out = t;
  out.values = center(t.values);
  out.mean = mean_of(out.values);
  return out;
}

Classification classify_scores(const ScoreMatrix& scores, const SeedSet& seeds) {
  const std::size_t n = scores.rows;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Classification out;
  out.labels.assign(n, kNoLabel);
  out.confidence.assign(n, kInf);
  for (const auto& s : seeds.seeds()) out.labels[s.node] = s.label;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.labels[i] != kNoLabel) continue;
    out.predicted.push_back(static_cast<NodeId>(i));
    Label best = 1;
    double best_score = scores.at(static_cast<NodeId>(i), 1);
    double runner_up = -kInf;
    for (Label k = 2; k <= scores.classes; ++k) {
      const double score = scores.at(static_cast<NodeId>(i), k);
      if (score > best_score) {
        runner_up = best_score;
        best_score = score;
        best = k;
      } else if (score > runner_up) {
        runner_up = score;
      }
    }
    out.labels[i] = best;
    out.confidence[i] = scores.classes > 1 ? best_score - runner_up : kInf;
  }
  return out;
}

std::vector<ClassifyResult> classify_variants(const Graph& g, const SeedSet& seeds,
                                              std::span<const Variant> variants,
                                              const ClassifyOptions& opts) {
  opts.solver.validate();
  seeds.check_nodes(g.node_count());
  if (variants.empty()) fail("no variants requested");
  const auto counts = seeds.counts();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) fail("label " + std::to_string(k + 1) + " has no seeds");
  }

  const std::size_t n = g.node_count();
  const Label classes = seeds.classes();
  std::vector<ClassifyResult> results(variants.size());
  for (std::size_t v = 0; v < variants.size(); ++v) {
    auto& scores = results[v].scores;
    scores.rows = n;
    scores.classes = classes;
    scores.variant = variants[v];
    scores.data.assign(n * static_cast<std::size_t>(classes), 0.0);
  }
  std::vector<DiffusionStats> stats(static_cast<std::size_t>(classes));

  const double total = static_cast<double>(seeds.size());
  parallel_for(static_cast<std::size_t>(classes), opts.threads, [&](std::size_t idx) {
    const Label k = static_cast<Label>(idx + 1);
    const TemperatureField field = diffuse_one_vs_all(g, seeds, k, opts.solver);
    const double share = static_cast<double>(counts[idx]) / total;
    for (std::size_t v = 0; v < variants.size(); ++v) {
      auto column = results[v].scores.column(k);
      for (std::size_t i = 0; i < n; ++i) {
        double score = field.values[i];
        switch (variants[v]) {
          case Variant::Vanilla: break;
          case Variant::Centered: score -= field.mean; break;
          case Variant::Weighted:
            score = opts.weighted_scaling == WeightedScaling::Multiply ? score * share
                                                                       : score / share;
            break;
        }
        column[i] = score;
      }
    }
    auto& st = stats[idx];
    st.label = k;
    st.iterations = field.iterations;
    st.final_change = field.final_change;
    st.stop = field.stop;
    std::vector<BoundaryValue> boundary;
    for (const auto& s : seeds.seeds()) boundary.push_back({s.node, s.label == k ? 1.0 : 0.0});
    st.residual = residual(DirichletProblem(g, boundary), field.values);
  });

  for (auto& r : results) {
    r.stats = stats;
    r.classification = classify_scores(r.scores, seeds);
  }
  return results;
}

ClassifyResult classify(const Graph& g, const SeedSet& seeds, Variant variant,
                        const ClassifyOptions& opts) {
  const Variant one[] = {variant};
  return std::move(classify_variants(g, seeds, one, opts).front());
}

BinaryResult classify_binary(const Graph& g, const SeedSet& seeds,
                             Threshold threshold, const SolverOptions& opts) {
  if (seeds.classes() != 2) {
    fail("binary classification needs exactly 2 labels, got " +
         std::to_string(seeds.classes()));
  }
  const auto counts = seeds.counts();
  if (counts[0] == 0 || counts[1] == 0) fail("binary classification needs seeds of both labels");

  BinaryResult out;
  out.field = diffuse_one_vs_all(g, seeds, 1, opts);
  out.threshold = threshold == Threshold::Mean ? out.field.mean : 0.5;

  const std::size_t n = g.node_count();
  auto& cls = out.classification;
  cls.labels.assign(n, kNoLabel);
  cls.confidence.assign(n, std::numeric_limits<double>::infinity());
  for (const auto& s : seeds.seeds()) cls.labels[s.node] = s.label;
  for (std::size_t i = 0; i < n; ++i) {
    if (cls.labels[i] != kNoLabel) continue;
    const double t = out.field.values[i];
    cls.predicted.push_back(static_cast<NodeId>(i));
    cls.labels[i] = t > out.threshold ? 1 : 2;
    cls.confidence[i] = std::abs(t - out.threshold);
  }
  return out;
}

}  // namespace heatclf
