#include "heatclf/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "heatclf/error.hpp"
#include "heatclf/metrics.hpp"
#include "heatclf/parallel.hpp"
#include "heatclf/random.hpp"

namespace heatclf {

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None: return "none";
    case SweepAxis::SeedRatio: return "seed_ratio";
    case SweepAxis::SizeRatio: return "size_ratio";
    case SweepAxis::DominantBoost: return "dominant_boost";
  }
  return "?";
}

std::string_view to_string(Task task) {
  switch (task) {
    case Task::Multiclass: return "multiclass";
    case Task::BinaryPerLabel: return "binary_per_label";
    case Task::LemmaGrid: return "lemma_grid";
    case Task::TheoremGrid: return "theorem_grid";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) fail("repetitions must be at least 1");
  if (variants.empty()) fail("at least one variant is required");
  classify.solver.validate();
  if (task == Task::LemmaGrid || task == Task::TheoremGrid) return;
  if (source == SourceKind::Dataset) {
    if (!dataset) fail("dataset source without a loaded dataset");
    if (dataset->label_names.empty()) fail("dataset has no labels");
    if (sweep == SweepAxis::SeedRatio || sweep == SweepAxis::SizeRatio) {
      fail("sweep '" + std::string(to_string(sweep)) + "' needs a block-model source");
    }
  } else {
    block.validate();
    if (sweep == SweepAxis::DominantBoost) fail("sweep 'dominant_boost' needs a dataset source");
    if ((sweep == SweepAxis::SeedRatio || sweep == SweepAxis::SizeRatio) && block.sizes.size() < 2) {
      fail("ratio sweeps need at least two blocks");
    }
  }
  if (task == Task::BinaryPerLabel) {
    if (source != SourceKind::Dataset || dataset->multi_labels.empty()) {
      fail("binary_per_label needs a dataset loaded with multi-label ground truth");
    }
  }
  if (sweep != SweepAxis::None && sweep_values.empty()) fail("sweep has no values");
  for (const double v : sweep_values) {
    if (!(v > 0.0)) fail("sweep values must be positive");
  }
}

std::uint64_t input_hash(const Graph& g, const SeedSet& seeds) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  const auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 0x100000001B3ULL;
    }
  };
  mix(g.offsets().data(), g.offsets().size_bytes());
  mix(g.columns().data(), g.columns().size_bytes());
  mix(g.values().data(), g.values().size_bytes());
  for (const auto& s : seeds.seeds()) {
    mix(&s.node, sizeof s.node);
    mix(&s.label, sizeof s.label);
  }
  return h;
}

std::vector<Evaluation> classify_and_evaluate(const Graph& g, const NodePartition& truth,
                                              const SeedSet& seeds,
                                              std::span<const Variant> variants,
                                              const ClassifyOptions& opts) {
  const std::size_t n = g.node_count();
  const auto comp = component_ids(g);
  std::set<std::size_t> seeded;
  for (const auto& s : seeds.seeds()) seeded.insert(comp[s.node]);

  std::vector<NodeId> keep;
  for (std::size_t u = 0; u < n; ++u) {
    if (seeded.count(comp[u])) keep.push_back(static_cast<NodeId>(u));
  }
  std::vector<Evaluation> evals(variants.size());
  for (auto& e : evals) e.predicted.assign(n, kNoLabel);
  std::vector<ClassifyResult> results;
  if (keep.size() == n) {
    results = classify_variants(g, seeds, variants, opts);
    for (std::size_t v = 0; v < variants.size(); ++v) {
      evals[v].predicted = results[v].classification.labels;
    }
  } else {
    const Subgraph sub = induced_subgraph(g, keep);
    std::vector<Seed> mapped;
    for (const auto& s : seeds.seeds()) mapped.push_back({sub.from_parent[s.node], s.label});
    results = classify_variants(sub.graph, SeedSet(std::move(mapped), seeds.classes()), variants,
                                opts);
    for (std::size_t v = 0; v < variants.size(); ++v) {
      for (std::size_t k = 0; k < keep.size(); ++k) {
        evals[v].predicted[keep[k]] = results[v].classification.labels[k];
      }
    }
  }

  std::vector<bool> is_seed(n, false);
  for (const auto& s : seeds.seeds()) is_seed[s.node] = true;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    Evaluation& eval = evals[v];
    for (const auto& st : results[v].stats) eval.iterations = std::max(eval.iterations, st.iterations);
    std::vector<Label> pred, real;
    for (std::size_t u = 0; u < n; ++u) {
      if (is_seed[u] || truth.labels[u] == kNoLabel) continue;
      pred.push_back(eval.predicted[u]);
      real.push_back(truth.labels[u]);
      if (eval.predicted[u] == kNoLabel) ++eval.unreached;
    }
    if (real.empty()) fail("no labeled non-seed nodes to evaluate");
    const auto scores = per_class_scores(pred, real, truth.classes);
    double total = 0.0;
    for (const auto& s : scores) {
      eval.per_class_f1.push_back(s.f1);
      total += s.f1;
    }
    eval.macro_f1 = total / static_cast<double>(scores.size());
    eval.accuracy = accuracy(pred, real);
  }
  return evals;
}

Evaluation classify_and_evaluate(const Graph& g, const NodePartition& truth,
                                 const SeedSet& seeds, Variant variant,
                                 const ClassifyOptions& opts) {
  const Variant one[] = {variant};
  return std::move(classify_and_evaluate(g, truth, seeds, one, opts).front());
}

namespace {

/// Largest-remainder split of `total` proportional to `weights`, at least one
/// each.
std::vector<std::size_t> proportional_split(std::size_t total,
                                            const std::vector<std::size_t>& weights) {
  const double sum = static_cast<double>(
      std::accumulate(weights.begin(), weights.end(), std::size_t{0}));
  std::vector<std::size_t> out(weights.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double exact = static_cast<double>(total) * static_cast<double>(weights[k]) / sum;
    out[k] = static_cast<std::size_t>(std::floor(exact));
    assigned += out[k];
    rem.push_back({exact - std::floor(exact), k});
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < total && r < rem.size(); ++r, ++assigned) ++out[rem[r].second];
  for (auto& x : out) x = std::max<std::size_t>(x, 1);
  return out;
}

BlockModelParams swept_params(const ExperimentConfig& cfg, double value) {
  BlockModelParams params = cfg.block;
  const std::size_t blocks = params.sizes.size();
  if (cfg.sweep == SweepAxis::SeedRatio) {
    params.seed_counts[0] = static_cast<std::size_t>(
        std::llround(value * static_cast<double>(params.seed_counts[1])));
  } else if (cfg.sweep == SweepAxis::SizeRatio) {
    if (cfg.total_nodes > 0) {
      const double others = static_cast<double>(blocks - 1);
      const auto first = static_cast<std::size_t>(
          std::llround(static_cast<double>(cfg.total_nodes) * value / (value + others)));
      params.sizes[0] = first;
      const std::size_t rest = cfg.total_nodes - first;
      for (std::size_t k = 1; k < blocks; ++k) {
        params.sizes[k] = rest / (blocks - 1) + (k - 1 < rest % (blocks - 1) ? 1 : 0);
      }
    } else {
      params.sizes[0] = static_cast<std::size_t>(
          std::llround(value * static_cast<double>(params.sizes[1])));
    }
    if (cfg.total_seeds > 0) params.seed_counts = proportional_split(cfg.total_seeds, params.sizes);
  }
  params.validate();
  return params;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<ResultRow> run_point(const ExperimentConfig& cfg, std::size_t sweep_index,
                                 double sweep_value, std::size_t rep) {
  const std::uint64_t graph_seed = derive_seed(cfg.master_seed, sweep_index, rep, 1);
  const std::uint64_t sample_seed = derive_seed(cfg.master_seed, sweep_index, rep, 2);

  BlockGraph generated;
  const Graph* graph = nullptr;
  const NodePartition* truth = nullptr;
  SamplingPolicy policy = cfg.policy;
  policy.rng_seed = sample_seed;

  if (cfg.source == SourceKind::Dataset) {
    graph = &cfg.dataset->graph;
    truth = &cfg.dataset->labels;
  } else {
    const BlockModelParams params = swept_params(cfg, sweep_value);
    generated = cfg.source == SourceKind::Sbm ? sbm_generate(params, graph_seed)
                                              : build_deterministic_block_graph(params);
    graph = &generated.graph;
    truth = &generated.truth;
    if (policy.kind == SamplingKind::ExplicitCounts) policy.counts = params.seed_counts;
  }

  SeedSet seeds = sample_seeds(*truth, *graph, policy);
  if (cfg.sweep == SweepAxis::DominantBoost) {
    const auto sizes = truth->class_sizes();
    const auto dominant = static_cast<Label>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin() + 1);
    const auto counts = seeds.counts();
    const auto target = static_cast<std::size_t>(std::llround(
        sweep_value * static_cast<double>(counts[static_cast<std::size_t>(dominant - 1)])));
    seeds = grow_label_seeds(seeds, *truth, dominant, target,
                             derive_seed(cfg.master_seed, sweep_index, rep, 3));
  }
  const std::uint64_t hash = input_hash(*graph, seeds);

  std::vector<ResultRow> rows;
  const auto start = std::chrono::steady_clock::now();
  const auto evals = classify_and_evaluate(*graph, *truth, seeds, cfg.variants, cfg.classify);
  const double wall = cfg.record_timing ? elapsed_ms(start) : 0.0;
  for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
    const Evaluation& eval = evals[v];
    ResultRow row;
    row.wall_ms = wall;
    row.variant = cfg.variants[v];
    row.sweep = sweep_value;
    row.rep = rep;
    row.macro_f1 = eval.macro_f1;
    row.per_class_f1 = eval.per_class_f1;
    row.accuracy = eval.accuracy;
    row.iterations = eval.iterations;
    row.input_hash = hash;
    row.unreached = eval.unreached;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct TaskSlot {
  std::vector<ResultRow> rows;
  std::string error;
  bool failed = false;
};

ResultTable collect(const std::vector<TaskSlot>& slots, const std::vector<double>& sweep,
                    std::size_t reps) {
  ResultTable table;
  for (std::size_t t = 0; t < slots.size(); ++t) {
    if (slots[t].failed) {
      table.failures.push_back({sweep[t / reps], t % reps, slots[t].error});
      continue;
    }
    table.rows.insert(table.rows.end(), slots[t].rows.begin(), slots[t].rows.end());
  }
  return table;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.task == Task::BinaryPerLabel) {
    return binary_per_label_experiment(cfg.dataset->graph, cfg.dataset->multi_labels,
                                       cfg.top_labels, cfg);
  }
  if (cfg.task != Task::Multiclass) fail("run_experiment handles classification tasks only");
  const std::vector<double> sweep =
      cfg.sweep == SweepAxis::None ? std::vector<double>{0.0} : cfg.sweep_values;
  const std::size_t reps = cfg.repetitions;
  std::vector<TaskSlot> slots(sweep.size() * reps);
  parallel_for(slots.size(), cfg.threads, [&](std::size_t t) {
    try {
      slots[t].rows = run_point(cfg, t / reps, sweep[t / reps], t % reps);
    } catch (const Error& e) {
      slots[t].failed = true;
      slots[t].error = e.what();
    }
  });
  return collect(slots, sweep, reps);
}

ResultTable binary_per_label_experiment(const Graph& g,
                                        const std::vector<std::vector<Label>>& multi_labels,
                                        std::size_t top_labels, const ExperimentConfig& cfg) {
  if (multi_labels.size() != g.node_count()) fail("multi-label vector does not match the graph");
  std::map<Label, std::size_t> frequency;
  for (const auto& set : multi_labels) {
    for (const Label l : set) ++frequency[l];
  }
  if (frequency.size() < top_labels) {
    fail("binary_per_label needs " + std::to_string(top_labels) + " distinct labels, found " +
         std::to_string(frequency.size()));
  }
  std::vector<std::pair<std::size_t, Label>> ranked;
  for (const auto& [label, count] : frequency) ranked.push_back({count, label});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  ranked.resize(top_labels);

  std::vector<NodePartition> tasks;
  for (const auto& [count, label] : ranked) {
    NodePartition truth;
    truth.classes = 2;
    truth.labels.assign(g.node_count(), kNoLabel);
    for (std::size_t u = 0; u < g.node_count(); ++u) {
      const auto& set = multi_labels[u];
      if (set.empty()) continue;
      truth.labels[u] = std::find(set.begin(), set.end(), label) != set.end() ? 1 : 2;
    }
    tasks.push_back(std::move(truth));
  }

  const std::size_t reps = cfg.repetitions;
  std::vector<TaskSlot> slots(reps);
  parallel_for(reps, cfg.threads, [&](std::size_t rep) {
    try {
      std::vector<ResultRow> rows(cfg.variants.size());
      for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
        rows[v].variant = cfg.variants[v];
        rows[v].rep = rep;
        rows[v].input_hash = 0xCBF29CE484222325ULL;
      }
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        SamplingPolicy policy = cfg.policy;
        policy.rng_seed = derive_seed(cfg.master_seed, t, rep, 2);
        const SeedSet seeds = sample_seeds(tasks[t], g, policy);
        const std::uint64_t hash = input_hash(g, seeds);
        const auto start = std::chrono::steady_clock::now();
        const auto evals = classify_and_evaluate(g, tasks[t], seeds, cfg.variants, cfg.classify);
        const double wall = cfg.record_timing ? elapsed_ms(start) : 0.0;
        for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
          const Evaluation& eval = evals[v];
          auto& row = rows[v];
          row.wall_ms += wall;
          row.per_class_f1.push_back(eval.per_class_f1[0]);
          row.macro_f1 += eval.per_class_f1[0] / static_cast<double>(tasks.size());
          row.accuracy += eval.accuracy / static_cast<double>(tasks.size());
          row.iterations = std::max(row.iterations, eval.iterations);
          row.unreached += eval.unreached;
          row.input_hash = splitmix64(row.input_hash ^ hash);
        }
      }
      slots[rep].rows = std::move(rows);
    } catch (const Error& e) {
      slots[rep].failed = true;
      slots[rep].error = e.what();
    }
  });
  return collect(slots, std::vector<double>{0.0}, reps);
}

std::vector<Aggregate> ResultTable::aggregates() const {
  std::vector<Aggregate> out;
  std::vector<std::vector<double>> samples;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Aggregate& a) {
      return a.variant == row.variant && a.sweep == row.sweep;
    });
    if (it == out.end()) {
      out.push_back({row.variant, row.sweep, 0.0, 0.0, 0});
      samples.emplace_back();
      it = out.end() - 1;
    }
    samples[static_cast<std::size_t>(it - out.begin())].push_back(row.macro_f1);
  }
  for (std::size_t a = 0; a < out.size(); ++a) {
    const auto& xs = samples[a];
    double sum = 0.0;
    for (const double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (const double x : xs) sq += (x - mean) * (x - mean);
    out[a].mean = mean;
    out[a].std = xs.size() > 1 ? std::sqrt(sq / static_cast<double>(xs.size() - 1)) : 0.0;
    out[a].count = xs.size();
  }
  return out;
}

Aggregate ResultTable::aggregate(Variant variant, double sweep) const {
  for (const auto& a : aggregates()) {
    if (a.variant == variant && a.sweep == sweep) return a;
  }
  return {variant, sweep, 0.0, 0.0, 0};
}

namespace {

std::string fixed3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

}  // namespace

void ResultTable::write_csv(std::ostream& out) const {
  out << "variant,sweep,rep,macro_f1,accuracy,wall_ms,iters\n";
  for (const auto& r : rows) {
    out << to_string(r.variant) << ',' << format_double(r.sweep) << ',' << r.rep << ','
        << format_double(r.macro_f1) << ',' << format_double(r.accuracy) << ','
        << fixed3(r.wall_ms) << ',' << r.iterations << '\n';
  }
}

void ResultTable::write_aggregate_csv(std::ostream& out) const {
  out << "variant,sweep,mean,std\n";
  for (const auto& a : aggregates()) {
    out << to_string(a.variant) << ',' << format_double(a.sweep) << ','
        << format_double(a.mean) << ',' << format_double(a.std) << '\n';
  }
}

void ResultTable::write_failures_csv(std::ostream& out) const {
  out << "sweep,rep,message\n";
  for (const auto& f : failures) {
    std::string msg = f.message;
    std::replace(msg.begin(), msg.end(), '"', '\'');
    out << format_double(f.sweep) << ',' << f.rep << ",\"" << msg << "\"\n";
  }
}

std::vector<BlockModelParams> random_block_params(std::size_t count, std::size_t max_nodes,
                                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BlockModelParams> out;
  const auto log_uniform = [&rng](double lo, double hi) {
    return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
  };
  while (out.size() < count) {
    BlockModelParams params;
    const std::size_t blocks = 1 + rng.below(std::min<std::size_t>(4, max_nodes));
    const std::size_t per_block = max_nodes / blocks;
    for (std::size_t k = 0; k < blocks; ++k) {
      const std::size_t size = 1 + rng.below(per_block);
      params.sizes.push_back(size);
      params.seed_counts.push_back(1 + rng.below(size));
    }
    params.p = log_uniform(0.05, 5.0);
    params.q = log_uniform(0.05, 5.0);
    out.push_back(std::move(params));
  }
  return out;
}

std::vector<BlockModelParams> theorem_grid_params(std::size_t count) {
  const std::size_t size_ratios[] = {1, 2, 3, 5, 10};
  const std::size_t seed_ratios[] = {1, 2, 3, 5, 10};
  const double p_over_q[] = {1.01, 1.5, 3.0, 10.0};
  const std::pair<std::size_t, std::size_t> base[] = {{10, 1}, {20, 2}};
  std::vector<BlockModelParams> grid;
  for (const auto& [n2, s2] : base) {
    for (const double ratio : p_over_q) {
      for (const std::size_t sr : size_ratios) {
        for (const std::size_t kr : seed_ratios) {
          BlockModelParams params;
          params.sizes = {sr * n2, n2};
          params.seed_counts = {kr * s2, s2};
          params.p = ratio;
          params.q = 1.0;
          grid.push_back(std::move(params));
        }
      }
    }
  }
  std::vector<BlockModelParams> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(grid[i % grid.size()]);
  return out;
}

GridReport run_lemma_grid(const std::vector<BlockModelParams>& params, double tolerance) {
  GridReport report;
  report.task = Task::LemmaGrid;
  report.tolerance = tolerance;
  SolverOptions exact;
  exact.mode = SolverMode::Exact;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const BlockGraph bg = build_deterministic_block_graph(params[i]);
    for (Label hot = 1; hot <= params[i].classes(); ++hot) {
      const BlockTemperatures closed = closed_form_temperatures(params[i], hot);
      const TemperatureField field = diffuse_one_vs_all(bg.graph, bg.seeds, hot, exact);
      std::vector<bool> is_seed(bg.graph.node_count(), false);
      for (const auto& s : bg.seeds.seeds()) is_seed[s.node] = true;
      double err = std::abs(field.mean - closed.mean);
      for (std::size_t u = 0; u < bg.graph.node_count(); ++u) {
        if (is_seed[u]) continue;
        const auto k = static_cast<std::size_t>(bg.truth.labels[u] - 1);
        err = std::max(err, std::abs(field.values[u] - closed.per_block[k]));
      }
      report.rows.push_back({i, params[i], hot, err, err <= tolerance});
    }
  }
  return report;
}

GridReport run_theorem_grid(const std::vector<BlockModelParams>& params) {
  GridReport report;
  report.task = Task::TheoremGrid;
  report.tolerance = 0.0;
  ClassifyOptions opts;
  opts.solver.mode = SolverMode::Exact;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const BlockGraph bg = build_deterministic_block_graph(params[i]);
    const auto result = classify(bg.graph, bg.seeds, Variant::Centered, opts);
    const auto& cls = result.classification;
    std::size_t wrong = 0;
    for (const NodeId u : cls.predicted) wrong += cls.labels[u] != bg.truth.labels[u];
    const double err = cls.predicted.empty()
                           ? 0.0
                           : static_cast<double>(wrong) / static_cast<double>(cls.predicted.size());
    report.rows.push_back({i, params[i], 0, err, wrong == 0});
  }
  return report;
}

bool GridReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const GridRow& r) { return r.pass; });
}

double GridReport::worst() const {
  double w = 0.0;
  for (const auto& r : rows) w = std::max(w, r.error);
  return w;
}

void GridReport::write_csv(std::ostream& out) const {
  const auto join = [](const std::vector<std::size_t>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + std::to_string(xs[i]);
    return s;
  };
  out << "point,K,n,sizes,seeds,p,q,hot,error,pass\n";
  for (const auto& r : rows) {
    out << r.point << ',' << r.params.sizes.size() << ',' << r.params.node_count() << ','
        << join(r.params.sizes) << ',' << join(r.params.seed_counts) << ','
        << format_double(r.params.p) << ',' << format_double(r.params.q) << ',' << r.hot << ','
        << format_double(r.error) << ',' << (r.pass ? 1 : 0) << '\n';
  }
}

}  // namespace heatclf
