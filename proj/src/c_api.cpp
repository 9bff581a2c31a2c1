#include "heatclf/heatclf.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <string>

#include "bundled_configs.hpp"
#include "heatclf/block_model.hpp"
#include "heatclf/config.hpp"
#include "heatclf/dataset.hpp"
#include "heatclf/error.hpp"
#include "heatclf/parallel.hpp"
#include "heatclf/sampling.hpp"

using namespace heatclf;

struct hc_dataset {
  DatasetBundle bundle;
  bool multi = false;
};

struct hc_seeds {
  SeedSet set;
};

struct hc_result {
  struct Row {
    std::string node;
    std::string label;
    double confidence;
  };
  std::vector<Row> rows;
  hc_summary summary{};
};

namespace {

thread_local std::string g_last_error;

hc_status set_error(hc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class F>
hc_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return HC_OK;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Validation: return set_error(HC_ERR_INVALID, e.what());
      case ErrorKind::Numerical: return set_error(HC_ERR_NUMERICAL, e.what());
      case ErrorKind::Io: return set_error(HC_ERR_IO, e.what());
    }
    return set_error(HC_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HC_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(std::string(what) + " is null");
}

BlockModelParams block_params(std::size_t K, const std::size_t* sizes, const std::size_t* seeds,
                              double p, double q) {
  need(sizes, "sizes");
  need(seeds, "seeds");
  BlockModelParams params;
  params.sizes.assign(sizes, sizes + K);
  params.seed_counts.assign(seeds, seeds + K);
  params.p = p;
  params.q = q;
  params.validate();
  return params;
}

}  // namespace

extern "C" {

const char* hc_version(void) { return HEATCLF_VERSION; }

const char* hc_last_error(void) { return g_last_error.c_str(); }

void hc_string_free(char* s) { std::free(s); }

void hc_load_options_init(hc_load_options* opts) {
  if (opts) *opts = hc_load_options{};
}

hc_status hc_dataset_load(const char* edges_path, const hc_load_options* opts, hc_dataset** out) {
  return guarded([&] {
    need(edges_path, "edges path");
    need(out, "output handle");
    *out = nullptr;
    hc_load_options o{};
    if (opts) o = *opts;
    EdgeListOptions eopts;
    eopts.directed = o.directed != 0;
    eopts.weighted = o.weighted != 0;
    eopts.role = o.destination ? CopyRole::Destination : CopyRole::Source;
    eopts.delimiter = o.delimiter;
    auto ds = std::make_unique<hc_dataset>();
    ds->bundle = load_edge_list(edges_path, eopts);
    ds->multi = o.multi != 0;
    *out = ds.release();
  });
}

hc_status hc_dataset_load_labels(hc_dataset* ds, const char* labels_path) {
  return guarded([&] {
    need(ds, "dataset");
    need(labels_path, "labels path");
    LabelFileOptions lopts;
    lopts.multi = ds->multi;
    load_labels(ds->bundle, labels_path, lopts);
  });
}

void hc_dataset_free(hc_dataset* ds) { delete ds; }

size_t hc_dataset_node_count(const hc_dataset* ds) { return ds ? ds->bundle.original_count() : 0; }

size_t hc_dataset_graph_node_count(const hc_dataset* ds) {
  return ds ? ds->bundle.graph.node_count() : 0;
}

size_t hc_dataset_edge_count(const hc_dataset* ds) { return ds ? ds->bundle.graph.edge_count() : 0; }

size_t hc_dataset_label_count(const hc_dataset* ds) { return ds ? ds->bundle.label_names.size() : 0; }

hc_status hc_dataset_write_edges(const hc_dataset* ds, const char* path) {
  return guarded([&] {
    need(ds, "dataset");
    need(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_io(std::string("cannot write '") + path + "'");
    write_edge_list(ds->bundle, out);
    if (!out) fail_io(std::string("write failed for '") + path + "'");
  });
}

hc_status hc_seeds_load(hc_dataset* ds, const char* path, hc_seeds** out) {
  return guarded([&] {
    need(ds, "dataset");
    need(path, "seeds path");
    need(out, "output handle");
    *out = nullptr;
    auto seeds = std::make_unique<hc_seeds>();
    seeds->set = load_seeds(ds->bundle, path);
    *out = seeds.release();
  });
}

hc_status hc_seeds_sample(const hc_dataset* ds, const char* policy, double fraction,
                          uint64_t rng_seed, hc_seeds** out) {
  return guarded([&] {
    need(ds, "dataset");
    need(policy, "policy");
    need(out, "output handle");
    *out = nullptr;
    if (ds->bundle.labels.classes == 0) fail("sampling seeds needs a labels file");
    SamplingPolicy pol;
    pol.kind = parse_sampling_kind(policy);
    if (pol.kind == SamplingKind::ExplicitCounts) {
      fail("explicit counts cannot be sampled from the command line; use a seeds file");
    }
    pol.fraction = fraction;
    pol.rng_seed = rng_seed;
    NodePartition truth = ds->bundle.labels;
    if (ds->bundle.directed) {
      for (std::size_t u = 0; u < truth.labels.size(); ++u) {
        if (!ds->bundle.is_role_node(static_cast<NodeId>(u))) truth.labels[u] = kNoLabel;
      }
    }
    auto seeds = std::make_unique<hc_seeds>();
    seeds->set = sample_seeds(truth, ds->bundle.graph, pol);
    *out = seeds.release();
  });
}

size_t hc_seeds_size(const hc_seeds* seeds) { return seeds ? seeds->set.size() : 0; }

void hc_seeds_free(hc_seeds* seeds) { delete seeds; }

void hc_classify_options_init(hc_classify_options* opts) {
  if (!opts) return;
  const SolverOptions defaults;
  *opts = hc_classify_options{};
  opts->variant = "centered";
  opts->max_iterations = defaults.max_iterations;
  opts->tolerance = defaults.tolerance;
  opts->threads = 0;
}

hc_status hc_classify(const hc_dataset* ds, const hc_seeds* seeds, const hc_classify_options* opts,
                      hc_result** out) {
  return guarded([&] {
    need(ds, "dataset");
    need(seeds, "seeds");
    need(out, "output handle");
    *out = nullptr;
    hc_classify_options o;
    hc_classify_options_init(&o);
    if (opts) o = *opts;
    need(o.variant, "variant");

    const Variant variant = parse_variant(o.variant);
    ClassifyOptions copts;
    copts.solver.max_iterations = o.max_iterations;
    copts.solver.tolerance = o.tolerance;
    copts.solver.mode = o.exact ? SolverMode::Exact : SolverMode::Iterative;
    const std::size_t threads = o.threads ? o.threads : default_thread_count();
    copts.threads = threads;
    copts.solver.threads = std::max<std::size_t>(1, threads / std::max<std::size_t>(1, seeds->set.classes()));
    copts.weighted_scaling = o.divide_weight ? WeightedScaling::Divide : WeightedScaling::Multiply;

    const DatasetBundle& b = ds->bundle;
    const auto start = std::chrono::steady_clock::now();
    const ClassifyResult res = classify(b.graph, seeds->set, variant, copts);
    const auto stop = std::chrono::steady_clock::now();

    auto r = std::make_unique<hc_result>();
    hc_summary& s = r->summary;
    s.labels = static_cast<std::size_t>(seeds->set.classes());
    s.seeds = seeds->set.size();
    s.converged = 1;
    for (const auto& st : res.stats) {
      s.max_iterations = std::max(s.max_iterations, st.iterations);
      s.max_residual = std::max(s.max_residual, st.residual);
      s.max_change = std::max(s.max_change, st.final_change);
      if (st.stop == StopReason::MaxIterations) s.converged = 0;
    }
    s.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    if (o.strict && !s.converged) {
      fail_numerical("solver stopped at " + std::to_string(o.max_iterations) +
                     " iterations with change " + format_double(s.max_change) +
                     " above tolerance " + format_double(o.tolerance));
    }

    const Classification& c = res.classification;
    for (const NodeId u : c.predicted) {
      if (!b.is_role_node(u)) continue;
      const std::string& label = c.labels[u] >= 1 && static_cast<std::size_t>(c.labels[u]) <= b.label_names.size()
                                     ? b.label_names[c.labels[u] - 1]
                                     : std::to_string(c.labels[u]);
      r->rows.push_back({b.node_names[b.original_of(u)], label, c.confidence[u]});
    }
    s.predicted = r->rows.size();
    *out = r.release();
  });
}

void hc_result_free(hc_result* r) { delete r; }

hc_status hc_result_summary(const hc_result* r, hc_summary* out) {
  return guarded([&] {
    need(r, "result");
    need(out, "output");
    *out = r->summary;
  });
}

size_t hc_result_row_count(const hc_result* r) { return r ? r->rows.size() : 0; }

hc_status hc_result_row(const hc_result* r, size_t row, const char** node_id, const char** label,
                        double* confidence) {
  return guarded([&] {
    need(r, "result");
    if (row >= r->rows.size()) fail("row " + std::to_string(row) + " out of range");
    const auto& x = r->rows[row];
    if (node_id) *node_id = x.node.c_str();
    if (label) *label = x.label.c_str();
    if (confidence) *confidence = x.confidence;
  });
}

hc_status hc_result_write_csv(const hc_result* r, const char* path) {
  return guarded([&] {
    need(r, "result");
    need(path, "path");
    std::ofstream file;
    const bool to_stdout = std::strcmp(path, "-") == 0;
    if (!to_stdout) {
      file.open(path, std::ios::binary);
      if (!file) fail_io(std::string("cannot write '") + path + "'");
    }
    std::ostream& out = to_stdout ? std::cout : file;
    out << "node_id,label,confidence\n";
    for (const auto& x : r->rows) {
      out << x.node << ',' << x.label << ',' << format_double(x.confidence) << '\n';
    }
    out.flush();
    if (!out) fail_io(std::string("write failed for '") + path + "'");
  });
}

hc_status hc_block_temperatures(size_t K, const size_t* sizes, const size_t* seeds, double p,
                                double q, int32_t hot, double* mean, double* per_block,
                                double* deltas) {
  return guarded([&] {
    const BlockModelParams params = block_params(K, sizes, seeds, p, q);
    const BlockTemperatures t = closed_form_temperatures(params, hot);
    if (mean) *mean = t.mean;
    if (per_block) std::copy(t.per_block.begin(), t.per_block.end(), per_block);
    if (deltas) std::copy(t.deltas.begin(), t.deltas.end(), deltas);
  });
}

hc_status hc_vanilla_condition(size_t K, const size_t* sizes, const size_t* seeds, double p,
                               double q, int32_t hot, int32_t other, int* holds) {
  return guarded([&] {
    need(holds, "output");
    const BlockModelParams params = block_params(K, sizes, seeds, p, q);
    *holds = vanilla_consistency_condition(params, hot, other) ? 1 : 0;
  });
}

hc_status hc_bench_run(const char* config, const char* out_dir, char** summary, int* ok) {
  return guarded([&] {
    need(config, "config");
    need(out_dir, "output directory");
    if (summary) *summary = nullptr;
    ExperimentConfig cfg;
    std::error_code ec;
    if (std::filesystem::is_regular_file(config, ec)) {
      cfg = load_experiment_config(config);
    } else if (const char* text = bundled_config_text(config)) {
      cfg = parse_experiment_config(text, bundled_data_dir());
    } else {
      fail_io(std::string("config '") + config + "' is neither a file nor a bundled config");
    }
    const BenchOutcome outcome = run_bench(cfg, out_dir);
    if (ok) *ok = outcome.ok ? 1 : 0;
    if (summary) {
      char* s = static_cast<char*>(std::malloc(outcome.summary.size() + 1));
      if (!s) throw std::bad_alloc();
      std::memcpy(s, outcome.summary.c_str(), outcome.summary.size() + 1);
      *summary = s;
    }
  });
}

const char* const* hc_bundled_configs(void) { return bundled_config_names(); }

}  // extern "C"
