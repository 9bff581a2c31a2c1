// Command-line front end; talks to the library only through heatclf.h.
#include <cstdio>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heatclf/heatclf.h"

namespace {

// Exit codes: 0 success, 1 validation or I/O, 2 numerical failure.
int exit_code(hc_status status) {
  switch (status) {
    case HC_OK: return 0;
    case HC_ERR_NUMERICAL: return 2;
    default: return 1;
  }
}

int report(hc_status status) {
  if (status != HC_OK) std::cerr << "error: " << hc_last_error() << '\n';
  return exit_code(status);
}

struct Dataset {
  hc_dataset* ptr = nullptr;
  ~Dataset() { hc_dataset_free(ptr); }
};
struct Seeds {
  hc_seeds* ptr = nullptr;
  ~Seeds() { hc_seeds_free(ptr); }
};
struct Result {
  hc_result* ptr = nullptr;
  ~Result() { hc_result_free(ptr); }
};

struct ClassifyArgs {
  std::string graph;
  std::string labels;
  std::string seeds_file;
  std::string sample;
  double fraction = 0.01;
  std::string variant = "centered";
  std::size_t max_iter = 0;
  double tol = -1.0;
  std::string out = "-";
  std::uint64_t seed = 1;
  bool directed = false;
  bool weighted = false;
  bool destination = false;
  bool multi = false;
  bool strict = false;
  bool exact = false;
  bool divide = false;
  std::size_t threads = 0;
  std::string delimiter = "auto";
  std::string edges_out;
};

char delimiter_char(const std::string& name) {
  if (name == "tab") return '\t';
  if (name == "comma") return ',';
  if (name == "space") return ' ';
  return '\0';
}

int run_classify(const ClassifyArgs& a) {
  if (!a.seeds_file.empty() && !a.sample.empty()) {
    std::cerr << "error: --seeds-file and --sample are mutually exclusive\n";
    return 1;
  }
  if (a.seeds_file.empty() && a.sample.empty()) {
    std::cerr << "error: one of --seeds-file or --sample is required\n";
    return 1;
  }
  if (!a.sample.empty() && a.labels.empty()) {
    std::cerr << "error: --sample needs --labels to know the ground-truth labels\n";
    return 1;
  }

  hc_load_options lo;
  hc_load_options_init(&lo);
  lo.directed = a.directed;
  lo.weighted = a.weighted;
  lo.destination = a.destination;
  lo.multi = a.multi;
  lo.delimiter = delimiter_char(a.delimiter);

  Dataset ds;
  if (auto st = hc_dataset_load(a.graph.c_str(), &lo, &ds.ptr)) return report(st);
  if (!a.labels.empty()) {
    if (auto st = hc_dataset_load_labels(ds.ptr, a.labels.c_str())) return report(st);
  }
  if (!a.edges_out.empty()) {
    if (auto st = hc_dataset_write_edges(ds.ptr, a.edges_out.c_str())) return report(st);
  }

  Seeds seeds;
  const hc_status seeded =
      a.sample.empty() ? hc_seeds_load(ds.ptr, a.seeds_file.c_str(), &seeds.ptr)
                       : hc_seeds_sample(ds.ptr, a.sample.c_str(), a.fraction, a.seed, &seeds.ptr);
  if (seeded) return report(seeded);

  hc_classify_options co;
  hc_classify_options_init(&co);
  co.variant = a.variant.c_str();
  if (a.max_iter) co.max_iterations = a.max_iter;
  if (a.tol >= 0.0) co.tolerance = a.tol;
  co.exact = a.exact;
  co.strict = a.strict;
  co.divide_weight = a.divide;
  co.threads = a.threads;

  Result res;
  if (auto st = hc_classify(ds.ptr, seeds.ptr, &co, &res.ptr)) return report(st);
  if (auto st = hc_result_write_csv(res.ptr, a.out.c_str())) return report(st);

  hc_summary s;
  hc_result_summary(res.ptr, &s);
  std::fprintf(stderr,
               "labels=%zu seeds=%zu predicted=%zu iterations=%zu residual=%.3g change=%.3g "
               "converged=%s wall_ms=%.3f\n",
               s.labels, s.seeds, s.predicted, s.max_iterations, s.max_residual, s.max_change,
               s.converged ? "yes" : "no", s.wall_ms);
  return 0;
}

int run_bench(const std::string& config, const std::string& out_dir) {
  char* summary = nullptr;
  int ok = 0;
  const hc_status st = hc_bench_run(config.c_str(), out_dir.c_str(), &summary, &ok);
  if (st) return report(st);
  std::cout << summary;
  hc_string_free(summary);
  if (!ok) {
    std::cerr << "error: some checks or repetitions failed (see " << out_dir << ")\n";
    return 2;
  }
  return 0;
}

struct OracleArgs {
  std::size_t K = 0;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> seeds;
  double p = 0.0;
  double q = 0.0;
  int hot = 1;
};

int run_oracle(const OracleArgs& a) {
  if (a.sizes.size() != a.K || a.seeds.size() != a.K) {
    std::cerr << "error: --sizes and --seeds need exactly K=" << a.K << " entries\n";
    return 1;
  }
  double mean = 0.0;
  std::vector<double> temps(a.K), deltas(a.K);
  if (auto st = hc_block_temperatures(a.K, a.sizes.data(), a.seeds.data(), a.p, a.q, a.hot, &mean,
                                      temps.data(), deltas.data())) {
    return report(st);
  }
  std::printf("hot %d\nmean %.17g\n", a.hot, mean);
  for (std::size_t k = 0; k < a.K; ++k) {
    std::printf("block %zu T %.17g delta %.17g\n", k + 1, temps[k], deltas[k]);
  }
  for (std::size_t h = 1; h <= a.K; ++h) {
    for (std::size_t o = 1; o <= a.K; ++o) {
      if (h == o) continue;
      int holds = 0;
      if (auto st = hc_vanilla_condition(a.K, a.sizes.data(), a.seeds.data(), a.p, a.q,
                                         static_cast<std::int32_t>(h),
                                         static_cast<std::int32_t>(o), &holds)) {
        return report(st);
      }
      std::printf("vanilla block %zu vs label %zu %s\n", h, o, holds ? "TRUE" : "FALSE");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-diffusion node classification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hc_version()));

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Classify the unlabeled nodes of a graph");
  classify->add_option("--graph", ca.graph, "Edge list: src dst [weight] per line")->required();
  classify->add_option("--labels", ca.labels, "Ground-truth labels: node label per line");
  classify->add_option("--seeds-file", ca.seeds_file, "Seeds: node label per line");
  classify->add_option("--sample", ca.sample, "Sample seeds from --labels")
      ->check(CLI::IsMember({"uniform", "degree", "balanced"}));
  classify->add_option("--fraction", ca.fraction, "Seed fraction for --sample")
      ->check(CLI::Range(0.0, 1.0));
  classify->add_option("--variant", ca.variant, "Scoring rule")
      ->check(CLI::IsMember({"vanilla", "weighted", "centered"}));
  classify->add_option("--max-iter", ca.max_iter, "Sweep limit (default 100)");
  classify->add_option("--tol", ca.tol, "Stop when the sup-norm change drops below (default 1e-9)");
  classify->add_option("--out", ca.out, "Output CSV, '-' for stdout");
  classify->add_option("--seed", ca.seed, "Master seed for --sample");
  classify->add_flag("--directed", ca.directed, "Edges are arcs; classify on source copies");
  classify->add_flag("--destination", ca.destination, "With --directed: use destination copies");
  classify->add_flag("--weighted", ca.weighted, "Read the third column as edge weight");
  classify->add_flag("--multi", ca.multi, "Allow several labels per node (first label is used)");
  classify->add_flag("--strict", ca.strict, "Exit 2 if a diffusion stops at --max-iter");
  classify->add_flag("--exact", ca.exact, "Dense direct solve instead of sweeps");
  classify->add_flag("--divide-weight", ca.divide, "Weighted variant divides by seed share");
  classify->add_option("--threads", ca.threads, "Worker threads (default HEATCLF_THREADS or all)");
  classify->add_option("--delimiter", ca.delimiter, "Input delimiter")
      ->check(CLI::IsMember({"auto", "tab", "comma", "space"}));
  classify->add_option("--write-edges", ca.edges_out, "Also re-emit the parsed edge list");

  std::string config, out_dir = "bench-out";
  bool list = false;
  auto* bench = app.add_subcommand("bench", "Run an experiment config");
  bench->add_option("--config", config, "Config file or bundled config name");
  bench->add_option("--out-dir", out_dir, "Directory for the CSV outputs");
  bench->add_flag("--list", list, "List bundled configs");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "Closed-form block model temperatures");
  oracle->add_option("--K", oa.K, "Number of blocks")->required()->check(CLI::PositiveNumber);
  oracle->add_option("--sizes", oa.sizes, "Block sizes")->required()->delimiter(',');
  oracle->add_option("--seeds", oa.seeds, "Seeds per block")->required()->delimiter(',');
  oracle->add_option("--p", oa.p, "Intra-block weight")->required();
  oracle->add_option("--q", oa.q, "Inter-block weight")->required();
  oracle->add_option("--hot", oa.hot, "Block whose seeds are hot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*classify) return run_classify(ca);
  if (*bench) {
    if (list) {
      for (const char* const* n = hc_bundled_configs(); *n; ++n) std::cout << *n << '\n';
      return 0;
    }
    if (config.empty()) {
      std::cerr << "error: --config is required\n";
      return 1;
    }
    return run_bench(config, out_dir);
  }
  return run_oracle(oa);
}
