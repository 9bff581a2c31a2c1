#include "heatclf/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "heatclf/error.hpp"

namespace heatclf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto end = value.find(',', pos);
    const auto item = trim(value.substr(pos, end - pos));
    if (!item.empty()) out.push_back(item);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value,
                            const std::string& expected) {
  fail("config key '" + key + "': invalid value '" + std::string(value) + "' (expected " +
       expected + ")");
}

double to_double(const std::string& key, std::string_view v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return x;
}

std::uint64_t to_unsigned(const std::string& key, std::string_view v) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "a non-negative integer");
  return x;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "true or false");
}

std::vector<std::size_t> to_counts(const std::string& key, std::string_view v) {
  std::vector<std::size_t> out;
  for (const auto item : split_list(v)) out.push_back(to_unsigned(key, item));
  if (out.empty()) bad_value(key, v, "a comma-separated list of counts");
  return out;
}

/// `1,2,5` or the inclusive range `1:10` / `1:10:0.5`.
std::vector<double> to_values(const std::string& key, std::string_view v) {
  if (v.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::size_t pos = 0;
    for (;;) {
      const auto end = v.find(':', pos);
      parts.push_back(to_double(key, trim(v.substr(pos, end - pos))));
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) bad_value(key, v, "start:stop[:step]");
    const double step = parts.size() == 3 ? parts[2] : 1.0;
    if (!(step > 0.0) || parts[1] < parts[0]) bad_value(key, v, "start <= stop and step > 0");
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
      const double x = parts[0] + static_cast<double>(i) * step;
      if (x > parts[1] + 1e-9 * step) break;
      out.push_back(x);
    }
    return out;
  }
  std::vector<double> out;
  for (const auto item : split_list(v)) out.push_back(to_double(key, item));
  if (out.empty()) bad_value(key, v, "a list of values or a start:stop range");
  return out;
}

char to_delimiter(const std::string& key, std::string_view v) {
  if (v == "auto") return '\0';
  if (v == "tab") return '\t';
  if (v == "comma") return ',';
  if (v == "space") return ' ';
  bad_value(key, v, "auto, tab, comma or space");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text, const std::string& base_dir) {
  std::map<std::string, std::string> entries;
  std::vector<std::string> unknown;
  static const std::set<std::string> kKeys = {
      "name",        "task",         "source",         "sizes",          "seeds",
      "p",           "q",            "total_nodes",    "total_seeds",    "edges",
      "labels",      "directed",     "weighted",       "role",           "multi",
      "delimiter",   "policy",       "fraction",       "counts",         "variants",
      "repetitions", "seed",         "threads",        "record_timing",  "max_iter",
      "tol",         "mode",         "weighted_scaling", "sweep",        "sweep_values",
      "top_labels",  "grid_points",  "grid_max_nodes", "grid_tolerance",
  };

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      fail("config line " + std::to_string(line_number) + ": expected 'key = value'");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    if (!kKeys.count(key)) {
      unknown.push_back(key + " (line " + std::to_string(line_number) + ")");
      continue;
    }
    if (!entries.emplace(key, value).second) {
      fail("config key '" + key + "' given more than once (line " +
           std::to_string(line_number) + ")");
    }
  }
  if (!unknown.empty()) {
    std::string list;
    for (std::size_t k = 0; k < unknown.size(); ++k) list += (k ? ", " : "") + unknown[k];
    fail("unknown config keys: " + list);
  }

  ExperimentConfig cfg;
  const auto get = [&](const std::string& key) -> const std::string* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  const auto with = [&](const std::string& key, const std::function<void(const std::string&)>& f) {
    if (const auto* v = get(key)) f(*v);
  };

  with("name", [&](const std::string& v) { cfg.name = v; });
  with("task", [&](const std::string& v) {
    if (v == "multiclass") cfg.task = Task::Multiclass;
    else if (v == "binary_per_label") cfg.task = Task::BinaryPerLabel;
    else if (v == "lemma_grid") cfg.task = Task::LemmaGrid;
    else if (v == "theorem_grid") cfg.task = Task::TheoremGrid;
    else bad_value("task", v, "multiclass, binary_per_label, lemma_grid or theorem_grid");
  });
  with("source", [&](const std::string& v) {
    if (v == "sbm") cfg.source = SourceKind::Sbm;
    else if (v == "block") cfg.source = SourceKind::Block;
    else if (v == "dataset") cfg.source = SourceKind::Dataset;
    else bad_value("source", v, "sbm, block or dataset");
  });
  with("sizes", [&](const std::string& v) { cfg.block.sizes = to_counts("sizes", v); });
  with("seeds", [&](const std::string& v) { cfg.block.seed_counts = to_counts("seeds", v); });
  with("p", [&](const std::string& v) { cfg.block.p = to_double("p", v); });
  with("q", [&](const std::string& v) { cfg.block.q = to_double("q", v); });
  with("total_nodes", [&](const std::string& v) { cfg.total_nodes = to_unsigned("total_nodes", v); });
  with("total_seeds", [&](const std::string& v) { cfg.total_seeds = to_unsigned("total_seeds", v); });

  with("policy", [&](const std::string& v) { cfg.policy.kind = parse_sampling_kind(v); });
  with("fraction", [&](const std::string& v) { cfg.policy.fraction = to_double("fraction", v); });
  with("counts", [&](const std::string& v) { cfg.policy.counts = to_counts("counts", v); });
  if (!get("policy") && cfg.source != SourceKind::Dataset) {
    cfg.policy.kind = SamplingKind::ExplicitCounts;
  }
  with("variants", [&](const std::string& v) {
    cfg.variants.clear();
    for (const auto item : split_list(v)) cfg.variants.push_back(parse_variant(item));
  });
  with("repetitions", [&](const std::string& v) { cfg.repetitions = to_unsigned("repetitions", v); });
  with("seed", [&](const std::string& v) { cfg.master_seed = to_unsigned("seed", v); });
  with("threads", [&](const std::string& v) { cfg.threads = to_unsigned("threads", v); });
  with("record_timing", [&](const std::string& v) { cfg.record_timing = to_bool("record_timing", v); });
  with("max_iter", [&](const std::string& v) {
    cfg.classify.solver.max_iterations = to_unsigned("max_iter", v);
  });
  with("tol", [&](const std::string& v) { cfg.classify.solver.tolerance = to_double("tol", v); });
  with("mode", [&](const std::string& v) {
    if (v == "iterative") cfg.classify.solver.mode = SolverMode::Iterative;
    else if (v == "exact") cfg.classify.solver.mode = SolverMode::Exact;
    else bad_value("mode", v, "iterative or exact");
  });
  with("weighted_scaling", [&](const std::string& v) {
    if (v == "multiply") cfg.classify.weighted_scaling = WeightedScaling::Multiply;
    else if (v == "divide") cfg.classify.weighted_scaling = WeightedScaling::Divide;
    else bad_value("weighted_scaling", v, "multiply or divide");
  });
  with("sweep", [&](const std::string& v) {
    if (v == "none") cfg.sweep = SweepAxis::None;
    else if (v == "seed_ratio") cfg.sweep = SweepAxis::SeedRatio;
    else if (v == "size_ratio") cfg.sweep = SweepAxis::SizeRatio;
    else if (v == "dominant_boost") cfg.sweep = SweepAxis::DominantBoost;
    else bad_value("sweep", v, "none, seed_ratio, size_ratio or dominant_boost");
  });
  with("sweep_values", [&](const std::string& v) { cfg.sweep_values = to_values("sweep_values", v); });
  with("top_labels", [&](const std::string& v) { cfg.top_labels = to_unsigned("top_labels", v); });
  with("grid_points", [&](const std::string& v) { cfg.grid_points = to_unsigned("grid_points", v); });
  with("grid_max_nodes", [&](const std::string& v) {
    cfg.grid_max_nodes = to_unsigned("grid_max_nodes", v);
  });
  with("grid_tolerance", [&](const std::string& v) {
    cfg.grid_tolerance = to_double("grid_tolerance", v);
  });

  if (cfg.source == SourceKind::Dataset && cfg.task != Task::LemmaGrid &&
      cfg.task != Task::TheoremGrid) {
    const auto* edges = get("edges");
    const auto* labels = get("labels");
    if (!edges || !labels) fail("dataset source needs both 'edges' and 'labels'");
    const auto resolve = [&](const std::string& path) {
      const std::filesystem::path p(path);
      return p.is_absolute() ? p.string() : (std::filesystem::path(base_dir) / p).string();
    };
    EdgeListOptions eopts;
    LabelFileOptions lopts;
    with("directed", [&](const std::string& v) { eopts.directed = to_bool("directed", v); });
    with("weighted", [&](const std::string& v) { eopts.weighted = to_bool("weighted", v); });
    with("role", [&](const std::string& v) {
      if (v == "source") eopts.role = CopyRole::Source;
      else if (v == "destination") eopts.role = CopyRole::Destination;
      else bad_value("role", v, "source or destination");
    });
    with("delimiter", [&](const std::string& v) {
      eopts.delimiter = to_delimiter("delimiter", v);
      lopts.delimiter = eopts.delimiter;
    });
    with("multi", [&](const std::string& v) { lopts.multi = to_bool("multi", v); });
    if (cfg.task == Task::BinaryPerLabel) lopts.multi = true;
    auto bundle = std::make_shared<DatasetBundle>(load_edge_list(resolve(*edges), eopts));
    load_labels(*bundle, resolve(*labels), lopts);
    cfg.dataset = std::move(bundle);
  } else {
    for (const char* key : {"edges", "labels", "directed", "weighted", "role", "multi", "delimiter"}) {
      if (get(key)) fail(std::string("config key '") + key + "' only applies to dataset sources");
    }
  }
  if (cfg.task == Task::BinaryPerLabel && !get("policy")) cfg.policy.kind = SamplingKind::Balanced;

  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open config '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_experiment_config(text.str(), dir.empty() ? "." : dir.string());
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

BenchOutcome run_bench(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail_io("cannot create output directory '" + out_dir + "': " + ec.message());
  const std::filesystem::path dir(out_dir);
  BenchOutcome outcome;
  std::ostringstream summary;

  if (cfg.task == Task::LemmaGrid || cfg.task == Task::TheoremGrid) {
    const GridReport report =
        cfg.task == Task::LemmaGrid
            ? run_lemma_grid(random_block_params(cfg.grid_points, cfg.grid_max_nodes, cfg.master_seed),
                             cfg.grid_tolerance)
            : run_theorem_grid(theorem_grid_params(cfg.grid_points));
    auto out = open_output(dir / "grid.csv");
    report.write_csv(out);
    outcome.ok = report.passed();
    std::size_t failing = 0;
    for (const auto& r : report.rows) failing += !r.pass;
    summary << cfg.name << ": " << to_string(cfg.task) << " " << report.rows.size() << " checks, "
            << failing << " failing, worst error " << format_double(report.worst())
            << " (tolerance " << format_double(report.tolerance) << ")\n";
    outcome.summary = summary.str();
    return outcome;
  }

  const ResultTable table = run_experiment(cfg);
  {
    auto out = open_output(dir / "results.csv");
    table.write_csv(out);
  }
  {
    auto out = open_output(dir / "aggregate.csv");
    table.write_aggregate_csv(out);
  }
  if (!table.failures.empty()) {
    auto out = open_output(dir / "failures.csv");
    table.write_failures_csv(out);
    outcome.ok = false;
  } else {
    std::filesystem::remove(dir / "failures.csv", ec);
  }
  for (const auto& a : table.aggregates()) {
    summary << cfg.name << ": " << to_string(a.variant) << " sweep=" << format_double(a.sweep)
            << " macro_f1=" << format_double(a.mean) << " +- " << format_double(a.std) << " (n="
            << a.count << ")\n";
  }
  if (!table.failures.empty()) {
    summary << cfg.name << ": " << table.failures.size() << " failed run(s), see failures.csv\n";
  }
  outcome.summary = summary.str();
  return outcome;
}

}  // namespace heatclf
