#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "doctest.h"
#include "heatclf/heatclf.h"

namespace fs = std::filesystem;

namespace {

const std::string kData = HEATCLF_TEST_DATA;

hc_dataset* load_karate() {
  hc_load_options o;
  hc_load_options_init(&o);
  hc_dataset* ds = nullptr;
  REQUIRE(hc_dataset_load((kData + "/karate/edges.tsv").c_str(), &o, &ds) == HC_OK);
  return ds;
}

std::map<std::string, std::string> read_truth(const std::string& path) {
  std::ifstream in(path);
  std::map<std::string, std::string> out;
  std::string node, label;
  while (in >> node >> label) out[node] = label;
  return out;
}

}  // namespace

TEST_CASE("version and bundled configs") {
  CHECK(std::string(hc_version()).size() > 0);
  const char* const* names = hc_bundled_configs();
  bool lemma = false;
  for (; *names; ++names) lemma = lemma || std::string(*names) == "lemma-grid";
  CHECK(lemma);
}

TEST_CASE("karate: two seeds, centered, one miss") {
  hc_dataset* ds = load_karate();
  CHECK(hc_dataset_node_count(ds) == 34);
  CHECK(hc_dataset_graph_node_count(ds) == 34);
  CHECK(hc_dataset_edge_count(ds) == 78);

  hc_seeds* seeds = nullptr;
  REQUIRE(hc_seeds_load(ds, (kData + "/karate/seeds.tsv").c_str(), &seeds) == HC_OK);
  CHECK(hc_seeds_size(seeds) == 2);
  CHECK(hc_dataset_label_count(ds) == 2);

  hc_classify_options co;
  hc_classify_options_init(&co);
  hc_result* r = nullptr;
  REQUIRE(hc_classify(ds, seeds, &co, &r) == HC_OK);
  hc_summary s;
  REQUIRE(hc_result_summary(r, &s) == HC_OK);
  CHECK(s.seeds == 2);
  CHECK(s.predicted == 32);
  CHECK(s.converged == 1);
  REQUIRE(hc_result_row_count(r) == 32);

  const auto truth = read_truth(kData + "/karate/labels.tsv");
  int wrong = 0;
  for (size_t i = 0; i < hc_result_row_count(r); ++i) {
    const char* node = nullptr;
    const char* label = nullptr;
    double conf = 0.0;
    REQUIRE(hc_result_row(r, i, &node, &label, &conf) == HC_OK);
    CHECK(conf >= 0.0);
    wrong += truth.at(node) != label;
  }
  CHECK(wrong == 1);

  const fs::path csv = fs::temp_directory_path() / "hc_c_api_karate.csv";
  REQUIRE(hc_result_write_csv(r, csv.string().c_str()) == HC_OK);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "node_id,label,confidence");
  fs::remove(csv);

  const char* node = nullptr;
  const char* label = nullptr;
  double conf = 0.0;
  CHECK(hc_result_row(r, 32, &node, &label, &conf) == HC_ERR_INVALID);

  hc_result_free(r);
  hc_seeds_free(seeds);
  hc_dataset_free(ds);
}

TEST_CASE("sampling needs labels; strict non-convergence is numerical") {
  hc_dataset* ds = load_karate();
  hc_seeds* seeds = nullptr;
  CHECK(hc_seeds_sample(ds, "uniform", 0.2, 1, &seeds) == HC_ERR_INVALID);
  CHECK(std::string(hc_last_error()).size() > 0);

  REQUIRE(hc_dataset_load_labels(ds, (kData + "/karate/labels.tsv").c_str()) == HC_OK);
  CHECK(hc_seeds_sample(ds, "bogus", 0.2, 1, &seeds) == HC_ERR_INVALID);
  REQUIRE(hc_seeds_sample(ds, "balanced", 0.2, 1, &seeds) == HC_OK);
  CHECK(hc_seeds_size(seeds) == 7);

  hc_classify_options co;
  hc_classify_options_init(&co);
  co.max_iterations = 2;
  co.strict = 1;
  hc_result* r = nullptr;
  CHECK(hc_classify(ds, seeds, &co, &r) == HC_ERR_NUMERICAL);
  CHECK(r == nullptr);

  co.strict = 0;
  REQUIRE(hc_classify(ds, seeds, &co, &r) == HC_OK);
  hc_summary s;
  hc_result_summary(r, &s);
  CHECK(s.converged == 0);
  CHECK(s.max_iterations == 2);
  hc_result_free(r);

  co.variant = "nope";
  CHECK(hc_classify(ds, seeds, &co, &r) == HC_ERR_INVALID);

  hc_seeds_free(seeds);
  hc_dataset_free(ds);
}

TEST_CASE("io and argument errors") {
  hc_dataset* ds = nullptr;
  CHECK(hc_dataset_load("/nonexistent/edges.tsv", nullptr, &ds) == HC_ERR_IO);
  CHECK(ds == nullptr);
  CHECK(hc_dataset_load(nullptr, nullptr, &ds) == HC_ERR_INVALID);
  hc_dataset_free(nullptr);
  hc_seeds_free(nullptr);
  hc_result_free(nullptr);
}

TEST_CASE("block temperatures: worked example") {
  const size_t sizes[] = {2, 2};
  const size_t seeds[] = {1, 1};
  double mean = 0.0, per[2], delta[2];
  REQUIRE(hc_block_temperatures(2, sizes, seeds, 2.0, 1.0, 1, &mean, per, delta) == HC_OK);
  CHECK(std::abs(mean - 0.5) <= 1e-12);
  CHECK(std::abs(per[0] - 0.6) <= 1e-12);
  CHECK(std::abs(per[1] - 0.4) <= 1e-12);
  CHECK(std::abs(delta[0] - 0.1) <= 1e-12);

  int holds = -1;
  const size_t big[] = {50, 50};
  const size_t asym[] = {10, 2};
  REQUIRE(hc_vanilla_condition(2, big, asym, 2.0, 1.0, 2, 1, &holds) == HC_OK);
  CHECK(holds == 0);
  REQUIRE(hc_vanilla_condition(2, big, asym, 2.0, 1.0, 1, 2, &holds) == HC_OK);
  CHECK(holds == 1);

  CHECK(hc_block_temperatures(2, sizes, seeds, 2.0, 1.0, 3, &mean, per, delta) == HC_ERR_INVALID);
  const size_t too_many[] = {3, 2};
  CHECK(hc_block_temperatures(2, sizes, too_many, 2.0, 1.0, 1, &mean, per, delta) == HC_ERR_INVALID);
}

TEST_CASE("bench: bundled lemma grid") {
  const fs::path dir = fs::temp_directory_path() / "hc_c_api_bench";
  fs::remove_all(dir);
  char* summary = nullptr;
  int ok = 0;
  REQUIRE(hc_bench_run("lemma-grid", dir.string().c_str(), &summary, &ok) == HC_OK);
  CHECK(ok == 1);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).size() > 0);
  hc_string_free(summary);
  CHECK(fs::exists(dir / "grid.csv"));
  fs::remove_all(dir);
  CHECK(hc_bench_run("no-such-config", dir.string().c_str(), &summary, &ok) == HC_ERR_IO);
}
