#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "gvb/errors.hpp"
#include "gvb/manifest.hpp"
#include "gvb/png.hpp"
#include "gvb/taskgen.hpp"
#include "reference.hpp"

using namespace gvb;

namespace {

DatasetConfig only(int task, int replicates = 10) {
  DatasetConfig c;
  c.tasks = {task};
  c.replicates = replicates;
  return c;
}

std::vector<TaskInstance> gen(int task, const DatasetConfig& c) {
  return generate_task(task, c, Rng(c.seed));
}

}  // namespace

TEST_CASE("default counts per task") {
  DatasetConfig c;
  const int want[] = {560, 70, 30, 210, 30, 30, 60};
  int total = 0;
  for (int t = 1; t <= 7; ++t) {
    CHECK(expected_count(t, c) == want[t - 1]);
    total += expected_count(t, c);
  }
  CHECK(total == 990);
  c.task1.colors = {"uniform"};
  total = 0;
  for (int t = 1; t <= 7; ++t) total += expected_count(t, c);
  CHECK(expected_count(1, c) == 280);
  CHECK(total == 710);
}

TEST_CASE("tasks 2 to 7 generate the documented instances") {
  DatasetConfig c;
  for (int t = 2; t <= 7; ++t) {
    auto insts = gen(t, c);
    REQUIRE(static_cast<int>(insts.size()) == expected_count(t, c));
    std::set<std::string> ids;
    std::map<std::string, int> per_variant;
    for (const auto& inst : insts) {
      CHECK(inst.task == t);
      CHECK(task_of(inst.truth) == t);
      CHECK(verify_truth(inst).empty());
      ids.insert(inst.instance_id);
      ++per_variant[inst.variant];
      const bool pair = t == 7;
      if (inst.graph.node_count() <= 10) {
        CHECK(min_pairwise_distance(inst.positions) >= node_diameter_unit(inst.style, pair));
        if (inst.graph2) CHECK(min_pairwise_distance(inst.positions2) >= node_diameter_unit(*inst.style2, pair));
      }
    }
    CHECK(ids.size() == insts.size());
    for (const auto& [variant, n] : per_variant) CHECK(n == 10);
  }
}

TEST_CASE("task 1 grid") {
  auto c = only(1, 1);
  auto insts = gen(1, c);
  REQUIRE(insts.size() == 56);
  std::set<std::string> variants;
  for (const auto& inst : insts) {
    variants.insert(inst.variant);
    const auto& truth = std::get<CountsTruth>(inst.truth);
    CHECK(truth.nodes == 10);
    CHECK(truth.edges == static_cast<int>(inst.graph.edge_count()));
    const bool labeled = inst.variant.find("-labeled-") != std::string::npos;
    CHECK(inst.graph.labels().has_value() == labeled);
    CHECK(inst.style.show_labels == labeled);
    CHECK(inst.graph.directed() == (inst.variant.find("-directed-") != std::string::npos));
    if (inst.style.layout != LayoutKind::random)
      CHECK(min_pairwise_distance(inst.positions) >= node_diameter_unit(inst.style));
  }
  CHECK(variants.size() == 56);
  CHECK(variants.count("planar-labeled-directed-random") == 1);
}

TEST_CASE("task 2 classes hold") {
  for (const auto& inst : gen(2, only(2, 4))) {
    const auto cls = std::get<ClassTruth>(inst.truth).cls;
    CHECK(classify_check(inst.graph, cls));
    CHECK(inst.variant == to_string(cls));
    CHECK(inst.graph.node_count() >= 4);
  }
}

TEST_CASE("task 3 has exactly one bridge") {
  for (const auto& inst : gen(3, only(3))) {
    const auto& truth = std::get<CutEdgeTruth>(inst.truth);
    auto bridges = ref::brute_force_bridges(inst.graph);
    REQUIRE(bridges.size() == 1);
    CHECK(bridges[0] == std::pair<int, int>{truth.u, truth.v});
    CHECK(is_connected(inst.graph));
  }
}

TEST_CASE("task 4 census matches the pattern truth") {
  for (const auto& inst : gen(4, only(4, 3))) {
    const auto& truth = std::get<CensusTruth>(inst.truth);
    CHECK(component_census(inst.graph) == truth.census);
    int total = 0;
    for (const auto& [k, n] : truth.census) total += n;
    // a requested total below the number of kinds is raised to one pattern per kind
    const int requested = std::stoi(inst.variant.substr(inst.variant.find('/') + 1));
    CHECK(total == std::max(requested, static_cast<int>(truth.census.size())));
  }
}

TEST_CASE("task 5 misses exactly one edge") {
  for (const auto& inst : gen(5, only(5))) {
    const int n = inst.graph.node_count();
    CHECK(static_cast<int>(inst.graph.edge_count()) == n * (n - 1) / 2 - 1);
    const auto& truth = std::get<MissingEdgeTruth>(inst.truth);
    CHECK(non_adjacent_pairs(inst.graph) == std::vector<UndirectedEdge>{{truth.u, truth.v}});
  }
}

TEST_CASE("task 6 targets are reachable and paths optimal") {
  for (const auto& inst : gen(6, only(6))) {
    const auto& truth = std::get<PathTruth>(inst.truth);
    CHECK(truth.source == 0);
    CHECK(truth.target == inst.graph.node_count() - 1);
    auto want = ref::exhaustive_shortest_path(inst.graph, truth.source, truth.target);
    REQUIRE(want);
    CHECK(truth.path.nodes == want->nodes);
    CHECK(truth.path.total_weight == want->weight);
    CHECK(inst.style.weight_labels);
    for (const auto& e : inst.graph.edges()) {
      REQUIRE(e.weight);
      CHECK(*e.weight >= 1);
      CHECK(*e.weight <= 10);
    }
  }
}

TEST_CASE("task 7 non-matching pairs are mostly relabeled copies") {
  auto insts = gen(7, only(7));
  int nomatch = 0, relabeled = 0;
  for (const auto& inst : insts) {
    REQUIRE(inst.graph2);
    const bool match = std::get<MatchTruth>(inst.truth).match;
    CHECK(structural_equal(inst.graph, *inst.graph2) == match);
    CHECK(inst.style2);
    CHECK(inst.style2->color_scheme != inst.style.color_scheme);
    if (!match) {
      ++nomatch;
      if (inst.detail == "relabeled") {
        ++relabeled;
        CHECK(ref::isomorphic(inst.graph, *inst.graph2));
      }
    } else {
      CHECK(inst.detail == "identical");
    }
  }
  CHECK(nomatch == 30);
  CHECK(2 * relabeled >= nomatch);
}

TEST_CASE("generation is reproducible and thread independent") {
  auto c = only(4, 2);
  auto a = generate_task(4, c, Rng(c.seed), 1);
  auto b = generate_task(4, c, Rng(c.seed), 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_json(a[i]) == to_json(b[i]));
  auto other = generate_task(4, c, Rng(c.seed + 1), 1);
  CHECK(to_json(other[0]) != to_json(a[0]));
}

TEST_CASE("instance json round trip") {
  for (int t = 2; t <= 7; ++t) {
    auto insts = gen(t, only(t, 1));
    for (const auto& inst : insts) CHECK(to_json(instance_from_json(to_json(inst))) == to_json(inst));
  }
}

TEST_CASE("config parsing") {
  DatasetConfig c;
  CHECK(to_json(dataset_config_from_json(to_json(c))) == to_json(c));
  auto partial = dataset_config_from_json(nlohmann::json::parse(R"({"seed": 5, "task3": {"node_counts": [12]}})"));
  CHECK(partial.seed == 5);
  CHECK(partial.task3.node_counts == std::vector<int>{12});
  CHECK(partial.replicates == 10);
  CHECK_THROWS_AS(dataset_config_from_json(nlohmann::json::parse(R"({"sed": 5})")), ConfigError);
  CHECK_THROWS_AS(dataset_config_from_json(nlohmann::json::parse(R"({"task6": {"wieght_max": 5}})")),
                  ConfigError);
  c.replicates = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.task1.layouts = {"spiral"};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.tasks = {8};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.task7.relabeled_fraction = 1.5;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("dataset on disk verifies") {
  DatasetConfig c;
  c.replicates = 1;
  c.tasks = {2, 5, 7};
  auto dir = ref::temp_dir("gvb_taskgen");
  auto rows = generate_dataset(c, dir, 2);
  CHECK(rows.size() == 7 + 3 + 6);
  auto back = read_manifest(manifest_path(dir));
  REQUIRE(back.size() == rows.size());
  auto report = verify_dataset(back, dir, 2);
  CHECK(report.checked == rows.size());
  CHECK(report.ok());
  for (const auto& r : back) {
    auto png = decode_png(read_file_bytes(dir / r.image_path));
    CHECK(png.width == 600);
    CHECK(png.height == 600);
    CHECK(std::filesystem::exists(dir / r.svg_path));
  }
  // tamper with one image
  auto raster = decode_png(read_file_bytes(dir / back[0].image_path));
  raster.rgb[0] ^= 0x55;
  write_file(dir / back[0].image_path, encode_png(raster));
  CHECK_FALSE(verify_dataset(back, dir, 1).ok());
  std::filesystem::remove_all(dir);
}
