#include <fstream>

#include "doctest.h"
#include "gvb/errors.hpp"
#include "gvb/eval_client.hpp"
#include "gvb/manifest.hpp"
#include "gvb/scoring.hpp"
#include "reference.hpp"

using namespace gvb;

namespace {

std::vector<nlohmann::json> fixtures() {
  return read_jsonl(std::filesystem::path(GVB_FIXTURES_DIR) / "model_outputs.jsonl");
}

}  // namespace

TEST_CASE("nmae worked examples") {
  CHECK(nmae({10, 10, 10}, {10, 9, 10}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(nmae({16, 18, 20}, {23, 18, 20}) == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
  CHECK(nmae({1, 2}, {1, 2}) == 1.0);
  CHECK(nmae({0, 1}, {5, 6}) == 0.0);
  CHECK_THROWS_AS(nmae({}, {}), ParameterError);
  CHECK_THROWS_AS(nmae({1}, {1, 2}), ParameterError);
}

TEST_CASE("nmae stays in range and ignores a common shift") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 12));
    std::vector<double> t, p, ts, ps;
    const double shift = rng.uniform(-50, 50);
    for (int i = 0; i < n; ++i) {
      t.push_back(static_cast<double>(rng.uniform_int(0, 40)));
      p.push_back(static_cast<double>(rng.uniform_int(0, 40)));
      ts.push_back(t.back() + shift);
      ps.push_back(p.back() + shift);
    }
    const double v = nmae(t, p);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(nmae(ts, ps) == doctest::Approx(v).epsilon(1e-9));
    CHECK(nmae(t, t) == 1.0);
  }
}

TEST_CASE("score_counts components") {
  auto s = score_counts({{{10, 16}, CountsAnswer{10, 23}},
                         {{10, 18}, CountsAnswer{9, 18}},
                         {{10, 20}, CountsAnswer{10, 20}}});
  CHECK(s.nodes == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(s.edges == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
  CHECK(s.value == doctest::Approx((2.0 / 3.0 + 5.0 / 12.0) / 2).epsilon(1e-12));
  auto missing = score_counts({{{10, 20}, std::nullopt}});
  CHECK(missing.value == 0.0);
}

TEST_CASE("jaccard") {
  CHECK(score_path({1, 2, 4, 6}, {1, 5, 6}) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(score_path({1, 5, 6}, {1, 2, 4, 6}) == score_path({1, 2, 4, 6}, {1, 5, 6}));
  CHECK(score_path({6, 5, 1, 1}, {1, 5, 6}) == 1.0);
  CHECK(score_path({}, {}) == 1.0);
  CHECK(score_path({}, {1}) == 0.0);
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<NodeId> a, b;
    for (int k = 0, n = static_cast<int>(rng.uniform_int(0, 6)); k < n; ++k) a.push_back(static_cast<int>(rng.uniform_int(0, 8)));
    for (int k = 0, n = static_cast<int>(rng.uniform_int(0, 6)); k < n; ++k) b.push_back(static_cast<int>(rng.uniform_int(0, 8)));
    const double j = score_path(a, b);
    CHECK(j == score_path(b, a));
    CHECK(j >= 0.0);
    CHECK(j <= 1.0);
  }
}

TEST_CASE("partial credit rules") {
  auto parsed = [](int task, const std::string& text) { return parse_response(task, text); };
  const GroundTruth t5 = MissingEdgeTruth{3, 5};
  CHECK(score_accuracy(5, parsed(5, R"({"nodes_prediction": [5, 3]})"), t5) == 1.0);
  CHECK(score_accuracy(5, parsed(5, R"({"nodes_prediction": [3, 6]})"), t5) == 0.5);
  CHECK(score_accuracy(5, parsed(5, R"({"nodes_prediction": [0, 1]})"), t5) == 0.0);
  const GroundTruth t2 = ClassTruth{GraphClass::mesh};
  CHECK(score_accuracy(2, parsed(2, R"({"type_graph": "planar"})"), t2) == 0.5);
  CHECK(score_accuracy(2, parsed(2, R"({"type_graph": "Mesh graph"})"), t2) == 1.0);
  CHECK(score_accuracy(2, parsed(2, R"({"type_graph": "tree"})"), t2) == 0.0);
  const GroundTruth t4 = CensusTruth{{{PatternKind::chain, 1}, {PatternKind::star, 2}}};
  CHECK(score_accuracy(4, parsed(4, R"({"pattern": "star, chain", "number_of_patterns": 3})"), t4) == 1.0);
  CHECK(score_accuracy(4, parsed(4, R"({"pattern": "chains and stars", "number_of_patterns": 2})"), t4) == 0.5);
  CHECK(score_accuracy(4, parsed(4, R"({"pattern": "star", "number_of_patterns": 3})"), t4) == 0.0);
  const GroundTruth t7 = MatchTruth{false};
  CHECK(score_accuracy(7, parsed(7, R"({"match": "No"})"), t7) == 1.0);
  CHECK(score_accuracy(7, parsed(7, R"({"match": true})"), t7) == 0.0);
  CHECK(score_accuracy(7, parsed(7, "no idea"), t7) == 0.0);
  CHECK_THROWS_AS(score_accuracy(6, parsed(6, R"({"shortest_path": []})"), PathTruth{}), ParameterError);
}

TEST_CASE("parse statuses") {
  CHECK(parse_response(1, R"({"total_nodes": 3, "total_edges": 2})").status == ParseStatus::ok);
  auto fenced = parse_response(1, "Here you go:\n```json\n{\"total_nodes\": 3, \"total_edges\": \"2\"}\n```");
  CHECK(fenced.status == ParseStatus::recovered);
  CHECK(std::get<CountsAnswer>(*fenced.answer) == CountsAnswer{3, 2});
  auto lenient = parse_response(4, "{'pattern': 'clique', 'number_of_patterns': 2,}");
  CHECK(lenient.status == ParseStatus::recovered);
  CHECK(std::get<PatternAnswer>(*lenient.answer).count == 2);
  auto edge = parse_response(3, R"x({"cut_edge": "(4, 11)"})x");
  CHECK(std::get<EdgeAnswer>(*edge.answer) == EdgeAnswer{4, 11});
  auto missing = parse_response(1, R"({"total_nodes": 3})");
  CHECK(missing.status == ParseStatus::failed);
  CHECK_FALSE(missing.answer);
  CHECK(parse_response(2, R"({"type_graph": "hypercube"})").status == ParseStatus::failed);
  CHECK(parse_response(6, "").status == ParseStatus::failed);
  CHECK(parse_response(7, "[1, 2]").status == ParseStatus::failed);
  CHECK(parse_status_from_string(to_string(ParseStatus::recovered)) == ParseStatus::recovered);
}

TEST_CASE("parser never throws on arbitrary text") {
  Rng rng(77);
  const std::string alphabet = "{}[]\"':,`0123456789abc nulltrue\n\\-.";
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    const int len = static_cast<int>(rng.uniform_int(0, 60));
    for (int k = 0; k < len; ++k) s += alphabet[rng.uniform_int(0, static_cast<std::int64_t>(alphabet.size() - 1))];
    const int task = static_cast<int>(rng.uniform_int(1, 7));
    ParsedAnswer p;
    CHECK_NOTHROW(p = parse_response(task, s));
    CHECK((p.status == ParseStatus::failed) == !p.answer.has_value());
  }
}

TEST_CASE("model output fixtures parse and score as marked") {
  const auto rows = fixtures();
  REQUIRE(rows.size() == 17);
  for (const auto& row : rows) {
    INFO(row["name"].get<std::string>());
    const int task = row["task"];
    auto parsed = parse_response(task, row["text"].get<std::string>());
    CHECK(to_string(parsed.status) == row["status"].get<std::string>());
    REQUIRE(parsed.answer);
    for (const auto& [k, v] : row["payload"].items()) CHECK(parsed.payload.at(k) == v);
    const GroundTruth truth = truth_from_json(row["truth"]);
    if (task == 1) {
      const auto& t = std::get<CountsTruth>(truth);
      const auto& a = std::get<CountsAnswer>(*parsed.answer);
      CHECK(a.nodes == row["payload"]["total_nodes"]);
      CHECK(a.edges == row["payload"]["total_edges"]);
      if (row["name"] == "t1-spectral-claude") {
        CHECK(t.nodes - a.nodes == 1);
        CHECK(t.edges - a.edges == 6);
      }
    } else if (task == 6) {
      const auto& p = std::get<PathAnswer>(*parsed.answer);
      CHECK(score_path(p.nodes, std::get<PathTruth>(truth).path.nodes) ==
            doctest::Approx(row["value"].get<double>()).epsilon(1e-12));
    } else {
      CHECK(score_accuracy(task, parsed, truth) == row["value"].get<double>());
    }
  }
}

TEST_CASE("score records round trip and strict dims") {
  ScoreRecord r;
  r.instance_id = "t1-x-00";
  r.model_id = "m";
  r.strategy = "cot";
  r.task = 1;
  r.metric = Metric::nmae;
  r.value = 0.5;
  r.parse_status = ParseStatus::recovered;
  r.group = "spring-labeled-directed-uniform";
  r.layout = "spring";
  r.labels = "labeled";
  r.node_count = "10";
  r.node_nmae = 0.25;
  r.edge_nmae = 0.75;
  r.answer = {{"total_nodes", 3}};
  auto back = score_record_from_json(to_json(r));
  CHECK(to_json(back) == to_json(r));
  CHECK(back.dim("model") == "m");
  CHECK(back.dim("task") == "1");
  CHECK(back.dim("layout") == "spring");
  CHECK(back.dim("class").empty());
  CHECK_THROWS_AS(back.dim("colour"), ParameterError);
  CHECK(metric_for_task(1) == Metric::nmae);
  CHECK(metric_for_task(6) == Metric::jaccard);
  CHECK(metric_for_task(3) == Metric::accuracy);
}

TEST_CASE("score_responses maps labels and groups task 1") {
  DatasetConfig c;
  c.replicates = 2;
  auto t5 = generate_task(5, c, Rng(c.seed));
  std::vector<RawResponse> responses;
  for (std::size_t i = 0; i < t5.size(); ++i) {
    const auto& truth = std::get<MissingEdgeTruth>(t5[i].truth);
    const auto& g = t5[i].graph;
    RawResponse r;
    r.instance_id = t5[i].instance_id;
    r.model_id = "m";
    r.strategy = "zero_shot";
    r.http_status = 200;
    const int other = (truth.v + 1) % g.node_count() == truth.u ? (truth.v + 2) % g.node_count()
                                                                  : (truth.v + 1) % g.node_count();
    const int second = i % 2 == 0 ? truth.v : other;
    r.text = "{\"nodes_prediction\": [" + g.label_of(truth.u) + ", " + g.label_of(second) + "]}";
    responses.push_back(r);
  }
  responses.pop_back();  // one instance unanswered
  auto recs = score_responses(t5, responses);
  REQUIRE(recs.size() == t5.size());
  double sum = 0;
  for (const auto& r : recs) sum += r.value;
  CHECK(recs.back().parse_status == ParseStatus::failed);
  CHECK(recs.back().value == 0.0);
  CHECK(sum == doctest::Approx(3 * 1.0 + 2 * 0.5));

  auto t1 = generate_task(1, [] {
    DatasetConfig d;
    d.replicates = 3;
    d.task1.layouts = {"circular"};
    d.task1.labels = {true};
    d.task1.directed = {false};
    d.task1.colors = {"uniform"};
    return d;
  }(), Rng(1));
  REQUIRE(t1.size() == 3);
  std::vector<RawResponse> r1;
  for (const auto& inst : t1) {
    const auto& t = std::get<CountsTruth>(inst.truth);
    r1.push_back({inst.instance_id, "cot", "m", "{\"total_nodes\": " + std::to_string(t.nodes) +
                  ", \"total_edges\": " + std::to_string(t.edges) + "}", 1.0, 200, 1, ""});
  }
  auto s1 = score_responses(t1, r1);
  for (const auto& s : s1) {
    CHECK(s.value == 1.0);
    CHECK(s.node_nmae == 1.0);
    CHECK(s.metric == Metric::nmae);
  }
}

TEST_CASE("scores on disk") {
  auto dir = ref::temp_dir("gvb_scores");
  ScoreRecord a;
  a.instance_id = "a";
  a.model_id = "org/model:free";
  a.strategy = "cot";
  a.task = 2;
  a.value = 1;
  ScoreRecord b = a;
  b.strategy = "zero_shot";
  b.value = 0.5;
  auto files = write_scores(dir, {a, b});
  CHECK(files.size() == 2);
  auto all = read_all_scores(dir);
  REQUIRE(all.size() == 2);
  CHECK(to_json(all[0]) == to_json(a));
  CHECK(to_json(all[1]) == to_json(b));
  std::filesystem::remove_all(dir);
}
