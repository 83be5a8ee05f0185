// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.
#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "gvb/cli.hpp"
#include "gvb/eval_client.hpp"
#include "gvb/generators.hpp"
#include "gvb/layout.hpp"
#include "gvb/manifest.hpp"
#include "gvb/oracles.hpp"
#include "gvb/png.hpp"
#include "gvb/report.hpp"
#include "gvb/scoring.hpp"
#include "gvb/taskgen.hpp"
#include "reference.hpp"

using namespace gvb;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void guarded(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    report(id, title, ok, detail);
  } catch (const std::exception& e) {
    report(id, title, false, std::string("exception: ") + e.what());
  }
}

int cli_run(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  if (code != 0) std::cerr << err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++n;
  return n;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  const fs::path work = ref::temp_dir("gvb_acceptance");
  const fs::path run_a = work / "a", run_b = work / "b";
  std::vector<TaskInstance> manifest;

  guarded(1, "dataset distribution", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    if (cli_run({"generate", "--out", run_a.string()}) != 0) return std::pair{false, std::string("generate failed")};
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest = read_manifest(manifest_path(run_a));
    std::map<int, int> per_task;
    int bad_size = 0;
    for (const auto& inst : manifest) {
      ++per_task[inst.task];
      const auto png = decode_png(read_file_bytes(run_a / inst.image_path));
      if (png.width != 600 || png.height != 600) ++bad_size;
    }
    const std::map<int, int> want{{1, 560}, {2, 70}, {3, 30}, {4, 210}, {5, 30}, {6, 30}, {7, 60}};
    std::string counts;
    for (auto [t, n] : per_task) counts += (counts.empty() ? "" : "/") + std::to_string(n);
    const bool ok = per_task == want && manifest.size() == 990 && bad_size == 0 && secs < 120.0;
    return std::pair{ok, counts + " = " + std::to_string(manifest.size()) + " instances, " +
                             std::to_string(bad_size) + " not 600x600, " + fmt(secs) + " s"};
  });

  guarded(2, "bridge oracle equivalence", [] {
    Rng meta(2002);
    int mismatches = 0, total_bridges = 0;
    for (int i = 0; i < 500; ++i) {
      const int n = static_cast<int>(meta.uniform_int(1, 30));
      Rng rng(meta.next_u64());
      Graph g = random_graph(n, meta.uniform(0.03, 0.35), false, std::nullopt, rng);
      const auto got = find_bridges(g);
      total_bridges += static_cast<int>(got.size());
      if (got != ref::brute_force_bridges(g)) ++mismatches;
    }
    return std::pair{mismatches == 0, "500 graphs, " + std::to_string(total_bridges) + " bridges, " +
                                          std::to_string(mismatches) + " mismatches"};
  });

  guarded(3, "shortest path oracle equivalence", [] {
    Rng meta(3003);
    int mismatches = 0, reachable = 0;
    for (int i = 0; i < 500; ++i) {
      const int n = static_cast<int>(meta.uniform_int(2, 7));
      Rng rng(meta.next_u64());
      Graph g = random_graph(n, meta.uniform(0.2, 0.8), meta.bernoulli(0.25), WeightRange{1, 10}, rng);
      const int s = static_cast<int>(meta.uniform_int(0, n - 1));
      const int t = static_cast<int>(meta.uniform_int(0, n - 1));
      const auto got = shortest_path(g, s, t);
      const auto want = ref::exhaustive_shortest_path(g, s, t);
      if (got.has_value() != want.has_value()) {
        ++mismatches;
        continue;
      }
      if (!got) continue;
      ++reachable;
      if (got->total_weight != want->weight || got->nodes != want->nodes) ++mismatches;
    }
    return std::pair{mismatches == 0, "500 graphs (" + std::to_string(reachable) + " reachable), " +
                                          std::to_string(mismatches) + " mismatches"};
  });

  guarded(4, "class fidelity", [] {
    int checks = 0, failed = 0;
    for (GraphClass c : kAllGraphClasses) {
      for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Rng rng(hash_combine(seed, static_cast<std::uint64_t>(c)));
        TypedGraphParams p;
        p.nodes = static_cast<int>(rng.uniform_int(6, 10));
        Graph g = typed_graph(c, p, rng);
        ++checks;
        if (!classify_check(g, c)) ++failed;
      }
    }
    return std::pair{failed == 0 && checks == 7000,
                     std::to_string(checks) + " checks, " + std::to_string(failed) + " failures"};
  });

  guarded(5, "census round trip", [] {
    const Task4Config cfg;
    const std::map<PatternKind, std::pair<int, int>> sizes{{PatternKind::chain, {cfg.chain_min, cfg.chain_max}},
                                                           {PatternKind::clique, {cfg.clique_min, cfg.clique_max}},
                                                           {PatternKind::star, {cfg.star_min, cfg.star_max}}};
    int cases = 0, failed = 0;
    for (const auto& set : cfg.kind_sets) {
      std::vector<PatternKind> kinds;
      std::stringstream in(set);
      for (std::string k; std::getline(in, k, '+');) kinds.push_back(*try_pattern_kind(k));
      for (int total : cfg.totals) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
          Rng rng(hash_combine(hash_combine(seed, static_cast<std::uint64_t>(total)), kinds.size() * 31 + set.size()));
          std::vector<PatternSpec> specs;
          PatternCensus want;
          const int n = std::max<int>(total, static_cast<int>(kinds.size()));
          for (int i = 0; i < n; ++i) {
            const PatternKind k = i < static_cast<int>(kinds.size())
                                      ? kinds[i]
                                      : kinds[rng.uniform_int(0, static_cast<std::int64_t>(kinds.size()) - 1)];
            const auto [lo, hi] = sizes.at(k);
            specs.push_back({k, static_cast<int>(rng.uniform_int(lo, hi))});
            ++want[k];
          }
          ++cases;
          if (component_census(pattern_graph(specs, rng)) != want) ++failed;
        }
      }
    }
    return std::pair{failed == 0 && cases == 21 * 20,
                     std::to_string(cases) + " cases, " + std::to_string(failed) + " failures"};
  });

  guarded(6, "metric fixtures", [] {
    const auto counts = score_counts({{{10, 16}, CountsAnswer{10, 16}},
                                      {{10, 16}, CountsAnswer{9, 16}},
                                      {{10, 16}, CountsAnswer{10, 16}}});
    const double node = counts.nodes;
    const double t5 = score_accuracy(5, parse_response(5, R"({"nodes_prediction": [3, 6]})"), MissingEdgeTruth{3, 5});
    const double t5b = score_accuracy(5, parse_response(5, R"({"nodes_prediction": [7, 5]})"), MissingEdgeTruth{3, 5});
    const double jac = score_path({1, 2, 4, 6}, {1, 5, 6});
    const bool ok = std::abs(node - 2.0 / 3.0) <= 1e-12 && std::abs(t5 - 0.5) <= 1e-12 &&
                    std::abs(t5b - 0.5) <= 1e-12 && std::abs(jac - 0.4) <= 1e-12;
    char buf[160];
    std::snprintf(buf, sizeof buf, "node NMAE %.15g, one-endpoint %.15g/%.15g, Jaccard %.15g", node, t5, t5b, jac);
    return std::pair{ok, std::string(buf)};
  });

  guarded(7, "oracle backend end to end", [&] {
    if (manifest.empty()) return std::pair{false, std::string("no dataset from criterion 1")};
    const std::string out = run_a.string();
    if (cli_run({"evaluate", "--out", out, "--mock", "oracle", "--strategy", "both"}) != 0 ||
        cli_run({"score", "--out", out}) != 0 || cli_run({"report", "--out", out}) != 0)
      return std::pair{false, std::string("pipeline command failed")};
    const auto table = import_table(run_a / "report" / "by_model_task_strategy.csv");
    int below = 0;
    std::size_t counted = 0;
    for (const auto& row : table.rows) {
      counted += row.count;
      if (row.mean != 1.0) ++below;
    }
    const bool ok = table.rows.size() == 14 && below == 0 && counted == 2 * manifest.size();
    return std::pair{ok, std::to_string(table.rows.size()) + " task/strategy cells, " + std::to_string(below) +
                             " below 1.0, " + std::to_string(counted) + " scored"};
  });

  guarded(8, "fixture parsing", [] {
    const auto rows = read_jsonl(fs::path(GVB_FIXTURES_DIR) / "model_outputs.jsonl");
    int bad = 0;
    std::string notes;
    long long claude_node_err = -1, claude_edge_err = -1;
    for (const auto& row : rows) {
      const int task = row["task"];
      const auto parsed = parse_response(task, row["text"].get<std::string>());
      bool ok = parsed.status != ParseStatus::failed && to_string(parsed.status) == row["status"].get<std::string>();
      for (const auto& [k, v] : row["payload"].items()) ok = ok && parsed.payload.contains(k) && parsed.payload[k] == v;
      const GroundTruth truth = truth_from_json(row["truth"]);
      if (ok && task == 1) {
        const auto& a = std::get<CountsAnswer>(*parsed.answer);
        const auto& t = std::get<CountsTruth>(truth);
        if (row["name"] == "t1-spectral-claude") {
          claude_node_err = std::llabs(t.nodes - a.nodes);
          claude_edge_err = std::llabs(t.edges - a.edges);
        }
      } else if (ok && task == 6) {
        ok = std::abs(score_path(std::get<PathAnswer>(*parsed.answer).nodes,
                                 std::get<PathTruth>(truth).path.nodes) - row["value"].get<double>()) <= 1e-12;
      } else if (ok) {
        ok = score_accuracy(task, parsed, truth) == row["value"].get<double>();
      }
      if (!ok) {
        ++bad;
        notes += " " + row["name"].get<std::string>();
      }
    }
    const bool ok = rows.size() == 17 && bad == 0 && claude_node_err == 1 && claude_edge_err == 6;
    return std::pair{ok, std::to_string(rows.size()) + " outputs, " + std::to_string(bad) + " mismatched" + notes +
                             ", spectral fixture errors node " + std::to_string(claude_node_err) + " edge " +
                             std::to_string(claude_edge_err)};
  });

  guarded(9, "spectral layout correctness", [&] {
    if (manifest.empty()) return std::pair{false, std::string("no dataset from criterion 1")};
    double worst = 0.0, worst_eig = 0.0;
    int graphs = 0;
    auto check = [&](const Graph& g) {
      if (g.node_count() > 30) return;
      ++graphs;
      const auto l = laplacian(g);
      const auto dec = laplacian_spectrum(g);
      Eigen::MatrixXd m(l.n, l.n);
      for (int i = 0; i < l.n; ++i)
        for (int j = 0; j < l.n; ++j) m(i, j) = l(i, j);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
      for (int k = 0; k < l.n; ++k) {
        for (int i = 0; i < l.n; ++i) {
          double s = -dec.values[k] * dec.vectors[k][i];
          for (int j = 0; j < l.n; ++j) s += l(i, j) * dec.vectors[k][j];
          worst = std::max(worst, std::abs(s));
        }
        worst_eig = std::max(worst_eig, std::abs(dec.values[k] - solver.eigenvalues()(k)));
      }
    };
    for (const auto& inst : manifest) {
      check(inst.graph);
      if (inst.graph2) check(*inst.graph2);
    }
    bool monotone = true;
    double prev = 1e9;
    for (int n = 3; n <= 10; ++n) {
      Graph p(n, false);
      for (int i = 0; i + 1 < n; ++i) p.add_edge(i, i + 1);
      const double f = laplacian_spectrum(p).values[1];
      monotone = monotone && f < prev;
      prev = f;
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "%d graphs, max residual %.3g, max eigenvalue gap to Eigen %.3g, P3-P10 Fiedler %s",
                  graphs, worst, worst_eig, monotone ? "decreasing" : "NOT decreasing");
    return std::pair{worst <= 1e-6 && worst_eig <= 1e-6 && monotone, std::string(buf)};
  });

  guarded(10, "determinism and resume", [&] {
    if (manifest.empty()) return std::pair{false, std::string("no dataset from criterion 1")};
    if (cli_run({"generate", "--out", run_b.string()}) != 0) return std::pair{false, std::string("second generate failed")};
    const bool same_manifest = slurp(manifest_path(run_a)) == slurp(manifest_path(run_b));
    int image_diffs = 0;
    for (const auto& inst : manifest)
      if (slurp(run_a / inst.image_path) != slurp(run_b / inst.image_path)) ++image_diffs;
    // interrupted then resumed evaluation on the second copy
    const std::string out = run_b.string();
    bool ok = same_manifest && image_diffs == 0;
    std::string detail = std::string(same_manifest ? "manifests identical" : "manifests differ") + ", " +
                         std::to_string(image_diffs) + " image files differ";
    if (cli_run({"evaluate", "--out", out, "--mock", "oracle", "--strategy", "both", "--max-requests", "400"}) != 0 ||
        cli_run({"evaluate", "--out", out, "--mock", "oracle", "--strategy", "both"}) != 0)
      return std::pair{false, detail + ", evaluate failed"};
    for (Strategy s : kAllStrategies) {
      const auto log = response_log_path(run_b, "mock-oracle", s);
      const auto lines = count_lines(log);
      std::set<std::string> ids;
      for (const auto& r : read_responses(log)) ids.insert(r.instance_id);
      const std::size_t dup = lines - ids.size();
      ok = ok && ids.size() == manifest.size() && dup == 0;
      detail += ", " + std::string(to_string(s)) + " " + std::to_string(ids.size()) + " unique / " +
                std::to_string(lines) + " requests";
    }
    return std::pair{ok, detail};
  });

  fs::remove_all(work);
  return failures;
}
