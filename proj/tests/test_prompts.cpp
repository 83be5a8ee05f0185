#include <fstream>
#include <iterator>

#include "doctest.h"
#include "gvb/errors.hpp"
#include "gvb/prompts.hpp"
#include "gvb/taskgen.hpp"
#include "reference.hpp"

using namespace gvb;

TEST_CASE("all fourteen templates load") {
  auto set = PromptSet::load(default_prompts_dir());
  CHECK(set.size() == 14);
  for (int t = 1; t <= 7; ++t)
    for (Strategy s : kAllStrategies) {
      const auto& p = set.get(t, s);
      CHECK(p.task == t);
      CHECK(p.strategy == s);
      CHECK_FALSE(p.text.empty());
      CHECK(p.text.find("%%") == std::string::npos);
      CHECK(p.text.find("json") != std::string::npos);
      for (const auto& f : p.schema) CHECK(p.text.find(f.name) != std::string::npos);
      CHECK(&get_prompt(t, s) != nullptr);
      CHECK(get_prompt(t, s).text == p.text);
    }
}

TEST_CASE("schemas name the answer fields") {
  CHECK(answer_schema(1).size() == 3);
  CHECK(answer_schema(1)[0].name == "total_nodes");
  CHECK(answer_schema(1)[1].name == "total_edges");
  CHECK(answer_schema(3)[0].type == FieldType::edge);
  CHECK(answer_schema(6)[0].type == FieldType::node_list);
  CHECK(answer_schema(7)[0].type == FieldType::yes_no);
  for (int t = 1; t <= 7; ++t) {
    const auto s = answer_schema(t);
    CHECK_FALSE(s.back().required);
    CHECK(s.back().name == "analysis");
  }
  CHECK_THROWS_AS(answer_schema(0), ParameterError);
  CHECK_THROWS_AS(answer_schema(8), ParameterError);
}

TEST_CASE("serialize round trips the file contents") {
  const auto dir = default_prompts_dir();
  for (int t = 1; t <= 7; ++t)
    for (Strategy s : kAllStrategies) {
      std::ifstream in(prompt_file(dir, t, s), std::ios::binary);
      const std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      auto p = parse_prompt(t, s, raw);
      CHECK(p.serialize() == raw);
      CHECK(parse_prompt(t, s, p.serialize()).text == p.text);
    }
}

TEST_CASE("strategy names") {
  CHECK(to_string(Strategy::cot) == "cot");
  CHECK(strategy_from_string("zero_shot") == Strategy::zero_shot);
  CHECK_THROWS_AS(strategy_from_string("few_shot"), ParameterError);
}

TEST_CASE("missing template directory") {
  auto dir = ref::temp_dir("gvb_prompts_empty");
  CHECK_THROWS_AS(PromptSet::load(dir), ConfigError);
}

TEST_CASE("shortest path prompts name the endpoints") {
  DatasetConfig c;
  c.replicates = 1;
  auto insts = generate_task(6, c, Rng(c.seed));
  for (const auto& inst : insts) {
    const auto text = render_prompt(get_prompt(6, Strategy::zero_shot), inst);
    const auto& truth = std::get<PathTruth>(inst.truth);
    CHECK(text.find("{source}") == std::string::npos);
    CHECK(text.find("{target}") == std::string::npos);
    CHECK(text.find("labeled " + inst.graph.label_of(truth.source) + " and " +
                    inst.graph.label_of(truth.target)) != std::string::npos);
  }
  auto t1 = generate_task(5, c, Rng(c.seed));
  CHECK(render_prompt(get_prompt(5, Strategy::cot), t1[0]) == get_prompt(5, Strategy::cot).text);
}
