#include "gvb/prompts.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "gvb/errors.hpp"
#include "gvb/taskgen.hpp"

#ifndef GVB_DEFAULT_PROMPTS_DIR
#define GVB_DEFAULT_PROMPTS_DIR "prompts"
#endif

namespace gvb {

std::string_view to_string(Strategy s) { return s == Strategy::zero_shot ? "zero_shot" : "cot"; }

Strategy strategy_from_string(std::string_view name) {
  if (name == "zero_shot") return Strategy::zero_shot;
  if (name == "cot") return Strategy::cot;
  throw ParameterError("unknown strategy: " + std::string(name));
}

std::vector<SchemaField> answer_schema(int task) {
  const SchemaField analysis{"analysis", FieldType::text, false};
  switch (task) {
    case 1: return {{"total_nodes", FieldType::integer}, {"total_edges", FieldType::integer}, analysis};
    case 2: return {{"type_graph", FieldType::class_name}, analysis};
    case 3: return {{"cut_edge", FieldType::edge}, analysis};
    case 4: return {{"pattern", FieldType::pattern}, {"number_of_patterns", FieldType::integer}, analysis};
    case 5: return {{"nodes_prediction", FieldType::node_pair}, analysis};
    case 6: return {{"shortest_path", FieldType::node_list}, analysis};
    case 7: return {{"match", FieldType::yes_no}, analysis};
    default: throw ParameterError("task ids are 1..7, got " + std::to_string(task));
  }
}

std::string PromptTemplate::serialize() const {
  std::string out;
  for (const auto& h : header) out += h + "\n";
  return out + text;
}

PromptTemplate parse_prompt(int task, Strategy strategy, const std::string& contents) {
  PromptTemplate t;
  t.task = task;
  t.strategy = strategy;
  t.schema = answer_schema(task);
  std::size_t pos = 0;
  while (contents.compare(pos, 3, "%% ") == 0) {
    const auto eol = contents.find('\n', pos);
    if (eol == std::string::npos) {
      t.header.push_back(contents.substr(pos));
      pos = contents.size();
      break;
    }
    t.header.push_back(contents.substr(pos, eol - pos));
    pos = eol + 1;
  }
  t.text = contents.substr(pos);
  return t;
}

std::filesystem::path prompt_file(const std::filesystem::path& dir, int task, Strategy strategy) {
  return dir / ("task" + std::to_string(task) + "_" + std::string(to_string(strategy)) + ".txt");
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
  PromptSet set;
  for (int task = 1; task <= kTaskCount; ++task)
    for (Strategy s : kAllStrategies) {
      const auto path = prompt_file(dir, task, s);
      std::ifstream f(path, std::ios::binary);
      if (!f) throw ConfigError("missing prompt template " + path.string());
      std::stringstream buf;
      buf << f.rdbuf();
      set.templates_[{task, s}] = parse_prompt(task, s, buf.str());
    }
  return set;
}

const PromptTemplate& PromptSet::get(int task, Strategy strategy) const {
  auto it = templates_.find({task, strategy});
  if (it == templates_.end()) throw ParameterError("no template for task " + std::to_string(task));
  return it->second;
}

std::filesystem::path default_prompts_dir() {
  if (const char* env = std::getenv("GVB_PROMPTS_DIR"); env && *env) return env;
  return GVB_DEFAULT_PROMPTS_DIR;
}

const PromptTemplate& get_prompt(int task, Strategy strategy) {
  static std::once_flag once;
  static PromptSet set;
  std::call_once(once, [] { set = PromptSet::load(default_prompts_dir()); });
  return set.get(task, strategy);
}

namespace {

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
    s.replace(p, from.size(), to);
}

}  // namespace

std::string render_prompt(const PromptTemplate& t, const TaskInstance& inst) {
  std::string text = t.text;
  if (const auto* path = std::get_if<PathTruth>(&inst.truth)) {
    replace_all(text, "{source}", inst.graph.label_of(path->source));
    replace_all(text, "{target}", inst.graph.label_of(path->target));
  }
  return text;
}

}  // namespace gvb
