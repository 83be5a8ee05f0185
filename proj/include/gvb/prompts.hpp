#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gvb {

struct TaskInstance;

enum class Strategy { zero_shot, cot };
inline constexpr Strategy kAllStrategies[] = {Strategy::zero_shot, Strategy::cot};

std::string_view to_string(Strategy s);
/// "zero_shot" or "cot"; throws ParameterError otherwise.
Strategy strategy_from_string(std::string_view name);

enum class FieldType {
  integer,    // JSON number or numeric string
  text,       // free string
  class_name, // one of the seven graph classes
  pattern,    // chain | clique | star
  edge,       // "(a, b)" string or [a, b]
  node_pair,  // [a, b]
  node_list,  // list of node labels (strings or integers)
  yes_no,     // "yes" | "no"
};

struct SchemaField {
  std::string name;
  FieldType type = FieldType::text;
  bool required = true;
};

/// Fields the answer object must carry for `task` (1..7).
std::vector<SchemaField> answer_schema(int task);

struct PromptTemplate {
  int task = 1;
  Strategy strategy = Strategy::zero_shot;
  /// Metadata lines ("%% ..."), kept for round-tripping, not sent to models.
  std::vector<std::string> header;
  std::string text;
  std::vector<SchemaField> schema;

  /// Exact file contents: header lines followed by the text.
  std::string serialize() const;
};

PromptTemplate parse_prompt(int task, Strategy strategy, const std::string& file_contents);

/// `dir/task<k>_<strategy>.txt`
std::filesystem::path prompt_file(const std::filesystem::path& dir, int task, Strategy strategy);

class PromptSet {
 public:
  /// Loads all 14 templates; throws ConfigError naming a missing file.
  static PromptSet load(const std::filesystem::path& dir);

  const PromptTemplate& get(int task, Strategy strategy) const;
  std::size_t size() const { return templates_.size(); }
  const std::map<std::pair<int, Strategy>, PromptTemplate>& all() const { return templates_; }

 private:
  std::map<std::pair<int, Strategy>, PromptTemplate> templates_;
};

/// Directory of the shipped templates ($GVB_PROMPTS_DIR overrides).
std::filesystem::path default_prompts_dir();

/// Template from the shipped set, loaded once.
const PromptTemplate& get_prompt(int task, Strategy strategy);

/// Text sent with an instance's image; fills {source} / {target} with the
/// node labels of shortest-path instances.
std::string render_prompt(const PromptTemplate& t, const TaskInstance& inst);

}  // namespace gvb
