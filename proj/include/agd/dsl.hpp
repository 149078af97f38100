#pragma once

#include <map>
#include <string>
#include <vector>

#include "agd/extension.hpp"
#include "agd/pullback.hpp"

namespace agd {

// A pullback declaration, fully resolved at load time: the adjustment pieces
// it applies to (by name), the fibration, and the action fields over the
// total patch.
struct PullbackDecl {
  std::string e, f, k, nabla, zeta;
  Submersion phi;
  std::vector<VectorField> action_fields;
  int line = 0;
};

struct TaskDecl {
  std::string op;
  std::vector<std::string> args;
  std::string result_name;  // for "as NAME" tasks
  std::string id;           // the task line as written; used for filtering
  int line = 0;
};

/// A loaded model: named declarations plus an ordered task list. Names are
/// resolved and shapes validated at load time; task execution happens in run.
struct Model {
  std::map<std::string, CoordinatePatch> patches;
  std::map<std::string, LieAlgebroid> algebroids;
  std::map<std::string, FConnection> connections;
  std::map<std::string, TwoForm> forms;
  std::map<std::string, BundleMorphism> morphisms;
  std::map<std::string, PullbackDecl> pullbacks;
  std::vector<TaskDecl> tasks;
};

Model load_model(const std::string& path);
Model load_model_text(const std::string& text, const std::string& filename = "<text>");

struct TaskReport {
  std::string task;
  std::vector<CheckEntry> checks;
  double wall_ms = 0.0;
};

struct RunResult {
  std::vector<TaskReport> tasks;
  std::map<std::string, ExtensionResult> extensions;
  bool matched_any = false;

  bool all_passed() const;
  std::size_t count(CheckStatus s) const;
};

// Executes the tasks whose id matches the glob ('*' and '?'), in declaration
// order. Task-level usage errors become failing "error" entries, never
// exceptions, so one bad task cannot hide the others.
RunResult run(const Model& m, const std::string& task_glob = "*");

// Serializes a built-and-verified extension back into model text. Runs the
// model's tasks to build it.
std::string export_extension(const Model& m, const std::string& name);

std::string render_text(const RunResult& r);
std::string render_json(const RunResult& r);  // stable schema, see README

// The sign and index conventions sheet printed by the CLI.
std::string conventions_text();

bool glob_match(const std::string& pattern, const std::string& text);

} // namespace agd
