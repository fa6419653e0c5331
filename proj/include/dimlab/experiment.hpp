#pragma once

// Configuration-driven experiment orchestration. One JSON config plus dotted
// --key.path=value overrides drives every task; all artifacts are written
// atomically and named {task}_{hash(config)}.{csv,json} so identical configs
// produce identical bytes.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dimlab/process.hpp"

namespace dimlab {

enum class Task { simulate, id, rd, rdd, verify };

struct SGridSpec {
  double start_exponent = 9.0;  // |s| from 2^start down to 2^stop
  double stop_exponent = 0.0;
  int count = 16;
};

struct ExperimentConfig {
  Task task = Task::simulate;
  ProcessSpec spec;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  int k_max = 2;
  std::vector<int> b_grid = {4, 6, 8, 10};
  int m = 1;
  int grid_size = 512;  // JSON key "N"
  SGridSpec s_grid;
  double tol = 1e-7;
  int max_iter = 5000;
  double safety_factor = 100.0;
  std::string output_dir = ".";
  bool quick = false;
  std::string estimator = "plugin";
  std::string scheme = "bbit";

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

// Parse a config file, then apply overrides of the form key.path=value.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides);
ExperimentConfig config_from_json_text(const std::string& text,
                                       const std::vector<std::string>& overrides);

// FNV-1a over the canonical (sorted-key) serialization.
std::string config_hash(const ExperimentConfig& config);

// Runs the task, writes artifacts into output_dir, prints one-line summaries
// to `out`. Returns 0 on success, 1 on validation error, 2 on numerical
// failure.
int run(const ExperimentConfig& config, std::ostream& out);

// temp-file + rename
void write_file_atomic(const std::string& path, const std::string& contents);

const char* to_string(Task t);

}  // namespace dimlab
