#pragma once

// Source models: i.i.d. atom/continuous mixtures, pure discrete and pure
// continuous i.i.d. sources, and the piecewise-constant first-order Markov
// process that copies its previous value with probability 1-p and redraws
// from the continuous density with probability p.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace dimlab {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ContinuousFamily { uniform, truncated_gaussian };

struct ContinuousSpec {
  ContinuousFamily family = ContinuousFamily::uniform;
  double support_low = 0.0;
  double support_high = 1.0;
  double mean = 0.0;    // truncated_gaussian only
  double stddev = 1.0;  // truncated_gaussian only

  double pdf(double x) const;
  // Probability mass of (a, b] under the (normalized) density.
  double mass(double a, double b) const;
};

enum class ProcessKind { iid_mixture, iid_continuous, iid_discrete, piecewise_constant_markov };

struct WeightedAtom {
  double value = 0.0;
  double prob = 0.0;
};

struct ProcessSpec {
  ProcessKind kind = ProcessKind::iid_continuous;
  double p = 1.0;  // weight of the continuous/jump component
  std::optional<ContinuousSpec> continuous;
  std::vector<WeightedAtom> discrete_pmf;  // iid_discrete only
  double atom = 0.0;                       // delta location for iid_mixture

  nlohmann::json to_json() const;
  static ProcessSpec from_json(const nlohmann::json& j);
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

ValidationReport validate_spec(const ProcessSpec& spec);

// Throws SpecError listing every violated invariant.
void require_valid(const ProcessSpec& spec);

struct SamplePath {
  std::vector<double> values;
  ProcessSpec spec;
  std::uint64_t seed = 0;
  // Per-index Bern(p) outcomes for the Markov kind; index 0 is always false
  // (the first sample is neither jump nor copy). Empty for other kinds.
  std::vector<std::uint8_t> jump_indicators;
};

SamplePath sample_path(const ProcessSpec& spec, std::size_t n, std::uint64_t seed);

struct JumpStats {
  std::size_t count = 0;
  double fraction = 0.0;
};

// Markov: counts true jump indicators over the n-1 transitions.
// Mixture: counts samples not equal to the atom, over n draws.
JumpStats jump_statistics(const SamplePath& path);

// CSV columns: index,value[,jump]
void write_csv(const SamplePath& path, std::ostream& os);

const char* to_string(ProcessKind k);
const char* to_string(ContinuousFamily f);

}  // namespace dimlab
