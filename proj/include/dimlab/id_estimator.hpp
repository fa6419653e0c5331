#pragma once

// k-th order information dimension from conditional-entropy sweeps: for each
// memory k, regress H([X_{k+1}]_b | [X^k]_b) on the resolution b and read the
// dimension off the slope. The affine intercept (e.g. an H(p) term) cancels
// in the slope, which converges much faster than the ratio H/b.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dimlab/entropy.hpp"
#include "dimlab/process.hpp"

namespace dimlab {

struct IDSweepRow {
  int k = 0;
  int b = 1;
  double h_cond_bits = 0.0;
  std::uint64_t support_seen = 0;
  std::uint64_t total = 0;
  bool undersampled = false;
};

struct IDSweep {
  std::vector<IDSweepRow> rows;  // rectangular (k, b) grid
  ProcessSpec spec;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  QuantScheme scheme = QuantScheme::bbit;
  EntropyEstimator estimator = EntropyEstimator::plugin;
};

enum class FitMethod { ratio_fit, slope_fit, rdd_fit };

struct DimensionEstimate {
  double value = 0.0;
  double stderr_value = 0.0;
  FitMethod method = FitMethod::slope_fit;
  std::string window;       // human-readable description of the fit range
  double diagnostics = 0.0; // max absolute fit residual
  bool monotone_ok = true;  // fit_do: d_k nonincreasing within noise

  nlohmann::json to_json() const;
};

IDSweep id_sweep(const ProcessSpec& spec, int k_max, const std::vector<int>& b_grid,
                 std::size_t n, std::uint64_t seed, QuantScheme scheme = QuantScheme::bbit,
                 EntropyEstimator estimator = EntropyEstimator::plugin);

// Slope of H_cond against b (bbit) or log2(b) (blevel) for one k.
DimensionEstimate fit_dk(const IDSweep& sweep, int k, FitMethod method = FitMethod::slope_fit);

// d_o reported at k_max, with a monotonicity diagnostic over k.
DimensionEstimate fit_do(const IDSweep& sweep);

// CSV columns: k,b,scheme,H_conditional_bits,support_seen,total,estimator
void write_csv(const IDSweep& sweep, std::ostream& os);

const char* to_string(FitMethod m);

// Ordinary least squares y = a + s x; returns slope, stderr of the slope and
// the maximum absolute residual.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double residual_max = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dimlab
