#pragma once

// Rate-distortion dimension: twice the least-squares slope of R (bits)
// against log2(1/D) over a validated low-distortion window. The window keeps
// D well above the discretization scale (below ~cell^2 the surrogate curve
// saturates toward the discrete entropy and the slope collapses to 0, faking
// dimension 0) and below the zero-rate knee.

#include <ostream>

#include <nlohmann/json_fwd.hpp>

#include "dimlab/id_estimator.hpp"
#include "dimlab/rd_solver.hpp"

namespace dimlab {

enum class WindowRationale { automatic, manual };

struct FitWindow {
  double d_min = 0.0;
  double d_max = 0.0;
  WindowRationale rationale = WindowRationale::automatic;
  int excluded_points = 0;
};

struct WindowOptions {
  double safety_factor = 100.0;  // d_min = safety_factor * cell_width^2
  double rel_slope_tol = 0.10;   // local slope stability across point pairs
  double abs_slope_tol = 0.02;   // absolute stability floor (flat curves are stable)
  int min_points = 4;
};

// Throws NumericalError when no stable window with min_points survives.
FitWindow select_window(const RDCurve& curve, double cell_width, const WindowOptions& opts = {});

DimensionEstimate fit_rdd(const RDCurve& curve, const FitWindow& window);

struct RDDReport {
  DimensionEstimate estimate;
  FitWindow window;
  int points_used = 0;
  double residual_max = 0.0;
  int m = 1;
  std::size_t grid_size = 0;
  RDCurve curve;

  nlohmann::json to_json() const;  // {value, stderr, window:{D_min,D_max}, points_used, ...}
};

RDDReport rdd_of_process(const ProcessSpec& spec, int m, int grid_size,
                         const std::vector<double>& s_grid, const BAOptions& opts = {},
                         const WindowOptions& wopts = {});

}  // namespace dimlab
