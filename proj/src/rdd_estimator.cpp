#include "dimlab/rdd_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dimlab {

FitWindow select_window(const RDCurve& curve, double cell_width, const WindowOptions& opts) {
  const auto& pts = curve.points;
  if (pts.size() < 6) throw NumericalError("select_window: need at least 6 curve points");

  const double d_min = opts.safety_factor * cell_width * cell_width;
  std::vector<std::pair<double, double>> xy;  // (log2(1/D), R), D ascending
  int excluded = 0;
  for (const auto& p : pts) {
    if (p.D >= d_min && p.D > 0.0)
      xy.emplace_back(std::log2(1.0 / p.D), p.R_bits);
    else
      ++excluded;
  }
  if (xy.size() < static_cast<std::size_t>(opts.min_points))
    throw NumericalError("select_window: too few points above the discretization floor");

  // scan from the low-distortion end; keep while consecutive local slopes are
  // stable (flat curves count as stable: their slope is genuinely ~0)
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < xy.size(); ++i) {
    const double dx = xy[i].first - xy[i + 1].first;  // > 0
    slopes.push_back((xy[i].second - xy[i + 1].second) / dx);
  }
  std::size_t keep = 1;
  while (keep < slopes.size()) {
    const double a = slopes[keep - 1];
    const double b = slopes[keep];
    const double tol = std::max(opts.rel_slope_tol * std::max(std::abs(a), std::abs(b)),
                                opts.abs_slope_tol);
    if (std::abs(b - a) > tol) break;
    ++keep;
  }
  const std::size_t n_pts = keep + 1;
  if (n_pts < static_cast<std::size_t>(opts.min_points))
    throw NumericalError("select_window: no stable log-slope regime in the curve");

  FitWindow w;
  w.rationale = WindowRationale::automatic;
  w.excluded_points = excluded + static_cast<int>(xy.size() - n_pts);
  // first point has the smallest D
  double lo = pts.front().D;
  for (const auto& p : pts)
    if (p.D >= d_min) {
      lo = p.D;
      break;
    }
  w.d_min = lo;
  // n_pts points starting at the first in-window D
  std::size_t idx = 0;
  for (const auto& p : pts) {
    if (p.D < d_min || p.D <= 0.0) continue;
    if (++idx == n_pts) {
      w.d_max = p.D;
      break;
    }
  }
  return w;
}

DimensionEstimate fit_rdd(const RDCurve& curve, const FitWindow& window) {
  std::vector<double> x, y;
  for (const auto& p : curve.points) {
    if (p.D < window.d_min || p.D > window.d_max || p.D <= 0.0) continue;
    x.push_back(std::log2(1.0 / p.D));
    y.push_back(p.R_bits);
  }
  if (x.size() < 3) throw NumericalError("fit_rdd: fewer than 3 points in window");
  const LineFit f = fit_line(x, y);
  DimensionEstimate est;
  // R(D)/log(1/D) -> dim/2, so the fitted slope estimates dim/2
  est.value = 2.0 * f.slope;
  est.stderr_value = 2.0 * f.slope_stderr;
  est.method = FitMethod::rdd_fit;
  est.diagnostics = f.residual_max;
  std::ostringstream w;
  w << "D in [" << window.d_min << ", " << window.d_max << "], " << x.size() << " points";
  est.window = w.str();
  return est;
}

RDDReport rdd_of_process(const ProcessSpec& spec, int m, int grid_size,
                         const std::vector<double>& s_grid, const BAOptions& opts,
                         const WindowOptions& wopts) {
  RDDReport report;
  report.curve = rd_curve(spec, m, grid_size, s_grid, opts);
  report.window = select_window(report.curve, report.curve.cell_width, wopts);
  report.estimate = fit_rdd(report.curve, report.window);
  report.m = m;
  report.grid_size = report.curve.grid_size;
  report.residual_max = report.estimate.diagnostics;
  for (const auto& p : report.curve.points)
    if (p.D >= report.window.d_min && p.D <= report.window.d_max) ++report.points_used;
  return report;
}

nlohmann::json RDDReport::to_json() const {
  nlohmann::json j;
  j["value"] = estimate.value;
  j["stderr"] = estimate.stderr_value;
  j["window"] = {{"D_min", window.d_min}, {"D_max", window.d_max}};
  j["points_used"] = points_used;
  j["residual_max"] = residual_max;
  j["m"] = m;
  j["N"] = grid_size;
  return j;
}

}  // namespace dimlab
