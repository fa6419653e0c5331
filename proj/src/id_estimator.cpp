#include "dimlab/id_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace dimlab {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need >= 2 points");
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate x grid");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    rss += r * r;
    f.residual_max = std::max(f.residual_max, std::abs(r));
  }
  f.slope_stderr = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
  return f;
}

namespace {

int thread_budget() {
  if (const char* env = std::getenv("DIMLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

IDSweep id_sweep(const ProcessSpec& spec, int k_max, const std::vector<int>& b_grid,
                 std::size_t n, std::uint64_t seed, QuantScheme scheme,
                 EntropyEstimator estimator) {
  if (b_grid.empty()) throw std::invalid_argument("id_sweep: empty b grid");
  if (k_max < 0) throw std::invalid_argument("id_sweep: k_max must be >= 0");

  IDSweep sweep;
  sweep.spec = spec;
  sweep.n = n;
  sweep.seed = seed;
  sweep.scheme = scheme;
  sweep.estimator = estimator;

  const SamplePath path = sample_path(spec, n, seed);

  // one column of rows (all k) per resolution b
  auto column = [&](int b) {
    std::vector<IDSweepRow> rows;
    const QuantizedPath q = quantize_values(path.values, {scheme, b});
    // block entropies for lengths 1..k_max+1, reused across k
    std::vector<EntropyEstimate> block(k_max + 2);
    std::vector<BlockCounts> counts(k_max + 2);
    for (int len = 1; len <= k_max + 1; ++len) {
      counts[len] = count_blocks(q, len);
      block[len] = entropy_plugin(counts[len]);
      if (estimator == EntropyEstimator::miller_madow)
        block[len] = miller_madow_correct(block[len], counts[len]);
    }
    for (int k = 0; k <= k_max; ++k) {
      IDSweepRow row;
      row.k = k;
      row.b = b;
      row.h_cond_bits = k == 0 ? block[1].value_bits
                               : block[k + 1].value_bits - block[k].value_bits;
      row.support_seen = block[k + 1].support_seen;
      row.total = block[k + 1].total;
      row.undersampled = block[k + 1].undersampled;
      rows.push_back(row);
    }
    return rows;
  };

  const int workers = std::min<int>(thread_budget(), static_cast<int>(b_grid.size()));
  if (workers <= 1) {
    for (int b : b_grid)
      for (auto& r : column(b)) sweep.rows.push_back(r);
  } else {
    std::vector<std::future<std::vector<IDSweepRow>>> futs;
    futs.reserve(b_grid.size());
    for (int b : b_grid)
      futs.push_back(std::async(std::launch::async, column, b));
    for (auto& f : futs)
      for (auto& r : f.get()) sweep.rows.push_back(r);
  }
  return sweep;
}

DimensionEstimate fit_dk(const IDSweep& sweep, int k, FitMethod method) {
  std::vector<double> xs, ys;
  for (const auto& row : sweep.rows) {
    if (row.k != k) continue;
    xs.push_back(sweep.scheme == QuantScheme::bbit ? static_cast<double>(row.b)
                                                   : std::log2(static_cast<double>(row.b)));
    ys.push_back(row.h_cond_bits);
  }
  if (xs.size() < 3) throw std::invalid_argument("fit_dk: need >= 3 resolutions for this k");

  DimensionEstimate est;
  est.method = method;
  std::ostringstream w;
  if (method == FitMethod::ratio_fit) {
    // H/b at the finest resolution; intercept bias decays only as 1/b
    std::size_t imax = 0;
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (xs[i] > xs[imax]) imax = i;
    est.value = ys[imax] / xs[imax];
    w << "k=" << k << ", ratio at finest resolution";
  } else {
    const LineFit f = fit_line(xs, ys);
    est.value = f.slope;
    est.stderr_value = f.slope_stderr;
    est.diagnostics = f.residual_max;
    w << "k=" << k << ", " << xs.size() << " resolutions";
  }
  est.window = w.str();
  return est;
}

DimensionEstimate fit_do(const IDSweep& sweep) {
  int k_max = 0;
  for (const auto& row : sweep.rows) k_max = std::max(k_max, row.k);
  std::vector<DimensionEstimate> per_k;
  for (int k = 0; k <= k_max; ++k) per_k.push_back(fit_dk(sweep, k));

  DimensionEstimate est = per_k.back();
  std::ostringstream w;
  w << "d_k at k_max=" << k_max;
  est.window = w.str();
  // d_k should be nonincreasing within the fit noise
  est.monotone_ok = true;
  double worst = 0.0;
  for (int k = 0; k + 1 <= k_max; ++k) {
    const double rise = per_k[k + 1].value - per_k[k].value;
    const double noise = 2.0 * (per_k[k + 1].stderr_value + per_k[k].stderr_value);
    worst = std::max(worst, rise);
    if (rise > noise + 1e-12) est.monotone_ok = false;
  }
  est.diagnostics = worst;
  return est;
}

void write_csv(const IDSweep& sweep, std::ostream& os) {
  os << "k,b,scheme,H_conditional_bits,support_seen,total,estimator\n";
  os.precision(17);
  for (const auto& row : sweep.rows) {
    os << row.k << ',' << row.b << ',' << to_string(sweep.scheme) << ',' << row.h_cond_bits
       << ',' << row.support_seen << ',' << row.total << ',' << to_string(sweep.estimator)
       << '\n';
  }
}

const char* to_string(FitMethod m) {
  switch (m) {
    case FitMethod::ratio_fit: return "ratio_fit";
    case FitMethod::slope_fit: return "slope_fit";
    case FitMethod::rdd_fit: return "rdd_fit";
  }
  return "?";
}

nlohmann::json DimensionEstimate::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["stderr"] = stderr_value;
  j["method"] = to_string(method);
  j["window"] = window;
  j["diagnostics"] = diagnostics;
  return j;
}

}  // namespace dimlab
