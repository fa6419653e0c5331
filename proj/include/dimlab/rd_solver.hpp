#pragma once

// Blahut-Arimoto computation of R^(m)(X, D) for discretized m-blocks under
// the per-symbol squared-error distortion d_m(x,y) = (1/m) ||x - y||^2.
//
// The solver is slope-parameterized: s < 0 is the tangent slope of the
// per-symbol R(D) curve, the conditional update is
//   q(j|i) ∝ q(j) exp(s m ln2 d_m(i,j)),
// and D is an output. Stopping uses the convex duality gap
//   max_j T_j - 1 >= F(q) - F*   (nats),
// a certified bound on suboptimality of the current free energy.
//
// For m >= 2 the kernel exp(s m ln2 d_m) factors across coordinates, so the
// updates are mode products with one G x G kernel instead of dense G^m x G^m
// operations; the dense path remains available for arbitrary small blocks and
// for cross-validation.

#include <cstdint>
#include <ostream>
#include <vector>

#include "dimlab/process.hpp"

namespace dimlab {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiscretizedBlock {
  int m = 1;
  std::vector<double> grid;          // per-axis source/reproduction levels, strictly increasing
  std::vector<std::uint8_t> is_atom; // per grid point
  double cell_width = 0.0;           // 0 for purely discrete sources
  std::vector<double> pmf;           // dense joint tensor, row-major, size grid.size()^m

  std::size_t alphabet() const;
  double entropy_bits_per_symbol() const;
};

// Exact analytic cell/atom masses; no Monte Carlo. Atoms of the source get
// dedicated grid points so their zero-distortion self-reproduction survives
// discretization.
DiscretizedBlock discretize_source(const ProcessSpec& spec, int m, int grid_size);

// Lazy d_m evaluator over tuple indices of a block's grid.
class DistortionTable {
 public:
  DistortionTable() = default;
  DistortionTable(std::vector<double> grid, int m);

  double operator()(std::size_t i, std::size_t j) const;
  std::size_t size() const { return size_; }
  int m() const { return m_; }
  const std::vector<double>& grid() const { return grid_; }

 private:
  std::vector<double> grid_;
  int m_ = 1;
  std::size_t size_ = 0;
};

DistortionTable build_distortion(const DiscretizedBlock& block);

enum class BAPath { auto_dispatch, dense, factored };

struct BAOptions {
  double tol_bits = 1e-7;
  int max_iter = 5000;
  bool record_free_energy = false;
  BAPath path = BAPath::auto_dispatch;
};

struct BAResult {
  double s = 0.0;
  double D = 0.0;
  double R_bits = 0.0;       // per-symbol rate, bits
  int iterations = 0;
  double gap_bits = 0.0;     // duality gap per symbol at stop
  bool converged = false;    // gap_bits < tol within max_iter
  bool monotone_ok = true;   // free energy nonincreasing across iterations
  std::vector<double> free_energy_trace;  // nats, when recorded
};

// warm, when given, seeds and receives the reproduction distribution.
BAResult blahut_arimoto(const DiscretizedBlock& block, const DistortionTable& table, double s,
                        const BAOptions& opts = {}, std::vector<double>* warm = nullptr);

struct RDCurve {
  struct Point {
    double s = 0.0;
    double D = 0.0;
    double R_bits = 0.0;
    int iterations = 0;
    double gap_bits = 0.0;
    bool converged = false;
  };
  std::vector<Point> points;  // sorted by D ascending
  int m = 1;
  std::size_t grid_size = 0;
  double cell_width = 0.0;
  double source_entropy_bits = 0.0;  // per symbol; saturation level
};

// Log-scale slope grid: s_i = -2^e with e linearly spaced from start_exponent
// down to stop_exponent (descending |s|, so the curve is traced from the
// low-distortion end with warm starts).
std::vector<double> make_s_grid(double start_exponent, double stop_exponent, int count);

RDCurve rd_curve(const ProcessSpec& spec, int m, int grid_size,
                 const std::vector<double>& s_grid, const BAOptions& opts = {});
RDCurve rd_curve(const DiscretizedBlock& block, const std::vector<double>& s_grid,
                 const BAOptions& opts = {});

struct CurveDiagnostics {
  bool monotone = true;      // R nonincreasing in D
  bool convex = true;        // chord slopes nondecreasing in D
  double worst_monotone = 0.0;
  double worst_convex = 0.0;
};

CurveDiagnostics validate_curve(const RDCurve& curve, double tol = 1e-6);

// CSV columns: s,D,R_bits,iterations,gap,m,N
void write_csv(const RDCurve& curve, std::ostream& os);

}  // namespace dimlab
