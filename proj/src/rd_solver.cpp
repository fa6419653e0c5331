#include "dimlab/rd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

namespace dimlab {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr std::size_t kMaxAlphabet = std::size_t{1} << 22;
constexpr std::size_t kDenseLimit = 4096;
constexpr double kZFloor = 1e-300;

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

std::size_t DiscretizedBlock::alphabet() const {
  std::size_t a = 1;
  for (int t = 0; t < m; ++t) a *= grid.size();
  return a;
}

double DiscretizedBlock::entropy_bits_per_symbol() const {
  double h = 0.0;
  for (double p : pmf)
    if (p > 0.0) h -= p * std::log2(p);
  return h / m;
}

DistortionTable::DistortionTable(std::vector<double> grid, int m)
    : grid_(std::move(grid)), m_(m) {
  size_ = 1;
  for (int t = 0; t < m_; ++t) size_ *= grid_.size();
}

double DistortionTable::operator()(std::size_t i, std::size_t j) const {
  const std::size_t g = grid_.size();
  double acc = 0.0;
  for (int t = 0; t < m_; ++t) {
    const double d = grid_[i % g] - grid_[j % g];
    acc += d * d;
    i /= g;
    j /= g;
  }
  return acc / m_;
}

DistortionTable build_distortion(const DiscretizedBlock& block) {
  return DistortionTable(block.grid, block.m);
}

namespace {

// ---- source discretization -------------------------------------------------

struct Marginal {
  std::vector<double> grid;
  std::vector<std::uint8_t> is_atom;
  std::vector<double> pmf;
  double cell_width = 0.0;
};

Marginal continuous_cells(const ContinuousSpec& c, int N, double weight) {
  Marginal mg;
  mg.cell_width = (c.support_high - c.support_low) / N;
  mg.grid.reserve(N);
  mg.pmf.reserve(N);
  for (int i = 0; i < N; ++i) {
    const double a = c.support_low + i * mg.cell_width;
    const double b = a + mg.cell_width;
    mg.grid.push_back(0.5 * (a + b));
    mg.pmf.push_back(weight * c.mass(a, b));
  }
  mg.is_atom.assign(N, 0);
  return mg;
}

void insert_atom(Marginal& mg, double value, double prob) {
  auto it = std::lower_bound(mg.grid.begin(), mg.grid.end(), value);
  const std::size_t pos = it - mg.grid.begin();
  if (it != mg.grid.end() && *it == value) {
    mg.pmf[pos] += prob;  // atom coincides with an existing level
    mg.is_atom[pos] = 1;
    return;
  }
  mg.grid.insert(it, value);
  mg.pmf.insert(mg.pmf.begin() + pos, prob);
  mg.is_atom.insert(mg.is_atom.begin() + pos, 1);
}

Marginal marginal_of(const ProcessSpec& spec, int N) {
  switch (spec.kind) {
    case ProcessKind::iid_continuous:
    case ProcessKind::piecewise_constant_markov:
      return continuous_cells(*spec.continuous, N, 1.0);
    case ProcessKind::iid_mixture: {
      Marginal mg = continuous_cells(*spec.continuous, N, spec.p);
      insert_atom(mg, spec.atom, 1.0 - spec.p);
      return mg;
    }
    case ProcessKind::iid_discrete: {
      Marginal mg;
      std::vector<WeightedAtom> atoms = spec.discrete_pmf;
      std::sort(atoms.begin(), atoms.end(),
                [](const WeightedAtom& a, const WeightedAtom& b) { return a.value < b.value; });
      for (const auto& a : atoms) {
        mg.grid.push_back(a.value);
        mg.pmf.push_back(a.prob);
        mg.is_atom.push_back(1);
      }
      mg.cell_width = 0.0;
      return mg;
    }
  }
  throw SpecError("discretize_source: unsupported kind");
}

}  // namespace

DiscretizedBlock discretize_source(const ProcessSpec& spec, int m, int grid_size) {
  require_valid(spec);
  if (m < 1 || m > 3) throw NumericalError("discretize_source: m must be in {1,2,3}");
  if (grid_size < 1 || grid_size > 1024)
    throw NumericalError("discretize_source: grid_size must be in [1,1024]");

  const Marginal mg = marginal_of(spec, grid_size);
  const std::size_t g = mg.grid.size();

  DiscretizedBlock block;
  block.m = m;
  block.grid = mg.grid;
  block.is_atom = mg.is_atom;
  block.cell_width = mg.cell_width;

  std::size_t alphabet = 1;
  for (int t = 0; t < m; ++t) {
    if (alphabet > kMaxAlphabet / g)
      throw NumericalError("discretize_source: intractable (grid_size, m) combination");
    alphabet *= g;
  }
  block.pmf.assign(alphabet, 0.0);

  if (m == 1) {
    block.pmf = mg.pmf;
    return block;
  }

  if (spec.kind == ProcessKind::piecewise_constant_markov) {
    // quantized chain is Markov on cells: T(i,j) = (1-p) 1{i=j} + p pi_j
    const double p = spec.p;
    if (m == 2) {
      for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j)
          block.pmf[i * g + j] = mg.pmf[i] * (p * mg.pmf[j] + (i == j ? 1.0 - p : 0.0));
    } else {  // m == 3
      for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) {
          const double pij = mg.pmf[i] * (p * mg.pmf[j] + (i == j ? 1.0 - p : 0.0));
          for (std::size_t k2 = 0; k2 < g; ++k2)
            block.pmf[(i * g + j) * g + k2] =
                pij * (p * mg.pmf[k2] + (j == k2 ? 1.0 - p : 0.0));
        }
    }
  } else {
    // i.i.d. kinds: product measure
    if (m == 2) {
      for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) block.pmf[i * g + j] = mg.pmf[i] * mg.pmf[j];
    } else {
      for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j)
          for (std::size_t k2 = 0; k2 < g; ++k2)
            block.pmf[(i * g + j) * g + k2] = mg.pmf[i] * mg.pmf[j] * mg.pmf[k2];
    }
  }
  return block;
}

// ---- solver ---------------------------------------------------------------

namespace {

struct IterState {
  double gap_nats = 0.0;
  double free_energy = 0.0;  // nats
};

// Generic dense path over the full tuple alphabet.
class DenseSolver {
 public:
  DenseSolver(const DiscretizedBlock& block, const DistortionTable& table, double s)
      : m_(block.m) {
    const std::size_t M = block.alphabet();
    p_ = Eigen::Map<const VectorXd>(block.pmf.data(), M);
    d_.resize(M, M);
    for (std::size_t i = 0; i < M; ++i)
      for (std::size_t j = 0; j < M; ++j) d_(i, j) = table(i, j);
    A_ = (s * m_ * kLn2 * d_).array().exp();
    s_ = s;
  }

  VectorXd init_q() const { return p_; }

  IterState step(VectorXd& q, bool update) {
    z_ = (A_ * q).cwiseMax(kZFloor);
    t_ = A_.transpose() * (p_.array() / z_.array()).matrix();
    IterState st;
    st.gap_nats = t_.maxCoeff() - 1.0;
    st.free_energy = -(p_.array() * z_.array().log()).sum();
    if (update) q = q.cwiseProduct(t_);
    return st;
  }

  void finish(const VectorXd& q, double& D, double& R_bits) {
    step(const_cast<VectorXd&>(q), false);
    const VectorXd pz = (p_.array() / z_.array()).matrix();
    D = pz.dot(A_.cwiseProduct(d_) * q);
    const VectorXd qprime = q.cwiseProduct(t_);
    double kl = 0.0;
    for (Eigen::Index j = 0; j < q.size(); ++j)
      if (qprime[j] > 0.0 && q[j] > 0.0) kl += qprime[j] * std::log(q[j] / qprime[j]);
    const double F = -(p_.array() * z_.array().log()).sum();
    const double I_nats = F + s_ * m_ * kLn2 * D + kl;
    R_bits = std::max(0.0, I_nats / (m_ * kLn2));
  }

 private:
  int m_;
  double s_ = 0.0;
  VectorXd p_, z_, t_;
  MatrixXd d_, A_;
};

// Factored path: kernel A = exp(s ln2 (g_i - g_j)^2) applied per coordinate.
class FactoredSolver {
 public:
  FactoredSolver(const DiscretizedBlock& block, double s) : m_(block.m), s_(s) {
    const std::size_t g = block.grid.size();
    g_ = static_cast<Eigen::Index>(g);
    dg_.resize(g_, g_);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j) {
        const double d = block.grid[i] - block.grid[j];
        dg_(i, j) = d * d;
      }
    A_ = (s * kLn2 * dg_).array().exp();
    B_ = A_.cwiseProduct(dg_);
    p_ = Eigen::Map<const VectorXd>(block.pmf.data(), block.pmf.size());
  }

  VectorXd init_q() const { return p_; }

  // contraction of the tensor x by the symmetric kernel K on every axis
  VectorXd contract_all(const VectorXd& x, const MatrixXd& K) const {
    VectorXd cur = x;
    for (int axis = 0; axis < m_; ++axis) cur = mode_product(cur, K, axis);
    return cur;
  }

  // kernel B on one axis, A on the others (distortion accumulation)
  VectorXd contract_one(const VectorXd& x, int b_axis) const {
    VectorXd cur = x;
    for (int axis = 0; axis < m_; ++axis)
      cur = mode_product(cur, axis == b_axis ? B_ : A_, axis);
    return cur;
  }

  IterState step(VectorXd& q, bool update) {
    z_ = contract_all(q, A_).cwiseMax(kZFloor);
    pz_ = (p_.array() / z_.array()).matrix();
    t_ = contract_all(pz_, A_);
    IterState st;
    st.gap_nats = t_.maxCoeff() - 1.0;
    st.free_energy = -(p_.array() * z_.array().log()).sum();
    if (update) q = q.cwiseProduct(t_);
    return st;
  }

  void finish(const VectorXd& q, double& D, double& R_bits) {
    step(const_cast<VectorXd&>(q), false);
    D = 0.0;
    for (int axis = 0; axis < m_; ++axis) D += pz_.dot(contract_one(q, axis));
    D /= m_;
    const VectorXd qprime = q.cwiseProduct(t_);
    double kl = 0.0;
    for (Eigen::Index j = 0; j < q.size(); ++j)
      if (qprime[j] > 0.0 && q[j] > 0.0) kl += qprime[j] * std::log(q[j] / qprime[j]);
    const double F = -(p_.array() * z_.array().log()).sum();
    const double I_nats = F + s_ * m_ * kLn2 * D + kl;
    R_bits = std::max(0.0, I_nats / (m_ * kLn2));
  }

 private:
  // Apply the kernel along one tensor axis (row-major index order).
  VectorXd mode_product(const VectorXd& x, const MatrixXd& K, int axis) const {
    if (m_ == 1) return K * x;
    VectorXd out(x.size());
    if (m_ == 2) {
      Eigen::Map<const RowMat> X(x.data(), g_, g_);
      Eigen::Map<RowMat> O(out.data(), g_, g_);
      if (axis == 0)
        O = K * X;
      else
        O = X * K.transpose();
      return out;
    }
    // m_ == 3
    if (axis == 0) {
      Eigen::Map<const RowMat> X(x.data(), g_, g_ * g_);
      Eigen::Map<RowMat> O(out.data(), g_, g_ * g_);
      O = K * X;
    } else if (axis == 2) {
      Eigen::Map<const RowMat> X(x.data(), g_ * g_, g_);
      Eigen::Map<RowMat> O(out.data(), g_ * g_, g_);
      O = X * K.transpose();
    } else {
      for (Eigen::Index slab = 0; slab < g_; ++slab) {
        Eigen::Map<const RowMat> X(x.data() + slab * g_ * g_, g_, g_);
        Eigen::Map<RowMat> O(out.data() + slab * g_ * g_, g_, g_);
        O = K * X;
      }
    }
    return out;
  }

  int m_;
  double s_ = 0.0;
  Eigen::Index g_ = 0;
  MatrixXd dg_, A_, B_;
  VectorXd p_, z_, pz_, t_;
};

template <class Solver>
BAResult run_ba(Solver& solver, const DiscretizedBlock& block, double s, const BAOptions& opts,
                std::vector<double>* warm) {
  BAResult res;
  res.s = s;
  VectorXd q;
  if (warm != nullptr && warm->size() == block.alphabet()) {
    q = Eigen::Map<const VectorXd>(warm->data(), warm->size());
    const double total = q.sum();
    if (total > 0.0)
      q /= total;
    else
      q = solver.init_q();
  } else {
    q = solver.init_q();
  }

  const double tol_nats = opts.tol_bits * block.m * kLn2;
  double prev_f = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_iter; ++it) {
    const IterState st = solver.step(q, /*update=*/true);
    res.iterations = it;
    res.gap_bits = st.gap_nats / (block.m * kLn2);
    if (opts.record_free_energy) res.free_energy_trace.push_back(st.free_energy);
    if (st.free_energy > prev_f + 1e-9 * std::max(1.0, std::abs(prev_f)))
      res.monotone_ok = false;
    prev_f = st.free_energy;
    if (st.gap_nats < tol_nats) {
      res.converged = true;
      break;
    }
  }
  solver.finish(q, res.D, res.R_bits);
  if (warm != nullptr) warm->assign(q.data(), q.data() + q.size());
  return res;
}

}  // namespace

BAResult blahut_arimoto(const DiscretizedBlock& block, const DistortionTable& table, double s,
                        const BAOptions& opts, std::vector<double>* warm) {
  if (!(s < 0.0)) throw NumericalError("blahut_arimoto: s must be negative");
  if (!(opts.tol_bits > 0.0)) throw NumericalError("blahut_arimoto: tol must be positive");
  if (table.grid().size() != block.grid.size() || table.m() != block.m)
    throw NumericalError("blahut_arimoto: distortion table does not match block");
  if (block.pmf.size() != block.alphabet())
    throw NumericalError("blahut_arimoto: pmf size does not match alphabet");

  BAPath path = opts.path;
  if (path == BAPath::auto_dispatch)
    path = block.m == 1 ? BAPath::dense : BAPath::factored;
  if (path == BAPath::dense && block.alphabet() > kDenseLimit)
    throw NumericalError("blahut_arimoto: alphabet too large for the dense path");

  if (path == BAPath::dense) {
    DenseSolver solver(block, table, s);
    return run_ba(solver, block, s, opts, warm);
  }
  FactoredSolver solver(block, s);
  return run_ba(solver, block, s, opts, warm);
}

std::vector<double> make_s_grid(double start_exponent, double stop_exponent, int count) {
  if (count < 1) throw NumericalError("make_s_grid: count must be >= 1");
  std::vector<double> s;
  s.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double e = count == 1 ? start_exponent
                                : start_exponent +
                                      (stop_exponent - start_exponent) * i / (count - 1);
    s.push_back(-std::exp2(e));
  }
  std::sort(s.begin(), s.end());  // descending magnitude: most negative first
  return s;
}

RDCurve rd_curve(const DiscretizedBlock& block, const std::vector<double>& s_grid,
                 const BAOptions& opts) {
  if (s_grid.empty()) throw NumericalError("rd_curve: empty s grid");
  const DistortionTable table = build_distortion(block);
  RDCurve curve;
  curve.m = block.m;
  curve.grid_size = block.grid.size();
  curve.cell_width = block.cell_width;
  curve.source_entropy_bits = block.entropy_bits_per_symbol();

  std::vector<double> warm;  // warm start across the slope sweep
  for (double s : s_grid) {
    const BAResult r = blahut_arimoto(block, table, s, opts, &warm);
    curve.points.push_back({r.s, r.D, r.R_bits, r.iterations, r.gap_bits, r.converged});
  }
  std::sort(curve.points.begin(), curve.points.end(),
            [](const RDCurve::Point& a, const RDCurve::Point& b) { return a.D < b.D; });
  return curve;
}

RDCurve rd_curve(const ProcessSpec& spec, int m, int grid_size,
                 const std::vector<double>& s_grid, const BAOptions& opts) {
  return rd_curve(discretize_source(spec, m, grid_size), s_grid, opts);
}

CurveDiagnostics validate_curve(const RDCurve& curve, double tol) {
  CurveDiagnostics diag;
  const auto& pts = curve.points;
  double gap_budget = 0.0;
  for (const auto& p : pts) gap_budget = std::max(gap_budget, p.gap_bits);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double rise = pts[i + 1].R_bits - pts[i].R_bits;  // should be <= 0
    if (rise > tol + gap_budget) {
      diag.monotone = false;
      diag.worst_monotone = std::max(diag.worst_monotone, rise);
    }
  }
  for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
    // convexity: the middle point lies on or below the chord of its neighbors
    const double span = pts[i + 2].D - pts[i].D;
    if (span <= 0.0) continue;
    const double w = (pts[i + 1].D - pts[i].D) / span;
    const double chord = (1.0 - w) * pts[i].R_bits + w * pts[i + 2].R_bits;
    const double viol = pts[i + 1].R_bits - chord;  // bits
    if (viol > tol + gap_budget) {
      diag.convex = false;
      diag.worst_convex = std::max(diag.worst_convex, viol);
    }
  }
  return diag;
}

void write_csv(const RDCurve& curve, std::ostream& os) {
  os << "s,D,R_bits,iterations,gap,m,N\n";
  os.precision(17);
  for (const auto& p : curve.points) {
    os << p.s << ',' << p.D << ',' << p.R_bits << ',' << p.iterations << ',' << p.gap_bits
       << ',' << curve.m << ',' << curve.grid_size << '\n';
  }
}

}  // namespace dimlab
