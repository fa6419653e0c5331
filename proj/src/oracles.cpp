#include "dimlab/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace dimlab {

double gaussian_rd(double variance, double D) {
  if (!(D > 0.0)) throw std::domain_error("gaussian_rd: D must be positive");
  if (D >= variance) return 0.0;
  return 0.5 * std::log2(variance / D);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p out of [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double binary_hamming_rd(double p1, double D) {
  const double pm = std::min(p1, 1.0 - p1);
  if (D >= pm) return 0.0;
  if (D < 0.0) throw std::domain_error("binary_hamming_rd: D must be >= 0");
  return binary_entropy(p1) - binary_entropy(D);
}

double uniform_slb(double D) {
  const double d_edge = 1.0 / (2.0 * M_PI * M_E);
  if (D <= 0.0 || D >= d_edge) return 0.0;
  return 0.5 * std::log2(1.0 / (2.0 * M_PI * M_E * D));
}

MixtureBounds mixture_bounds(double p, const std::function<double(double)>& r_fc, double D) {
  const double base = r_fc(D);
  MixtureBounds b;
  b.lower = p * base;
  b.upper = binary_entropy(p) + p * base;
  return b;
}

double OracleCurve::operator()(double D) const {
  switch (kind) {
    case OracleKind::gaussian_rd: return gaussian_rd(variance, D);
    case OracleKind::binary_hamming_rd: return binary_hamming_rd(p1, D);
    case OracleKind::uniform_slb: return uniform_slb(D);
    case OracleKind::mixture_lower: return mixture_bounds(p, base, D).lower;
    case OracleKind::mixture_upper: return mixture_bounds(p, base, D).upper;
  }
  return 0.0;
}

void write_csv(const OracleCurve& curve, const std::vector<double>& d_grid, std::ostream& os) {
  os << "s,D,R_bits,iterations,gap,m,N\n";
  os.precision(17);
  for (double D : d_grid) os << 0 << ',' << D << ',' << curve(D) << ",0,0,0,0\n";
}

}  // namespace dimlab
