#pragma once

// Closed-form reference curves: the Gaussian rate-distortion function, the
// binary-Hamming rate-distortion function, the Shannon lower bound for the
// unit uniform density, and the piecewise-constant sandwich
//   p R_fc(D) <= R(X,D) <= H(p) + p R_fc(D).

#include <functional>
#include <ostream>
#include <vector>

namespace dimlab {

// max(0, 1/2 log2(variance / D))
double gaussian_rd(double variance, double D);

// -p log2 p - (1-p) log2(1-p), with 0 log 0 = 0
double binary_entropy(double p);

// Equiprobable-by-default binary source under Hamming distortion:
// R(D) = H(p1) - H(D) for D <= min(p1, 1-p1), else 0.
double binary_hamming_rd(double p1, double D);

// Shannon lower bound for the unit uniform: 1/2 log2(1/(2 pi e D)) on
// 0 < D < 1/(2 pi e); returns 0 outside the validity range.
double uniform_slb(double D);

struct MixtureBounds {
  double lower = 0.0;  // p * R_fc(D)
  double upper = 0.0;  // H(p) + p * R_fc(D)
};

// R_fc is any evaluable reference curve for the continuous component.
MixtureBounds mixture_bounds(double p, const std::function<double(double)>& r_fc, double D);

enum class OracleKind { gaussian_rd, binary_hamming_rd, uniform_slb, mixture_lower, mixture_upper };

// A closed-form curve evaluable at any D in its validity range, exportable in
// the same CSV schema as a solver curve (solver columns zeroed).
struct OracleCurve {
  OracleKind kind = OracleKind::uniform_slb;
  double variance = 1.0;  // gaussian_rd
  double p1 = 0.5;        // binary_hamming_rd
  double p = 0.0;         // mixture bounds weight
  std::function<double(double)> base;  // R_fc for the mixture bounds

  double operator()(double D) const;
};

// CSV columns: s,D,R_bits,iterations,gap,m,N (solver columns zero)
void write_csv(const OracleCurve& curve, const std::vector<double>& d_grid, std::ostream& os);

}  // namespace dimlab
