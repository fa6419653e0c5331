#pragma once

// Scalar and path quantizers. Two schemes:
//   bbit:   value = floor(2^b * x) / 2^b   (truncated binary expansion)
//   blevel: value = floor(b * x) / b
// Codes are the integer floors; they are the canonical symbols for entropy
// counting, so reconstruction never relies on float equality.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "dimlab/process.hpp"

namespace dimlab {

enum class QuantScheme { bbit, blevel };

struct QuantSpec {
  QuantScheme scheme = QuantScheme::bbit;
  int b = 1;
};

struct QuantizedScalar {
  std::int64_t code = 0;
  double value = 0.0;
};

// Requires x finite and the scaled magnitude within the int64 code range.
// bbit additionally requires b <= 52 so that floor(2^b x) is exact.
QuantizedScalar quantize_scalar(double x, const QuantSpec& spec);

// Reconstruction: code -> representative value (left cell edge).
double dequantize(std::int64_t code, const QuantSpec& spec);

struct QuantizedPath {
  std::vector<std::int64_t> codes;
  QuantSpec scheme;
  std::uint64_t source_seed = 0;
  std::size_t source_n = 0;
};

QuantizedPath quantize_path(const SamplePath& path, const QuantSpec& spec);
QuantizedPath quantize_values(const std::vector<double>& values, const QuantSpec& spec);

// CSV columns: index,code
void write_csv(const QuantizedPath& path, std::ostream& os);

const char* to_string(QuantScheme s);

}  // namespace dimlab
