#include "dimlab/quantizer.hpp"

#include <cmath>
#include <limits>

namespace dimlab {

namespace {

// Largest scaled magnitude we accept before the integer code could overflow.
constexpr double kCodeLimit = 9.0e18;

}  // namespace

double dequantize(std::int64_t code, const QuantSpec& spec) {
  if (spec.scheme == QuantScheme::bbit)
    return std::ldexp(static_cast<double>(code), -spec.b);  // exact
  return static_cast<double>(code) / static_cast<double>(spec.b);
}

QuantizedScalar quantize_scalar(double x, const QuantSpec& spec) {
  if (!std::isfinite(x)) throw std::domain_error("quantize_scalar: x must be finite");
  if (spec.b < 1) throw std::domain_error("quantize_scalar: b must be >= 1");
  if (spec.scheme == QuantScheme::bbit && spec.b > 52)
    throw std::domain_error("quantize_scalar: bbit requires b <= 52");

  const double scaled = spec.scheme == QuantScheme::bbit
                            ? std::ldexp(x, spec.b)  // exact scaling by 2^b
                            : static_cast<double>(spec.b) * x;
  if (std::abs(scaled) > kCodeLimit)
    throw std::overflow_error("quantize_scalar: scaled value exceeds code range");

  std::int64_t code = static_cast<std::int64_t>(std::floor(scaled));
  // Pin the code to the defining property value <= x < next value. For bbit
  // the arithmetic is exact and the loops never run; for blevel they absorb
  // the rounding of b*x and of code/b.
  while (dequantize(code + 1, spec) <= x) ++code;
  while (dequantize(code, spec) > x) --code;
  return {code, dequantize(code, spec)};
}

QuantizedPath quantize_values(const std::vector<double>& values, const QuantSpec& spec) {
  QuantizedPath out;
  out.scheme = spec;
  out.codes.reserve(values.size());
  for (double v : values) out.codes.push_back(quantize_scalar(v, spec).code);
  return out;
}

QuantizedPath quantize_path(const SamplePath& path, const QuantSpec& spec) {
  QuantizedPath out = quantize_values(path.values, spec);
  out.source_seed = path.seed;
  out.source_n = path.values.size();
  return out;
}

void write_csv(const QuantizedPath& path, std::ostream& os) {
  os << "index,code\n";
  for (std::size_t i = 0; i < path.codes.size(); ++i) os << i << ',' << path.codes[i] << '\n';
}

const char* to_string(QuantScheme s) {
  return s == QuantScheme::bbit ? "bbit" : "blevel";
}

}  // namespace dimlab
