#include "dimlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dimlab {

std::vector<std::int64_t> BlockCounts::unpack(std::int64_t key) const {
  std::vector<std::int64_t> tuple(k);
  for (int i = k - 1; i >= 0; --i) {
    tuple[i] = code_min + (key % radix);
    key /= radix;
  }
  return tuple;
}

BlockCounts count_blocks(const QuantizedPath& qpath, int k) {
  const auto& codes = qpath.codes;
  if (k < 1) throw std::invalid_argument("count_blocks: k must be >= 1");
  if (static_cast<std::size_t>(k) > codes.size())
    throw std::invalid_argument("count_blocks: k exceeds path length");

  BlockCounts bc;
  bc.k = k;
  const auto [mn, mx] = std::minmax_element(codes.begin(), codes.end());
  bc.code_min = *mn;
  bc.radix = *mx - *mn + 1;
  // k codes in [0, radix) pack into radix^k; keep it inside int64
  double span = 1.0;
  for (int i = 0; i < k; ++i) span *= static_cast<double>(bc.radix);
  if (span > 9.0e18)
    throw std::invalid_argument("count_blocks: code range too wide to pack blocks");

  const std::size_t n_windows = codes.size() - k + 1;
  bc.counts.reserve(std::min<std::size_t>(n_windows, 1 << 20));
  std::int64_t key = 0;
  // rolling mixed-radix key: drop the oldest digit, append the newest
  std::int64_t high = 1;
  for (int i = 0; i < k - 1; ++i) high *= bc.radix;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const std::int64_t digit = codes[i] - bc.code_min;
    if (i < static_cast<std::size_t>(k)) {
      key = key * bc.radix + digit;
      if (i + 1 < static_cast<std::size_t>(k)) continue;
    } else {
      key = (key % high) * bc.radix + digit;
    }
    ++bc.counts[key];
  }
  bc.total = n_windows;
  return bc;
}

EntropyEstimate entropy_plugin(const BlockCounts& counts) {
  if (counts.total == 0 || counts.counts.empty())
    throw std::invalid_argument("entropy_plugin: empty counts");
  const double n = static_cast<double>(counts.total);
  double acc = 0.0;  // sum of c*log2(c)
  for (const auto& [key, c] : counts.counts)
    acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
  EntropyEstimate est;
  est.value_bits = std::max(0.0, std::log2(n) - acc / n);
  est.estimator = EntropyEstimator::plugin;
  est.support_seen = counts.counts.size();
  est.total = counts.total;
  est.undersampled = est.support_seen > counts.total / 10;
  return est;
}

EntropyEstimate conditional_entropy(const QuantizedPath& qpath, int k) {
  if (k < 0) throw std::invalid_argument("conditional_entropy: k must be >= 0");
  if (qpath.codes.size() < static_cast<std::size_t>(k) + 1)
    throw std::invalid_argument("conditional_entropy: path shorter than k+1");
  const EntropyEstimate joint = entropy_plugin(count_blocks(qpath, k + 1));
  if (k == 0) return joint;
  const EntropyEstimate past = entropy_plugin(count_blocks(qpath, k));
  EntropyEstimate est = joint;
  est.value_bits = joint.value_bits - past.value_bits;
  est.undersampled = joint.undersampled || past.undersampled;
  return est;
}

EntropyEstimate miller_madow_correct(const EntropyEstimate& est, const BlockCounts& counts) {
  EntropyEstimate out = est;
  if (counts.total > 0 && est.support_seen > 1) {
    out.value_bits += static_cast<double>(est.support_seen - 1) /
                      (2.0 * static_cast<double>(counts.total) * std::log(2.0));
  }
  out.estimator = EntropyEstimator::miller_madow;
  return out;
}

const char* to_string(EntropyEstimator e) {
  return e == EntropyEstimator::plugin ? "plugin" : "miller_madow";
}

}  // namespace dimlab
