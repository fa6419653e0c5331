#pragma once

// Plug-in block-entropy estimation over quantized symbol streams. Length-k
// windows are packed losslessly into a single int64 key (mixed radix over the
// observed code range), so symbol identity is exact and counting is O(n).

#include <cstdint>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "dimlab/quantizer.hpp"

namespace dimlab {

struct BlockCounts {
  int k = 1;                       // block length
  std::int64_t code_min = 0;       // packing base
  std::int64_t radix = 1;          // observed code range
  std::unordered_map<std::int64_t, std::uint64_t> counts;
  std::uint64_t total = 0;         // = n - k + 1

  std::vector<std::int64_t> unpack(std::int64_t key) const;
};

enum class EntropyEstimator { plugin, miller_madow };

struct EntropyEstimate {
  double value_bits = 0.0;
  EntropyEstimator estimator = EntropyEstimator::plugin;
  std::uint64_t support_seen = 0;
  std::uint64_t total = 0;
  // reliability gate: support_seen > total/10 means the plug-in estimate is
  // likely biased low by undersampling
  bool undersampled = false;
};

BlockCounts count_blocks(const QuantizedPath& qpath, int k);

EntropyEstimate entropy_plugin(const BlockCounts& counts);

// H([X_{k+1}] | [X^k]) = H(k+1 blocks) - H(k blocks); k = 0 gives the
// marginal entropy.
EntropyEstimate conditional_entropy(const QuantizedPath& qpath, int k);

// Adds (support_seen - 1) / (2 total ln 2) bits to a plug-in estimate.
EntropyEstimate miller_madow_correct(const EntropyEstimate& est, const BlockCounts& counts);

const char* to_string(EntropyEstimator e);

}  // namespace dimlab
