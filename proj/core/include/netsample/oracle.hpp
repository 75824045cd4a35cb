#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netsample/resample.hpp"

namespace netsample {

/// Bernoulli seeding followed by a fixed number of waves, each tracing every
/// link from a member to a non-member with `trace_rate` and re-seeding every
/// absent node with `reseed_rate`. No size cap. This is repeated-mode
/// resampling with target = n and max_waves = waves.
struct OracleDesign {
  double seed_rate = 0.5;
  double trace_rate = 0.5;
  double reseed_rate = 0.0;
  std::size_t waves = 1;
};

struct OracleResult {
  /// Exact inclusion probability of each node.
  std::vector<double> phi;
  /// Member sets with positive probability after the last wave.
  std::uint64_t outcomes = 0;
  /// Outcome-space estimate (waves + 2)^n used by the size guard.
  double size_estimate = 0.0;
};

/// Largest admissible outcome-space estimate.
inline constexpr double kOracleLimit = 16777216.0;  // 2^24

/// Exact inclusion probabilities by summing over every seed and tracing
/// outcome. Throws ValidationError when (waves + 2)^n exceeds 2^24.
OracleResult enumerate_exact_inclusion(const ResampleGraph& graph, const OracleDesign& design);

/// `id,phi`
std::string format_oracle(const OracleResult& result);

}  // namespace netsample
