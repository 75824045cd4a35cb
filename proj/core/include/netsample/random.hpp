#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace netsample {

/// Engine used for every random draw in the library.
using Rng = std::mt19937_64;

/// One step of the splitmix64 sequence; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Deterministically derives a child seed from a master seed and a path of
/// stream indices (design, replication, chain, ...). Distinct paths give
/// statistically independent streams; no wall-clock input is ever used.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) noexcept;

/// Engine seeded from derive_seed(master, path).
Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Visits the successes of a run of independent Bernoulli(p) trials by
/// drawing geometric gaps instead of one uniform per trial.
class BernoulliSkipper {
 public:
  explicit BernoulliSkipper(double p);

  /// Number of failures before the next success. Returns UINT64_MAX when
  /// p == 0 so callers never see a success.
  std::uint64_t next_gap(Rng& rng);

  double probability() const noexcept { return p_; }

 private:
  double p_;
  std::geometric_distribution<std::uint64_t> gap_;
};

}  // namespace netsample
