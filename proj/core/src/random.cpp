#include "netsample/random.hpp"

#include <limits>

namespace netsample {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t state = master;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t step : path) {
    state ^= out + 0x632BE59BD9B4E019ULL + step * 0xD1B54A32D192ED03ULL;
    out = splitmix64(state);
  }
  return out;
}

Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(master, path));
}

BernoulliSkipper::BernoulliSkipper(double p)
    : p_(p), gap_(p > 0.0 && p < 1.0 ? p : 0.5) {}

std::uint64_t BernoulliSkipper::next_gap(Rng& rng) {
  if (p_ <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  if (p_ >= 1.0) return 0;
  return gap_(rng);
}

}  // namespace netsample
