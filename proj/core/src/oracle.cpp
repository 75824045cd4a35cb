#include "netsample/oracle.hpp"

#include <bit>
#include <cmath>

#include "netsample/csv.hpp"
#include "netsample/error.hpp"

namespace netsample {

namespace {

// Probability of each subset of `free` (a bitmask) joining, when node j
// joins independently with probability join[j]; calls fn(subset, prob).
template <typename Fn>
void for_each_subset(std::uint32_t free, const std::vector<double>& join, Fn&& fn) {
  std::vector<std::uint32_t> bits;
  for (std::uint32_t m = free; m; m &= m - 1) bits.push_back(static_cast<std::uint32_t>(std::countr_zero(m)));
  const std::uint32_t k = static_cast<std::uint32_t>(bits.size());
  for (std::uint32_t pick = 0; pick < (1u << k); ++pick) {
    double p = 1.0;
    std::uint32_t subset = 0;
    for (std::uint32_t b = 0; b < k && p > 0.0; ++b) {
      const double q = join[bits[b]];
      if (pick >> b & 1u) {
        p *= q;
        subset |= 1u << bits[b];
      } else {
        p *= 1.0 - q;
      }
    }
    if (p > 0.0) fn(subset, p);
  }
}

}  // namespace

OracleResult enumerate_exact_inclusion(const ResampleGraph& graph, const OracleDesign& design) {
  const std::size_t n = graph.size();
  OracleResult out;
  out.size_estimate = std::pow(static_cast<double>(design.waves + 2), static_cast<double>(n));
  if (out.size_estimate > kOracleLimit || n > 24) {
    throw ValidationError("outcome space too large to enumerate: about " +
                          csv::format_double(out.size_estimate) + " outcomes for " +
                          std::to_string(n) + " nodes and " + std::to_string(design.waves) +
                          " waves (limit 2^24)");
  }
  for (double r : {design.seed_rate, design.trace_rate, design.reseed_rate}) {
    if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("oracle rates must lie in [0,1]");
  }

  const std::uint32_t full = n == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  std::vector<double> dist(std::size_t{1} << n, 0.0);
  {
    const std::vector<double> seed(n, design.seed_rate);
    for_each_subset(full, seed, [&](std::uint32_t s, double p) { dist[s] += p; });
  }

  std::vector<double> join(n, 0.0);
  for (std::size_t wave = 0; wave < design.waves; ++wave) {
    std::vector<double> next(dist.size(), 0.0);
    for (std::uint32_t state = 0; state < dist.size(); ++state) {
      if (dist[state] == 0.0) continue;
      const std::uint32_t free = full & ~state;
      for (std::uint32_t j = 0; j < n; ++j) {
        if (state >> j & 1u) continue;
        std::size_t links = 0;
        for (auto w : graph.neighbors(j)) links += state >> w & 1u;
        join[j] = 1.0 - (1.0 - design.reseed_rate) *
                            std::pow(1.0 - design.trace_rate, static_cast<double>(links));
      }
      const double base = dist[state];
      for_each_subset(free, join, [&](std::uint32_t s, double p) { next[state | s] += base * p; });
    }
    dist = std::move(next);
  }

  out.phi.assign(n, 0.0);
  for (std::uint32_t state = 0; state < dist.size(); ++state) {
    if (dist[state] == 0.0) continue;
    ++out.outcomes;
    for (std::uint32_t m = state; m; m &= m - 1) out.phi[std::countr_zero(m)] += dist[state];
  }
  return out;
}

std::string format_oracle(const OracleResult& result) {
  std::string out = "id,phi\n";
  for (std::size_t i = 0; i < result.phi.size(); ++i) {
    out += std::to_string(i) + ',' + csv::format_double(result.phi[i]) + '\n';
  }
  return out;
}

}  // namespace netsample
