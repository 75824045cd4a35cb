#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netsample/design.hpp"
#include "netsample/random.hpp"

namespace netsample {

enum class ResampleMode : std::uint8_t { Repeated, Process, ProcessWithReplacement };

std::string_view to_string(ResampleMode mode) noexcept;
std::optional<ResampleMode> parse_resample_mode(std::string_view text) noexcept;

/// Which joint inclusion frequencies f_ij to accumulate.
enum class PairAccumulation : std::uint8_t {
  None,
  /// Pairs joined by an edge of the resampling graph; O(n) memory.
  Edges,
  /// Every pair; O(n^2) memory and O(|S_t|^2) work per step.
  All,
};

std::string_view to_string(PairAccumulation pairs) noexcept;
std::optional<PairAccumulation> parse_pair_accumulation(std::string_view text) noexcept;

struct ResampleConfig {
  ResampleMode mode = ResampleMode::Process;
  /// T: retained steps per chain (process modes) or independent resamples.
  std::size_t iterations = 10000;
  std::size_t target_size = 400;
  /// Initial Bernoulli seeding rate of each repeated resample.
  double seed_rate = 0.0167;
  /// Per-link tracing probability per step or wave.
  double trace_rate = 0.05;
  /// Per-node re-seeding probability per step or wave. When unset, 0.01 for
  /// the process modes and 0.001 for repeated resamples.
  std::optional<double> reseed_rate;
  /// Process steps discarded before accumulation.
  std::size_t burn_in = 1000;
  /// Repeated mode only: stop each resample after this many tracing waves
  /// even if the target size was not reached.
  std::optional<std::size_t> max_waves;
  PairAccumulation pairs = PairAccumulation::None;
  /// Independent process chains whose counts are pooled.
  std::size_t chains = 1;
  std::size_t workers = 1;
  /// Also trace along known non-recruitment ties of the sample.
  bool use_known_ties = false;

  double effective_reseed_rate() const noexcept;

  /// Throws ValidationError listing every violated constraint.
  void validate(std::size_t sample_size) const;
};

/// Undirected adjacency over sample positions used by the resampling
/// designs: the recruitment forest, optionally plus known ties.
class ResampleGraph {
 public:
  ResampleGraph() = default;
  explicit ResampleGraph(const SampleNetwork& sample, bool include_known_ties = false);

  /// Pairs may repeat or come in either orientation; self-pairs throw.
  static ResampleGraph from_edges(std::size_t node_count,
                                  std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const noexcept {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  /// Unique pairs with first < second, sorted.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const noexcept { return edges_; }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> targets_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
};

struct PairFrequency {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double f = 0.0;
};

/// Inclusion frequencies over sample positions.
struct InclusionFrequencies {
  ResampleMode mode = ResampleMode::Process;
  /// Number of resamples the counts are averaged over (T times chains).
  std::size_t iterations = 0;
  /// Z_it summed over t.
  std::vector<std::uint64_t> hits;
  /// f_i = hits_i / iterations.
  std::vector<double> f;
  /// With-replacement mode: mean selection count per step.
  std::vector<double> g;
  /// Sorted by (i, j) with i < j.
  std::vector<PairFrequency> pairs;
  /// Time average of the resample size.
  double mean_size = 0.0;

  /// Positions whose f (or g, in with-replacement mode) is zero.
  std::vector<std::uint32_t> zero_positions() const;
  std::optional<double> pair(std::uint32_t i, std::uint32_t j) const noexcept;
};

/// Members of the current resample S_t.
struct ProcessState {
  std::vector<std::uint32_t> members;
  std::vector<std::uint8_t> in_sample;
  std::uint64_t step = 0;

  static ProcessState empty(std::size_t node_count);
  std::size_t size() const noexcept { return members.size(); }
};

/// Removal probability that brings the expected size back to the target:
/// (current - target) / current above the target, else 0.
double adaptive_removal_rate(std::size_t current, std::size_t target) noexcept;

/// One transition of the sampling process: trace every link from a member to
/// a non-member with probability trace_rate, re-seed every absent node with
/// probability reseed_rate, then remove each member with the adaptive rate
/// computed on the enlarged size.
void advance_process(ProcessState& state, const ResampleGraph& graph,
                     const ResampleConfig& config, Rng& rng);

ProcessState step_process(ProcessState state, const ResampleGraph& graph,
                          const ResampleConfig& config, Rng& rng);

/// One independent repeated-mode resample (positions in inclusion order).
std::vector<std::uint32_t> draw_resample(const ResampleGraph& graph, const ResampleConfig& config,
                                         Rng& rng);

/// Markov sampling process started from the empty set; burn-in steps are
/// discarded, then membership is averaged over `iterations` steps.
InclusionFrequencies process_resamples(const ResampleGraph& graph, const ResampleConfig& config,
                                       Rng& rng);
InclusionFrequencies process_resamples(const SampleNetwork& sample, const ResampleConfig& config,
                                       Rng& rng);

/// `iterations` independent resamples, each from Bernoulli seeds grown by
/// per-wave tracing and re-seeding to the target size.
InclusionFrequencies repeated_resamples(const ResampleGraph& graph, const ResampleConfig& config,
                                        Rng& rng);
InclusionFrequencies repeated_resamples(const SampleNetwork& sample, const ResampleConfig& config,
                                        Rng& rng);

/// With-replacement sampling process: selections form a multiset, each
/// selection traces each link independently, and g_i averages the number of
/// selections of node i per step.
InclusionFrequencies with_replacement_counts(const ResampleGraph& graph,
                                             const ResampleConfig& config, Rng& rng);
InclusionFrequencies with_replacement_counts(const SampleNetwork& sample,
                                             const ResampleConfig& config, Rng& rng);

/// Dispatches on config.mode.
InclusionFrequencies resample(const SampleNetwork& sample, const ResampleConfig& config, Rng& rng);

/// Sums per-step membership indicators (or selection counts) and optional
/// pair co-memberships into frequencies.
class FrequencyAccumulator {
 public:
  FrequencyAccumulator(std::size_t node_count, PairAccumulation pairs,
                       const ResampleGraph* graph = nullptr);

  void add_members(std::span<const std::uint32_t> members, std::span<const std::uint8_t> in_sample);
  /// Per-node selection counts m_t(i) of one with-replacement step.
  void add_counts(std::span<const std::uint32_t> counts);
  void merge(const FrequencyAccumulator& other);

  std::uint64_t steps() const noexcept { return steps_; }
  InclusionFrequencies finish(ResampleMode mode) const;

 private:
  std::size_t n_;
  PairAccumulation pair_mode_;
  const ResampleGraph* graph_;
  std::uint64_t steps_ = 0;
  std::uint64_t size_sum_ = 0;
  std::vector<std::uint64_t> hits_;
  std::vector<std::uint64_t> selections_;
  bool counted_ = false;
  std::vector<std::uint64_t> pair_hits_;
};

/// `id,f` with ids taken from `ids` (sample order).
std::string format_frequencies(const InclusionFrequencies& freqs, std::span<const ExternalId> ids);
/// `i,j,fij`
std::string format_pair_frequencies(const InclusionFrequencies& freqs, std::span<const ExternalId> ids);
/// `id,g`
std::string format_counts(const InclusionFrequencies& freqs, std::span<const ExternalId> ids);

/// Reads `id,f` aligned to the sample's node order. Every sampled id must
/// appear exactly once.
InclusionFrequencies parse_frequencies(std::istream& in, std::string_view source,
                                       const SampleNetwork& sample);
InclusionFrequencies read_frequencies(const std::filesystem::path& path, const SampleNetwork& sample);

/// Adds `i,j,fij` rows into freqs.pairs (sorted, i < j by position).
void read_pair_frequencies(const std::filesystem::path& path, const SampleNetwork& sample,
                           InclusionFrequencies& freqs);

}  // namespace netsample
