#include "netsample/resample.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "netsample/csv.hpp"
#include "netsample/error.hpp"
#include "netsample/parallel.hpp"

namespace netsample {

namespace {

// Independent resamples per RNG stream in repeated mode. Fixed so results do
// not depend on the worker count.
constexpr std::size_t kRepeatedBlock = 1024;

std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

}  // namespace

std::string_view to_string(ResampleMode mode) noexcept {
  switch (mode) {
    case ResampleMode::Repeated: return "repeated";
    case ResampleMode::Process: return "process";
    case ResampleMode::ProcessWithReplacement: return "process-with-replacement";
  }
  return "?";
}

std::optional<ResampleMode> parse_resample_mode(std::string_view text) noexcept {
  if (text == "repeated") return ResampleMode::Repeated;
  if (text == "process") return ResampleMode::Process;
  if (text == "process-with-replacement" || text == "with-replacement") {
    return ResampleMode::ProcessWithReplacement;
  }
  return std::nullopt;
}

std::string_view to_string(PairAccumulation pairs) noexcept {
  switch (pairs) {
    case PairAccumulation::None: return "none";
    case PairAccumulation::Edges: return "edges";
    case PairAccumulation::All: return "all";
  }
  return "?";
}

std::optional<PairAccumulation> parse_pair_accumulation(std::string_view text) noexcept {
  if (text == "none") return PairAccumulation::None;
  if (text == "edges") return PairAccumulation::Edges;
  if (text == "all") return PairAccumulation::All;
  return std::nullopt;
}

double ResampleConfig::effective_reseed_rate() const noexcept {
  if (reseed_rate) return *reseed_rate;
  return mode == ResampleMode::Repeated ? 0.001 : 0.01;
}

void ResampleConfig::validate(std::size_t sample_size) const {
  std::vector<std::string> problems;
  auto rate = [&](const char* name, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      problems.push_back(std::string(name) + " must lie in [0,1], got " + csv::format_double(v));
    }
  };
  rate("seed_rate", seed_rate);
  rate("trace_rate", trace_rate);
  rate("reseed_rate", effective_reseed_rate());
  if (iterations < 1) problems.emplace_back("iterations must be at least 1");
  if (target_size < 1) problems.emplace_back("target_size must be at least 1");
  if (sample_size == 0) problems.emplace_back("sample is empty");
  if (target_size > sample_size) {
    problems.push_back("target_size " + std::to_string(target_size) + " exceeds the sample size " +
                       std::to_string(sample_size));
  }
  if (chains < 1) problems.emplace_back("chains must be at least 1");
  if (workers < 1) problems.emplace_back("workers must be at least 1");
  if (mode == ResampleMode::ProcessWithReplacement && pairs != PairAccumulation::None) {
    problems.emplace_back("pair frequencies are not defined for with-replacement resampling");
  }
  if (max_waves && mode != ResampleMode::Repeated) {
    problems.emplace_back("max_waves applies to repeated resampling only");
  }
  if (!problems.empty()) {
    std::string msg = "invalid resample configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
}

// ---------------------------------------------------------------------------

ResampleGraph::ResampleGraph(const SampleNetwork& sample, bool include_known_ties) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& e : sample.edges()) pairs.emplace_back(e.recruiter, e.recruit);
  if (include_known_ties) {
    for (const auto& e : sample.known_ties()) pairs.emplace_back(e.recruiter, e.recruit);
  }
  *this = from_edges(sample.size(), pairs);
}

ResampleGraph ResampleGraph::from_edges(
    std::size_t node_count, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  ResampleGraph g;
  for (auto [a, b] : edges) {
    if (a == b) throw ValidationError("resample graph edge joins node " + std::to_string(a) + " to itself");
    if (a >= node_count || b >= node_count) throw ValidationError("resample graph edge out of range");
    g.edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  g.offsets_.assign(node_count + 1, 0);
  for (auto [a, b] : g.edges_) {
    ++g.offsets_[a + 1];
    ++g.offsets_[b + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.targets_.resize(g.offsets_.back());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [a, b] : g.edges_) {
    g.targets_[cursor[a]++] = b;
    g.targets_[cursor[b]++] = a;
  }
  for (std::size_t v = 0; v < node_count; ++v) {
    std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
  }
  return g;
}

// ---------------------------------------------------------------------------

std::vector<std::uint32_t> InclusionFrequencies::zero_positions() const {
  std::vector<std::uint32_t> out;
  const auto& values = mode == ResampleMode::ProcessWithReplacement ? g : f;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::optional<double> InclusionFrequencies::pair(std::uint32_t i, std::uint32_t j) const noexcept {
  if (i > j) std::swap(i, j);
  const auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair{i, j},
                                   [](const PairFrequency& p, const std::pair<std::uint32_t, std::uint32_t>& k) {
                                     return std::pair{p.i, p.j} < k;
                                   });
  if (it == pairs.end() || it->i != i || it->j != j) return std::nullopt;
  return it->f;
}

ProcessState ProcessState::empty(std::size_t node_count) {
  ProcessState s;
  s.in_sample.assign(node_count, 0);
  return s;
}

double adaptive_removal_rate(std::size_t current, std::size_t target) noexcept {
  if (current == 0 || current <= target) return 0.0;
  return static_cast<double>(current - target) / static_cast<double>(current);
}

// ---------------------------------------------------------------------------

FrequencyAccumulator::FrequencyAccumulator(std::size_t node_count, PairAccumulation pairs,
                                           const ResampleGraph* graph)
    : n_(node_count), pair_mode_(pairs), graph_(graph), hits_(node_count, 0) {
  if (pairs == PairAccumulation::Edges) {
    if (graph == nullptr) throw ValidationError("edge pair accumulation needs the resample graph");
    pair_hits_.assign(graph->edges().size(), 0);
  } else if (pairs == PairAccumulation::All) {
    pair_hits_.assign(node_count < 2 ? 0 : node_count * (node_count - 1) / 2, 0);
  }
}

void FrequencyAccumulator::add_members(std::span<const std::uint32_t> members,
                                       std::span<const std::uint8_t> in_sample) {
  ++steps_;
  size_sum_ += members.size();
  for (auto v : members) ++hits_[v];
  if (pair_mode_ == PairAccumulation::Edges) {
    const auto& edges = graph_->edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (in_sample[edges[e].first] && in_sample[edges[e].second]) ++pair_hits_[e];
    }
  } else if (pair_mode_ == PairAccumulation::All) {
    std::vector<std::uint32_t> sorted(members.begin(), members.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t a = 0; a < sorted.size(); ++a) {
      const std::size_t base = pair_index(n_, sorted[a], sorted[a] + 1u);
      for (std::size_t b = a + 1; b < sorted.size(); ++b) {
        ++pair_hits_[base + (sorted[b] - sorted[a] - 1)];
      }
    }
  }
}

void FrequencyAccumulator::add_counts(std::span<const std::uint32_t> counts) {
  if (!counted_) {
    selections_.assign(n_, 0);
    counted_ = true;
  }
  ++steps_;
  for (std::size_t i = 0; i < n_; ++i) {
    size_sum_ += counts[i];
    selections_[i] += counts[i];
    if (counts[i] > 0) ++hits_[i];
  }
}

void FrequencyAccumulator::merge(const FrequencyAccumulator& other) {
  steps_ += other.steps_;
  size_sum_ += other.size_sum_;
  for (std::size_t i = 0; i < n_; ++i) hits_[i] += other.hits_[i];
  if (other.counted_) {
    if (!counted_) {
      selections_.assign(n_, 0);
      counted_ = true;
    }
    for (std::size_t i = 0; i < n_; ++i) selections_[i] += other.selections_[i];
  }
  for (std::size_t k = 0; k < pair_hits_.size(); ++k) pair_hits_[k] += other.pair_hits_[k];
}

InclusionFrequencies FrequencyAccumulator::finish(ResampleMode mode) const {
  InclusionFrequencies out;
  out.mode = mode;
  out.iterations = steps_;
  out.hits = hits_;
  const double t = static_cast<double>(steps_);
  out.f.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) out.f[i] = steps_ ? static_cast<double>(hits_[i]) / t : 0.0;
  if (counted_) {
    out.g.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) out.g[i] = static_cast<double>(selections_[i]) / t;
  }
  out.mean_size = steps_ ? static_cast<double>(size_sum_) / t : 0.0;
  if (pair_mode_ == PairAccumulation::Edges) {
    const auto& edges = graph_->edges();
    out.pairs.reserve(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      out.pairs.push_back({edges[e].first, edges[e].second, static_cast<double>(pair_hits_[e]) / t});
    }
  } else if (pair_mode_ == PairAccumulation::All) {
    out.pairs.reserve(pair_hits_.size());
    std::size_t k = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
      for (std::uint32_t j = i + 1; j < n_; ++j, ++k) {
        out.pairs.push_back({i, j, static_cast<double>(pair_hits_[k]) / t});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void advance_process(ProcessState& state, const ResampleGraph& graph, const ResampleConfig& config,
                     Rng& rng) {
  auto& members = state.members;
  auto& in = state.in_sample;
  auto add = [&](std::uint32_t w) {
    if (!in[w]) {
      in[w] = 1;
      members.push_back(w);
    }
  };

  // Tracing: one Bernoulli trial per adjacency entry of the members present
  // at the start of the step. Links to current members are no-ops.
  const std::size_t before = members.size();
  if (config.trace_rate > 0.0 && before > 0) {
    BernoulliSkipper skip(config.trace_rate);
    std::uint64_t gap = skip.next_gap(rng);
    for (std::size_t k = 0; k < before; ++k) {
      const auto nb = graph.neighbors(members[k]);
      std::size_t idx = 0;
      while (gap < nb.size() - idx) {
        idx += static_cast<std::size_t>(gap);
        add(nb[idx]);
        ++idx;
        gap = skip.next_gap(rng);
      }
      gap -= nb.size() - idx;
    }
  }

  const double reseed = config.effective_reseed_rate();
  if (reseed > 0.0) {
    BernoulliSkipper skip(reseed);
    const std::uint64_t n = graph.size();
    for (std::uint64_t v = skip.next_gap(rng); v < n; v += 1 + skip.next_gap(rng)) {
      add(static_cast<std::uint32_t>(v));
    }
  }

  const double q = adaptive_removal_rate(members.size(), config.target_size);
  if (q > 0.0) {
    BernoulliSkipper skip(q);
    std::vector<std::uint8_t> drop(members.size(), 0);
    for (std::uint64_t k = skip.next_gap(rng); k < members.size(); k += 1 + skip.next_gap(rng)) {
      drop[k] = 1;
    }
    std::size_t out = 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (drop[k]) {
        in[members[k]] = 0;
      } else {
        members[out++] = members[k];
      }
    }
    members.resize(out);
  }
  ++state.step;
}

ProcessState step_process(ProcessState state, const ResampleGraph& graph,
                          const ResampleConfig& config, Rng& rng) {
  if (state.in_sample.size() != graph.size()) {
    std::vector<std::uint8_t> in(graph.size(), 0);
    for (auto v : state.members) {
      if (v >= graph.size()) throw ValidationError("process state member outside the sample");
      in[v] = 1;
    }
    state.in_sample = std::move(in);
  }
  advance_process(state, graph, config, rng);
  return state;
}

namespace {

// Reusable buffers for repeated-mode draws.
class RepeatedDrawer {
 public:
  RepeatedDrawer(const ResampleGraph& graph, const ResampleConfig& config)
      : graph_(graph), config_(config), in_(graph.size(), 0) {}

  const std::vector<std::uint32_t>& draw(Rng& rng) {
    for (auto v : members_) in_[v] = 0;
    members_.clear();
    const std::size_t target = config_.target_size;

    std::vector<std::uint32_t>& fresh = fresh_;
    fresh.clear();
    bernoulli_nodes(config_.seed_rate, rng, fresh);
    admit(fresh, rng);

    const double reseed = config_.effective_reseed_rate();
    std::size_t waves = 0;
    while (members_.size() < target) {
      if (config_.max_waves && waves >= *config_.max_waves) break;
      ++waves;
      fresh.clear();
      if (config_.trace_rate > 0.0) {
        BernoulliSkipper skip(config_.trace_rate);
        std::uint64_t gap = skip.next_gap(rng);
        const std::size_t before = members_.size();
        for (std::size_t k = 0; k < before; ++k) {
          const auto nb = graph_.neighbors(members_[k]);
          std::size_t idx = 0;
          while (gap < nb.size() - idx) {
            idx += static_cast<std::size_t>(gap);
            mark(nb[idx], fresh);
            ++idx;
            gap = skip.next_gap(rng);
          }
          gap -= nb.size() - idx;
        }
      }
      bernoulli_nodes(reseed, rng, fresh);
      if (fresh.empty()) {
        if (stuck(reseed)) break;
        continue;
      }
      admit(fresh, rng);
    }
    return members_;
  }

 private:
  void mark(std::uint32_t v, std::vector<std::uint32_t>& fresh) {
    if (!in_[v]) {
      in_[v] = 2;  // pending this wave
      fresh.push_back(v);
    }
  }

  void bernoulli_nodes(double p, Rng& rng, std::vector<std::uint32_t>& fresh) {
    if (p <= 0.0) return;
    const std::uint64_t n = graph_.size();
    if (p >= 1.0) {
      for (std::uint64_t v = 0; v < n; ++v) mark(static_cast<std::uint32_t>(v), fresh);
      return;
    }
    BernoulliSkipper skip(p);
    for (std::uint64_t v = skip.next_gap(rng); v < n; v += 1 + skip.next_gap(rng)) {
      mark(static_cast<std::uint32_t>(v), fresh);
    }
  }

  // Adds the wave's candidates, keeping a uniform subset when they would
  // overshoot the target.
  void admit(std::vector<std::uint32_t>& fresh, Rng& rng) {
    for (auto v : fresh) in_[v] = 0;
    const std::size_t room = config_.target_size - members_.size();
    if (fresh.size() > room) {
      for (std::size_t k = 0; k < room; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, fresh.size() - 1);
        std::swap(fresh[k], fresh[pick(rng)]);
      }
      fresh.resize(room);
    }
    for (auto v : fresh) {
      in_[v] = 1;
      members_.push_back(v);
    }
  }

  bool stuck(double reseed) const {
    if (reseed > 0.0 && members_.size() < graph_.size()) return false;
    if (config_.trace_rate <= 0.0) return true;
    for (auto v : members_) {
      for (auto w : graph_.neighbors(v)) {
        if (!in_[w]) return false;
      }
    }
    return true;
  }

  const ResampleGraph& graph_;
  const ResampleConfig& config_;
  std::vector<std::uint8_t> in_;
  std::vector<std::uint32_t> members_;
  std::vector<std::uint32_t> fresh_;
};

std::uint64_t stream_base(Rng& rng) { return rng(); }

InclusionFrequencies merge_in_order(std::vector<FrequencyAccumulator>& parts, ResampleMode mode) {
  for (std::size_t k = 1; k < parts.size(); ++k) parts[0].merge(parts[k]);
  return parts[0].finish(mode);
}

}  // namespace

std::vector<std::uint32_t> draw_resample(const ResampleGraph& graph, const ResampleConfig& config,
                                         Rng& rng) {
  RepeatedDrawer drawer(graph, config);
  return drawer.draw(rng);
}

InclusionFrequencies process_resamples(const ResampleGraph& graph, const ResampleConfig& config,
                                       Rng& rng) {
  config.validate(graph.size());
  const std::uint64_t base = stream_base(rng);
  std::vector<FrequencyAccumulator> parts(config.chains,
                                          FrequencyAccumulator(graph.size(), config.pairs, &graph));
  parallel_for(config.chains, config.workers, [&](std::size_t c) {
    Rng chain_rng = make_rng(base, {c});
    ProcessState state = ProcessState::empty(graph.size());
    for (std::size_t s = 0; s < config.burn_in; ++s) advance_process(state, graph, config, chain_rng);
    for (std::size_t t = 0; t < config.iterations; ++t) {
      advance_process(state, graph, config, chain_rng);
      parts[c].add_members(state.members, state.in_sample);
    }
  });
  return merge_in_order(parts, ResampleMode::Process);
}

InclusionFrequencies repeated_resamples(const ResampleGraph& graph, const ResampleConfig& config,
                                        Rng& rng) {
  config.validate(graph.size());
  const std::uint64_t base = stream_base(rng);
  const std::size_t blocks = (config.iterations + kRepeatedBlock - 1) / kRepeatedBlock;
  std::vector<FrequencyAccumulator> parts(blocks,
                                          FrequencyAccumulator(graph.size(), config.pairs, &graph));
  parallel_for(blocks, config.workers, [&](std::size_t b) {
    Rng block_rng = make_rng(base, {b});
    RepeatedDrawer drawer(graph, config);
    std::vector<std::uint8_t> in(graph.size(), 0);
    const std::size_t end = std::min(config.iterations, (b + 1) * kRepeatedBlock);
    for (std::size_t t = b * kRepeatedBlock; t < end; ++t) {
      const auto& members = drawer.draw(block_rng);
      if (config.pairs == PairAccumulation::Edges) {
        for (auto v : members) in[v] = 1;
        parts[b].add_members(members, in);
        for (auto v : members) in[v] = 0;
      } else {
        parts[b].add_members(members, in);
      }
    }
  });
  return merge_in_order(parts, ResampleMode::Repeated);
}

InclusionFrequencies with_replacement_counts(const ResampleGraph& graph,
                                             const ResampleConfig& config, Rng& rng) {
  config.validate(graph.size());
  const std::uint64_t base = stream_base(rng);
  const std::size_t n = graph.size();
  std::vector<FrequencyAccumulator> parts(config.chains,
                                          FrequencyAccumulator(n, PairAccumulation::None));
  const double p = config.trace_rate;
  const double reseed = config.effective_reseed_rate();
  parallel_for(config.chains, config.workers, [&](std::size_t c) {
    Rng chain_rng = make_rng(base, {c});
    std::vector<std::uint32_t> count(n, 0);
    std::vector<std::uint32_t> added(n, 0);
    std::uint64_t total = 0;
    auto step = [&] {
      std::fill(added.begin(), added.end(), 0u);
      if (p > 0.0) {
        for (std::uint32_t i = 0; i < n; ++i) {
          if (count[i] == 0) continue;
          for (auto j : graph.neighbors(i)) {
            std::binomial_distribution<std::uint32_t> traced(count[i], p);
            added[j] += traced(chain_rng);
          }
        }
      }
      if (reseed > 0.0) {
        BernoulliSkipper skip(reseed);
        for (std::uint64_t v = skip.next_gap(chain_rng); v < n; v += 1 + skip.next_gap(chain_rng)) {
          ++added[v];
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        count[i] += added[i];
        total += added[i];
      }
      const double q = adaptive_removal_rate(static_cast<std::size_t>(total), config.target_size);
      if (q > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
          if (count[i] == 0) continue;
          std::binomial_distribution<std::uint32_t> removed(count[i], q);
          const std::uint32_t r = removed(chain_rng);
          count[i] -= r;
          total -= r;
        }
      }
    };
    for (std::size_t s = 0; s < config.burn_in; ++s) step();
    for (std::size_t t = 0; t < config.iterations; ++t) {
      step();
      parts[c].add_counts(count);
    }
  });
  return merge_in_order(parts, ResampleMode::ProcessWithReplacement);
}

InclusionFrequencies process_resamples(const SampleNetwork& sample, const ResampleConfig& config,
                                       Rng& rng) {
  return process_resamples(ResampleGraph(sample, config.use_known_ties), config, rng);
}

InclusionFrequencies repeated_resamples(const SampleNetwork& sample, const ResampleConfig& config,
                                        Rng& rng) {
  return repeated_resamples(ResampleGraph(sample, config.use_known_ties), config, rng);
}

InclusionFrequencies with_replacement_counts(const SampleNetwork& sample,
                                             const ResampleConfig& config, Rng& rng) {
  return with_replacement_counts(ResampleGraph(sample, config.use_known_ties), config, rng);
}

InclusionFrequencies resample(const SampleNetwork& sample, const ResampleConfig& config, Rng& rng) {
  const ResampleGraph graph(sample, config.use_known_ties);
  switch (config.mode) {
    case ResampleMode::Repeated: return repeated_resamples(graph, config, rng);
    case ResampleMode::Process: return process_resamples(graph, config, rng);
    case ResampleMode::ProcessWithReplacement: return with_replacement_counts(graph, config, rng);
  }
  throw ValidationError("unknown resample mode");
}

// ---------------------------------------------------------------------------

std::string format_frequencies(const InclusionFrequencies& freqs, std::span<const ExternalId> ids) {
  std::string out = "id,f\n";
  for (std::size_t i = 0; i < freqs.f.size(); ++i) {
    out += std::to_string(ids[i]) + ',' + csv::format_double(freqs.f[i]) + '\n';
  }
  return out;
}

std::string format_pair_frequencies(const InclusionFrequencies& freqs,
                                    std::span<const ExternalId> ids) {
  std::string out = "i,j,fij\n";
  for (const auto& p : freqs.pairs) {
    out += std::to_string(ids[p.i]) + ',' + std::to_string(ids[p.j]) + ',' +
           csv::format_double(p.f) + '\n';
  }
  return out;
}

std::string format_counts(const InclusionFrequencies& freqs, std::span<const ExternalId> ids) {
  std::string out = "id,g\n";
  for (std::size_t i = 0; i < freqs.g.size(); ++i) {
    out += std::to_string(ids[i]) + ',' + csv::format_double(freqs.g[i]) + '\n';
  }
  return out;
}

InclusionFrequencies parse_frequencies(std::istream& in, std::string_view source,
                                       const SampleNetwork& sample) {
  const std::string src(source);
  InclusionFrequencies out;
  std::vector<std::uint8_t> seen(sample.size(), 0);
  std::vector<double> values(sample.size(), 0.0);
  bool header = true;
  bool counts = false;
  csv::for_each_line(in, [&](std::size_t line, std::string_view text) {
    const auto fields = csv::split(text, ',');
    if (header) {
      if (fields.size() != 2 || fields[0] != "id" || (fields[1] != "f" && fields[1] != "g")) {
        throw ParseError(src, line, "header must be `id,f` or `id,g`");
      }
      counts = fields[1] == "g";
      header = false;
      return;
    }
    if (fields.size() != 2) throw ParseError(src, line, "expected 2 fields");
    const auto id = csv::parse_int(fields[0]);
    const auto value = csv::parse_double(fields[1]);
    if (!id) throw ParseError(src, line, "invalid id");
    if (!value || !(*value >= 0.0)) throw ParseError(src, line, "frequency must be a nonnegative number");
    if (!counts && *value > 1.0) throw ParseError(src, line, "inclusion frequency exceeds 1");
    const auto pos = sample.position(*id);
    if (!pos) throw ParseError(src, line, "node " + std::to_string(*id) + " is not in the sample");
    if (seen[*pos]) throw ParseError(src, line, "node " + std::to_string(*id) + " listed twice");
    seen[*pos] = 1;
    values[*pos] = *value;
  });
  if (header) throw ParseError(src, 1, "frequency file has no header");
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw ParseError(src, 0, "no frequency for sampled node " + std::to_string(sample.node(i).id));
    }
  }
  if (counts) {
    out.mode = ResampleMode::ProcessWithReplacement;
    out.g = std::move(values);
  } else {
    out.f = std::move(values);
  }
  return out;
}

InclusionFrequencies read_frequencies(const std::filesystem::path& path, const SampleNetwork& sample) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_frequencies(in, path.string(), sample);
}

void read_pair_frequencies(const std::filesystem::path& path, const SampleNetwork& sample,
                           InclusionFrequencies& freqs) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  const std::string src = path.string();
  std::vector<PairFrequency> pairs;
  bool header = true;
  csv::for_each_line(in, [&](std::size_t line, std::string_view text) {
    const auto fields = csv::split(text, ',');
    if (header) {
      if (fields.size() != 3 || fields[0] != "i" || fields[1] != "j" || fields[2] != "fij") {
        throw ParseError(src, line, "header must be `i,j,fij`");
      }
      header = false;
      return;
    }
    if (fields.size() != 3) throw ParseError(src, line, "expected 3 fields");
    const auto a = csv::parse_int(fields[0]);
    const auto b = csv::parse_int(fields[1]);
    const auto f = csv::parse_double(fields[2]);
    if (!a || !b) throw ParseError(src, line, "ids must be integers");
    if (!f || !(*f >= 0.0 && *f <= 1.0)) throw ParseError(src, line, "fij must lie in [0,1]");
    const auto pa = sample.position(*a);
    const auto pb = sample.position(*b);
    if (!pa || !pb) throw ParseError(src, line, "pair references a node not in the sample");
    if (*pa == *pb) throw ParseError(src, line, "pair joins a node to itself");
    pairs.push_back({std::min(*pa, *pb), std::max(*pa, *pb), *f});
  });
  std::sort(pairs.begin(), pairs.end(),
            [](const PairFrequency& x, const PairFrequency& y) { return std::pair{x.i, x.j} < std::pair{y.i, y.j}; });
  for (std::size_t k = 1; k < pairs.size(); ++k) {
    if (pairs[k].i == pairs[k - 1].i && pairs[k].j == pairs[k - 1].j) {
      throw ParseError(src, 0, "pair (" + std::to_string(sample.node(pairs[k].i).id) + "," +
                                   std::to_string(sample.node(pairs[k].j).id) + ") listed twice");
    }
  }
  freqs.pairs = std::move(pairs);
}

}  // namespace netsample
