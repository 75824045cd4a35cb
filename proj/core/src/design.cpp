#include "netsample/design.hpp"

#include <algorithm>
#include <numeric>

#include "netsample/error.hpp"

namespace netsample {

DesignConfig DesignConfig::rds() { return DesignConfig{}; }

DesignConfig DesignConfig::snowball() {
  DesignConfig c;
  c.name = "SB";
  c.coupons = 15;
  return c;
}

void DesignConfig::validate(std::size_t population) const {
  std::vector<std::string> problems;
  if (coupons < 1) problems.emplace_back("coupons must be at least 1");
  if (target_size == 0 || target_size > population) {
    problems.push_back("target size " + std::to_string(target_size) + " outside 1.." +
                       std::to_string(population));
  }
  if (expiration_days < 1) problems.emplace_back("coupon expiration must be at least 1 day");
  if (!(redemption_prob > 0.0 && redemption_prob <= 1.0)) {
    problems.emplace_back("redemption probability must lie in (0,1]");
  }
  if (seeds.kind == SeedSpec::Kind::Count) {
    if (!(seeds.value >= 0) || seeds.value > static_cast<double>(population)) {
      problems.emplace_back("seed count exceeds population size");
    }
  } else if (!(seeds.value >= 0.0 && seeds.value <= 1.0)) {
    problems.emplace_back("seed rate must lie in [0,1]");
  }
  if (!problems.empty()) {
    std::string msg = "invalid design `" + name + "`:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
}

SampleNetwork::SampleNetwork(std::vector<SampledNode> nodes, std::vector<RecruitmentEdge> edges,
                             std::vector<std::string> variable_names,
                             std::vector<std::vector<double>> values)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      names_(std::move(variable_names)),
      values_(std::move(values)) {
  const std::size_t n = nodes_.size();
  std::vector<ExternalId> ids = this->ids();
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ValidationError("sample lists node " + std::to_string(*std::adjacent_find(ids.begin(), ids.end())) +
                          " more than once");
  }
  if (names_.size() != values_.size()) throw ValidationError("variable name/value count mismatch");
  for (std::size_t v = 0; v < values_.size(); ++v) {
    if (values_[v].size() != n) {
      throw ValidationError("variable `" + names_[v] + "` does not cover the sample");
    }
  }
  std::vector<std::uint8_t> recruited(n, 0);
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  const auto root = [&](std::uint32_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : edges_) {
    if (e.recruiter >= n || e.recruit >= n || e.recruiter == e.recruit) {
      throw ValidationError("recruitment edge references an invalid position");
    }
    if (recruited[e.recruit]++) {
      throw ValidationError("node " + std::to_string(nodes_[e.recruit].id) + " recruited twice");
    }
    const auto a = root(e.recruiter), b = root(e.recruit);
    if (a == b) throw ValidationError("recruitment edges contain a cycle");
    parent[b] = a;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_recruit = nodes_[i].entry == EntryKind::Recruit;
    if (is_recruit != static_cast<bool>(recruited[i])) {
      throw ValidationError("node " + std::to_string(nodes_[i].id) +
                            (is_recruit ? " is a recruit without a recruiter"
                                        : " is a seed but also has a recruiter"));
    }
  }
}

std::optional<std::size_t> SampleNetwork::variable_index(std::string_view name) const noexcept {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::vector<double> SampleNetwork::degrees() const {
  std::vector<double> d;
  d.reserve(nodes_.size());
  for (const auto& n : nodes_) d.push_back(static_cast<double>(n.degree));
  return d;
}

std::vector<ExternalId> SampleNetwork::ids() const {
  std::vector<ExternalId> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.id);
  return out;
}

std::optional<std::uint32_t> SampleNetwork::position(ExternalId id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id == id) return static_cast<std::uint32_t>(i);
  }
  return std::nullopt;
}

std::size_t SampleNetwork::seed_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) {
    return n.entry != EntryKind::Recruit;
  }));
}

std::size_t SampleNetwork::reseed_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) {
    return n.entry == EntryKind::Reseed;
  }));
}

std::vector<std::uint32_t> SampleNetwork::component_labels() const {
  const std::size_t n = nodes_.size();
  std::vector<std::size_t> offsets(n + 1, 0);
  for (const auto& e : edges_) {
    ++offsets[e.recruiter + 1];
    ++offsets[e.recruit + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<NodeId> targets(offsets.back());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& e : edges_) {
    targets[cursor[e.recruiter]++] = e.recruit;
    targets[cursor[e.recruit]++] = e.recruiter;
  }
  return label_components(offsets, targets);
}

std::size_t SampleNetwork::component_count() const { return nodes_.size() - edges_.size(); }

std::vector<std::uint32_t> SampleNetwork::recruit_counts() const {
  std::vector<std::uint32_t> counts(nodes_.size(), 0);
  for (const auto& e : edges_) ++counts[e.recruiter];
  return counts;
}

void SampleNetwork::set_known_ties(std::vector<RecruitmentEdge> ties) {
  for (const auto& t : ties) {
    if (t.recruiter >= nodes_.size() || t.recruit >= nodes_.size() || t.recruiter == t.recruit) {
      throw ValidationError("known tie references an invalid position");
    }
  }
  ties_ = std::move(ties);
}

std::vector<NodeId> select_seeds(const PopulationGraph& graph, const SeedSpec& spec, Rng& rng) {
  const std::size_t n = graph.node_count();
  std::vector<NodeId> seeds;
  if (spec.kind == SeedSpec::Kind::Count) {
    if (!(spec.value >= 0) || spec.value > static_cast<double>(n)) {
      throw ValidationError("seed count " + std::to_string(static_cast<long long>(spec.value)) +
                            " exceeds population size " + std::to_string(n));
    }
    const auto k = static_cast<std::size_t>(spec.value);
    // partial Fisher-Yates
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = std::uniform_int_distribution<std::size_t>(i, n - 1)(rng);
      std::swap(pool[i], pool[j]);
    }
    seeds.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  } else {
    if (!(spec.value >= 0.0 && spec.value <= 1.0)) {
      throw ValidationError("seed rate must lie in [0,1]");
    }
    BernoulliSkipper skip(spec.value);
    std::uint64_t pos = skip.next_gap(rng);
    while (pos < n) {
      seeds.push_back(static_cast<NodeId>(pos));
      pos += 1 + skip.next_gap(rng);
    }
  }
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

namespace {

struct Coupon {
  std::uint32_t holder;  // sample position
  std::int32_t issued;   // day
};

class DesignRun {
 public:
  DesignRun(const PopulationGraph& graph, const DesignConfig& config, Rng& rng)
      : graph_(graph), config_(config), rng_(rng), sampled_(graph.node_count(), 0) {}

  void enroll(NodeId vertex, EntryKind kind, std::int32_t day,
              std::optional<std::uint32_t> recruiter) {
    const auto pos = static_cast<std::uint32_t>(nodes_.size());
    sampled_[vertex] = 1;
    nodes_.push_back({graph_.external_id(vertex), kind, day, graph_.degree(vertex), vertex});
    if (recruiter) edges_.push_back({*recruiter, pos});
    const std::uint32_t issue = std::min(config_.coupons, graph_.degree(vertex));
    for (std::uint32_t c = 0; c < issue; ++c) pending_.push_back({pos, day});
  }

  void run(std::span<const NodeId> seeds) {
    std::vector<NodeId> chosen(seeds.begin(), seeds.end());
    if (chosen.size() > config_.target_size) {
      std::shuffle(chosen.begin(), chosen.end(), rng_);
      chosen.resize(config_.target_size);
      std::sort(chosen.begin(), chosen.end());
    }
    for (NodeId s : chosen) {
      if (!sampled_[s]) enroll(s, EntryKind::Seed, 0, std::nullopt);
    }
    std::int32_t day = 0;
    std::bernoulli_distribution redeem(config_.redemption_prob);
    const auto expiry = static_cast<std::int32_t>(config_.expiration_days);
    while (nodes_.size() < config_.target_size) {
      live_.insert(live_.end(), pending_.begin(), pending_.end());
      pending_.clear();
      if (live_.empty()) {
        if (!config_.reseed_on_stall || !reseed(day)) break;
        continue;
      }
      ++day;
      std::vector<Coupon> kept;
      kept.reserve(live_.size());
      for (const Coupon& c : live_) {
        if (nodes_.size() >= config_.target_size) break;
        if (!redeem(rng_)) {
          if (day - c.issued < expiry) kept.push_back(c);
          continue;
        }
        if (const auto recruit = pick_unsampled_neighbor(nodes_[c.holder].vertex)) {
          enroll(*recruit, EntryKind::Recruit, day, c.holder);
        }
      }
      live_ = std::move(kept);
    }
  }

  SampleNetwork finish(const AttributeTable& attributes) && {
    std::vector<std::string> names = attributes.names();
    std::vector<std::vector<double>> values(attributes.variable_count());
    for (std::size_t v = 0; v < values.size(); ++v) {
      values[v].reserve(nodes_.size());
      for (const auto& n : nodes_) values[v].push_back(attributes.value(v, n.vertex));
    }
    SampleNetwork sample(std::move(nodes_), std::move(edges_), std::move(names), std::move(values));
    sample.target_size = config_.target_size;
    sample.reached_target = sample.size() >= config_.target_size;
    return sample;
  }

 private:
  std::optional<NodeId> pick_unsampled_neighbor(NodeId v) {
    const auto nb = graph_.neighbors(v);
    std::size_t open = 0;
    for (NodeId w : nb) open += !sampled_[w];
    if (open == 0) return std::nullopt;
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, open - 1)(rng_);
    for (NodeId w : nb) {
      if (!sampled_[w] && k-- == 0) return w;
    }
    return std::nullopt;
  }

  bool reseed(std::int32_t day) {
    const std::size_t open = graph_.node_count() - nodes_.size();
    if (open == 0) return false;
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, open - 1)(rng_);
    for (NodeId v = 0; v < graph_.node_count(); ++v) {
      if (!sampled_[v] && k-- == 0) {
        enroll(v, EntryKind::Reseed, day, std::nullopt);
        return true;
      }
    }
    return false;
  }

  const PopulationGraph& graph_;
  const DesignConfig& config_;
  Rng& rng_;
  std::vector<std::uint8_t> sampled_;
  std::vector<SampledNode> nodes_;
  std::vector<RecruitmentEdge> edges_;
  std::vector<Coupon> live_;
  std::vector<Coupon> pending_;
};

}  // namespace

SampleNetwork run_design(const PopulationGraph& graph, const AttributeTable& attributes,
                         const DesignConfig& config, std::span<const NodeId> seeds, Rng& rng) {
  config.validate(graph.node_count());
  if (attributes.node_count() != graph.node_count()) {
    throw ValidationError("attribute table does not match the population graph");
  }
  for (NodeId s : seeds) {
    if (s >= graph.node_count()) throw ValidationError("seed outside the population");
  }
  DesignRun run(graph, config, rng);
  run.run(seeds);
  return std::move(run).finish(attributes);
}

SampleNetwork run_design(const PopulationGraph& graph, const AttributeTable& attributes,
                         const DesignConfig& config, Rng& rng) {
  config.validate(graph.node_count());
  const auto seeds = select_seeds(graph, config.seeds, rng);
  return run_design(graph, attributes, config, seeds, rng);
}

}  // namespace netsample
