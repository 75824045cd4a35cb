#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netsample/attributes.hpp"
#include "netsample/graph.hpp"
#include "netsample/random.hpp"

namespace netsample {

/// How initial seeds are chosen: an exact count drawn without replacement,
/// or an independent Bernoulli(rate) draw per node.
struct SeedSpec {
  enum class Kind : std::uint8_t { Count, Rate };

  Kind kind = Kind::Count;
  double value = 240;

  static SeedSpec count(std::size_t n) { return {Kind::Count, static_cast<double>(n)}; }
  static SeedSpec rate(double r) { return {Kind::Rate, r}; }
};

/// Coupon-based link-tracing survey design (respondent-driven sampling with
/// a small coupon limit, snowball sampling with a large one).
struct DesignConfig {
  std::string name = "RDS";
  std::uint32_t coupons = 3;
  std::size_t target_size = 1200;
  SeedSpec seeds = SeedSpec::count(240);
  std::uint32_t expiration_days = 28;
  /// Per-day probability that a live coupon is redeemed.
  double redemption_prob = 0.15;
  /// When every coupon is dead before the target is met, enroll one uniform
  /// unsampled node as a new seed and continue.
  bool reseed_on_stall = true;

  static DesignConfig rds();
  static DesignConfig snowball();

  /// Throws ValidationError; `population` bounds target size and seed count.
  void validate(std::size_t population) const;
};

enum class EntryKind : std::uint8_t { Recruit = 0, Seed = 1, Reseed = 2 };

struct SampledNode {
  ExternalId id = 0;
  EntryKind entry = EntryKind::Recruit;
  std::int32_t day = 0;
  /// Reported degree (taken as the true population degree).
  std::uint32_t degree = 0;
  /// Dense population index; kNoVertex when the sample was read from disk.
  NodeId vertex = kNoVertex;

  static constexpr NodeId kNoVertex = ~NodeId{0};

  /// Compares what is persisted; `vertex` is not.
  friend bool operator==(const SampledNode& a, const SampledNode& b) {
    return a.id == b.id && a.entry == b.entry && a.day == b.day && a.degree == b.degree;
  }
};

/// Recruiter and recruit as positions in SampleNetwork::nodes().
struct RecruitmentEdge {
  std::uint32_t recruiter = 0;
  std::uint32_t recruit = 0;

  friend bool operator==(const RecruitmentEdge&, const RecruitmentEdge&) = default;
};

/// Result of a link-tracing design: sampled nodes in entry order, the
/// recruitment forest, and the attribute values observed on each respondent.
class SampleNetwork {
 public:
  SampleNetwork() = default;

  /// Validates the forest invariants (ids unique, every edge within range,
  /// each node recruited at most once, acyclic). `values[v]` holds variable
  /// v over the sample in node order.
  SampleNetwork(std::vector<SampledNode> nodes, std::vector<RecruitmentEdge> edges,
                std::vector<std::string> variable_names, std::vector<std::vector<double>> values);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<SampledNode>& nodes() const noexcept { return nodes_; }
  const SampledNode& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<RecruitmentEdge>& edges() const noexcept { return edges_; }

  const std::vector<std::string>& variable_names() const noexcept { return names_; }
  std::optional<std::size_t> variable_index(std::string_view name) const noexcept;
  std::span<const double> values(std::size_t var) const { return values_.at(var); }

  std::vector<double> degrees() const;
  std::vector<ExternalId> ids() const;

  /// Position of an external id, if sampled.
  std::optional<std::uint32_t> position(ExternalId id) const;

  std::size_t seed_count() const noexcept;
  std::size_t reseed_count() const noexcept;

  /// Trees of the recruitment forest, labelled as in components().
  std::vector<std::uint32_t> component_labels() const;
  std::size_t component_count() const;

  /// Number of recruits made by each node.
  std::vector<std::uint32_t> recruit_counts() const;

  /// Extra ties between respondents known from the survey but not used for
  /// recruitment. Empty unless supplied by the caller.
  const std::vector<RecruitmentEdge>& known_ties() const noexcept { return ties_; }
  void set_known_ties(std::vector<RecruitmentEdge> ties);

  // run metadata
  std::size_t target_size = 0;
  bool reached_target = false;

  friend bool operator==(const SampleNetwork& a, const SampleNetwork& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.names_ == b.names_ &&
           a.values_ == b.values_;
  }

 private:
  std::vector<SampledNode> nodes_;
  std::vector<RecruitmentEdge> edges_;
  std::vector<RecruitmentEdge> ties_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> values_;
};

/// Count mode: uniform subset without replacement (count > N throws).
/// Rate mode: independent Bernoulli(rate) per node. Result is sorted.
std::vector<NodeId> select_seeds(const PopulationGraph& graph, const SeedSpec& spec, Rng& rng);

/// Simulates the coupon design from seeds drawn with select_seeds.
///
/// Each entrant receives min(coupons, degree) coupons. Every simulated day
/// each live coupon is redeemed with `redemption_prob` by a uniformly chosen
/// unsampled neighbor of its holder (wasted when there is none); coupons die
/// after `expiration_days`. Sampling stops at the target size or, with
/// stall re-seeding disabled, when no live coupons remain.
SampleNetwork run_design(const PopulationGraph& graph, const AttributeTable& attributes,
                         const DesignConfig& config, Rng& rng);

/// Same as above from a caller-chosen seed set (truncated to target size).
SampleNetwork run_design(const PopulationGraph& graph, const AttributeTable& attributes,
                         const DesignConfig& config, std::span<const NodeId> seeds, Rng& rng);

/// Nodes file `id,seed_flag,day,degree,<variables...>` and edges file
/// `recruiter,recruit` (external ids). Values use shortest round-trip text so
/// writing what was read reproduces the files byte for byte.
std::string format_sample_nodes(const SampleNetwork& sample);
std::string format_sample_edges(const SampleNetwork& sample);

void write_sample(const SampleNetwork& sample, const std::filesystem::path& nodes_path,
                  const std::filesystem::path& edges_path);

SampleNetwork read_sample(const std::filesystem::path& nodes_path,
                          const std::filesystem::path& edges_path);

SampleNetwork parse_sample(std::istream& nodes, std::string_view nodes_source,
                           std::istream& edges, std::string_view edges_source);

/// Population links between respondents that are not recruitment edges,
/// as sample positions with first < second.
std::vector<RecruitmentEdge> population_ties(const SampleNetwork& sample,
                                             const PopulationGraph& graph);

/// Ties file `i,j` in external ids.
std::string format_known_ties(const SampleNetwork& sample);

/// Reads `i,j` rows into sample.set_known_ties; ids must be sampled.
void parse_known_ties(std::istream& in, std::string_view source, SampleNetwork& sample);
void read_known_ties(const std::filesystem::path& path, SampleNetwork& sample);

}  // namespace netsample
