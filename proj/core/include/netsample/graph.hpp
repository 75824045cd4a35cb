#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netsample {

using NodeId = std::uint32_t;
using ExternalId = std::int64_t;

/// Unordered pair stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Non-fatal findings collected while loading data.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

/// Immutable undirected simple graph over dense ids 0..N-1.
///
/// Adjacency is stored CSR-style with each neighbor list sorted ascending.
/// The external id of every node (the id used in data files) is retained so
/// results can be written back in the caller's id space.
class PopulationGraph {
 public:
  PopulationGraph() = default;

  /// Builds from edges over dense ids. Self-loops throw ValidationError;
  /// duplicate pairs (in either orientation) collapse to one edge and are
  /// counted in `duplicates_removed`. `external_ids` must be empty (ids are
  /// then 0..N-1) or have one strictly increasing entry per node.
  static PopulationGraph from_edges(std::size_t node_count, std::vector<Edge> edges,
                                    std::vector<ExternalId> external_ids = {},
                                    std::size_t* duplicates_removed = nullptr);

  std::size_t node_count() const noexcept { return external_ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId node) const noexcept {
    return {targets_.data() + offsets_[node], targets_.data() + offsets_[node + 1]};
  }
  std::uint32_t degree(NodeId node) const noexcept {
    return static_cast<std::uint32_t>(offsets_[node + 1] - offsets_[node]);
  }

  /// Sorted lexicographically.
  std::span<const Edge> edges() const noexcept { return edges_; }

  ExternalId external_id(NodeId node) const noexcept { return external_ids_[node]; }
  std::span<const ExternalId> external_ids() const noexcept { return external_ids_; }
  std::optional<NodeId> find(ExternalId id) const noexcept;

  double mean_degree() const noexcept;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<Edge> edges_;
  std::vector<ExternalId> external_ids_;
};

/// Reads `u,v` lines (`#` comments, blank lines allowed). Ids are remapped to
/// a dense range in ascending external-id order. `extra_ids` adds nodes that
/// may have no edges (for example ids listed only in an attribute file).
PopulationGraph parse_edge_list(std::istream& in, std::string_view source,
                                Diagnostics* diagnostics = nullptr,
                                std::span<const ExternalId> extra_ids = {});

PopulationGraph load_edge_list(const std::filesystem::path& path,
                               Diagnostics* diagnostics = nullptr,
                               std::span<const ExternalId> extra_ids = {});

/// `u,v` per edge in external ids, preceded by a header comment.
std::string format_edge_list(const PopulationGraph& graph);

struct Component {
  std::uint32_t id = 0;
  std::size_t size = 0;
  NodeId smallest = 0;
};

/// Connected components ordered by descending size, ties broken by the
/// smallest member id. Component ids are positions in that ordering.
std::vector<Component> components(const PopulationGraph& graph);

/// Per-node component id, consistent with components().
std::vector<std::uint32_t> component_labels(const PopulationGraph& graph);

/// Shared by the population graph and the sample networks: labels nodes of an
/// undirected CSR adjacency with component ids ordered as in components().
std::vector<std::uint32_t> label_components(std::span<const std::size_t> offsets,
                                            std::span<const NodeId> targets);

}  // namespace netsample
