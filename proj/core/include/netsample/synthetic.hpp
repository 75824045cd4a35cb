#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netsample/attributes.hpp"
#include "netsample/graph.hpp"
#include "netsample/keyvalue.hpp"
#include "netsample/random.hpp"

namespace netsample {

/// Binary node attribute drawn independently per node. With a nonzero
/// `degree_tilt` the per-node probability is proportional to degree^tilt
/// (rescaled so the expected prevalence is unchanged, capped at 1).
struct SyntheticAttribute {
  std::string name;
  double prevalence = 0.0;
  double degree_tilt = 0.0;
};

/// Desk-scale stand-in for a surveyed at-risk population: a few blocks, each
/// wired by the configuration model and then joined into one component.
struct SyntheticPopulationConfig {
  std::size_t nodes = 5000;
  /// Target mean degree; degrees are discretized lognormal draws.
  std::optional<double> mean_degree = 7.9;
  /// Lognormal sigma of the degree draws (heavier tail when larger).
  double degree_spread = 0.9;
  /// Explicit degree sequence; when non-empty it replaces mean_degree.
  std::vector<std::uint32_t> degrees;
  /// Fraction of nodes in each component; must sum to 1.
  std::vector<double> component_fractions{1.0};
  std::uint64_t seed = 1;
  std::vector<SyntheticAttribute> attributes;

  /// Throws ValidationError listing every violated constraint.
  void validate() const;

  /// Node count per component: floor of each fraction, remainder added to
  /// the largest fraction.
  std::vector<std::size_t> block_sizes() const;
};

struct SyntheticPopulation {
  PopulationGraph graph;
  AttributeTable attributes;
  /// Stubs that could not be placed without a self-loop or multi-edge.
  std::size_t rewiring_losses = 0;
};

/// Configuration-model wiring per component. Self-loops and multi-edges are
/// removed by degree-preserving edge swaps (any that survive are dropped and
/// counted); fragments of a block are joined to its largest piece by further
/// swaps. A non-graphical explicit degree sequence throws ValidationError.
PopulationGraph generate_synthetic(const SyntheticPopulationConfig& config, Rng& rng,
                                   std::size_t* rewiring_losses = nullptr);

AttributeTable generate_attributes(const PopulationGraph& graph,
                                   std::span<const SyntheticAttribute> attributes, Rng& rng);

/// Graph and attributes from config.seed alone.
SyntheticPopulation generate_population(const SyntheticPopulationConfig& config);

/// True if the sequence is realizable as a simple graph (Erdos-Gallai).
bool is_graphical(std::span<const std::uint32_t> degrees);

/// Reads the documented keys (`nodes`, `mean_degree` or `degrees`,
/// `degree_spread`, `component_fractions`, `seed`, `attributes`) from one
/// section of a document. Unknown keys and bad values are collected and
/// thrown together as a ValidationError.
SyntheticPopulationConfig synthetic_config_from(const KeyValueDocument& doc,
                                                std::string_view section = "");

/// Keys accepted by synthetic_config_from.
std::span<const std::string_view> synthetic_config_keys() noexcept;

/// N=5000, mean degree 7.9, component fractions 0.8/0.15/0.05 and thirteen
/// binary attributes with prevalences between 0.01 and 0.43.
SyntheticPopulationConfig desk_scale_population();

}  // namespace netsample
