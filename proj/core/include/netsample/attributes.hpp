#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netsample/graph.hpp"

namespace netsample {

enum class VariableKind : std::uint8_t { Binary, Real };

std::string_view to_string(VariableKind kind) noexcept;

/// Named per-node variables aligned with a PopulationGraph's dense ids.
///
/// Every variable holds a value for every node; cells that were missing in
/// the source are stored as 0 with the corresponding mask bit set.
class AttributeTable {
 public:
  AttributeTable() = default;
  explicit AttributeTable(std::size_t node_count) : node_count_(node_count) {}

  /// Throws ValidationError on a duplicate name, wrong length, a negative
  /// value, or a Binary column holding anything other than 0/1.
  void add_variable(std::string name, VariableKind kind, std::vector<double> values,
                    std::vector<std::uint8_t> missing = {});

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t variable_count() const noexcept { return names_.size(); }

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t var) const { return names_.at(var); }
  VariableKind kind(std::size_t var) const { return kinds_.at(var); }
  std::optional<std::size_t> index_of(std::string_view name) const noexcept;

  std::span<const double> column(std::size_t var) const { return columns_.at(var); }
  std::span<const std::uint8_t> missing(std::size_t var) const { return missing_.at(var); }
  double value(std::size_t var, NodeId node) const { return columns_.at(var).at(node); }

  /// Population mean of one variable.
  double mean(std::size_t var) const;

 private:
  std::size_t node_count_ = 0;
  std::vector<std::string> names_;
  std::vector<VariableKind> kinds_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::vector<std::uint8_t>> missing_;
};

/// Parses `id,var1,var2,...` with one row per node id. A header cell may
/// declare its kind as `name:binary` or `name:real`; otherwise a column whose
/// present values are all 0/1 is Binary and anything else Real. Empty cells
/// are imputed to 0 and flagged. Graph nodes without a row are imputed the
/// same way with a warning.
AttributeTable parse_attributes(std::istream& in, std::string_view source,
                                const PopulationGraph& graph,
                                Diagnostics* diagnostics = nullptr);

AttributeTable load_attributes(const std::filesystem::path& path,
                               const PopulationGraph& graph,
                               Diagnostics* diagnostics = nullptr);

/// Ids from the first column of an attribute file, so nodes without edges can
/// be retained when the edge list is loaded.
std::vector<ExternalId> read_attribute_ids(const std::filesystem::path& path);

/// Header with explicit kinds, one row per node in dense order; missing cells
/// are written empty.
std::string format_attributes(const AttributeTable& table, const PopulationGraph& graph);

}  // namespace netsample
