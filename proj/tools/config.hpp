#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netsample/design.hpp"
#include "netsample/error.hpp"
#include "netsample/harness.hpp"
#include "netsample/keyvalue.hpp"
#include "netsample/oracle.hpp"
#include "netsample/resample.hpp"
#include "netsample/synthetic.hpp"

namespace netsample::cli {

enum class ValueType : std::uint8_t {
  Integer,      // nonnegative
  Real,
  Probability,  // [0,1]
  OpenUnit,     // (0,1)
  Boolean,
  Text,
  List,
  Choice,
  InputPath,    // must exist
  OutputPath,
};

struct KeySpec {
  std::string_view key;
  ValueType type;
  /// Empty: no default (the key is optional unless `required`).
  std::string_view fallback;
  std::string_view help;
  bool required = false;
  std::span<const std::string_view> choices = {};
};

struct SectionSpec {
  std::string_view name;
  std::string_view help;
  std::span<const KeySpec> keys;
};

/// Every section and key the config format accepts. Sections named
/// `design.<NAME>` reuse the keys of `design` and override one design of an
/// experiment.
std::span<const SectionSpec> schema() noexcept;
const SectionSpec* find_section(std::string_view name) noexcept;

/// Case-sensitive Levenshtein distance.
std::size_t edit_distance(std::string_view a, std::string_view b);

enum class PopulationSource : std::uint8_t { Files, Synthetic, Desk };

struct SampleFiles {
  std::optional<std::filesystem::path> nodes;
  std::optional<std::filesystem::path> edges;
  std::optional<std::filesystem::path> frequencies;
  std::optional<std::filesystem::path> pair_frequencies;
  std::optional<std::filesystem::path> ties;
};

struct EstimateSettings {
  std::vector<EstimatorKind> estimators{EstimatorKind::Frequency, EstimatorKind::Degree,
                                        EstimatorKind::SampleMean};
  std::vector<VarianceVariant> variants{VarianceVariant::V2};
  std::vector<std::string> variables;
  /// `y/x` pairs for the ratio estimator.
  std::vector<std::pair<std::string, std::string>> ratios;
  double alpha = 0.05;
  DiagonalForm diagonal_form = DiagonalForm::Linearized;
};

enum class OracleGraphKind : std::uint8_t { Path, Star, Cycle, Complete, File };

struct OracleSettings {
  OracleGraphKind graph = OracleGraphKind::Path;
  std::size_t nodes = 3;
  std::optional<std::filesystem::path> edges;
  OracleDesign design;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::size_t workers = 1;

  PopulationSource population = PopulationSource::Desk;
  std::optional<std::filesystem::path> population_edges;
  std::optional<std::filesystem::path> population_attributes;
  SyntheticPopulationConfig synthetic;

  DesignConfig design;
  SampleFiles sample;
  ResampleConfig resample;
  std::optional<std::filesystem::path> compare;
  EstimateSettings estimate;
  ExperimentConfig experiment;
  std::optional<std::filesystem::path> regenerate_from;
  OracleSettings oracle;

  /// `section.key` (or `key` at top level) of every key the document set.
  std::set<std::string, std::less<>> explicit_keys;
  bool is_set(std::string_view dotted) const { return explicit_keys.contains(dotted); }

  /// Every key of the schema with its effective value (defaults filled in),
  /// in schema order. Written to the manifest.
  KeyValueDocument resolved;
};

/// Collected config problems, each formatted `source:line: message`.
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Validates `doc` against schema() and builds a RunConfig. Relative paths
/// resolve against `base_dir`. Throws ConfigError listing every problem.
RunConfig parse_config(const KeyValueDocument& doc,
                       const std::filesystem::path& base_dir = {});
/// Loads and validates a config file; relative paths resolve against the
/// file's directory.
RunConfig parse_config(const std::filesystem::path& path);

/// `section.key=value` (or `key=value` for the top level) applied on top of
/// a document. Throws ConfigError on a malformed assignment.
void apply_override(KeyValueDocument& doc, std::string_view assignment);

/// INI text of `doc`, one `[section]` block per section.
std::string format_document(const KeyValueDocument& doc);

}  // namespace netsample::cli
