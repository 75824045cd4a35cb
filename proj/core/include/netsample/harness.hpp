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

#include "netsample/attributes.hpp"
#include "netsample/design.hpp"
#include "netsample/estimators.hpp"
#include "netsample/graph.hpp"
#include "netsample/resample.hpp"

namespace netsample {

/// Derived variables available to every experiment besides the attributes.
inline constexpr std::string_view kDegreeVariable = "degree";
inline constexpr std::string_view kConcurrencyVariable = "deg2plus";

struct ExperimentConfig {
  std::vector<DesignConfig> designs{DesignConfig::rds(), DesignConfig::snowball()};
  ResampleConfig resample;
  /// Variance variants computed for the new estimator; the first one is used
  /// for the coverage table's headline column.
  std::vector<VarianceVariant> variants{VarianceVariant::V2};
  DiagonalForm diagonal_form = DiagonalForm::Linearized;
  std::size_t replications = 200;
  /// Empty: every attribute plus degree and deg2plus.
  std::vector<std::string> variables;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  /// Throws ValidationError listing every problem.
  void validate(const AttributeTable& attributes) const;
};

/// One estimate from one replication.
struct ReplicationRecord {
  std::string design;
  std::uint32_t replication = 0;
  std::string variable;
  EstimatorKind estimator = EstimatorKind::Frequency;
  std::optional<VarianceVariant> variant;
  double point = 0.0;
  double variance = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool clamped = false;

  friend bool operator==(const ReplicationRecord&, const ReplicationRecord&) = default;
};

/// Per-replication sample metadata.
struct ReplicationInfo {
  std::string design;
  std::uint32_t replication = 0;
  std::uint64_t seed = 0;
  std::size_t sample_size = 0;
  bool reached_target = false;
  std::size_t components = 0;
  double mean_resample_size = 0.0;

  friend bool operator==(const ReplicationInfo&, const ReplicationInfo&) = default;
};

struct Summary {
  double e_est = 0.0;
  double bias = 0.0;
  double sd = 0.0;
  double mse = 0.0;
};

/// E.est = mean, bias = E.est - actual, sd with divisor R, mse = mean squared
/// error about the actual value.
Summary summarize(std::span<const double> estimates, double actual);

/// mse_other / mse_new; +inf when mse_new is zero.
double relative_efficiency(double mse_other, double mse_new) noexcept;

struct Coverage {
  double coverage = 0.0;
  double halfwidth = 0.0;
  std::size_t count = 0;
};

Coverage coverage_table(std::span<const std::pair<double, double>> intervals, double actual);

/// A variable's true value with its per-replication estimates of one
/// estimator.
struct VariableSeries {
  std::string variable;
  double actual = 0.0;
  std::vector<double> estimates;
};

/// Appends `not <name>` for each series: actual 1 - p, estimates 1 - x.
/// Throws if an actual lies outside [0,1] (not a proportion).
std::vector<VariableSeries> augment_complements(std::span<const VariableSeries> binary);

/// a = Sum(mse_i) / Sum(p_i (1 - p_i)) over (p, mse) points.
double fit_parabola(std::span<const std::pair<double, double>> points);

struct ReportRow {
  std::string design;
  std::string estimator;
  std::string variable;
  double actual = 0.0;
  double e_est = 0.0;
  double bias = 0.0;
  double sd = 0.0;
  double mse = 0.0;
  double eff = 1.0;
  double rbias = 1.0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct CoverageRow {
  std::string design;
  std::string estimator;
  std::string variant;
  std::string variable;
  double actual = 0.0;
  double coverage = 0.0;
  double halfwidth = 0.0;
  std::size_t count = 0;
  std::size_t clamped = 0;

  friend bool operator==(const CoverageRow&, const CoverageRow&) = default;
};

struct ParabolaRow {
  std::string design;
  std::string estimator;
  double a = 0.0;
  double mean_mse = 0.0;
  std::size_t points = 0;

  friend bool operator==(const ParabolaRow&, const ParabolaRow&) = default;
};

struct VariableTruth {
  std::string name;
  double actual = 0.0;
  bool binary = false;

  friend bool operator==(const VariableTruth&, const VariableTruth&) = default;
};

struct SimulationReport {
  std::vector<ReportRow> rows;
  std::vector<CoverageRow> coverage;
  std::vector<ParabolaRow> parabolas;
  std::vector<VariableTruth> truths;
  std::vector<ReplicationRecord> records;
  std::vector<ReplicationInfo> replications;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;

  /// The report row for (design, estimator, variable), if present.
  const ReportRow* find(std::string_view design, std::string_view estimator,
                        std::string_view variable) const noexcept;
  const CoverageRow* find_coverage(std::string_view design, std::string_view variant,
                                   std::string_view variable) const noexcept;
  const ParabolaRow* find_parabola(std::string_view design, std::string_view estimator) const noexcept;
};

/// Estimator label used in report rows: "new" for the frequency estimator,
/// "vh" for the degree estimator, "mean" for the sample mean. Every row's
/// eff is mse(row) / mse(new) and rbias is |bias(row)| / |bias(new)|, so the
/// new estimator's row reads 1 in both.
inline constexpr std::string_view kReferenceEstimator = "new";

/// Builds every summary table from per-replication records. Live runs and
/// regeneration from a replications file both go through here, so the two
/// agree bit for bit.
SimulationReport build_report(std::vector<ReplicationRecord> records,
                              std::vector<ReplicationInfo> replications,
                              std::vector<VariableTruth> truths, std::uint64_t seed);

/// Population values of the experiment's variables.
std::vector<VariableTruth> population_truths(const PopulationGraph& graph,
                                             const AttributeTable& attributes,
                                             std::span<const std::string> variables);

/// Values of `variable` over the sample (attribute column, degree, or
/// deg2plus).
std::vector<double> sample_variable(const SampleNetwork& sample, std::string_view variable);

/// Seed of replication r of design d.
std::uint64_t replication_seed(std::uint64_t master, std::size_t design, std::size_t replication) noexcept;

/// Runs one replication: design, resampling, every estimator on every
/// variable.
std::pair<std::vector<ReplicationRecord>, ReplicationInfo> run_replication(
    const PopulationGraph& graph, const AttributeTable& attributes, const ExperimentConfig& config,
    std::size_t design, std::size_t replication);

SimulationReport run_experiment(const PopulationGraph& graph, const AttributeTable& attributes,
                                const ExperimentConfig& config);

/// `design,estimator,variable,actual,E.est,bias,sd,mse,eff,rbias`
std::string format_report(const SimulationReport& report);
/// `design,estimator,variant,variable,actual,coverage,halfwidth,count,clamped`
std::string format_coverage(const SimulationReport& report);
/// `design,estimator,a,mean_mse,points`
std::string format_parabola(const SimulationReport& report);
/// Full-fidelity JSON record of the report.
std::string format_report_json(const SimulationReport& report);

/// Per-replication log. Each line starts with a record tag:
///   seed,<master seed>
///   truth,<variable>,<actual>,<binary 0|1>
///   info,<design>,<replication>,<seed>,<sample size>,<reached 0|1>,<components>,<mean resample size>
///   est,<design>,<replication>,<variable>,<estimator>,<variant>,<point>,<variance>,<lower>,<upper>,<clamped 0|1>
std::string format_replications(const SimulationReport& report);

/// Reads a replications log and rebuilds the report with build_report.
SimulationReport parse_replications(std::istream& in, std::string_view source);
SimulationReport read_replications(const std::filesystem::path& path);

/// `id,f,degree,component` for external plotting.
std::string format_annotated_sample(const SampleNetwork& sample, const InclusionFrequencies& freqs);

}  // namespace netsample
