#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netsample/graph.hpp"
#include "netsample/resample.hpp"

namespace netsample {

enum class EstimatorKind : std::uint8_t {
  /// Inverse inclusion-frequency weighting.
  Frequency,
  /// Inverse reported-degree weighting (Volz-Heckathorn).
  Degree,
  /// Unweighted sample mean.
  SampleMean,
  /// Frequency-weighted ratio of two variables.
  Ratio,
  /// With-replacement selection-count weighting.
  WithReplacement,
};

enum class VarianceVariant : std::uint8_t { V1, V2, JointFull, JointEdges, Diagonal };

/// Coefficient of the i = j terms of the joint-frequency variances.
enum class DiagonalForm : std::uint8_t {
  /// (1 - f_i)(y_i - mu)^2 / f_i^2, consistent with the linearization.
  Linearized,
  /// The literal printed term: (f_i - 1)(y_i - mu)^2 / f_i in the
  /// edge-restricted sum and (1 - f_i)(y_i - mu)^2 / f_i in the diagonal one.
  Printed,
};

std::string_view to_string(EstimatorKind kind) noexcept;
std::string_view to_string(VarianceVariant variant) noexcept;
std::optional<EstimatorKind> parse_estimator(std::string_view text) noexcept;
std::optional<VarianceVariant> parse_variance_variant(std::string_view text) noexcept;
/// "linearized" or "printed".
std::string_view to_string(DiagonalForm form) noexcept;
std::optional<DiagonalForm> parse_diagonal_form(std::string_view text) noexcept;

struct EstimateResult {
  std::string variable;
  EstimatorKind estimator = EstimatorKind::Frequency;
  /// Empty when no variance was computed (sample mean, VH).
  std::optional<VarianceVariant> variant;
  double point = 0.0;
  double variance = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.05;
  /// A negative joint-frequency variance was clamped to zero.
  bool clamped = false;
};

/// Sum(w_i y_i) / Sum(w_i) with double-double accumulation, so complementary
/// binary variables give estimates summing to exactly 1.
double weighted_mean(std::span<const double> y, std::span<const double> weights);

/// Sum(y_i / f_i) / Sum(1 / f_i). Throws ZeroFrequencyError naming every
/// zero-frequency node (ids optional; positions otherwise).
double estimate_mean_f(std::span<const double> y, std::span<const double> f,
                       std::span<const ExternalId> ids = {});

/// Sum(y_i / d_i) / Sum(1 / d_i).
double estimate_mean_vh(std::span<const double> y, std::span<const double> degrees);

double sample_mean(std::span<const double> y);

/// (1/(n(n-1))) Sum(n (y_i/f_i) / Sum(1/f) - mu)^2
double variance_v2(std::span<const double> y, std::span<const double> f, double mu);

/// Sum((y_i - mu)^2 / f_i^2) / (Sum 1/f_i)^2
double variance_v1(std::span<const double> y, std::span<const double> f, double mu);

struct JointVariance {
  double value = 0.0;
  bool negative = false;  // raw value before clamping was below zero
  double raw = 0.0;
};

/// Variances built from Delta_ij = (f_ij - f_i f_j) / f_ij. JointFull uses
/// every pair i != j, JointEdges the pairs in `edges`, Diagonal none. All are
/// divided by (Sum 1/f_i)^2. Negative results are clamped to 0 and flagged.
JointVariance variance_joint(std::span<const double> y, std::span<const double> f,
                             const InclusionFrequencies& pairs,
                             std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                             double mu, VarianceVariant variant,
                             DiagonalForm form = DiagonalForm::Linearized,
                             std::span<const ExternalId> ids = {});

/// mu +/- z_{1-alpha/2} sqrt(variance)
std::pair<double, double> confidence_interval(double mu, double variance, double alpha);

/// z_{1-alpha/2} of the standard normal.
double normal_critical_value(double alpha);

struct RatioEstimate {
  double ratio = 0.0;
  double variance = 0.0;
};

/// R = Sum(y_i/f_i) / Sum(x_i/f_i), variance
/// Sum((y_i - x_i R)^2 / f_i^2) / (Sum x_i/f_i)^2.
RatioEstimate estimate_ratio(std::span<const double> y, std::span<const double> x,
                             std::span<const double> f, std::span<const ExternalId> ids = {});

struct WithReplacementEstimate {
  double mean = 0.0;
  double variance = 0.0;
};

/// mu = Sum(m_i y_i / g_i) / Sum(m_i / g_i), variance
/// Sum(m_i (y_i - mu)^2 / g_i^2) / (Sum m_i / g_i)^2.
WithReplacementEstimate estimate_mean_wr(std::span<const double> y, std::span<const double> m,
                                         std::span<const double> g,
                                         std::span<const ExternalId> ids = {});

/// Convenience: point, chosen variance and interval for one variable.
EstimateResult estimate(std::string variable, EstimatorKind estimator,
                        std::span<const double> y, const SampleNetwork& sample,
                        const InclusionFrequencies& freqs, VarianceVariant variant, double alpha,
                        DiagonalForm form = DiagonalForm::Linearized);

/// `variable,estimator,variant,point,variance,lower,upper,alpha`
std::string format_estimates(std::span<const EstimateResult> results);

}  // namespace netsample
