#include "netsample/estimators.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

#include "netsample/csv.hpp"
#include "netsample/error.hpp"
#include "netsample/numeric.hpp"

namespace netsample {

namespace {

void check_aligned(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                          std::to_string(b) + ")");
  }
}

void check_nonempty(std::size_t n) {
  if (n == 0) throw ValidationError("cannot estimate from an empty sample");
}

void check_positive(std::span<const double> f, std::span<const ExternalId> ids) {
  std::vector<std::int64_t> zero;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0.0)) zero.push_back(ids.empty() ? static_cast<std::int64_t>(i) : ids[i]);
  }
  if (!zero.empty()) throw ZeroFrequencyError(std::move(zero));
}

double inverse_sum(std::span<const double> f) {
  CompensatedSum w;
  for (double x : f) w.add(1.0 / x);
  return w.value();
}

}  // namespace

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::Frequency: return "new";
    case EstimatorKind::Degree: return "vh";
    case EstimatorKind::SampleMean: return "mean";
    case EstimatorKind::Ratio: return "ratio";
    case EstimatorKind::WithReplacement: return "wr";
  }
  return "?";
}

std::string_view to_string(VarianceVariant variant) noexcept {
  switch (variant) {
    case VarianceVariant::V1: return "v1";
    case VarianceVariant::V2: return "v2";
    case VarianceVariant::JointFull: return "joint-full";
    case VarianceVariant::JointEdges: return "joint-edges";
    case VarianceVariant::Diagonal: return "diagonal";
  }
  return "?";
}

std::optional<EstimatorKind> parse_estimator(std::string_view text) noexcept {
  for (auto k : {EstimatorKind::Frequency, EstimatorKind::Degree, EstimatorKind::SampleMean,
                 EstimatorKind::Ratio, EstimatorKind::WithReplacement}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<VarianceVariant> parse_variance_variant(std::string_view text) noexcept {
  for (auto v : {VarianceVariant::V1, VarianceVariant::V2, VarianceVariant::JointFull,
                 VarianceVariant::JointEdges, VarianceVariant::Diagonal}) {
    if (text == to_string(v)) return v;
  }
  return std::nullopt;
}

std::string_view to_string(DiagonalForm form) noexcept {
  return form == DiagonalForm::Printed ? "printed" : "linearized";
}

std::optional<DiagonalForm> parse_diagonal_form(std::string_view text) noexcept {
  if (text == "linearized") return DiagonalForm::Linearized;
  if (text == "printed") return DiagonalForm::Printed;
  return std::nullopt;
}

double weighted_mean(std::span<const double> y, std::span<const double> weights) {
  check_aligned(y.size(), weights.size(), "weighted_mean");
  check_nonempty(y.size());
  CompensatedSum num;
  CompensatedSum den;
  for (std::size_t i = 0; i < y.size(); ++i) {
    num.add_product(y[i], weights[i]);
    den.add(weights[i]);
  }
  if (den.value() == 0.0) throw ValidationError("weights sum to zero");
  return divide(num, den);
}

double estimate_mean_f(std::span<const double> y, std::span<const double> f,
                       std::span<const ExternalId> ids) {
  check_aligned(y.size(), f.size(), "estimate_mean_f");
  check_nonempty(y.size());
  check_positive(f, ids);
  // Weights 1/f are rounded once each; the complement identity only needs
  // the weighted sums to be carried exactly, which CompensatedSum does.
  std::vector<double> w(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) w[i] = 1.0 / f[i];
  return weighted_mean(y, w);
}

double estimate_mean_vh(std::span<const double> y, std::span<const double> degrees) {
  check_aligned(y.size(), degrees.size(), "estimate_mean_vh");
  check_nonempty(y.size());
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (!(degrees[i] > 0.0)) {
      throw ValidationError("respondent at position " + std::to_string(i) +
                            " reports degree 0 and has no degree weight");
    }
  }
  std::vector<double> w(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i) w[i] = 1.0 / degrees[i];
  return weighted_mean(y, w);
}

double sample_mean(std::span<const double> y) {
  check_nonempty(y.size());
  CompensatedSum s;
  for (double v : y) s.add(v);
  CompensatedSum n;
  n.add(static_cast<double>(y.size()));
  return divide(s, n);
}

double variance_v2(std::span<const double> y, std::span<const double> f, double mu) {
  check_aligned(y.size(), f.size(), "variance_v2");
  if (y.size() < 2) throw ValidationError("variance needs at least 2 observations");
  check_positive(f, {});
  const double n = static_cast<double>(y.size());
  const double w = inverse_sum(f);
  CompensatedSum s;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = n * (y[i] / f[i]) / w - mu;
    s.add_product(d, d);
  }
  return s.value() / (n * (n - 1.0));
}

double variance_v1(std::span<const double> y, std::span<const double> f, double mu) {
  check_aligned(y.size(), f.size(), "variance_v1");
  check_nonempty(y.size());
  check_positive(f, {});
  const double w = inverse_sum(f);
  CompensatedSum s;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = (y[i] - mu) / f[i];
    s.add_product(d, d);
  }
  return s.value() / (w * w);
}

JointVariance variance_joint(std::span<const double> y, std::span<const double> f,
                             const InclusionFrequencies& pairs,
                             std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                             double mu, VarianceVariant variant, DiagonalForm form,
                             std::span<const ExternalId> ids) {
  check_aligned(y.size(), f.size(), "variance_joint");
  check_nonempty(y.size());
  check_positive(f, ids);
  if (variant != VarianceVariant::JointFull && variant != VarianceVariant::JointEdges &&
      variant != VarianceVariant::Diagonal) {
    throw ValidationError("variance_joint handles the joint-frequency variants only");
  }
  const std::size_t n = y.size();
  auto name = [&](std::uint32_t i) { return ids.empty() ? std::to_string(i) : std::to_string(ids[i]); };
  auto cross = [&](std::uint32_t i, std::uint32_t j) {
    const auto fij = pairs.pair(i, j);
    if (!fij) {
      throw ValidationError("no joint frequency for pair (" + name(i) + "," + name(j) + ")");
    }
    if (!(*fij > 0.0)) {
      throw ValidationError("joint frequency of pair (" + name(i) + "," + name(j) +
                            ") is zero; raise the iteration count");
    }
    const double delta = (*fij - f[i] * f[j]) / *fij;
    return delta * ((y[i] - mu) / f[i]) * ((y[j] - mu) / f[j]);
  };

  CompensatedSum s;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - mu;
    double term;
    if (form == DiagonalForm::Linearized) {
      term = (1.0 - f[i]) * (r / f[i]) * (r / f[i]);
    } else if (variant == VarianceVariant::JointEdges) {
      term = (f[i] - 1.0) * r * r / f[i];
    } else {
      term = (1.0 - f[i]) * r * r / f[i];
    }
    s.add(term);
  }
  if (variant == VarianceVariant::JointFull) {
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = i + 1; j < n; ++j) s.add(2.0 * cross(i, j));
    }
  } else if (variant == VarianceVariant::JointEdges) {
    for (auto [i, j] : edges) {
      if (i >= n || j >= n || i == j) throw ValidationError("sample edge out of range");
      s.add(2.0 * cross(i, j));
    }
  }
  const double w = inverse_sum(f);
  JointVariance out;
  out.raw = s.value() / (w * w);
  out.negative = out.raw < 0.0;
  out.value = out.negative ? 0.0 : out.raw;
  return out;
}

double normal_critical_value(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - alpha / 2.0);
}

std::pair<double, double> confidence_interval(double mu, double variance, double alpha) {
  if (!(variance >= 0.0)) throw ValidationError("variance must be nonnegative");
  const double half = normal_critical_value(alpha) * std::sqrt(variance);
  return {mu - half, mu + half};
}

RatioEstimate estimate_ratio(std::span<const double> y, std::span<const double> x,
                             std::span<const double> f, std::span<const ExternalId> ids) {
  check_aligned(y.size(), f.size(), "estimate_ratio");
  check_aligned(x.size(), f.size(), "estimate_ratio");
  check_nonempty(y.size());
  check_positive(f, ids);
  CompensatedSum num;
  CompensatedSum den;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = 1.0 / f[i];
    num.add_product(y[i], w);
    den.add_product(x[i], w);
  }
  if (den.value() == 0.0) throw ValidationError("ratio denominator Sum(x/f) is zero");
  RatioEstimate out;
  out.ratio = divide(num, den);
  CompensatedSum s;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = (y[i] - x[i] * out.ratio) / f[i];
    s.add_product(d, d);
  }
  const double dx = den.value();
  out.variance = s.value() / (dx * dx);
  return out;
}

WithReplacementEstimate estimate_mean_wr(std::span<const double> y, std::span<const double> m,
                                         std::span<const double> g,
                                         std::span<const ExternalId> ids) {
  check_aligned(y.size(), g.size(), "estimate_mean_wr");
  check_aligned(m.size(), g.size(), "estimate_mean_wr");
  check_nonempty(y.size());
  check_positive(g, ids);
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(m[i] >= 1.0)) throw ValidationError("selection counts must be at least 1");
    w[i] = m[i] / g[i];
  }
  WithReplacementEstimate out;
  out.mean = weighted_mean(y, w);
  CompensatedSum s;
  CompensatedSum wsum;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = (y[i] - out.mean) / g[i];
    s.add(m[i] * r * r);
    wsum.add(w[i]);
  }
  const double ws = wsum.value();
  out.variance = s.value() / (ws * ws);
  return out;
}

EstimateResult estimate(std::string variable, EstimatorKind estimator, std::span<const double> y,
                        const SampleNetwork& sample, const InclusionFrequencies& freqs,
                        VarianceVariant variant, double alpha, DiagonalForm form) {
  EstimateResult r;
  r.variable = std::move(variable);
  r.estimator = estimator;
  r.alpha = alpha;
  const auto ids = sample.ids();
  switch (estimator) {
    case EstimatorKind::Frequency: {
      r.point = estimate_mean_f(y, freqs.f, ids);
      r.variant = variant;
      if (variant == VarianceVariant::V1) {
        r.variance = variance_v1(y, freqs.f, r.point);
      } else if (variant == VarianceVariant::V2) {
        r.variance = variance_v2(y, freqs.f, r.point);
      } else {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        for (const auto& e : sample.edges()) edges.emplace_back(e.recruiter, e.recruit);
        for (const auto& e : sample.known_ties()) edges.emplace_back(e.recruiter, e.recruit);
        for (auto& [a, b] : edges) {
          if (a > b) std::swap(a, b);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        const auto jv = variance_joint(y, freqs.f, freqs, edges, r.point, variant, form, ids);
        r.variance = jv.value;
        r.clamped = jv.negative;
      }
      break;
    }
    case EstimatorKind::Degree: {
      const auto d = sample.degrees();
      r.point = estimate_mean_vh(y, d);
      r.variant = VarianceVariant::V2;
      r.variance = y.size() >= 2 ? variance_v2(y, d, r.point) : 0.0;
      break;
    }
    case EstimatorKind::SampleMean: {
      r.point = sample_mean(y);
      const std::vector<double> ones(y.size(), 1.0);
      r.variant = VarianceVariant::V2;
      r.variance = y.size() >= 2 ? variance_v2(y, ones, r.point) : 0.0;
      break;
    }
    case EstimatorKind::WithReplacement: {
      const std::vector<double> m(y.size(), 1.0);
      const auto wr = estimate_mean_wr(y, m, freqs.g, ids);
      r.point = wr.mean;
      r.variance = wr.variance;
      break;
    }
    case EstimatorKind::Ratio:
      throw ValidationError("the ratio estimator needs a denominator variable; use estimate_ratio");
  }
  std::tie(r.lower, r.upper) = confidence_interval(r.point, r.variance, alpha);
  return r;
}

std::string format_estimates(std::span<const EstimateResult> results) {
  std::string out = "variable,estimator,variant,point,variance,lower,upper,alpha\n";
  for (const auto& r : results) {
    out += r.variable;
    out += ',';
    out += to_string(r.estimator);
    out += ',';
    out += r.variant ? std::string(to_string(*r.variant)) : std::string("none");
    for (double v : {r.point, r.variance, r.lower, r.upper, r.alpha}) {
      out += ',';
      out += csv::format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace netsample
