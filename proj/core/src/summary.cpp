#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "netsample/error.hpp"
#include "netsample/harness.hpp"
#include "netsample/numeric.hpp"

namespace netsample {

Summary summarize(std::span<const double> estimates, double actual) {
  if (estimates.empty()) throw ValidationError("summarize needs at least one estimate");
  const double r = static_cast<double>(estimates.size());
  CompensatedSum total;
  for (double x : estimates) total.add(x);
  Summary s;
  s.e_est = total.value() / r;
  s.bias = s.e_est - actual;
  CompensatedSum dev;
  for (double x : estimates) {
    const double d = x - s.e_est;
    dev.add_product(d, d);
  }
  const double var = dev.value() / r;
  s.sd = std::sqrt(var);
  CompensatedSum err;
  for (double x : estimates) {
    const double d = x - actual;
    err.add_product(d, d);
  }
  s.mse = err.value() / r;
  return s;
}

double relative_efficiency(double mse_ref, double mse_new) noexcept {
  if (mse_new == 0.0) return std::numeric_limits<double>::infinity();
  return mse_ref / mse_new;
}

Coverage coverage_table(std::span<const std::pair<double, double>> intervals, double actual) {
  if (intervals.empty()) throw ValidationError("coverage needs at least one interval");
  Coverage c;
  c.count = intervals.size();
  std::size_t hit = 0;
  CompensatedSum half;
  for (auto [lo, hi] : intervals) {
    if (lo <= actual && actual <= hi) ++hit;
    half.add((hi - lo) / 2.0);
  }
  const double r = static_cast<double>(c.count);
  c.coverage = static_cast<double>(hit) / r;
  c.halfwidth = half.value() / r;
  return c;
}

std::vector<VariableSeries> augment_complements(std::span<const VariableSeries> binary) {
  std::vector<VariableSeries> out(binary.begin(), binary.end());
  for (const auto& s : binary) {
    if (!(s.actual >= 0.0 && s.actual <= 1.0)) {
      throw ValidationError("variable `" + s.variable + "` is not a proportion; no complement");
    }
    VariableSeries c;
    c.variable = s.variable.starts_with("not ") ? s.variable.substr(4) : "not " + s.variable;
    c.actual = 1.0 - s.actual;
    c.estimates.reserve(s.estimates.size());
    for (double x : s.estimates) c.estimates.push_back(1.0 - x);
    out.push_back(std::move(c));
  }
  return out;
}

double fit_parabola(std::span<const std::pair<double, double>> points) {
  CompensatedSum num;
  CompensatedSum den;
  for (auto [p, mse] : points) {
    num.add(mse);
    den.add_product(p, 1.0 - p);
  }
  if (!(den.value() > 0.0)) {
    throw ValidationError("parabola fit needs a point with 0 < p < 1");
  }
  return divide(num, den);
}

namespace {

using Key = std::tuple<std::string, std::string, std::string>;

// |bias| / |reference bias|
double rbias_of(double bias, double ref_bias) {
  if (std::abs(ref_bias) < 1e-12) return std::numeric_limits<double>::infinity();
  return std::abs(bias) / std::abs(ref_bias);
}

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

SimulationReport build_report(std::vector<ReplicationRecord> records,
                              std::vector<ReplicationInfo> replications,
                              std::vector<VariableTruth> truths, std::uint64_t seed) {
  SimulationReport report;
  report.seed = seed;

  std::vector<std::string> designs;
  std::vector<std::string> estimators;
  // Point estimates per (design, estimator, variable); one per replication
  // even when several variance variants were recorded.
  std::map<Key, std::vector<double>> points;
  std::map<Key, std::vector<std::uint32_t>> seen;
  // Intervals per (design, estimator + variant, variable).
  std::vector<std::pair<std::string, std::string>> interval_kinds;
  std::map<Key, std::vector<std::pair<double, double>>> intervals;
  std::map<Key, std::size_t> clamped;

  for (const auto& r : records) {
    const std::string est(to_string(r.estimator));
    push_unique(designs, r.design);
    push_unique(estimators, est);
    const Key key{r.design, est, r.variable};
    auto& reps = seen[key];
    if (std::find(reps.begin(), reps.end(), r.replication) == reps.end()) {
      reps.push_back(r.replication);
      points[key].push_back(r.point);
    }
    const std::string variant = r.variant ? std::string(to_string(*r.variant)) : "none";
    push_unique(interval_kinds, std::pair{est, variant});
    const Key ikey{r.design, est + '\x1f' + variant, r.variable};
    intervals[ikey].emplace_back(r.lower, r.upper);
    if (r.clamped) ++clamped[ikey];
  }

  for (const auto& design : designs) {
    for (const auto& truth : truths) {
      const auto ref = points.find({design, std::string(kReferenceEstimator), truth.name});
      std::optional<Summary> ref_summary;
      if (ref != points.end()) ref_summary = summarize(ref->second, truth.actual);
      for (const auto& est : estimators) {
        const auto it = points.find({design, est, truth.name});
        if (it == points.end()) continue;
        const Summary s = summarize(it->second, truth.actual);
        ReportRow row;
        row.design = design;
        row.estimator = est;
        row.variable = truth.name;
        row.actual = truth.actual;
        row.e_est = s.e_est;
        row.bias = s.bias;
        row.sd = s.sd;
        row.mse = s.mse;
        if (est == kReferenceEstimator) {
          row.eff = 1.0;
          row.rbias = 1.0;
        } else if (ref_summary) {
          row.eff = relative_efficiency(s.mse, ref_summary->mse);
          row.rbias = rbias_of(s.bias, ref_summary->bias);
        } else {
          row.eff = std::numeric_limits<double>::quiet_NaN();
          row.rbias = std::numeric_limits<double>::quiet_NaN();
        }
        report.rows.push_back(std::move(row));
      }
    }

    for (const auto& [est, variant] : interval_kinds) {
      for (const auto& truth : truths) {
        const Key ikey{design, est + '\x1f' + variant, truth.name};
        const auto it = intervals.find(ikey);
        if (it == intervals.end()) continue;
        const Coverage c = coverage_table(it->second, truth.actual);
        CoverageRow row;
        row.design = design;
        row.estimator = est;
        row.variant = variant;
        row.variable = truth.name;
        row.actual = truth.actual;
        row.coverage = c.coverage;
        row.halfwidth = c.halfwidth;
        row.count = c.count;
        const auto cl = clamped.find(ikey);
        row.clamped = cl == clamped.end() ? 0 : cl->second;
        report.coverage.push_back(std::move(row));
      }
    }

    for (const auto& est : estimators) {
      std::vector<VariableSeries> binary;
      for (const auto& truth : truths) {
        if (!truth.binary) continue;
        const auto it = points.find({design, est, truth.name});
        if (it == points.end()) continue;
        binary.push_back({truth.name, truth.actual, it->second});
      }
      if (binary.empty()) continue;
      const auto all = augment_complements(binary);
      std::vector<std::pair<double, double>> pts;
      CompensatedSum mse_total;
      for (const auto& s : all) {
        const double mse = summarize(s.estimates, s.actual).mse;
        pts.emplace_back(s.actual, mse);
        mse_total.add(mse);
      }
      ParabolaRow row;
      row.design = design;
      row.estimator = est;
      row.points = pts.size();
      row.mean_mse = mse_total.value() / static_cast<double>(pts.size());
      try {
        row.a = fit_parabola(pts);
      } catch (const ValidationError&) {
        row.a = std::numeric_limits<double>::quiet_NaN();
      }
      report.parabolas.push_back(std::move(row));
    }
  }

  report.truths = std::move(truths);
  report.records = std::move(records);
  report.replications = std::move(replications);
  return report;
}

const ReportRow* SimulationReport::find(std::string_view design, std::string_view estimator,
                                        std::string_view variable) const noexcept {
  for (const auto& r : rows) {
    if (r.design == design && r.estimator == estimator && r.variable == variable) return &r;
  }
  return nullptr;
}

const CoverageRow* SimulationReport::find_coverage(std::string_view design, std::string_view variant,
                                                   std::string_view variable) const noexcept {
  for (const auto& r : coverage) {
    if (r.design == design && r.estimator == "new" && r.variant == variant && r.variable == variable) {
      return &r;
    }
  }
  return nullptr;
}

const ParabolaRow* SimulationReport::find_parabola(std::string_view design,
                                                   std::string_view estimator) const noexcept {
  for (const auto& r : parabolas) {
    if (r.design == design && r.estimator == estimator) return &r;
  }
  return nullptr;
}

}  // namespace netsample
