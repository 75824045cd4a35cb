#include "netsample/harness.hpp"

#include <algorithm>
#include <chrono>

#include "netsample/error.hpp"
#include "netsample/parallel.hpp"

namespace netsample {

void ExperimentConfig::validate(const AttributeTable& attributes) const {
  std::vector<std::string> problems;
  if (designs.empty()) problems.emplace_back("at least one design is required");
  for (std::size_t i = 0; i < designs.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (designs[i].name == designs[j].name) {
        problems.push_back("design name `" + designs[i].name + "` is used twice");
      }
    }
  }
  if (replications < 1) problems.emplace_back("replications must be at least 1");
  if (variants.empty()) problems.emplace_back("at least one variance variant is required");
  if (!(alpha > 0.0 && alpha < 1.0)) problems.emplace_back("alpha must lie in (0,1)");
  if (workers < 1) problems.emplace_back("workers must be at least 1");
  for (const auto& v : variables) {
    if (v == kDegreeVariable || v == kConcurrencyVariable) continue;
    if (!attributes.index_of(v)) problems.push_back("unknown variable `" + v + "`");
  }
  if (!problems.empty()) {
    std::string msg = "invalid experiment configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
}

namespace {

std::vector<std::string> resolve_variables(const ExperimentConfig& config,
                                           const AttributeTable& attributes) {
  if (!config.variables.empty()) return config.variables;
  std::vector<std::string> out(attributes.names().begin(), attributes.names().end());
  out.emplace_back(kDegreeVariable);
  out.emplace_back(kConcurrencyVariable);
  return out;
}

ResampleConfig replication_resample(const ExperimentConfig& config) {
  ResampleConfig rc = config.resample;
  rc.workers = 1;
  for (auto v : config.variants) {
    if (v == VarianceVariant::JointFull) {
      rc.pairs = PairAccumulation::All;
    } else if (v == VarianceVariant::JointEdges && rc.pairs == PairAccumulation::None) {
      rc.pairs = PairAccumulation::Edges;
    }
  }
  return rc;
}

}  // namespace

std::vector<VariableTruth> population_truths(const PopulationGraph& graph,
                                             const AttributeTable& attributes,
                                             std::span<const std::string> variables) {
  std::vector<VariableTruth> out;
  const double n = static_cast<double>(graph.node_count());
  for (const auto& name : variables) {
    VariableTruth t;
    t.name = name;
    if (name == kDegreeVariable) {
      t.actual = graph.mean_degree();
    } else if (name == kConcurrencyVariable) {
      std::size_t count = 0;
      for (NodeId v = 0; v < graph.node_count(); ++v) count += graph.degree(v) >= 2;
      t.actual = static_cast<double>(count) / n;
      t.binary = true;
    } else {
      const auto idx = attributes.index_of(name);
      if (!idx) throw ValidationError("unknown variable `" + name + "`");
      t.actual = attributes.mean(*idx);
      t.binary = attributes.kind(*idx) == VariableKind::Binary;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<double> sample_variable(const SampleNetwork& sample, std::string_view variable) {
  if (variable == kDegreeVariable) return sample.degrees();
  if (variable == kConcurrencyVariable) {
    auto d = sample.degrees();
    for (auto& x : d) x = x >= 2.0 ? 1.0 : 0.0;
    return d;
  }
  const auto idx = sample.variable_index(variable);
  if (!idx) throw ValidationError("sample has no variable `" + std::string(variable) + "`");
  const auto col = sample.values(*idx);
  return {col.begin(), col.end()};
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t design,
                               std::size_t replication) noexcept {
  return derive_seed(master, {design, replication});
}

std::pair<std::vector<ReplicationRecord>, ReplicationInfo> run_replication(
    const PopulationGraph& graph, const AttributeTable& attributes, const ExperimentConfig& config,
    std::size_t design, std::size_t replication) {
  const DesignConfig& dc = config.designs.at(design);
  ReplicationInfo info;
  info.design = dc.name;
  info.replication = static_cast<std::uint32_t>(replication);
  info.seed = replication_seed(config.seed, design, replication);

  Rng design_rng = make_rng(info.seed, {0});
  SampleNetwork sample = run_design(graph, attributes, dc, design_rng);
  info.sample_size = sample.size();
  info.reached_target = sample.reached_target;
  info.components = sample.component_count();

  ResampleConfig rc = replication_resample(config);
  // The simulated survey observes every population link among respondents.
  if (rc.use_known_ties) sample.set_known_ties(population_ties(sample, graph));
  rc.target_size = std::min(rc.target_size, sample.size());
  Rng resample_rng = make_rng(info.seed, {1});
  InclusionFrequencies freqs;
  try {
    freqs = resample(sample, rc, resample_rng);
  } catch (const ValidationError& e) {
    throw ValidationError(dc.name + " replication " + std::to_string(replication) + ": " + e.what());
  }
  info.mean_resample_size = freqs.mean_size;

  std::vector<ReplicationRecord> records;
  auto record = [&](const EstimateResult& r) {
    ReplicationRecord rec;
    rec.design = dc.name;
    rec.replication = info.replication;
    rec.variable = r.variable;
    rec.estimator = r.estimator;
    rec.variant = r.variant;
    rec.point = r.point;
    rec.variance = r.variance;
    rec.lower = r.lower;
    rec.upper = r.upper;
    rec.clamped = r.clamped;
    records.push_back(std::move(rec));
  };
  for (const auto& var : resolve_variables(config, attributes)) {
    const auto y = sample_variable(sample, var);
    for (auto v : config.variants) {
      record(estimate(var, EstimatorKind::Frequency, y, sample, freqs, v, config.alpha,
                      config.diagonal_form));
    }
    record(estimate(var, EstimatorKind::Degree, y, sample, freqs, VarianceVariant::V2, config.alpha));
    record(estimate(var, EstimatorKind::SampleMean, y, sample, freqs, VarianceVariant::V2,
                    config.alpha));
  }
  return {std::move(records), std::move(info)};
}

SimulationReport run_experiment(const PopulationGraph& graph, const AttributeTable& attributes,
                                const ExperimentConfig& config) {
  config.validate(attributes);
  const auto start = std::chrono::steady_clock::now();
  const auto variables = resolve_variables(config, attributes);
  const std::size_t tasks = config.designs.size() * config.replications;
  std::vector<std::pair<std::vector<ReplicationRecord>, ReplicationInfo>> slots(tasks);
  parallel_for(tasks, config.workers, [&](std::size_t t) {
    slots[t] = run_replication(graph, attributes, config, t / config.replications,
                               t % config.replications);
  });

  std::vector<ReplicationRecord> records;
  std::vector<ReplicationInfo> infos;
  for (auto& [recs, info] : slots) {
    records.insert(records.end(), std::make_move_iterator(recs.begin()),
                   std::make_move_iterator(recs.end()));
    infos.push_back(std::move(info));
  }
  auto report = build_report(std::move(records), std::move(infos),
                             population_truths(graph, attributes, variables), config.seed);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace netsample
