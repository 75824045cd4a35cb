#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "netsample/attributes.hpp"
#include "netsample/csv.hpp"
#include "netsample/error.hpp"
#include "netsample/estimators.hpp"
#include "netsample/graph.hpp"
#include "netsample/harness.hpp"
#include "netsample/oracle.hpp"
#include "netsample/random.hpp"
#include "netsample/resample.hpp"
#include "netsample/synthetic.hpp"

#ifndef NETSAMPLE_VERSION
#define NETSAMPLE_VERSION "unknown"
#endif

namespace netsample::cli {

namespace {

// Stream indices under the master seed, one per command.
constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kResampleStream = 2;

using csv::format_double;

struct Population {
  PopulationGraph graph;
  AttributeTable attributes;
  std::vector<std::string> notes;
};

Population load_population(const RunConfig& cfg) {
  Population pop;
  if (cfg.population == PopulationSource::Files) {
    Diagnostics diag;
    std::vector<ExternalId> extra;
    if (cfg.population_attributes) extra = read_attribute_ids(*cfg.population_attributes);
    pop.graph = load_edge_list(*cfg.population_edges, &diag, extra);
    pop.attributes = cfg.population_attributes
                         ? load_attributes(*cfg.population_attributes, pop.graph, &diag)
                         : AttributeTable(pop.graph.node_count());
    pop.notes = std::move(diag.warnings);
  } else {
    auto generated = generate_population(cfg.synthetic);
    pop.graph = std::move(generated.graph);
    pop.attributes = std::move(generated.attributes);
    if (generated.rewiring_losses > 0) {
      pop.notes.push_back(std::to_string(generated.rewiring_losses) +
                          " stubs dropped while removing self-loops and multi-edges");
    }
  }
  return pop;
}

SampleNetwork load_sample(const RunConfig& cfg) {
  if (!cfg.sample.nodes || !cfg.sample.edges) {
    throw ValidationError("this command needs sample.nodes and sample.edges");
  }
  auto sample = read_sample(*cfg.sample.nodes, *cfg.sample.edges);
  if (cfg.resample.use_known_ties) {
    if (!cfg.sample.ties) throw ValidationError("resample.use_known_ties needs sample.ties");
    read_known_ties(*cfg.sample.ties, sample);
  }
  return sample;
}

InclusionFrequencies load_frequencies(const RunConfig& cfg, const SampleNetwork& sample) {
  if (!cfg.sample.frequencies) throw ValidationError("this command needs sample.frequencies");
  auto freqs = read_frequencies(*cfg.sample.frequencies, sample);
  if (cfg.sample.pair_frequencies) read_pair_frequencies(*cfg.sample.pair_frequencies, sample, freqs);
  return freqs;
}

std::string population_summary(const Population& pop) {
  const auto comps = components(pop.graph);
  std::size_t concurrent = 0;
  for (NodeId v = 0; v < pop.graph.node_count(); ++v) concurrent += pop.graph.degree(v) >= 2;
  std::ostringstream s;
  s << "nodes " << pop.graph.node_count() << ", edges " << pop.graph.edge_count()
    << ", components " << comps.size() << ", mean degree " << format_double(pop.graph.mean_degree())
    << ", deg2plus "
    << format_double(static_cast<double>(concurrent) /
                     static_cast<double>(std::max<std::size_t>(1, pop.graph.node_count())))
    << ", variables " << pop.attributes.variable_count() << '\n';
  for (const auto& n : pop.notes) s << "warning: " << n << '\n';
  return s.str();
}

CommandOutput population_files(const Population& pop) {
  CommandOutput out;
  out.files.push_back({"population_edges.csv", format_edge_list(pop.graph)});
  out.files.push_back({"population_attributes.csv", format_attributes(pop.attributes, pop.graph)});
  out.summary = population_summary(pop);
  return out;
}

CommandOutput run_ingest(const RunConfig& cfg) {
  if (cfg.population != PopulationSource::Files) {
    throw ValidationError("ingest reads data files; set population.source = files");
  }
  return population_files(load_population(cfg));
}

CommandOutput run_generate(const RunConfig& cfg) {
  if (cfg.population == PopulationSource::Files) {
    throw ValidationError("generate needs population.source = desk or synthetic");
  }
  return population_files(load_population(cfg));
}

CommandOutput run_sample(const RunConfig& cfg) {
  const auto pop = load_population(cfg);
  Rng rng = make_rng(cfg.seed, {kSampleStream});
  auto sample = run_design(pop.graph, pop.attributes, cfg.design, rng);
  sample.set_known_ties(population_ties(sample, pop.graph));
  CommandOutput out;
  out.files.push_back({"sample_nodes.csv", format_sample_nodes(sample)});
  out.files.push_back({"sample_edges.csv", format_sample_edges(sample)});
  out.files.push_back({"sample_ties.csv", format_known_ties(sample)});
  std::ostringstream s;
  s << cfg.design.name << ": " << sample.size() << " respondents (target " << cfg.design.target_size
    << (sample.reached_target ? ", reached" : ", not reached") << "), " << sample.seed_count()
    << " seeds, " << sample.reseed_count() << " re-seeds, " << sample.component_count()
    << " recruitment trees\n";
  out.summary = s.str();
  return out;
}

std::map<ExternalId, double> read_oracle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::map<ExternalId, double> phi;
  bool header = true;
  csv::for_each_line(in, [&](std::size_t line, std::string_view text) {
    const auto f = csv::split(text, ',');
    if (header) {
      if (f.size() != 2 || f[0] != "id" || f[1] != "phi") {
        throw ParseError(path.string(), line, "header must be `id,phi`");
      }
      header = false;
      return;
    }
    const auto id = f.size() == 2 ? csv::parse_int(f[0]) : std::nullopt;
    const auto p = f.size() == 2 ? csv::parse_double(f[1]) : std::nullopt;
    if (!id || !p) throw ParseError(path.string(), line, "expected `id,phi`");
    if (!phi.emplace(*id, *p).second) {
      throw ParseError(path.string(), line, "duplicate id " + std::to_string(*id));
    }
  });
  return phi;
}

CommandOutput run_resample(const RunConfig& cfg) {
  const auto sample = load_sample(cfg);
  ResampleConfig rc = cfg.resample;
  std::ostringstream s;
  if (!cfg.is_set("resample.target") && rc.target_size > sample.size()) {
    s << "resample target lowered to the sample size " << sample.size() << '\n';
    rc.target_size = sample.size();
  }
  Rng rng = make_rng(cfg.seed, {kResampleStream});
  const auto freqs = resample(sample, rc, rng);
  const auto ids = sample.ids();
  if (const auto zeros = freqs.zero_positions(); !zeros.empty()) {
    std::vector<std::int64_t> bad;
    for (auto p : zeros) bad.push_back(ids[p]);
    throw ZeroFrequencyError(std::move(bad));
  }

  CommandOutput out;
  const bool counts = rc.mode == ResampleMode::ProcessWithReplacement;
  out.files.push_back({"frequencies.csv", counts ? format_counts(freqs, ids)
                                                 : format_frequencies(freqs, ids)});
  if (rc.pairs != PairAccumulation::None) {
    out.files.push_back({"pair_frequencies.csv", format_pair_frequencies(freqs, ids)});
  }
  s << to_string(rc.mode) << ": " << freqs.iterations << " resamples, mean size "
    << format_double(freqs.mean_size) << " (target " << rc.target_size << ")\n";

  if (cfg.compare) {
    if (counts) throw ValidationError("resample.compare needs inclusion frequencies, not counts");
    const auto phi = read_oracle(*cfg.compare);
    const double t = static_cast<double>(freqs.iterations);
    std::string table = "id,phi,f,se,z,within\n";
    std::size_t within = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const auto it = phi.find(ids[i]);
      if (it == phi.end()) {
        throw ValidationError("oracle file " + cfg.compare->string() + " has no id " +
                              std::to_string(ids[i]));
      }
      const double p = it->second;
      const double se = std::sqrt(p * (1.0 - p) / t);
      const double diff = freqs.f[i] - p;
      const double z = se > 0.0 ? diff / se : (std::abs(diff) <= 1e-12 ? 0.0 : INFINITY);
      const bool ok = std::abs(z) <= 3.0;
      within += ok;
      table += std::to_string(ids[i]) + ',' + format_double(p) + ',' + format_double(freqs.f[i]) +
               ',' + format_double(se) + ',' + format_double(z) + ',' + (ok ? "1" : "0") + '\n';
    }
    if (phi.size() != sample.size()) {
      throw ValidationError("oracle file lists " + std::to_string(phi.size()) +
                            " nodes but the sample has " + std::to_string(sample.size()));
    }
    out.files.push_back({"comparison.csv", std::move(table)});
    s << "oracle comparison: " << within << " of " << sample.size()
      << " nodes within 3 binomial standard errors (T=" << freqs.iterations << ")\n";
  }
  out.summary = s.str();
  return out;
}

std::vector<std::string> estimate_variables(const RunConfig& cfg, const SampleNetwork& sample) {
  if (!cfg.estimate.variables.empty()) return cfg.estimate.variables;
  std::vector<std::string> vars = sample.variable_names();
  vars.emplace_back(kDegreeVariable);
  vars.emplace_back(kConcurrencyVariable);
  return vars;
}

CommandOutput run_estimate(const RunConfig& cfg) {
  const auto sample = load_sample(cfg);
  const auto freqs = load_frequencies(cfg, sample);
  const bool counts = freqs.mode == ResampleMode::ProcessWithReplacement;
  const auto& es = cfg.estimate;
  std::vector<EstimatorKind> kinds = es.estimators;
  if (counts && !cfg.is_set("estimate.estimators")) {
    kinds = {EstimatorKind::WithReplacement, EstimatorKind::Degree, EstimatorKind::SampleMean};
  }
  std::vector<EstimateResult> results;
  for (const auto& var : estimate_variables(cfg, sample)) {
    const auto y = sample_variable(sample, var);
    for (auto kind : kinds) {
      if (kind == EstimatorKind::Frequency) {
        for (auto v : es.variants) {
          results.push_back(estimate(var, kind, y, sample, freqs, v, es.alpha, es.diagonal_form));
        }
      } else {
        results.push_back(estimate(var, kind, y, sample, freqs, VarianceVariant::V2, es.alpha));
      }
    }
  }
  for (const auto& [yname, xname] : es.ratios) {
    if (counts) throw ValidationError("the ratio estimator needs inclusion frequencies");
    const auto y = sample_variable(sample, yname);
    const auto x = sample_variable(sample, xname);
    const auto r = estimate_ratio(y, x, freqs.f, sample.ids());
    EstimateResult res;
    res.variable = yname + "/" + xname;
    res.estimator = EstimatorKind::Ratio;
    res.point = r.ratio;
    res.variance = r.variance;
    res.alpha = es.alpha;
    std::tie(res.lower, res.upper) = confidence_interval(r.ratio, r.variance, es.alpha);
    results.push_back(std::move(res));
  }
  CommandOutput out;
  out.files.push_back({"estimates.csv", format_estimates(results)});
  out.summary = std::to_string(results.size()) + " estimates over " +
                std::to_string(sample.size()) + " respondents\n";
  return out;
}

CommandOutput run_simulate(const RunConfig& cfg) {
  SimulationReport report;
  std::ostringstream s;
  if (cfg.regenerate_from) {
    report = read_replications(*cfg.regenerate_from);
    s << "rebuilt from " << cfg.regenerate_from->string() << '\n';
  } else {
    const auto pop = load_population(cfg);
    report = run_experiment(pop.graph, pop.attributes, cfg.experiment);
    s << "population: " << population_summary(pop);
  }
  CommandOutput out;
  out.files.push_back({"report.csv", format_report(report)});
  out.files.push_back({"coverage.csv", format_coverage(report)});
  out.files.push_back({"parabola.csv", format_parabola(report)});
  out.files.push_back({"report.json", format_report_json(report)});
  out.files.push_back({"replications.csv", format_replications(report)});

  std::vector<std::string> designs;
  for (const auto& r : report.replications) {
    if (std::find(designs.begin(), designs.end(), r.design) == designs.end()) {
      designs.push_back(r.design);
    }
  }
  for (const auto& d : designs) {
    for (std::string_view var : {kDegreeVariable, kConcurrencyVariable}) {
      const auto* f = report.find(d, "new", var);
      const auto* vh = report.find(d, "vh", var);
      if (!f || !vh) continue;
      s << d << ' ' << var << ": actual " << format_double(f->actual) << ", new "
        << format_double(f->e_est) << ", vh " << format_double(vh->e_est) << ", mse(vh)/mse(new) "
        << format_double(vh->eff) << '\n';
    }
    for (const auto& p : report.parabolas) {
      if (p.design == d) s << d << " parabola " << p.estimator << ": a " << format_double(p.a) << '\n';
    }
  }
  if (!cfg.regenerate_from) s << "runtime " << format_double(report.runtime_seconds) << " s\n";
  out.summary = s.str();
  return out;
}

struct OracleGraph {
  PopulationGraph graph;
  bool forest = false;
};

OracleGraph oracle_graph(const OracleSettings& os) {
  OracleGraph g;
  if (os.graph == OracleGraphKind::File) {
    g.graph = load_edge_list(*os.edges);
  } else {
    const auto n = static_cast<NodeId>(os.nodes);
    std::vector<Edge> edges;
    switch (os.graph) {
      case OracleGraphKind::Path:
        for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
        break;
      case OracleGraphKind::Star:
        for (NodeId i = 1; i < n; ++i) edges.push_back({0, i});
        break;
      case OracleGraphKind::Cycle:
        for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
        if (n >= 3) edges.push_back({0, n - 1});
        break;
      case OracleGraphKind::Complete:
        for (NodeId i = 0; i < n; ++i) {
          for (NodeId j = i + 1; j < n; ++j) edges.push_back({i, j});
        }
        break;
      case OracleGraphKind::File:
        break;
    }
    g.graph = PopulationGraph::from_edges(n, std::move(edges));
  }
  g.forest = g.graph.edge_count() + components(g.graph).size() == g.graph.node_count();
  return g;
}

// The forest as a stored sample: one tree per component rooted at its
// smallest node, recruits in breadth-first order.
SampleNetwork forest_sample(const PopulationGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<SampledNode> nodes;
  std::vector<RecruitmentEdge> edges;
  std::vector<std::int64_t> pos(n, -1);
  for (NodeId root = 0; root < n; ++root) {
    if (pos[root] >= 0) continue;
    std::queue<std::pair<NodeId, std::int32_t>> queue;
    queue.push({root, 0});
    pos[root] = static_cast<std::int64_t>(nodes.size());
    nodes.push_back({graph.external_id(root), EntryKind::Seed, 0, graph.degree(root)});
    while (!queue.empty()) {
      const auto [v, depth] = queue.front();
      queue.pop();
      for (NodeId w : graph.neighbors(v)) {
        if (pos[w] >= 0) continue;
        pos[w] = static_cast<std::int64_t>(nodes.size());
        nodes.push_back({graph.external_id(w), EntryKind::Recruit, depth + 1, graph.degree(w)});
        edges.push_back({static_cast<std::uint32_t>(pos[v]), static_cast<std::uint32_t>(pos[w])});
        queue.push({w, depth + 1});
      }
    }
  }
  return SampleNetwork(std::move(nodes), std::move(edges), {}, {});
}

CommandOutput run_oracle(const RunConfig& cfg) {
  const auto& os = cfg.oracle;
  const auto g = oracle_graph(os);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& e : g.graph.edges()) pairs.emplace_back(e.u, e.v);
  const auto rg = ResampleGraph::from_edges(g.graph.node_count(), pairs);
  const auto result = enumerate_exact_inclusion(rg, os.design);

  CommandOutput out;
  std::string table = "id,phi\n";
  for (std::size_t i = 0; i < result.phi.size(); ++i) {
    table += std::to_string(g.graph.external_id(static_cast<NodeId>(i))) + ',' +
             format_double(result.phi[i]) + '\n';
  }
  out.files.push_back({"oracle.csv", std::move(table)});
  std::ostringstream s;
  s << "exact inclusion over " << result.outcomes << " outcomes (size estimate "
    << format_double(result.size_estimate) << ")\n";
  if (g.forest) {
    // A forest is a valid recruitment network, so the empirical side can be
    // run on the same graph with `resample --config oracle_resample.cfg`.
    const auto sample = forest_sample(g.graph);
    out.files.push_back({"sample_nodes.csv", format_sample_nodes(sample)});
    out.files.push_back({"sample_edges.csv", format_sample_edges(sample)});
    std::ostringstream r;
    r << "# Repeated-mode resampling matched to the oracle design.\n"
      << "[sample]\nnodes = sample_nodes.csv\nedges = sample_edges.csv\n\n"
      << "[resample]\nmode = repeated\ntarget = " << g.graph.node_count()
      << "\nseed_rate = " << format_double(os.design.seed_rate)
      << "\ntrace_rate = " << format_double(os.design.trace_rate)
      << "\nreseed_rate = " << format_double(os.design.reseed_rate)
      << "\nmax_waves = " << os.design.waves << "\ncompare = oracle.csv\n";
    out.files.push_back({"oracle_resample.cfg", r.str()});
    s << "compare with: netsample resample --config " << (cfg.out / "oracle_resample.cfg").string()
      << " --seed <seed> --out <dir> -T 1000000\n";
  }
  out.summary = s.str();
  return out;
}

CommandOutput run_export(const RunConfig& cfg) {
  const auto sample = load_sample(cfg);
  const auto freqs = load_frequencies(cfg, sample);
  if (freqs.mode == ResampleMode::ProcessWithReplacement) {
    throw ValidationError("export needs inclusion frequencies `id,f`, not counts");
  }
  CommandOutput out;
  out.files.push_back({"annotated_sample.csv", format_annotated_sample(sample, freqs)});
  out.summary = std::to_string(sample.size()) + " nodes exported\n";
  return out;
}

}  // namespace

CommandOutput execute(std::string_view command, const RunConfig& config) {
  CommandOutput out;
  if (command == "ingest") out = run_ingest(config);
  else if (command == "generate") out = run_generate(config);
  else if (command == "sample") out = run_sample(config);
  else if (command == "resample") out = run_resample(config);
  else if (command == "estimate") out = run_estimate(config);
  else if (command == "simulate") out = run_simulate(config);
  else if (command == "oracle") out = run_oracle(config);
  else if (command == "export") out = run_export(config);
  else throw ValidationError("unknown command `" + std::string(command) + "`");
  out.files.push_back({"manifest.txt", format_manifest(command, config, out.files)});
  return out;
}

void write_artifacts(const std::filesystem::path& dir, const CommandOutput& output) {
  std::filesystem::create_directories(dir);
  for (const auto& a : output.files) csv::write_file_atomic(dir / a.name, a.content);
}

std::string format_manifest(std::string_view command, const RunConfig& config,
                            const std::vector<Artifact>& artifacts) {
  std::string out = "# netsample run manifest\n";
  out += "command = " + std::string(command) + '\n';
  out += "version = " NETSAMPLE_VERSION "\n";
  out += "modules = netgraph designs resampler estimators simharness cli\n";
  out += "seed = " + std::to_string(config.seed) + '\n';
  out += "artifacts = ";
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    out += (i ? ", " : "") + artifacts[i].name;
  }
  out += "\n\n# resolved configuration\n";
  out += format_document(config.resolved);
  return out;
}

int exit_status(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const ZeroFrequencyError*>(&e)) return 4;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e)) return 3;
  return 1;
}

std::string error_line(const std::exception& e) {
  std::string kind = "error";
  if (dynamic_cast<const ConfigError*>(&e)) kind = "config";
  else if (dynamic_cast<const ZeroFrequencyError*>(&e)) kind = "zero-frequency";
  else if (dynamic_cast<const ParseError*>(&e)) kind = "parse";
  else if (dynamic_cast<const ValidationError*>(&e)) kind = "validation";
  std::string msg = e.what();
  std::string folded;
  for (std::size_t i = 0; i < msg.size(); ++i) {
    if (msg[i] == '\n') {
      folded += "; ";
      while (i + 1 < msg.size() && msg[i + 1] == ' ') ++i;
    } else {
      folded += msg[i];
    }
  }
  // "invalid configuration:; a; b" reads better as "invalid configuration: a; b"
  if (const auto pos = folded.find(":; "); pos != std::string::npos) folded.erase(pos + 1, 1);
  return "error: " + kind + ": " + folded;
}

}  // namespace netsample::cli
