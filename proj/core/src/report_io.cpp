#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "netsample/csv.hpp"
#include "netsample/error.hpp"
#include "netsample/harness.hpp"

namespace netsample {

namespace {

using csv::format_double;

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

std::string join(std::initializer_list<std::string> fields) {
  std::string out;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out += ',';
    out += f;
    first = false;
  }
  out += '\n';
  return out;
}

}  // namespace

std::string format_report(const SimulationReport& report) {
  std::string out = "design,estimator,variable,actual,E.est,bias,sd,mse,eff,rbias\n";
  for (const auto& r : report.rows) {
    out += join({r.design, r.estimator, r.variable, format_double(r.actual), format_double(r.e_est),
                 format_double(r.bias), format_double(r.sd), format_double(r.mse),
                 format_double(r.eff), format_double(r.rbias)});
  }
  return out;
}

std::string format_coverage(const SimulationReport& report) {
  std::string out = "design,estimator,variant,variable,actual,coverage,halfwidth,count,clamped\n";
  for (const auto& r : report.coverage) {
    out += join({r.design, r.estimator, r.variant, r.variable, format_double(r.actual),
                 format_double(r.coverage), format_double(r.halfwidth), std::to_string(r.count),
                 std::to_string(r.clamped)});
  }
  return out;
}

std::string format_parabola(const SimulationReport& report) {
  std::string out = "design,estimator,a,mean_mse,points\n";
  for (const auto& r : report.parabolas) {
    out += join({r.design, r.estimator, format_double(r.a), format_double(r.mean_mse),
                 std::to_string(r.points)});
  }
  return out;
}

std::string format_report_json(const SimulationReport& report) {
  nlohmann::ordered_json j;
  j["seed"] = report.seed;
  auto& truths = j["variables"] = nlohmann::ordered_json::array();
  for (const auto& t : report.truths) {
    truths.push_back({{"name", t.name}, {"actual", number(t.actual)}, {"binary", t.binary}});
  }
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"design", r.design},     {"estimator", r.estimator}, {"variable", r.variable},
                    {"actual", number(r.actual)}, {"E.est", number(r.e_est)}, {"bias", number(r.bias)},
                    {"sd", number(r.sd)},     {"mse", number(r.mse)},     {"eff", number(r.eff)},
                    {"rbias", number(r.rbias)}});
  }
  auto& cov = j["coverage"] = nlohmann::ordered_json::array();
  for (const auto& r : report.coverage) {
    cov.push_back({{"design", r.design},
                   {"estimator", r.estimator},
                   {"variant", r.variant},
                   {"variable", r.variable},
                   {"actual", number(r.actual)},
                   {"coverage", number(r.coverage)},
                   {"halfwidth", number(r.halfwidth)},
                   {"count", r.count},
                   {"clamped", r.clamped}});
  }
  auto& par = j["parabolas"] = nlohmann::ordered_json::array();
  for (const auto& r : report.parabolas) {
    par.push_back({{"design", r.design},
                   {"estimator", r.estimator},
                   {"a", number(r.a)},
                   {"mean_mse", number(r.mean_mse)},
                   {"points", r.points}});
  }
  auto& reps = j["replications"] = nlohmann::ordered_json::array();
  for (const auto& r : report.replications) {
    reps.push_back({{"design", r.design},
                    {"replication", r.replication},
                    {"seed", r.seed},
                    {"sample_size", r.sample_size},
                    {"reached_target", r.reached_target},
                    {"components", r.components},
                    {"mean_resample_size", number(r.mean_resample_size)}});
  }
  return j.dump(2) + '\n';
}

std::string format_replications(const SimulationReport& report) {
  std::string out = "seed," + std::to_string(report.seed) + '\n';
  for (const auto& t : report.truths) {
    out += join({"truth", t.name, format_double(t.actual), t.binary ? "1" : "0"});
  }
  for (const auto& r : report.replications) {
    out += join({"info", r.design, std::to_string(r.replication), std::to_string(r.seed),
                 std::to_string(r.sample_size), r.reached_target ? "1" : "0",
                 std::to_string(r.components), format_double(r.mean_resample_size)});
  }
  for (const auto& r : report.records) {
    out += join({"est", r.design, std::to_string(r.replication), r.variable,
                 std::string(to_string(r.estimator)),
                 r.variant ? std::string(to_string(*r.variant)) : "none", format_double(r.point),
                 format_double(r.variance), format_double(r.lower), format_double(r.upper),
                 r.clamped ? "1" : "0"});
  }
  return out;
}

SimulationReport parse_replications(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::uint64_t seed = 0;
  std::vector<VariableTruth> truths;
  std::vector<ReplicationInfo> infos;
  std::vector<ReplicationRecord> records;

  csv::for_each_line(in, [&](std::size_t line, std::string_view text) {
    const auto f = csv::split(text, ',');
    auto fail = [&](const std::string& what) { throw ParseError(src, line, what); };
    auto integer = [&](std::string_view s) {
      const auto v = csv::parse_int(s);
      if (!v || *v < 0) fail("expected a nonnegative integer, got `" + std::string(s) + "`");
      return static_cast<std::uint64_t>(*v);
    };
    auto real = [&](std::string_view s) {
      const auto v = csv::parse_double(s);
      if (!v) fail("expected a number, got `" + std::string(s) + "`");
      return *v;
    };
    auto flag = [&](std::string_view s) {
      if (s != "0" && s != "1") fail("expected 0 or 1, got `" + std::string(s) + "`");
      return s == "1";
    };
    const std::string_view tag = f.empty() ? std::string_view{} : f[0];
    if (tag == "seed") {
      if (f.size() != 2) fail("seed line needs 1 field");
      // Seeds may use all 64 bits.
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), v);
      if (ec != std::errc() || ptr != f[1].data() + f[1].size()) fail("invalid seed");
      seed = v;
    } else if (tag == "truth") {
      if (f.size() != 4) fail("truth line needs 3 fields");
      truths.push_back({std::string(f[1]), real(f[2]), flag(f[3])});
    } else if (tag == "info") {
      if (f.size() != 8) fail("info line needs 7 fields");
      ReplicationInfo r;
      r.design = std::string(f[1]);
      r.replication = static_cast<std::uint32_t>(integer(f[2]));
      const auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), r.seed);
      if (ec != std::errc() || ptr != f[3].data() + f[3].size()) fail("invalid replication seed");
      r.sample_size = integer(f[4]);
      r.reached_target = flag(f[5]);
      r.components = integer(f[6]);
      r.mean_resample_size = real(f[7]);
      infos.push_back(std::move(r));
    } else if (tag == "est") {
      if (f.size() != 11) fail("est line needs 10 fields");
      ReplicationRecord r;
      r.design = std::string(f[1]);
      r.replication = static_cast<std::uint32_t>(integer(f[2]));
      r.variable = std::string(f[3]);
      const auto est = parse_estimator(f[4]);
      if (!est) fail("unknown estimator `" + std::string(f[4]) + "`");
      r.estimator = *est;
      if (f[5] != "none") {
        const auto v = parse_variance_variant(f[5]);
        if (!v) fail("unknown variance variant `" + std::string(f[5]) + "`");
        r.variant = *v;
      }
      r.point = real(f[6]);
      r.variance = real(f[7]);
      r.lower = real(f[8]);
      r.upper = real(f[9]);
      r.clamped = flag(f[10]);
      records.push_back(std::move(r));
    } else {
      fail("unknown record tag `" + std::string(tag) + "`");
    }
  });
  if (truths.empty()) throw ParseError(src, 0, "replications file lists no variables");
  return build_report(std::move(records), std::move(infos), std::move(truths), seed);
}

SimulationReport read_replications(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_replications(in, path.string());
}

std::string format_annotated_sample(const SampleNetwork& sample, const InclusionFrequencies& freqs) {
  if (freqs.f.size() != sample.size()) {
    throw ValidationError("frequencies cover " + std::to_string(freqs.f.size()) +
                          " nodes but the sample has " + std::to_string(sample.size()));
  }
  const auto labels = sample.component_labels();
  std::string out = "id,f,degree,component\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& node = sample.node(i);
    out += join({std::to_string(node.id), format_double(freqs.f[i]), std::to_string(node.degree),
                 std::to_string(labels[i])});
  }
  return out;
}

}  // namespace netsample
