#include "config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <limits>
#include <set>

#include "netsample/csv.hpp"
#include "netsample/error.hpp"

namespace netsample::cli {

namespace {

using V = ValueType;

constexpr std::array<std::string_view, 3> kSources{"desk", "synthetic", "files"};
constexpr std::array<std::string_view, 2> kPresets{"rds", "snowball"};
constexpr std::array<std::string_view, 4> kModes{"process", "repeated", "process-with-replacement",
                                                 "with-replacement"};
constexpr std::array<std::string_view, 3> kPairs{"none", "edges", "all"};
constexpr std::array<std::string_view, 2> kForms{"linearized", "printed"};
constexpr std::array<std::string_view, 5> kGraphs{"path", "star", "cycle", "complete", "file"};

constexpr std::array kTopKeys{
    KeySpec{"seed", V::Integer, "", "master seed; every random stream derives from it", true},
    KeySpec{"out", V::OutputPath, "", "output directory", true},
    KeySpec{"workers", V::Integer, "1", "worker threads for replications and chains"},
};

constexpr std::array kPopulationKeys{
    KeySpec{"source", V::Choice, "desk", "desk, synthetic ([synthetic] section) or files", false,
            kSources},
    KeySpec{"edges", V::InputPath, "", "edge list `u,v` (source = files)"},
    KeySpec{"attributes", V::InputPath, "", "attribute table `id,var...` (source = files)"},
};

constexpr std::array kSyntheticKeys{
    KeySpec{"nodes", V::Integer, "5000", "population size"},
    KeySpec{"mean_degree", V::Real, "7.9", "target mean degree"},
    KeySpec{"degree_spread", V::Real, "0.9", "lognormal sigma of the degree draws"},
    KeySpec{"degrees", V::List, "", "explicit degree sequence (replaces mean_degree)"},
    KeySpec{"component_fractions", V::List, "1", "node share of each component"},
    KeySpec{"seed", V::Integer, "", "population seed (default: derived from the master seed)"},
    KeySpec{"attributes", V::List, "", "name:prevalence[:degree_tilt] entries"},
};

constexpr std::array kDesignKeys{
    KeySpec{"preset", V::Choice, "rds", "rds (k=3) or snowball (k=15)", false, kPresets},
    KeySpec{"name", V::Text, "", "label in reports (default RDS or SB)"},
    KeySpec{"coupons", V::Integer, "", "coupons per respondent k (default 3, snowball 15)"},
    KeySpec{"target", V::Integer, "1200", "sample size n"},
    KeySpec{"seeds", V::Integer, "240", "number of initial seeds"},
    KeySpec{"seed_rate", V::Probability, "", "Bernoulli seeding rate (replaces seeds)"},
    KeySpec{"expiration_days", V::Integer, "28", "days a coupon stays live"},
    KeySpec{"redemption_prob", V::Probability, "0.15", "per-day redemption probability"},
    KeySpec{"reseed_on_stall", V::Boolean, "true", "enroll a new seed when every coupon is dead"},
};

constexpr std::array kSampleKeys{
    KeySpec{"nodes", V::InputPath, "", "sample nodes file"},
    KeySpec{"edges", V::InputPath, "", "sample recruitment edges file"},
    KeySpec{"frequencies", V::InputPath, "", "inclusion frequencies `id,f` or counts `id,g`"},
    KeySpec{"pair_frequencies", V::InputPath, "", "pair frequencies `i,j,fij`"},
    KeySpec{"ties", V::InputPath, "", "non-recruitment ties among respondents `i,j`"},
};

constexpr std::array kResampleKeys{
    KeySpec{"mode", V::Choice, "process", "process, repeated or process-with-replacement", false,
            kModes},
    KeySpec{"iterations", V::Integer, "10000", "T: retained steps or resamples"},
    KeySpec{"target", V::Integer, "400", "resample target size"},
    KeySpec{"seed_rate", V::Probability, "0.0167", "Bernoulli seeding rate of a resample"},
    KeySpec{"trace_rate", V::Probability, "0.05", "link tracing rate p"},
    KeySpec{"reseed_rate", V::Probability, "", "re-seed rate (default 0.001 repeated, 0.01 process)"},
    KeySpec{"burn_in", V::Integer, "1000", "discarded process steps per chain"},
    KeySpec{"max_waves", V::Integer, "", "wave limit (repeated mode)"},
    KeySpec{"pairs", V::Choice, "none", "pair frequencies: none, edges or all", false, kPairs},
    KeySpec{"chains", V::Integer, "1", "independent process chains"},
    KeySpec{"use_known_ties", V::Boolean, "false", "also trace ties among respondents (sample.ties; simulate uses population links)"},
    KeySpec{"compare", V::InputPath, "", "oracle output `id,phi` to compare against"},
};

constexpr std::array kEstimateKeys{
    KeySpec{"estimators", V::List, "new,vh,mean", "new, vh, mean, wr"},
    KeySpec{"variants", V::List, "v2", "v1, v2, joint-full, joint-edges, diagonal"},
    KeySpec{"variables", V::List, "", "variables to estimate (default: all)"},
    KeySpec{"ratios", V::List, "", "y/x pairs for the ratio estimator"},
    KeySpec{"alpha", V::OpenUnit, "0.05", "interval level is 1 - alpha"},
    KeySpec{"diagonal_form", V::Choice, "linearized", "linearized or printed", false, kForms},
};

constexpr std::array kExperimentKeys{
    KeySpec{"designs", V::List, "rds,snowball", "design presets, overridable via [design.NAME]"},
    KeySpec{"replications", V::Integer, "200", "R: replications per design"},
    KeySpec{"variants", V::List, "v2", "variance variants of the new estimator"},
    KeySpec{"variables", V::List, "", "variables (default: every attribute, degree, deg2plus)"},
    KeySpec{"alpha", V::OpenUnit, "0.05", "interval level is 1 - alpha"},
    KeySpec{"diagonal_form", V::Choice, "linearized", "linearized or printed", false, kForms},
    KeySpec{"from", V::InputPath, "", "rebuild the report from a replications.csv"},
};

constexpr std::array kOracleKeys{
    KeySpec{"graph", V::Choice, "path", "path, star, cycle, complete or file", false, kGraphs},
    KeySpec{"nodes", V::Integer, "3", "node count of a generated graph"},
    KeySpec{"edges", V::InputPath, "", "edge list (graph = file)"},
    KeySpec{"design", V::Text, "one-wave", "one-wave, two-wave, ... or N-wave"},
    KeySpec{"seed_rate", V::Probability, "0.5", "Bernoulli seeding rate"},
    KeySpec{"trace_rate", V::Probability, "0.5", "link tracing rate"},
    KeySpec{"reseed_rate", V::Probability, "0", "re-seed rate per wave"},
};

constexpr std::array kSections{
    SectionSpec{"", "top level", kTopKeys},
    SectionSpec{"population", "population source", kPopulationKeys},
    SectionSpec{"synthetic", "synthetic population generator", kSyntheticKeys},
    SectionSpec{"design", "link-tracing survey design", kDesignKeys},
    SectionSpec{"sample", "stored sample inputs", kSampleKeys},
    SectionSpec{"resample", "second-stage resampling", kResampleKeys},
    SectionSpec{"estimate", "estimators", kEstimateKeys},
    SectionSpec{"experiment", "simulation harness", kExperimentKeys},
    SectionSpec{"oracle", "exact inclusion enumeration", kOracleKeys},
};

const KeySpec* find_key(const SectionSpec& s, std::string_view key) noexcept {
  for (const auto& k : s.keys) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

std::string where(const KeyValueDocument& doc, const KeyValueEntry& e) {
  const std::string name = e.section.empty() ? e.key : e.section + "." + e.key;
  if (e.line == 0) return "command line: " + name;
  return doc.source() + ":" + std::to_string(e.line) + ": " + name;
}

std::string suggestion(std::string_view wrong, const std::vector<std::string_view>& candidates) {
  std::string_view best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (auto c : candidates) {
    const auto d = edit_distance(wrong, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best.empty() || best_d > std::max<std::size_t>(2, wrong.size() / 2)) return "";
  return "; did you mean `" + std::string(best) + "`?";
}

std::string_view spec_section(std::string_view section) {
  return section.starts_with("design.") ? std::string_view("design") : section;
}

bool parse_bool(std::string_view s, bool& out) {
  if (s == "true" || s == "yes" || s == "on" || s == "1") {
    out = true;
    return true;
  }
  if (s == "false" || s == "no" || s == "off" || s == "0") {
    out = false;
    return true;
  }
  return false;
}

// Checks one value against its declared type; returns a problem or "".
std::string check_value(const KeySpec& spec, std::string_view value,
                        const std::filesystem::path& base_dir) {
  switch (spec.type) {
    case V::Integer: {
      const auto v = csv::parse_int(value);
      if (!v || *v < 0) return "expects a nonnegative integer, got `" + std::string(value) + "`";
      return "";
    }
    case V::Real: {
      if (!csv::parse_double(value)) return "expects a number, got `" + std::string(value) + "`";
      return "";
    }
    case V::Probability: {
      const auto v = csv::parse_double(value);
      if (!v || !(*v >= 0.0 && *v <= 1.0)) {
        return "expects a probability in [0,1], got `" + std::string(value) + "`";
      }
      return "";
    }
    case V::OpenUnit: {
      const auto v = csv::parse_double(value);
      if (!v || !(*v > 0.0 && *v < 1.0)) {
        return "expects a number in (0,1), got `" + std::string(value) + "`";
      }
      return "";
    }
    case V::Boolean: {
      bool b = false;
      if (!parse_bool(value, b)) return "expects true or false, got `" + std::string(value) + "`";
      return "";
    }
    case V::Choice: {
      if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
        std::string msg = "expects one of";
        for (auto c : spec.choices) msg += " " + std::string(c);
        return msg + ", got `" + std::string(value) + "`";
      }
      return "";
    }
    case V::InputPath: {
      const auto p = base_dir / std::filesystem::path(value);
      if (value.empty() || !std::filesystem::exists(p)) {
        return "file `" + p.string() + "` does not exist";
      }
      return "";
    }
    case V::OutputPath:
      if (value.empty()) return "expects a path";
      return "";
    case V::Text:
    case V::List:
      return "";
  }
  return "";
}

std::string_view value_of(const KeyValueDocument& doc, std::string_view section,
                          std::string_view key) {
  if (const auto* e = doc.find(section, key)) return e->value;
  const auto* s = find_section(spec_section(section));
  if (s) {
    if (const auto* k = find_key(*s, key)) return k->fallback;
  }
  return {};
}

std::uint64_t as_u64(std::string_view text) {
  return static_cast<std::uint64_t>(csv::parse_int(text).value_or(0));
}

std::size_t as_size(std::string_view text) { return static_cast<std::size_t>(as_u64(text)); }

double as_double(std::string_view text) { return csv::parse_double(text).value_or(0.0); }

bool as_bool(std::string_view text) {
  bool b = false;
  parse_bool(text, b);
  return b;
}

std::optional<std::size_t> parse_waves(std::string_view text) {
  static constexpr std::array<std::string_view, 5> kWords{"one", "two", "three", "four", "five"};
  if (!text.ends_with("-wave")) return std::nullopt;
  const auto head = text.substr(0, text.size() - 5);
  for (std::size_t i = 0; i < kWords.size(); ++i) {
    if (head == kWords[i]) return i + 1;
  }
  const auto v = csv::parse_int(head);
  if (!v || *v < 1) return std::nullopt;
  return static_cast<std::size_t>(*v);
}

// Fills `out` from one design section (or its `design.<name>` override).
void read_design(const KeyValueDocument& doc, std::string_view section, DesignConfig& out,
                 std::vector<std::string>& problems) {
  auto has = [&](std::string_view k) { return doc.find(section, k) != nullptr; };
  auto get = [&](std::string_view k) { return value_of(doc, section, k); };
  if (section == "design") {
    out = get("preset") == "snowball" ? DesignConfig::snowball() : DesignConfig::rds();
  }
  if (has("name")) out.name = std::string(get("name"));
  if (has("coupons")) out.coupons = static_cast<std::uint32_t>(as_u64(get("coupons")));
  if (section == "design" || has("target")) out.target_size = as_size(get("target"));
  if (has("seed_rate")) {
    if (has("seeds")) {
      problems.push_back(where(doc, *doc.find(section, "seed_rate")) +
                         ": set either seeds or seed_rate, not both");
    }
    out.seeds = SeedSpec::rate(as_double(get("seed_rate")));
  } else if (section == "design" || has("seeds")) {
    out.seeds = SeedSpec::count(as_size(get("seeds")));
  }
  if (section == "design" || has("expiration_days")) {
    out.expiration_days = static_cast<std::uint32_t>(as_u64(get("expiration_days")));
  }
  if (section == "design" || has("redemption_prob")) {
    out.redemption_prob = as_double(get("redemption_prob"));
  }
  if (section == "design" || has("reseed_on_stall")) {
    out.reseed_on_stall = as_bool(get("reseed_on_stall"));
  }
}

}  // namespace

std::span<const SectionSpec> schema() noexcept { return kSections; }

const SectionSpec* find_section(std::string_view name) noexcept {
  for (const auto& s : kSections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n  " + p;
  return msg;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : ValidationError(join_problems(problems)), problems_(std::move(problems)) {}

RunConfig parse_config(const KeyValueDocument& doc, const std::filesystem::path& base_dir) {
  std::vector<std::string> problems;
  std::vector<std::string_view> section_names;
  for (const auto& s : kSections) {
    if (!s.name.empty()) section_names.push_back(s.name);
  }

  // Schema pass: unknown sections and keys, type mismatches.
  std::set<std::string> bad_sections;
  for (const auto& e : doc.entries()) {
    const auto* s = find_section(spec_section(e.section));
    if (!s || e.section == "design.") {
      if (bad_sections.insert(e.section).second) {
        problems.push_back(where(doc, e) + ": unknown section [" + e.section + "]" +
                           suggestion(e.section, section_names));
      }
      continue;
    }
    const auto* k = find_key(*s, e.key);
    if (!k) {
      std::vector<std::string_view> keys;
      for (const auto& c : s->keys) keys.push_back(c.key);
      problems.push_back(where(doc, e) + ": unknown key `" + e.key + "`" + suggestion(e.key, keys));
      continue;
    }
    // Command-line values are relative to the working directory.
    if (auto p = check_value(*k, e.value, e.line == 0 ? std::filesystem::path{} : base_dir);
        !p.empty()) {
      problems.push_back(where(doc, e) + ": " + p);
    }
  }
  std::vector<std::string> missing;
  for (const auto& s : kSections) {
    for (const auto& k : s.keys) {
      if (k.required && !doc.find(s.name, k.key)) {
        missing.push_back(s.name.empty() ? std::string(k.key)
                                         : std::string(s.name) + "." + std::string(k.key));
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = doc.source() + ": missing required key";
    msg += missing.size() > 1 ? "s: " : ": ";
    for (std::size_t i = 0; i < missing.size(); ++i) msg += (i ? ", " : "") + missing[i];
    problems.push_back(std::move(msg));
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));

  RunConfig cfg;
  auto get = [&](std::string_view section, std::string_view key) {
    return value_of(doc, section, key);
  };
  auto has = [&](std::string_view section, std::string_view key) {
    return doc.find(section, key) != nullptr;
  };
  auto path = [&](std::string_view section, std::string_view key) {
    const auto* e = doc.find(section, key);
    const std::filesystem::path p(e->value);
    return std::optional<std::filesystem::path>(e->line == 0 ? p : base_dir / p);
  };
  auto semantic = [&](std::string_view section, std::string_view key, const std::string& what) {
    if (const auto* e = doc.find(section, key)) {
      problems.push_back(where(doc, *e) + ": " + what);
    } else {
      const std::string name = section.empty() ? std::string(key)
                                               : std::string(section) + "." + std::string(key);
      problems.push_back(doc.source() + ": " + name + ": " + what);
    }
  };

  cfg.seed = as_u64(get("", "seed"));
  cfg.out = *path("", "out");
  cfg.workers = as_size(get("", "workers"));
  if (cfg.workers < 1) semantic("", "workers", "must be at least 1");

  // population
  const auto source = get("population", "source");
  cfg.population = source == "files"       ? PopulationSource::Files
                   : source == "synthetic" ? PopulationSource::Synthetic
                                           : PopulationSource::Desk;
  if (has("population", "edges")) cfg.population_edges = path("population", "edges");
  if (has("population", "attributes")) cfg.population_attributes = path("population", "attributes");
  if (cfg.population == PopulationSource::Files && !cfg.population_edges) {
    semantic("population", "edges", "required when source = files");
  }
  if (cfg.population != PopulationSource::Files &&
      (cfg.population_edges || cfg.population_attributes)) {
    semantic("population", "source", "edges/attributes need source = files");
  }
  if (cfg.population == PopulationSource::Desk) {
    cfg.synthetic = desk_scale_population();
    for (const auto& e : doc.entries()) {
      if (e.section == "synthetic") {
        problems.push_back(where(doc, e) + ": [synthetic] needs population.source = synthetic");
      }
    }
  } else if (cfg.population == PopulationSource::Synthetic) {
    try {
      cfg.synthetic = synthetic_config_from(doc, "synthetic");
    } catch (const ValidationError& e) {
      // First line is a heading; the rest are indented problems.
      const std::string text = e.what();
      std::size_t pos = text.find('\n');
      while (pos != std::string::npos) {
        const std::size_t next = text.find('\n', pos + 1);
        problems.emplace_back(csv::trim(std::string_view(text).substr(pos + 1, next - pos - 1)));
        pos = next;
      }
    }
    if (!has("synthetic", "seed")) cfg.synthetic.seed = derive_seed(cfg.seed, {0x9e11});
  }

  // design
  read_design(doc, "design", cfg.design, problems);
  if (!has("design", "name")) {
    cfg.design.name = get("design", "preset") == "snowball" ? "SB" : "RDS";
  }

  // sample
  if (has("sample", "nodes")) cfg.sample.nodes = path("sample", "nodes");
  if (has("sample", "edges")) cfg.sample.edges = path("sample", "edges");
  if (has("sample", "frequencies")) cfg.sample.frequencies = path("sample", "frequencies");
  if (has("sample", "ties")) cfg.sample.ties = path("sample", "ties");
  if (has("sample", "pair_frequencies")) {
    cfg.sample.pair_frequencies = path("sample", "pair_frequencies");
  }

  // resample
  auto& rc = cfg.resample;
  rc.mode = *parse_resample_mode(get("resample", "mode"));
  rc.iterations = as_size(get("resample", "iterations"));
  rc.target_size = as_size(get("resample", "target"));
  rc.seed_rate = as_double(get("resample", "seed_rate"));
  rc.trace_rate = as_double(get("resample", "trace_rate"));
  if (has("resample", "reseed_rate")) rc.reseed_rate = as_double(get("resample", "reseed_rate"));
  rc.burn_in = as_size(get("resample", "burn_in"));
  if (has("resample", "max_waves")) rc.max_waves = as_size(get("resample", "max_waves"));
  rc.pairs = *parse_pair_accumulation(get("resample", "pairs"));
  rc.chains = as_size(get("resample", "chains"));
  rc.use_known_ties = as_bool(get("resample", "use_known_ties"));
  rc.workers = cfg.workers;
  if (rc.iterations < 1) semantic("resample", "iterations", "must be at least 1");
  if (rc.target_size < 1) semantic("resample", "target", "must be at least 1");
  if (rc.chains < 1) semantic("resample", "chains", "must be at least 1");
  if (rc.max_waves && rc.mode != ResampleMode::Repeated) {
    semantic("resample", "max_waves", "applies to mode = repeated only");
  }
  if (rc.mode == ResampleMode::ProcessWithReplacement && rc.pairs != PairAccumulation::None) {
    semantic("resample", "pairs", "not defined for with-replacement resampling");
  }
  if (has("resample", "compare")) cfg.compare = path("resample", "compare");

  // estimate
  auto& es = cfg.estimate;
  es.estimators.clear();
  for (const auto& item : split_list(get("estimate", "estimators"))) {
    const auto k = parse_estimator(item);
    if (!k || *k == EstimatorKind::Ratio) {
      semantic("estimate", "estimators",
               "unknown estimator `" + item + "` (new, vh, mean, wr; use ratios for ratio)");
    } else {
      es.estimators.push_back(*k);
    }
  }
  auto variants = [&](std::string_view section, std::vector<VarianceVariant>& out) {
    out.clear();
    for (const auto& item : split_list(get(section, "variants"))) {
      if (const auto v = parse_variance_variant(item)) {
        out.push_back(*v);
      } else {
        semantic(section, "variants",
                 "unknown variant `" + item + "` (v1, v2, joint-full, joint-edges, diagonal)");
      }
    }
    if (out.empty()) semantic(section, "variants", "lists no variant");
  };
  variants("estimate", es.variants);
  es.variables = split_list(get("estimate", "variables"));
  for (const auto& item : split_list(get("estimate", "ratios"))) {
    const auto parts = csv::split(item, '/');
    if (parts.size() != 2 || csv::trim(parts[0]).empty() || csv::trim(parts[1]).empty()) {
      semantic("estimate", "ratios", "ratio `" + item + "` must be y/x");
    } else {
      es.ratios.emplace_back(std::string(csv::trim(parts[0])), std::string(csv::trim(parts[1])));
    }
  }
  es.alpha = as_double(get("estimate", "alpha"));
  es.diagonal_form = *parse_diagonal_form(get("estimate", "diagonal_form"));

  // experiment
  auto& ex = cfg.experiment;
  ex.designs.clear();
  for (const auto& item : split_list(get("experiment", "designs"))) {
    if (item == "rds" || item == "RDS") {
      ex.designs.push_back(DesignConfig::rds());
    } else if (item == "snowball" || item == "sb" || item == "SB") {
      ex.designs.push_back(DesignConfig::snowball());
    } else {
      semantic("experiment", "designs", "unknown design preset `" + item + "` (rds, snowball)");
    }
  }
  for (const auto& section : doc.sections()) {
    if (!section.starts_with("design.")) continue;
    const std::string name = section.substr(7);
    auto it = std::find_if(ex.designs.begin(), ex.designs.end(),
                           [&](const DesignConfig& d) { return d.name == name; });
    if (it == ex.designs.end()) {
      problems.push_back(doc.source() + ": section [" + section + "] names no experiment design");
      continue;
    }
    if (doc.find(section, "preset")) {
      problems.push_back(doc.source() + ": section [" + section + "] cannot change the preset");
    }
    read_design(doc, section, *it, problems);
  }
  ex.resample = rc;
  ex.resample.workers = 1;
  variants("experiment", ex.variants);
  ex.variables = split_list(get("experiment", "variables"));
  ex.alpha = as_double(get("experiment", "alpha"));
  ex.diagonal_form = *parse_diagonal_form(get("experiment", "diagonal_form"));
  ex.replications = as_size(get("experiment", "replications"));
  ex.seed = cfg.seed;
  ex.workers = cfg.workers;
  if (ex.replications < 1) semantic("experiment", "replications", "must be at least 1");
  if (has("experiment", "from")) cfg.regenerate_from = path("experiment", "from");

  // oracle
  auto& os = cfg.oracle;
  const auto graph = get("oracle", "graph");
  os.graph = graph == "star"       ? OracleGraphKind::Star
             : graph == "cycle"    ? OracleGraphKind::Cycle
             : graph == "complete" ? OracleGraphKind::Complete
             : graph == "file"     ? OracleGraphKind::File
                                   : OracleGraphKind::Path;
  os.nodes = as_size(get("oracle", "nodes"));
  if (has("oracle", "edges")) os.edges = path("oracle", "edges");
  if (os.graph == OracleGraphKind::File && !os.edges) {
    semantic("oracle", "edges", "required when graph = file");
  }
  if (os.graph != OracleGraphKind::File && os.nodes < 1) {
    semantic("oracle", "nodes", "must be at least 1");
  }
  if (const auto w = parse_waves(get("oracle", "design"))) {
    os.design.waves = *w;
  } else {
    semantic("oracle", "design", "expects one-wave, two-wave, ... or N-wave");
  }
  os.design.seed_rate = as_double(get("oracle", "seed_rate"));
  os.design.trace_rate = as_double(get("oracle", "trace_rate"));
  os.design.reseed_rate = as_double(get("oracle", "reseed_rate"));

  if (!problems.empty()) throw ConfigError(std::move(problems));

  // Resolved view for the manifest.
  KeyValueDocument resolved;
  for (const auto& s : kSections) {
    if (s.name == "synthetic" && cfg.population != PopulationSource::Synthetic) continue;
    for (const auto& k : s.keys) {
      if (const auto* e = doc.find(s.name, k.key)) {
        resolved.set(std::string(s.name), std::string(k.key), e->value);
      } else if (!k.fallback.empty()) {
        resolved.set(std::string(s.name), std::string(k.key), std::string(k.fallback));
      }
    }
  }
  if (cfg.population == PopulationSource::Synthetic && !has("synthetic", "seed")) {
    resolved.set("synthetic", "seed", std::to_string(cfg.synthetic.seed));
  }
  resolved.set("design", "name", cfg.design.name);
  resolved.set("design", "coupons", std::to_string(cfg.design.coupons));
  if (!has("resample", "reseed_rate")) {
    resolved.set("resample", "reseed_rate", csv::format_double(rc.effective_reseed_rate()));
  }
  for (const auto& section : doc.sections()) {
    if (!section.starts_with("design.")) continue;
    for (const auto& e : doc.entries()) {
      if (e.section == section) resolved.set(e.section, e.key, e.value);
    }
  }
  cfg.resolved = std::move(resolved);
  for (const auto& e : doc.entries()) {
    cfg.explicit_keys.insert(e.section.empty() ? e.key : e.section + "." + e.key);
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  KeyValueDocument doc;
  try {
    doc = KeyValueDocument::load(path);
  } catch (const ParseError& e) {
    throw ConfigError({e.what()});
  }
  return parse_config(doc, path.parent_path());
}

void apply_override(KeyValueDocument& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError({"command line: override `" + std::string(assignment) +
                       "` must be section.key=value"});
  }
  const auto lhs = csv::trim(assignment.substr(0, eq));
  const auto value = csv::trim(assignment.substr(eq + 1));
  const auto dot = lhs.rfind('.');
  if (dot == std::string_view::npos) {
    doc.set("", std::string(lhs), std::string(value));
  } else {
    doc.set(std::string(lhs.substr(0, dot)), std::string(lhs.substr(dot + 1)), std::string(value));
  }
}

std::string format_document(const KeyValueDocument& doc) {
  std::string out;
  std::vector<std::string> order{""};
  for (const auto& s : doc.sections()) {
    if (!s.empty()) order.push_back(s);
  }
  for (const auto& section : order) {
    std::string block;
    for (const auto& e : doc.entries()) {
      if (e.section == section) block += e.key + " = " + e.value + '\n';
    }
    if (block.empty()) continue;
    if (!section.empty()) out += (out.empty() ? "[" : "\n[") + section + "]\n";
    out += block;
  }
  return out;
}

}  // namespace netsample::cli
