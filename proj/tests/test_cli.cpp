#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "helpers.hpp"
#include "netsample/csv.hpp"
#include "netsample/error.hpp"
#include "netsample/keyvalue.hpp"

using namespace netsample;
using namespace netsample::cli;

namespace {

KeyValueDocument doc_from(const std::string& text) {
  std::istringstream in(text);
  return KeyValueDocument::parse(in, "test.cfg");
}

RunConfig config_from(const std::string& text, const std::filesystem::path& base = {}) {
  return parse_config(doc_from(text), base);
}

std::vector<std::string> problems_of(const std::string& text) {
  try {
    config_from(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& lines, std::string_view needle) {
  for (const auto& l : lines) {
    if (l.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::string file_text(const std::filesystem::path& p) { return csv::read_file(p); }

int run_tool(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = std::string(NETSAMPLE_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("minimal config fills the defaults") {
  const auto cfg = config_from("seed = 5\nout = results\n");
  CHECK(cfg.seed == 5);
  CHECK(cfg.out == "results");
  CHECK(cfg.design.coupons == 3);
  CHECK(cfg.design.target_size == 1200);
  CHECK(cfg.resample.iterations == 10000);
  CHECK(cfg.resample.target_size == 400);
  CHECK(cfg.estimate.alpha == 0.05);
  CHECK(cfg.experiment.replications == 200);
  CHECK(cfg.population == PopulationSource::Desk);
  const auto* target = cfg.resolved.find("resample", "target");
  REQUIRE(target != nullptr);
  CHECK(target->value == "400");
  CHECK_FALSE(cfg.is_set("resample.target"));
}

TEST_CASE("unknown keys name the nearest valid key") {
  const auto p = problems_of("seed = 1\nout = o\n[design]\ncopuons = 3\n");
  REQUIRE(p.size() == 1);
  CHECK(p[0].find("copuons") != std::string::npos);
  CHECK(p[0].find("did you mean `coupons`") != std::string::npos);
  CHECK(p[0].find("test.cfg:4") != std::string::npos);
  const auto q = problems_of("seed = 1\nout = o\n[resampel]\nmode = process\n");
  CHECK(any_contains(q, "`resample`"));
}

TEST_CASE("empty file lists every required key") {
  const auto p = problems_of("");
  REQUIRE(p.size() == 1);
  CHECK(p[0].find("seed") != std::string::npos);
  CHECK(p[0].find("out") != std::string::npos);
}

TEST_CASE("every problem is reported at once") {
  const auto p = problems_of(
      "seed = -3\nout = o\n[design]\ncoupons = many\n[resample]\ntrace_rate = 1.5\nmode = sideways\n"
      "[estimate]\nalpha = 0\n");
  CHECK(p.size() >= 5);
  CHECK(any_contains(p, "seed"));
  CHECK(any_contains(p, "design.coupons"));
  CHECK(any_contains(p, "resample.trace_rate"));
  CHECK(any_contains(p, "resample.mode"));
  CHECK(any_contains(p, "estimate.alpha"));
}

TEST_CASE("overrides") {
  auto doc = doc_from("seed = 1\nout = o\n[design]\ncoupons = 3\n");
  apply_override(doc, "design.coupons=15");
  apply_override(doc, "resample.iterations = 500");
  const auto cfg = parse_config(doc, {});
  CHECK(cfg.design.coupons == 15);
  CHECK(cfg.resample.iterations == 500);
  CHECK(cfg.is_set("resample.iterations"));
  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
}

TEST_CASE("design sections and presets") {
  const auto cfg = config_from(
      "seed = 1\nout = o\n[design]\npreset = snowball\n[experiment]\ndesigns = rds\n"
      "[design.RDS]\ncoupons = 4\ntarget = 300\n");
  CHECK(cfg.design.coupons == 15);
  REQUIRE(cfg.experiment.designs.size() == 1);
  CHECK(cfg.experiment.designs[0].coupons == 4);
  CHECK(cfg.experiment.designs[0].target_size == 300);
}

TEST_CASE("missing input files are configuration errors") {
  const auto p = problems_of("seed = 1\nout = o\n[sample]\nnodes = /does/not/exist.csv\n");
  CHECK(any_contains(p, "sample.nodes"));
}

TEST_CASE("edit distance") {
  CHECK(edit_distance("coupons", "copuons") == 2);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("same", "same") == 0);
}

TEST_CASE("pipeline through execute") {
  const auto dir = testing::scratch_dir("cli_pipeline");
  const std::string base = "seed = 11\nout = " + dir.string() + "\n";
  const std::string synth =
      "[population]\nsource = synthetic\n[synthetic]\nnodes = 400\nmean_degree = 6\n";

  auto gen = execute("generate", config_from(base + synth));
  write_artifacts(dir, gen);
  CHECK(std::filesystem::exists(dir / "population_edges.csv"));
  CHECK(gen.files.back().name == "manifest.txt");

  const std::string pop = "[population]\nsource = files\nedges = " +
                          (dir / "population_edges.csv").string() + "\nattributes = " +
                          (dir / "population_attributes.csv").string() + "\n";
  const std::string design = "[design]\ntarget = 120\nseeds = 20\n";
  const auto sampled = execute("sample", config_from(base + pop + design));
  write_artifacts(dir, sampled);
  CHECK(std::filesystem::exists(dir / "sample_nodes.csv"));

  const std::string sample = "[sample]\nnodes = " + (dir / "sample_nodes.csv").string() +
                             "\nedges = " + (dir / "sample_edges.csv").string() + "\n";
  const std::string resample = "[resample]\niterations = 3000\ntarget = 50\nburn_in = 100\n";
  const auto res = execute("resample", config_from(base + sample + resample));
  write_artifacts(dir, res);
  const auto freq = file_text(dir / "frequencies.csv");
  CHECK(freq.rfind("id,f\n", 0) == 0);

  const std::string with_freq = base + "[sample]\nnodes = " + (dir / "sample_nodes.csv").string() +
                                "\nedges = " + (dir / "sample_edges.csv").string() +
                                "\nfrequencies = " + (dir / "frequencies.csv").string() + "\n";
  const auto est = execute("estimate", config_from(with_freq));
  write_artifacts(dir, est);
  const auto estimates = file_text(dir / "estimates.csv");
  CHECK(estimates.rfind("variable,estimator,variant,point,variance,lower,upper,alpha\n", 0) == 0);
  CHECK(estimates.find("degree,new,v2,") != std::string::npos);

  const auto exp = execute("export", config_from(with_freq));
  REQUIRE(exp.files.size() == 2);
  CHECK(exp.files[0].name == "annotated_sample.csv");

  const auto manifest = file_text(dir / "manifest.txt");
  CHECK(manifest.find("command = estimate") != std::string::npos);
  CHECK(manifest.find("seed = 11") != std::string::npos);
  CHECK(manifest.find("# resolved configuration") != std::string::npos);
  CHECK(manifest.find("[resample]") != std::string::npos);
}

TEST_CASE("same config and seed give byte-identical artifacts") {
  const auto dir = testing::scratch_dir("cli_repeat");
  const std::string text = "seed = 3\nout = " + dir.string() +
                           "\n[population]\nsource = synthetic\n[synthetic]\nnodes = 300\n"
                           "[design]\ntarget = 100\nseeds = 10\n";
  const auto a = execute("sample", config_from(text));
  const auto b = execute("sample", config_from(text));
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i].content == b.files[i].content);
}

TEST_CASE("oracle command") {
  const auto dir = testing::scratch_dir("cli_oracle");
  const auto out = execute("oracle", config_from("seed = 1\nout = " + dir.string() + "\n"));
  REQUIRE_FALSE(out.files.empty());
  CHECK(out.files[0].name == "oracle.csv");
  CHECK(out.files[0].content == "id,phi\n0,0.625\n1,0.71875\n2,0.625\n");
}

TEST_CASE("end to end through the binary") {
  const auto dir = testing::scratch_dir("cli_binary");
  const auto log = dir / "log.txt";

  SUBCASE("oracle then repeated resampling agree") {
    REQUIRE(run_tool("oracle --seed 1 -o " + dir.string() + " --nodes 3 --design one-wave", log) == 0);
    REQUIRE(run_tool("resample -c " + (dir / "oracle_resample.cfg").string() + " --seed 2 -o " +
                         (dir / "cmp").string() + " -T 1000000",
                     log) == 0);
    const auto cmp = file_text(dir / "cmp" / "comparison.csv");
    CHECK(cmp.rfind("id,phi,f,se,z,within\n", 0) == 0);
    std::istringstream in(cmp);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    int within = 0;
    while (std::getline(in, line)) {
      ++rows;
      within += line.back() == '1';
    }
    CHECK(rows == 3);
    CHECK(within >= 2);
  }

  SUBCASE("unreachable node without re-seeding exits with the zero-frequency status") {
    std::ofstream(dir / "nodes.csv") << "id,seed_flag,day,degree\n1,1,0,1\n2,0,1,1\n3,1,0,1\n";
    std::ofstream(dir / "edges.csv") << "recruiter,recruit\n1,2\n";
    const std::string args = "resample --seed 4 -o " + (dir / "out").string() + " --sample-nodes " +
                             (dir / "nodes.csv").string() + " --sample-edges " +
                             (dir / "edges.csv").string() +
                             " --mode repeated -T 200 --target 2 --set resample.seed_rate=0"
                             " resample.reseed_rate=0";
    CHECK(run_tool(args, log) == 4);
    CHECK_FALSE(std::filesystem::exists(dir / "out" / "frequencies.csv"));
    const auto text = file_text(log);
    CHECK(text.rfind("error: ", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  }

  SUBCASE("configuration errors exit with status 2") {
    std::ofstream(dir / "empty.cfg") << "";
    CHECK(run_tool("simulate -c " + (dir / "empty.cfg").string(), log) == 2);
    CHECK(file_text(log).find("missing required keys") != std::string::npos);
  }

  SUBCASE("simulate output does not depend on the worker count") {
    const std::string common = "simulate --seed 9 --set population.source=synthetic synthetic.nodes=500"
                               " design.RDS.target=100 design.RDS.seeds=20 design.SB.target=100 design.SB.seeds=20"
                               " resample.iterations=1000"
                               " resample.target=40 resample.burn_in=100 -R 3";
    REQUIRE(run_tool(common + " -w 1 -o " + (dir / "w1").string(), log) == 0);
    REQUIRE(run_tool(common + " -w 3 -o " + (dir / "w3").string(), log) == 0);
    for (const char* f : {"report.csv", "coverage.csv", "parabola.csv", "replications.csv"}) {
      CHECK(file_text(dir / "w1" / f) == file_text(dir / "w3" / f));
    }
  }
}
