#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "helpers.hpp"
#include "netsample/csv.hpp"
#include "netsample/error.hpp"
#include "netsample/oracle.hpp"
#include "netsample/resample.hpp"
#include "netsample/synthetic.hpp"

using namespace netsample;
using testing::forest;
using testing::path_edges;

namespace {

const SampleNetwork& rds_sample() {
  static const SampleNetwork s = [] {
    const auto pop = generate_population(desk_scale_population());
    Rng rng = make_rng(2024, {});
    return run_design(pop.graph, pop.attributes, DesignConfig::rds(), rng);
  }();
  return s;
}

ResampleConfig repeated(double ps, double p, double pr, std::size_t target, std::size_t t) {
  ResampleConfig c;
  c.mode = ResampleMode::Repeated;
  c.seed_rate = ps;
  c.trace_rate = p;
  c.reseed_rate = pr;
  c.target_size = target;
  c.iterations = t;
  return c;
}

}  // namespace

TEST_CASE("adaptive removal rate") {
  CHECK(adaptive_removal_rate(500, 400) == 0.2);
  CHECK(adaptive_removal_rate(400, 400) == 0.0);
  CHECK(adaptive_removal_rate(401, 400) == 1.0 / 401.0);
  CHECK(adaptive_removal_rate(10, 400) == 0.0);
  CHECK(adaptive_removal_rate(0, 1) == 0.0);
}

TEST_CASE("process step: empty set without re-seeding is absorbing") {
  const auto g = ResampleGraph::from_edges(5, path_edges(5));
  ResampleConfig c;
  c.reseed_rate = 0.0;
  c.trace_rate = 1.0;
  c.target_size = 3;
  Rng rng = make_rng(1, {});
  auto s = ProcessState::empty(5);
  for (int i = 0; i < 50; ++i) s = step_process(std::move(s), g, c, rng);
  CHECK(s.size() == 0);
  CHECK(s.step == 50);
}

TEST_CASE("process step: both links of the middle node are traced surely") {
  const auto g = ResampleGraph::from_edges(3, path_edges(3));
  ResampleConfig c;
  c.reseed_rate = 0.0;
  c.trace_rate = 1.0;
  c.target_size = 3;
  Rng rng = make_rng(2, {});
  auto s = ProcessState::empty(3);
  s.members = {1};
  s.in_sample[1] = 1;
  s = step_process(std::move(s), g, c, rng);
  std::sort(s.members.begin(), s.members.end());
  CHECK(s.members == std::vector<std::uint32_t>{0, 1, 2});
}

TEST_CASE("process: a lone node is never removed once included") {
  const auto sample = forest(1, {});
  ResampleConfig c;
  c.reseed_rate = 0.05;
  c.target_size = 1;
  c.burn_in = 0;
  c.iterations = 20000;
  Rng rng = make_rng(3, {});
  const auto f = process_resamples(sample, c, rng);
  // First inclusion is geometric with mean 20 steps; afterwards always in.
  CHECK(f.f[0] > 0.99);
  CHECK(f.f[0] < 1.0);
}

TEST_CASE("process: stationary size tracks the target") {
  ResampleConfig c;
  c.iterations = 5000;
  Rng rng = make_rng(4, {});
  const auto f = process_resamples(rds_sample(), c, rng);
  CHECK(f.mean_size >= 360.0);
  CHECK(f.mean_size <= 440.0);
  CHECK(f.iterations == 5000);
}

TEST_CASE("frequencies: f is a count over T") {
  ResampleConfig c;
  c.iterations = 3000;
  Rng rng = make_rng(5, {});
  const auto f = process_resamples(rds_sample(), c, rng);
  for (std::size_t i = 0; i < f.f.size(); ++i) {
    CHECK(f.f[i] >= 0.0);
    CHECK(f.f[i] <= 1.0);
    CHECK(f.f[i] == static_cast<double>(f.hits[i]) / 3000.0);
  }
}

TEST_CASE("accumulator: 7500 of 10000 steps gives 0.75") {
  FrequencyAccumulator acc(2, PairAccumulation::None);
  std::vector<std::uint8_t> in(2, 0);
  for (int t = 0; t < 10000; ++t) {
    std::vector<std::uint32_t> members;
    if (t < 7500) members.push_back(0);
    members.push_back(1);
    for (auto m : members) in[m] = 1;
    acc.add_members(members, in);
    for (auto m : members) in[m] = 0;
  }
  const auto f = acc.finish(ResampleMode::Process);
  CHECK(f.f[0] == 0.75);
  CHECK(f.f[1] == 1.0);
}

TEST_CASE("accumulator: selection counts") {
  FrequencyAccumulator acc(3, PairAccumulation::None);
  const std::vector<std::vector<std::uint32_t>> steps{{2, 1, 0}, {0, 1, 0}, {1, 1, 0}, {1, 1, 0}};
  for (const auto& s : steps) acc.add_counts(s);
  const auto f = acc.finish(ResampleMode::ProcessWithReplacement);
  CHECK(f.g[0] == 1.0);
  CHECK(f.g[1] == 1.0);
  CHECK(f.g[2] == 0.0);
  CHECK(f.zero_positions() == std::vector<std::uint32_t>{2});
}

TEST_CASE("with-replacement process") {
  ResampleConfig c;
  c.mode = ResampleMode::ProcessWithReplacement;
  c.iterations = 2000;
  Rng rng = make_rng(6, {});
  const auto f = with_replacement_counts(rds_sample(), c, rng);
  REQUIRE(f.g.size() == rds_sample().size());
  const double total = std::accumulate(f.g.begin(), f.g.end(), 0.0);
  CHECK(total == doctest::Approx(f.mean_size));
  CHECK(f.mean_size == doctest::Approx(400).epsilon(0.1));
  ResampleConfig bad = c;
  bad.pairs = PairAccumulation::Edges;
  CHECK_THROWS_AS(bad.validate(1200), ValidationError);
}

TEST_CASE("repeated: one resample gives 0/1 frequencies") {
  Rng rng = make_rng(7, {});
  const auto f = repeated_resamples(rds_sample(), repeated(0.0167, 0.05, 0.001, 400, 1), rng);
  for (double x : f.f) CHECK((x == 0.0 || x == 1.0));
}

TEST_CASE("repeated: full seeding includes everyone") {
  const auto sample = forest(6, path_edges(6));
  Rng rng = make_rng(8, {});
  const auto f = repeated_resamples(sample, repeated(1.0, 0.05, 0.0, 6, 100), rng);
  for (double x : f.f) CHECK(x == 1.0);
}

TEST_CASE("repeated: size cap is exact when reachable") {
  Rng rng = make_rng(9, {});
  const auto& s = rds_sample();
  const auto g = ResampleGraph(s);
  const auto cfg = repeated(0.0167, 0.05, 0.001, 400, 1);
  for (int r = 0; r < 20; ++r) CHECK(draw_resample(g, cfg, rng).size() == 400);
}

TEST_CASE("repeated matches exact enumeration on small paths") {
  for (std::uint32_t n : {3u, 4u}) {
    CAPTURE(n);
    const auto edges = path_edges(n);
    const auto g = ResampleGraph::from_edges(n, edges);
    OracleDesign d;  // seed 0.5, trace 0.5, one wave
    const auto exact = enumerate_exact_inclusion(g, d);
    auto cfg = repeated(0.5, 0.5, 0.0, n, 1'000'000);
    cfg.max_waves = 1;
    Rng rng = make_rng(100 + n, {});
    const auto f = repeated_resamples(g, cfg, rng);
    for (std::uint32_t i = 0; i < n; ++i) {
      const double se = std::sqrt(exact.phi[i] * (1 - exact.phi[i]) / 1e6);
      CHECK(std::abs(f.f[i] - exact.phi[i]) <= 3 * se);
    }
  }
}

TEST_CASE("monotone tracing under common random numbers") {
  const auto& s = rds_sample();
  const auto g = ResampleGraph(s);
  double previous = -1.0;
  for (double p : {0.05, 0.2, 0.5, 0.9}) {
    auto cfg = repeated(0.0167, p, 0.001, s.size(), 400);
    cfg.max_waves = 3;
    Rng rng = make_rng(10, {});
    const auto f = repeated_resamples(g, cfg, rng);
    const double mean = std::accumulate(f.f.begin(), f.f.end(), 0.0) / f.f.size();
    CHECK(mean > previous);
    previous = mean;
  }
}

TEST_CASE("law of large numbers: doubling T halves the variance") {
  Rng tree_rng = make_rng(11, {});
  const auto edges = testing::random_tree(12, tree_rng);
  const auto g = ResampleGraph::from_edges(12, edges);
  const int reps = 400;
  auto spread = [&](std::size_t t) {
    std::vector<double> sum(12, 0.0);
    std::vector<double> sum2(12, 0.0);
    for (int r = 0; r < reps; ++r) {
      Rng rng = make_rng(12, {t, static_cast<std::uint64_t>(r)});
      auto cfg = repeated(0.2, 0.3, 0.0, 12, t);
      cfg.max_waves = 2;
      const auto f = repeated_resamples(g, cfg, rng);
      for (int i = 0; i < 12; ++i) {
        sum[i] += f.f[i];
        sum2[i] += f.f[i] * f.f[i];
      }
    }
    double total = 0.0;
    for (int i = 0; i < 12; ++i) {
      const double m = sum[i] / reps;
      total += sum2[i] / reps - m * m;
    }
    return total;
  };
  const double ratio = spread(100) / spread(200);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("process: equal degree does not mean equal frequency") {
  ResampleConfig c;
  c.iterations = 5000;
  Rng rng = make_rng(13, {});
  const auto& s = rds_sample();
  const auto f = process_resamples(s, c, rng);
  const auto g = ResampleGraph(s);
  std::vector<double> leaves;
  for (std::uint32_t i = 0; i < s.size(); ++i) {
    if (g.neighbors(i).size() == 1) leaves.push_back(f.f[i]);
  }
  REQUIRE(leaves.size() > 10);
  const double m = std::accumulate(leaves.begin(), leaves.end(), 0.0) / leaves.size();
  double v = 0.0;
  for (double x : leaves) v += (x - m) * (x - m);
  CHECK(v / leaves.size() > 1e-4);
}

TEST_CASE("process: two chains agree within autocorrelation-adjusted error") {
  // Membership series of each node gives an integrated autocorrelation time
  // by batch means; the chains must agree within 4 standard errors of the
  // resulting effective sample size.
  Rng tree_rng = make_rng(14, {});
  const std::uint32_t n = 300;
  const auto g = ResampleGraph::from_edges(n, testing::random_tree(n, tree_rng));
  ResampleConfig c;
  c.target_size = 100;
  c.trace_rate = 0.2;
  const std::size_t t = 40000;
  const std::size_t batch = 1000;
  std::vector<std::vector<double>> f(2, std::vector<double>(n, 0.0));
  double tau = 1.0;
  for (int chain = 0; chain < 2; ++chain) {
    Rng rng = make_rng(15, {static_cast<std::uint64_t>(chain)});
    auto s = ProcessState::empty(n);
    for (std::size_t k = 0; k < 1000; ++k) advance_process(s, g, c, rng);
    std::vector<std::vector<double>> batches(n, std::vector<double>(t / batch, 0.0));
    for (std::size_t k = 0; k < t; ++k) {
      advance_process(s, g, c, rng);
      for (auto m : s.members) {
        f[chain][m] += 1.0;
        batches[m][k / batch] += 1.0 / batch;
      }
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      f[chain][i] /= t;
      const double p = f[chain][i];
      if (p <= 0.0 || p >= 1.0) continue;
      double bv = 0.0;
      for (double b : batches[i]) bv += (b - p) * (b - p);
      bv /= static_cast<double>(batches[i].size() - 1);
      tau = std::max(tau, batch * bv / (p * (1 - p)));
    }
  }
  double max_var = 0.0;
  double max_diff = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double p = 0.5 * (f[0][i] + f[1][i]);
    max_var = std::max(max_var, p * (1 - p));
    max_diff = std::max(max_diff, std::abs(f[0][i] - f[1][i]));
  }
  const double t_eff = static_cast<double>(t) / tau;
  CHECK(max_diff < 4.0 * std::sqrt(max_var / t_eff) * std::sqrt(2.0));
}

TEST_CASE("pair frequencies never exceed either margin") {
  const auto& s = rds_sample();
  for (auto mode : {PairAccumulation::Edges, PairAccumulation::All}) {
    ResampleConfig c;
    c.iterations = mode == PairAccumulation::All ? 200 : 2000;
    c.burn_in = 200;
    c.pairs = mode;
    Rng rng = make_rng(16, {});
    const auto f = process_resamples(s, c, rng);
    if (mode == PairAccumulation::Edges) {
      CHECK(f.pairs.size() == s.edges().size());
    } else {
      CHECK(f.pairs.size() == s.size() * (s.size() - 1) / 2);
    }
    for (const auto& p : f.pairs) {
      CHECK(p.i < p.j);
      CHECK(p.f <= std::min(f.f[p.i], f.f[p.j]));
    }
    const auto& e = s.edges().front();
    CHECK(f.pair(e.recruiter, e.recruit).has_value());
    CHECK(f.pair(e.recruit, e.recruiter) == f.pair(e.recruiter, e.recruit));
  }
}

TEST_CASE("results do not depend on the worker count") {
  const auto& s = rds_sample();
  SUBCASE("repeated") {
    auto cfg = repeated(0.0167, 0.05, 0.001, 400, 3000);
    Rng a = make_rng(17, {});
    Rng b = make_rng(17, {});
    const auto f1 = repeated_resamples(s, cfg, a);
    cfg.workers = 4;
    const auto f4 = repeated_resamples(s, cfg, b);
    CHECK(f1.hits == f4.hits);
    CHECK(f1.mean_size == f4.mean_size);
  }
  SUBCASE("process chains") {
    ResampleConfig cfg;
    cfg.iterations = 1000;
    cfg.chains = 3;
    cfg.pairs = PairAccumulation::Edges;
    Rng a = make_rng(18, {});
    Rng b = make_rng(18, {});
    const auto f1 = process_resamples(s, cfg, a);
    cfg.workers = 3;
    const auto f3 = process_resamples(s, cfg, b);
    CHECK(f1.hits == f3.hits);
    CHECK(f1.iterations == 3000);
    REQUIRE(f1.pairs.size() == f3.pairs.size());
    for (std::size_t k = 0; k < f1.pairs.size(); ++k) CHECK(f1.pairs[k].f == f3.pairs[k].f);
  }
}

TEST_CASE("resample config validation collects every problem") {
  ResampleConfig c;
  c.trace_rate = 1.5;
  c.iterations = 0;
  c.target_size = 5000;
  c.max_waves = 2;
  try {
    c.validate(1200);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("trace_rate") != std::string::npos);
    CHECK(msg.find("iterations") != std::string::npos);
    CHECK(msg.find("exceeds") != std::string::npos);
    CHECK(msg.find("max_waves") != std::string::npos);
  }
  ResampleConfig d;
  CHECK(d.effective_reseed_rate() == 0.01);
  d.mode = ResampleMode::Repeated;
  CHECK(d.effective_reseed_rate() == 0.001);
}

TEST_CASE("known ties extend the resampling graph") {
  auto s = forest(4, {{0, 1}, {2, 3}});
  s.set_known_ties({{1, 2}});
  CHECK(ResampleGraph(s).edges().size() == 2);
  CHECK(ResampleGraph(s, true).edges().size() == 3);
}

TEST_CASE("frequency files") {
  const auto& s = rds_sample();
  ResampleConfig c;
  c.iterations = 500;
  c.pairs = PairAccumulation::Edges;
  Rng rng = make_rng(19, {});
  const auto f = process_resamples(s, c, rng);
  const auto ids = s.ids();
  const auto dir = testing::scratch_dir("freq_io");
  csv::write_file_atomic(dir / "f.csv", format_frequencies(f, ids));
  csv::write_file_atomic(dir / "p.csv", format_pair_frequencies(f, ids));
  auto back = read_frequencies(dir / "f.csv", s);
  CHECK(back.f == f.f);
  read_pair_frequencies(dir / "p.csv", s, back);
  REQUIRE(back.pairs.size() == f.pairs.size());
  for (std::size_t k = 0; k < f.pairs.size(); ++k) {
    CHECK(back.pairs[k].i == f.pairs[k].i);
    CHECK(back.pairs[k].f == f.pairs[k].f);
  }

  SUBCASE("bad header") {
    std::istringstream in("node,freq\n");
    CHECK_THROWS_AS(parse_frequencies(in, "x", s), ParseError);
  }
  SUBCASE("missing node") {
    std::istringstream in("id,f\n" + std::to_string(ids[0]) + ",0.5\n");
    CHECK_THROWS(parse_frequencies(in, "x", s));
  }
  SUBCASE("counts header") {
    std::string text = "id,g\n";
    for (auto id : ids) text += std::to_string(id) + ",1.5\n";
    std::istringstream in(text);
    const auto g = parse_frequencies(in, "x", s);
    CHECK(g.mode == ResampleMode::ProcessWithReplacement);
    CHECK(g.g[0] == 1.5);
  }
}
