#include <doctest.h>

#include <set>
#include <sstream>

#include "helpers.hpp"
#include "netsample/csv.hpp"
#include "netsample/design.hpp"
#include "netsample/error.hpp"
#include "netsample/synthetic.hpp"

using namespace netsample;

namespace {

const SyntheticPopulation& desk() {
  static const SyntheticPopulation pop = generate_population(desk_scale_population());
  return pop;
}

PopulationGraph star(std::uint32_t leaves) {
  std::vector<Edge> e;
  for (NodeId i = 1; i <= leaves; ++i) e.push_back({0, i});
  return PopulationGraph::from_edges(leaves + 1, e);
}

// Forest and protocol invariants of a sample drawn from `graph`.
void check_sample(const SampleNetwork& s, const PopulationGraph& graph, std::uint32_t k) {
  std::set<ExternalId> ids;
  for (const auto& n : s.nodes()) ids.insert(n.id);
  CHECK(ids.size() == s.size());
  CHECK(s.edges().size() == s.size() - s.component_count());
  const auto recruits = s.recruit_counts();
  std::vector<std::uint32_t> incident(s.size(), 0);
  for (const auto& e : s.edges()) {
    ++incident[e.recruiter];
    ++incident[e.recruit];
    CHECK(e.recruiter != e.recruit);
    // recruitment follows population links
    const auto a = graph.find(s.node(e.recruiter).id);
    const auto b = graph.find(s.node(e.recruit).id);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    const auto nb = graph.neighbors(*a);
    CHECK(std::find(nb.begin(), nb.end(), *b) != nb.end());
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(recruits[i] <= k);
    CHECK(incident[i] <= k + 1);
  }
  // one root (seed or re-seed) per tree
  const auto labels = s.component_labels();
  std::vector<int> roots(s.component_count(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.node(i).entry != EntryKind::Recruit) ++roots[labels[i]];
  }
  for (int r : roots) CHECK(r == 1);
}

}  // namespace

TEST_CASE("select_seeds") {
  const auto& g = desk().graph;
  Rng rng = make_rng(1, {});
  SUBCASE("count") {
    const auto s = select_seeds(g, SeedSpec::count(240), rng);
    CHECK(s.size() == 240);
    CHECK(std::set<NodeId>(s.begin(), s.end()).size() == 240);
  }
  SUBCASE("rate zero") { CHECK(select_seeds(g, SeedSpec::rate(0.0), rng).empty()); }
  SUBCASE("count equal to N") {
    CHECK(select_seeds(g, SeedSpec::count(g.node_count()), rng).size() == g.node_count());
  }
  SUBCASE("count above N") {
    CHECK_THROWS_AS(select_seeds(g, SeedSpec::count(g.node_count() + 1), rng), ValidationError);
  }
  SUBCASE("rate") {
    const auto s = select_seeds(g, SeedSpec::rate(0.1), rng);
    CHECK(static_cast<double>(s.size()) == doctest::Approx(500).epsilon(0.15));
    CHECK(std::is_sorted(s.begin(), s.end()));
  }
}

TEST_CASE("run_design: isolated seed") {
  const auto g = PopulationGraph::from_edges(3, {{1, 2}});
  AttributeTable attrs(3);
  DesignConfig cfg;
  cfg.target_size = 3;
  cfg.seeds = SeedSpec::count(1);
  cfg.reseed_on_stall = false;
  Rng rng = make_rng(2, {});
  const std::vector<NodeId> seeds{0};
  const auto s = run_design(g, attrs, cfg, seeds, rng);
  CHECK(s.size() == 1);
  CHECK(s.edges().empty());
  CHECK_FALSE(s.reached_target);
}

TEST_CASE("run_design: coupon cap on a star") {
  const auto g = star(5);
  AttributeTable attrs(6);
  DesignConfig cfg;
  cfg.coupons = 3;
  cfg.target_size = 6;
  cfg.seeds = SeedSpec::count(1);
  cfg.redemption_prob = 1.0;
  cfg.reseed_on_stall = false;
  Rng rng = make_rng(3, {});
  const std::vector<NodeId> seeds{0};
  const auto s = run_design(g, attrs, cfg, seeds, rng);
  CHECK(s.size() == 4);
  CHECK(s.edges().size() == 3);
  check_sample(s, g, 3);
}

TEST_CASE("run_design: desk population invariants") {
  const auto& pop = desk();
  for (const auto& cfg : {DesignConfig::rds(), DesignConfig::snowball()}) {
    Rng rng = make_rng(17, {cfg.coupons});
    const auto s = run_design(pop.graph, pop.attributes, cfg, rng);
    CHECK(s.size() == 1200);
    CHECK(s.reached_target);
    CHECK(s.seed_count() == 240);
    check_sample(s, pop.graph, cfg.coupons);
    // respondent values are the population values
    const auto var = *s.variable_index("female");
    const auto pv = *pop.attributes.index_of("female");
    for (std::size_t i = 0; i < s.size(); i += 97) {
      const auto v = *pop.graph.find(s.node(i).id);
      CHECK(s.values(var)[i] == pop.attributes.value(pv, v));
      CHECK(s.node(i).degree == pop.graph.degree(v));
    }
  }
}

TEST_CASE("run_design: identical seeds give identical samples") {
  const auto& pop = desk();
  Rng a = make_rng(99, {});
  Rng b = make_rng(99, {});
  const auto s1 = run_design(pop.graph, pop.attributes, DesignConfig::rds(), a);
  const auto s2 = run_design(pop.graph, pop.attributes, DesignConfig::rds(), b);
  CHECK(s1 == s2);
  CHECK(format_sample_nodes(s1) == format_sample_nodes(s2));
}

TEST_CASE("run_design: stall re-seeding reaches the target") {
  // 20 disjoint edges: every tree dies after one recruit.
  std::vector<Edge> e;
  for (NodeId i = 0; i < 20; ++i) e.push_back({2 * i, 2 * i + 1});
  const auto g = PopulationGraph::from_edges(40, e);
  AttributeTable attrs(40);
  DesignConfig cfg;
  cfg.target_size = 30;
  cfg.seeds = SeedSpec::count(2);
  Rng rng = make_rng(5, {});
  const auto s = run_design(g, attrs, cfg, rng);
  CHECK(s.size() == 30);
  CHECK(s.reseed_count() > 0);
  check_sample(s, g, cfg.coupons);
}

TEST_CASE("run_design: snowball trees are larger than RDS trees") {
  const auto& pop = desk();
  auto rds = DesignConfig::rds();
  auto sb = DesignConfig::snowball();
  rds.redemption_prob = sb.redemption_prob = 1.0;
  double rds_total = 0.0;
  double sb_total = 0.0;
  const int runs = 100;
  for (int r = 0; r < runs; ++r) {
    // Paired runs on the same seed stream.
    Rng a = make_rng(1234, {static_cast<std::uint64_t>(r)});
    Rng b = make_rng(1234, {static_cast<std::uint64_t>(r)});
    auto largest = [](const SampleNetwork& s) {
      const auto labels = s.component_labels();
      std::vector<std::size_t> sizes(s.component_count(), 0);
      for (auto l : labels) ++sizes[l];
      return static_cast<double>(*std::max_element(sizes.begin(), sizes.end()));
    };
    rds_total += largest(run_design(pop.graph, pop.attributes, rds, a));
    sb_total += largest(run_design(pop.graph, pop.attributes, sb, b));
  }
  CHECK(sb_total / runs > rds_total / runs);
}

TEST_CASE("design config validation") {
  DesignConfig cfg;
  cfg.coupons = 0;
  cfg.target_size = 10'000;
  cfg.expiration_days = 0;
  try {
    cfg.validate(5000);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("coupons") != std::string::npos);
    CHECK(msg.find("target") != std::string::npos);
    CHECK(msg.find("expiration") != std::string::npos);
  }
}

TEST_CASE("sample files round trip byte for byte") {
  const auto& pop = desk();
  Rng rng = make_rng(8, {});
  const auto s = run_design(pop.graph, pop.attributes, DesignConfig::rds(), rng);
  const auto dir = testing::scratch_dir("designs_roundtrip");
  write_sample(s, dir / "nodes.csv", dir / "edges.csv");
  const auto back = read_sample(dir / "nodes.csv", dir / "edges.csv");
  CHECK(back == s);
  CHECK(format_sample_nodes(back) == csv::read_file(dir / "nodes.csv"));
  CHECK(format_sample_edges(back) == csv::read_file(dir / "edges.csv"));
}

TEST_CASE("sample parsing rejects broken forests") {
  std::istringstream nodes("id,seed_flag,day,degree\n1,1,0,2\n2,0,1,1\n3,0,1,1\n");
  SUBCASE("recruited twice") {
    std::istringstream edges("recruiter,recruit\n1,2\n3,2\n");
    CHECK_THROWS(parse_sample(nodes, "n", edges, "e"));
  }
  SUBCASE("cycle") {
    std::istringstream edges("recruiter,recruit\n1,2\n2,3\n3,1\n");
    CHECK_THROWS(parse_sample(nodes, "n", edges, "e"));
  }
  SUBCASE("unknown id") {
    std::istringstream edges("recruiter,recruit\n1,7\n");
    CHECK_THROWS(parse_sample(nodes, "n", edges, "e"));
  }
}

TEST_CASE("population ties among respondents") {
  // triangle 0-1-2 plus pendant 3 on 2; recruitment 0->1, 1->2, 2->3
  const auto g = PopulationGraph::from_edges(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  std::vector<SampledNode> nodes(4);
  for (std::uint32_t i = 0; i < 4; ++i) {
    nodes[i].id = static_cast<ExternalId>(i);
    nodes[i].entry = i == 0 ? EntryKind::Seed : EntryKind::Recruit;
    nodes[i].degree = g.degree(i);
  }
  SampleNetwork s(nodes, {{0, 1}, {1, 2}, {2, 3}}, {}, {});
  const auto ties = population_ties(s, g);
  REQUIRE(ties.size() == 1);
  CHECK(ties[0].recruiter == 0);
  CHECK(ties[0].recruit == 2);

  s.set_known_ties(ties);
  const auto text = format_known_ties(s);
  CHECK(text == "i,j\n0,2\n");
  SampleNetwork back(nodes, {{0, 1}, {1, 2}, {2, 3}}, {}, {});
  std::istringstream in(text);
  parse_known_ties(in, "ties", back);
  CHECK(back.known_ties().size() == 1);
  std::istringstream bad("i,j\n0,9\n");
  CHECK_THROWS_AS(parse_known_ties(bad, "ties", back), ParseError);
}
