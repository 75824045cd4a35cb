#include <doctest.h>

#include <numeric>
#include <sstream>

#include "netsample/attributes.hpp"
#include "netsample/csv.hpp"
#include "netsample/error.hpp"
#include "netsample/graph.hpp"
#include "netsample/keyvalue.hpp"
#include "netsample/random.hpp"
#include "netsample/synthetic.hpp"

using namespace netsample;

namespace {

PopulationGraph edges_from(const std::string& text, Diagnostics* diag = nullptr) {
  std::istringstream in(text);
  return parse_edge_list(in, "edges.csv", diag);
}

AttributeTable attrs_from(const std::string& text, const PopulationGraph& g,
                          Diagnostics* diag = nullptr) {
  std::istringstream in(text);
  return parse_attributes(in, "attrs.csv", g, diag);
}

std::size_t degree_sum(const PopulationGraph& g) {
  std::size_t s = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) s += g.degree(v);
  return s;
}

}  // namespace

TEST_CASE("edge list: path of three") {
  const auto g = edges_from("1,2\n2,3\n");
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 1);
  CHECK(g.external_id(0) == 1);
  CHECK(g.find(3) == NodeId{2});
}

TEST_CASE("edge list: reversed duplicate collapses with a warning") {
  Diagnostics diag;
  const auto g = edges_from("1,2\n2,1\n", &diag);
  CHECK(g.edge_count() == 1);
  REQUIRE(diag.warnings.size() == 1);
  CHECK(diag.warnings[0].find("duplicate") != std::string::npos);
}

TEST_CASE("edge list: comments, blanks and sparse ids") {
  const auto g = edges_from("# header\n\n10,400\n  400 , 7 \n");
  CHECK(g.node_count() == 3);
  CHECK(g.external_id(0) == 7);
  CHECK(g.external_id(2) == 400);
}

TEST_CASE("edge list: errors carry the line") {
  SUBCASE("self-loop") {
    try {
      edges_from("1,2\n3,3\n");
      FAIL("expected a ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("malformed") {
    try {
      edges_from("1,2\n\n1;2\n");
      FAIL("expected a ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("negative id") { CHECK_THROWS_AS(edges_from("-1,2\n"), ParseError); }
}

TEST_CASE("edge list: isolated ids from the attribute file are kept") {
  std::istringstream in("1,2\n");
  const std::vector<ExternalId> extra{1, 2, 9};
  const auto g = parse_edge_list(in, "e", nullptr, extra);
  CHECK(g.node_count() == 3);
  CHECK(g.degree(*g.find(9)) == 0);
}

TEST_CASE("graph invariants: symmetric adjacency and handshake") {
  Rng rng = make_rng(11, {});
  std::vector<Edge> edges;
  std::uniform_int_distribution<NodeId> pick(0, 49);
  for (int k = 0; k < 200; ++k) {
    NodeId a = pick(rng);
    NodeId b = pick(rng);
    if (a == b) continue;
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::size_t dups = 0;
  const auto g = PopulationGraph::from_edges(50, edges, {}, &dups);
  CHECK(degree_sum(g) == 2 * g.edge_count());
  CHECK(g.edge_count() + dups == edges.size());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (NodeId w : g.neighbors(v)) {
      const auto back = g.neighbors(w);
      CHECK(std::find(back.begin(), back.end(), v) != back.end());
    }
  }
}

TEST_CASE("components") {
  SUBCASE("triangle") {
    const auto c = components(edges_from("1,2\n2,3\n3,1\n"));
    REQUIRE(c.size() == 1);
    CHECK(c[0].size == 3);
  }
  SUBCASE("two disjoint edges") {
    const auto c = components(edges_from("1,2\n3,4\n"));
    REQUIRE(c.size() == 2);
    CHECK(c[0].size == 2);
    CHECK(c[1].size == 2);
    CHECK(c[0].smallest < c[1].smallest);
  }
  SUBCASE("ordering by size and labels agree") {
    const auto g = edges_from("1,2\n5,6\n6,7\n8,9\n9,10\n10,5\n");
    const auto c = components(g);
    REQUIRE(c.size() == 2);
    CHECK(c[0].size == 6);
    CHECK(c[1].size == 2);
    const auto labels = component_labels(g);
    CHECK(labels[*g.find(1)] == 1);
    CHECK(labels[*g.find(7)] == 0);
    std::size_t total = 0;
    for (const auto& x : c) total += x.size;
    CHECK(total == g.node_count());
    CHECK(components(g).size() == c.size());
  }
}

TEST_CASE("attributes: missing cell imputed to zero and masked") {
  const auto g = edges_from("1,2\n2,3\n");
  Diagnostics diag;
  const auto t = attrs_from("id,worker,age\n1,1,30\n2,,41\n3,0,22.5\n", g, &diag);
  const auto w = *t.index_of("worker");
  CHECK(t.kind(w) == VariableKind::Binary);
  CHECK(t.value(w, 1) == 0.0);
  CHECK(t.missing(w)[1] == 1);
  CHECK(t.missing(w)[0] == 0);
  CHECK(t.kind(*t.index_of("age")) == VariableKind::Real);
  CHECK_FALSE(diag.warnings.empty());
}

TEST_CASE("attributes: complete binary column passes through unchanged") {
  const auto g = edges_from("1,2\n2,3\n");
  const auto t = attrs_from("id,client\n3,1\n1,0\n2,1\n", g);
  const auto col = t.column(0);
  CHECK(std::vector<double>(col.begin(), col.end()) == std::vector<double>{0, 1, 1});
  CHECK(t.mean(0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("attributes: errors") {
  const auto g = edges_from("1,2\n2,3\n");
  SUBCASE("declared binary column holding 2") {
    CHECK_THROWS_AS(attrs_from("id,x:binary\n1,2\n2,0\n3,1\n", g), ValidationError);
  }
  SUBCASE("unknown node id") {
    CHECK_THROWS_AS(attrs_from("id,x\n1,0\n99,1\n", g), ParseError);
  }
  SUBCASE("non-numeric cell names its line") {
    try {
      attrs_from("id,x\n1,0\n2,abc\n", g);
      FAIL("expected a ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
}

TEST_CASE("attributes: format round trip") {
  const auto g = edges_from("1,2\n2,3\n");
  const auto t = attrs_from("id,worker,age\n1,1,30\n2,,41.25\n3,0,0.1\n", g);
  const auto text = format_attributes(t, g);
  const auto back = attrs_from(text, g);
  CHECK(format_attributes(back, g) == text);
  CHECK(back.missing(0)[1] == 1);
}

TEST_CASE("synthetic: all degrees two in one component") {
  SyntheticPopulationConfig cfg;
  cfg.nodes = 6;
  cfg.mean_degree.reset();
  cfg.degrees = {2, 2, 2, 2, 2, 2};
  cfg.seed = 4;
  Rng rng = make_rng(cfg.seed, {});
  const auto g = generate_synthetic(cfg, rng);
  CHECK(g.node_count() == 6);
  CHECK(g.edge_count() == 6);
  for (NodeId v = 0; v < 6; ++v) CHECK(g.degree(v) == 2);
  CHECK(components(g).size() == 1);
}

TEST_CASE("synthetic: mean degree near the target") {
  SyntheticPopulationConfig cfg;
  cfg.nodes = 5000;
  cfg.mean_degree = 7.88;
  cfg.seed = 21;
  const auto pop = generate_population(cfg);
  CHECK(pop.graph.mean_degree() == doctest::Approx(7.88).epsilon(0.05));
  CHECK(degree_sum(pop.graph) == 2 * pop.graph.edge_count());
}

TEST_CASE("synthetic: component fractions") {
  SyntheticPopulationConfig cfg;
  cfg.nodes = 5000;
  cfg.component_fractions = {0.8, 0.2};
  cfg.seed = 5;
  const auto pop = generate_population(cfg);
  const auto c = components(pop.graph);
  REQUIRE(c.size() >= 2);
  CHECK(c[0].size == 4000);
  CHECK(c[1].size == 1000);
}

TEST_CASE("synthetic: same seed gives identical graphs and attributes") {
  auto cfg = desk_scale_population();
  cfg.nodes = 800;
  const auto a = generate_population(cfg);
  const auto b = generate_population(cfg);
  CHECK(format_edge_list(a.graph) == format_edge_list(b.graph));
  CHECK(format_attributes(a.attributes, a.graph) == format_attributes(b.attributes, b.graph));
  cfg.seed += 1;
  const auto c = generate_population(cfg);
  CHECK(format_edge_list(a.graph) != format_edge_list(c.graph));
}

TEST_CASE("synthetic: desk population statistics") {
  const auto pop = generate_population(desk_scale_population());
  CHECK(pop.graph.node_count() == 5000);
  CHECK(pop.graph.mean_degree() == doctest::Approx(7.9).epsilon(0.05));
  CHECK(components(pop.graph).size() == 3);
  CHECK(pop.attributes.variable_count() == 13);
  for (std::size_t v = 0; v < 13; ++v) CHECK(pop.attributes.kind(v) == VariableKind::Binary);
}

TEST_CASE("synthetic: invalid configurations") {
  SUBCASE("fractions not summing to one") {
    SyntheticPopulationConfig cfg;
    cfg.component_fractions = {0.5, 0.2};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
  }
  SUBCASE("odd degree sum") {
    SyntheticPopulationConfig cfg;
    cfg.nodes = 3;
    cfg.mean_degree.reset();
    cfg.degrees = {1, 1, 1};
    Rng rng = make_rng(1, {});
    CHECK_THROWS_AS(generate_synthetic(cfg, rng), ValidationError);
  }
  SUBCASE("non-graphical even sequence") {
    SyntheticPopulationConfig cfg;
    cfg.nodes = 4;
    cfg.mean_degree.reset();
    cfg.degrees = {3, 3, 1, 1};
    Rng rng = make_rng(1, {});
    CHECK_THROWS_AS(generate_synthetic(cfg, rng), ValidationError);
  }
}

TEST_CASE("is_graphical") {
  const std::vector<std::uint32_t> ok{2, 2, 2};
  const std::vector<std::uint32_t> odd{1, 1, 1};
  const std::vector<std::uint32_t> bad{3, 3, 1, 1};
  const std::vector<std::uint32_t> star{3, 1, 1, 1};
  CHECK(is_graphical(ok));
  CHECK_FALSE(is_graphical(odd));
  CHECK_FALSE(is_graphical(bad));
  CHECK(is_graphical(star));
}

TEST_CASE("synthetic config keys") {
  std::istringstream in(
      "[synthetic]\nnodes = 100\nmean_degree = 4\ncomponent_fractions = 0.5, 0.5\n"
      "seed = 3\nattributes = a:0.2, b:0.1:0.5\n");
  const auto doc = KeyValueDocument::parse(in, "pop.cfg");
  const auto cfg = synthetic_config_from(doc, "synthetic");
  CHECK(cfg.nodes == 100);
  CHECK(cfg.component_fractions.size() == 2);
  REQUIRE(cfg.attributes.size() == 2);
  CHECK(cfg.attributes[1].degree_tilt == 0.5);

  std::istringstream bad("[synthetic]\nnodes = -4\nfoo = 1\n");
  CHECK_THROWS_AS(synthetic_config_from(KeyValueDocument::parse(bad, "b"), "synthetic"),
                  ValidationError);
}

TEST_CASE("csv helpers") {
  CHECK(csv::parse_int(" 42 ") == 42);
  CHECK_FALSE(csv::parse_int("4x").has_value());
  CHECK(csv::parse_double("0.25") == 0.25);
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125}) {
    CHECK(csv::parse_double(csv::format_double(x)) == x);
  }
}

TEST_CASE("seed derivation is stable and path sensitive") {
  CHECK(derive_seed(7, {1, 2}) == derive_seed(7, {1, 2}));
  CHECK(derive_seed(7, {1, 2}) != derive_seed(7, {2, 1}));
  CHECK(derive_seed(7, {1}) != derive_seed(8, {1}));
}

TEST_CASE("Bernoulli skipper matches the success rate") {
  Rng rng = make_rng(3, {});
  BernoulliSkipper skip(0.1);
  std::uint64_t pos = 0;
  std::size_t hits = 0;
  const std::uint64_t n = 1'000'000;
  for (;;) {
    pos += skip.next_gap(rng);
    if (pos >= n) break;
    ++hits;
    ++pos;
  }
  CHECK(static_cast<double>(hits) / n == doctest::Approx(0.1).epsilon(0.01));
  BernoulliSkipper never(0.0);
  CHECK(never.next_gap(rng) == UINT64_MAX);
}
