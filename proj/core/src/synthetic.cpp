#include "netsample/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "netsample/csv.hpp"
#include "netsample/error.hpp"

namespace netsample {

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 32) | b;
}

// Multigraph for one block of contiguous node ids [first, first + size).
// Edges may be loops or repeats until repair() runs.
class BlockWiring {
 public:
  BlockWiring(NodeId first, std::size_t size, Rng& rng) : first_(first), size_(size), rng_(rng) {}

  void wire(std::vector<NodeId> stubs) {
    std::shuffle(stubs.begin(), stubs.end(), rng_);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) add({stubs[i], stubs[i + 1]});
  }

  // Swaps each loop or repeated edge with a random partner until none remain
  // or the attempt budget runs out; leftovers are dropped and counted.
  std::size_t repair() {
    std::size_t budget = 200 * (count_bad() + 1);
    while (budget-- > 0 && edges_.size() >= 2) {
      const auto bad = next_bad();
      if (!bad) break;
      const std::size_t other = pick(edges_.size());
      if (other == *bad) continue;
      try_swap(*bad, other, coin());
    }
    std::size_t dropped = 0;
    for (std::size_t i = edges_.size(); i-- > 0;) {
      if (is_bad(i)) {
        remove_at(i);
        ++dropped;
      }
    }
    return dropped;
  }

  // Joins every fragment to the largest piece by swapping one of its edges
  // with an edge of that piece.
  void connect() {
    for (int round = 0; round < 64; ++round) {
      const auto label = fragment_labels();
      std::map<NodeId, std::vector<std::size_t>> by_fragment;
      for (std::size_t i = 0; i < edges_.size(); ++i) by_fragment[label[edges_[i].u - first_]].push_back(i);
      if (by_fragment.size() <= 1) return;
      auto largest = by_fragment.begin();
      for (auto it = by_fragment.begin(); it != by_fragment.end(); ++it) {
        if (it->second.size() > largest->second.size()) largest = it;
      }
      const NodeId main_label = largest->first;
      const std::vector<std::size_t> main_edges = largest->second;
      std::vector<std::vector<std::size_t>> others;
      for (auto& [frag, list] : by_fragment) {
        if (frag != main_label) others.push_back(list);
      }
      // swaps shuffle edge indices, so re-derive fragments each round and
      // perform at most one swap per edge index in this round
      std::vector<std::uint8_t> touched(edges_.size(), 0);
      for (const auto& list : others) {
        for (int attempt = 0; attempt < 16; ++attempt) {
          const std::size_t a = list[pick(list.size())];
          const std::size_t b = main_edges[pick(main_edges.size())];
          if (touched[a] || touched[b]) continue;
          if (try_swap_in_place(a, b, coin())) {
            touched[a] = touched[b] = 1;
            break;
          }
        }
      }
    }
  }

  std::vector<Edge> take() && { return std::move(edges_); }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

  void add(Edge e) {
    if (e.u > e.v) std::swap(e.u, e.v);
    ++count_[pair_key(e.u, e.v)];
    edges_.push_back(e);
  }
  void forget(const Edge& e) {
    auto it = count_.find(pair_key(e.u, e.v));
    if (--it->second == 0) count_.erase(it);
  }
  void remove_at(std::size_t i) {
    forget(edges_[i]);
    edges_[i] = edges_.back();
    edges_.pop_back();
  }
  bool is_bad(std::size_t i) const {
    const Edge& e = edges_[i];
    return e.u == e.v || count_.at(pair_key(e.u, e.v)) > 1;
  }
  std::size_t count_bad() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < edges_.size(); ++i) n += is_bad(i);
    return n;
  }
  std::optional<std::size_t> next_bad() {
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const std::size_t i = (scan_ + k) % edges_.size();
      if (is_bad(i)) {
        scan_ = i;
        return i;
      }
    }
    return std::nullopt;
  }
  bool present(NodeId a, NodeId b) const { return count_.contains(pair_key(a, b)); }

  // (a,b),(c,d) -> (a,c),(b,d) or (a,d),(b,c), written back into slots i, j
  bool try_swap_in_place(std::size_t i, std::size_t j, bool cross) {
    const Edge e1 = edges_[i];
    const Edge e2 = edges_[j];
    Edge n1{e1.u, cross ? e2.v : e2.u};
    Edge n2{e1.v, cross ? e2.u : e2.v};
    if (n1.u == n1.v || n2.u == n2.v) return false;
    if (pair_key(n1.u, n1.v) == pair_key(n2.u, n2.v)) return false;
    // a repeated old edge may legitimately be re-created once the old copy goes
    forget(e1);
    forget(e2);
    if (present(n1.u, n1.v) || present(n2.u, n2.v)) {
      ++count_[pair_key(e1.u, e1.v)];
      ++count_[pair_key(e2.u, e2.v)];
      return false;
    }
    if (n1.u > n1.v) std::swap(n1.u, n1.v);
    if (n2.u > n2.v) std::swap(n2.u, n2.v);
    ++count_[pair_key(n1.u, n1.v)];
    ++count_[pair_key(n2.u, n2.v)];
    edges_[i] = n1;
    edges_[j] = n2;
    return true;
  }
  bool try_swap(std::size_t i, std::size_t j, bool cross) { return try_swap_in_place(i, j, cross); }

  std::vector<NodeId> fragment_labels() const {
    std::vector<NodeId> parent(size_);
    std::iota(parent.begin(), parent.end(), NodeId{0});
    const auto root = [&](NodeId v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (const Edge& e : edges_) {
      const NodeId a = root(e.u - first_), b = root(e.v - first_);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    for (NodeId v = 0; v < size_; ++v) parent[v] = root(v);
    return parent;
  }

  NodeId first_;
  std::size_t size_;
  Rng& rng_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> count_;
  std::size_t scan_ = 0;
};

std::vector<std::uint32_t> lognormal_degrees(std::size_t size, double target_mean, double spread,
                                             Rng& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> z(size);
  for (double& v : z) v = normal(rng);
  const double cap = static_cast<double>(std::max<std::size_t>(size, 2) - 1);
  const auto realize = [&](double mu, std::vector<std::uint32_t>& out) {
    double total = 0;
    for (std::size_t i = 0; i < size; ++i) {
      const double d = std::clamp(std::round(std::exp(mu + spread * z[i])), 1.0, cap);
      out[i] = static_cast<std::uint32_t>(d);
      total += d;
    }
    return total / static_cast<double>(size);
  };
  std::vector<std::uint32_t> degrees(size);
  // the realized mean is nondecreasing in mu; bisect for the target
  double lo = std::log(target_mean) - 6.0, hi = std::log(target_mean) + 6.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (realize(mid, degrees) < target_mean ? lo : hi) = mid;
  }
  const double below = realize(lo, degrees);
  const double above = realize(hi, degrees);
  if (std::abs(below - target_mean) < std::abs(above - target_mean)) realize(lo, degrees);
  return degrees;
}

}  // namespace

bool is_graphical(std::span<const std::uint32_t> degrees) {
  std::vector<std::uint64_t> d(degrees.begin(), degrees.end());
  std::sort(d.begin(), d.end(), std::greater<>());
  const std::uint64_t total = std::accumulate(d.begin(), d.end(), std::uint64_t{0});
  if (total % 2 != 0) return false;
  const std::size_t n = d.size();
  if (n > 0 && d.front() >= n) return false;
  std::uint64_t prefix = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    prefix += d[k - 1];
    std::uint64_t tail = 0;
    for (std::size_t i = k; i < n; ++i) tail += std::min<std::uint64_t>(d[i], k);
    if (prefix > k * (k - 1) + tail) return false;
  }
  return true;
}

void SyntheticPopulationConfig::validate() const {
  std::vector<std::string> problems;
  if (nodes == 0) problems.emplace_back("nodes must be positive");
  if (degrees.empty()) {
    if (!mean_degree || !(*mean_degree > 0.0)) {
      problems.emplace_back("mean_degree must be positive when no degree sequence is given");
    }
    if (!(degree_spread >= 0.0)) problems.emplace_back("degree_spread must be nonnegative");
  } else if (degrees.size() != nodes) {
    problems.emplace_back("degree sequence has " + std::to_string(degrees.size()) +
                          " entries for " + std::to_string(nodes) + " nodes");
  }
  if (component_fractions.empty()) problems.emplace_back("component_fractions must not be empty");
  double sum = 0;
  for (double f : component_fractions) {
    if (!(f > 0.0)) problems.emplace_back("component fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    problems.emplace_back("component fractions sum to " + csv::format_double(sum) + ", not 1");
  }
  for (const auto& a : attributes) {
    if (a.name.empty()) problems.emplace_back("attribute with empty name");
    if (!(a.prevalence >= 0.0 && a.prevalence <= 1.0)) {
      problems.emplace_back("attribute `" + a.name + "` prevalence outside [0,1]");
    }
  }
  if (problems.empty() && nodes > 0) {
    for (std::size_t s : block_sizes()) {
      if (s == 0) problems.emplace_back("a component fraction yields an empty component");
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid synthetic population config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
}

std::vector<std::size_t> SyntheticPopulationConfig::block_sizes() const {
  std::vector<std::size_t> sizes;
  std::size_t used = 0;
  for (double f : component_fractions) {
    sizes.push_back(static_cast<std::size_t>(std::floor(f * static_cast<double>(nodes) + 1e-9)));
    used += sizes.back();
  }
  const auto largest = std::max_element(component_fractions.begin(), component_fractions.end()) -
                       component_fractions.begin();
  sizes[static_cast<std::size_t>(largest)] += nodes - std::min(used, nodes);
  return sizes;
}

PopulationGraph generate_synthetic(const SyntheticPopulationConfig& config, Rng& rng,
                                   std::size_t* rewiring_losses) {
  config.validate();
  const auto sizes = config.block_sizes();
  std::vector<Edge> all_edges;
  std::size_t losses = 0;
  NodeId first = 0;
  for (std::size_t block = 0; block < sizes.size(); ++block) {
    const std::size_t size = sizes[block];
    std::vector<std::uint32_t> degrees;
    if (!config.degrees.empty()) {
      degrees.assign(config.degrees.begin() + first, config.degrees.begin() + first + size);
      if (!is_graphical(degrees)) {
        throw ValidationError("degree sequence of component " + std::to_string(block) +
                              " is not graphical");
      }
    } else {
      degrees = lognormal_degrees(size, *config.mean_degree, config.degree_spread, rng);
      const std::uint64_t total = std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0});
      if (total % 2 != 0) {
        // bump one node that still has room
        std::vector<std::size_t> room;
        for (std::size_t i = 0; i < size; ++i) {
          if (degrees[i] + 1 < size) room.push_back(i);
        }
        if (room.empty()) {
          for (std::size_t i = 0; i < size; ++i) {
            if (degrees[i] > 0) room.push_back(i);
          }
          --degrees[room[std::uniform_int_distribution<std::size_t>(0, room.size() - 1)(rng)]];
        } else {
          ++degrees[room[std::uniform_int_distribution<std::size_t>(0, room.size() - 1)(rng)]];
        }
      }
    }
    std::vector<NodeId> stubs;
    for (std::size_t i = 0; i < size; ++i) {
      stubs.insert(stubs.end(), degrees[i], static_cast<NodeId>(first + i));
    }
    BlockWiring wiring(first, size, rng);
    wiring.wire(std::move(stubs));
    losses += 2 * wiring.repair();
    wiring.connect();
    auto edges = std::move(wiring).take();
    all_edges.insert(all_edges.end(), edges.begin(), edges.end());
    first += static_cast<NodeId>(size);
  }
  if (rewiring_losses) *rewiring_losses = losses;
  return PopulationGraph::from_edges(config.nodes, std::move(all_edges));
}

AttributeTable generate_attributes(const PopulationGraph& graph,
                                   std::span<const SyntheticAttribute> attributes, Rng& rng) {
  const std::size_t n = graph.node_count();
  AttributeTable table(n);
  const double mean_deg = std::max(graph.mean_degree(), 1.0);
  for (const auto& attr : attributes) {
    std::vector<double> weight(n, 1.0);
    if (attr.degree_tilt != 0.0) {
      for (NodeId i = 0; i < n; ++i) {
        weight[i] = std::pow(std::max<double>(graph.degree(i), 1.0) / mean_deg, attr.degree_tilt);
      }
    }
    const double mean_w = n ? std::accumulate(weight.begin(), weight.end(), 0.0) / static_cast<double>(n) : 1.0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> values(n);
    for (NodeId i = 0; i < n; ++i) {
      const double p = std::min(1.0, attr.prevalence * weight[i] / mean_w);
      values[i] = unif(rng) < p ? 1.0 : 0.0;
    }
    table.add_variable(attr.name, VariableKind::Binary, std::move(values));
  }
  return table;
}

SyntheticPopulation generate_population(const SyntheticPopulationConfig& config) {
  SyntheticPopulation pop;
  Rng graph_rng = make_rng(config.seed, {0});
  pop.graph = generate_synthetic(config, graph_rng, &pop.rewiring_losses);
  Rng attr_rng = make_rng(config.seed, {1});
  pop.attributes = generate_attributes(pop.graph, config.attributes, attr_rng);
  return pop;
}

namespace {
constexpr std::array<std::string_view, 7> kSyntheticKeys = {
    "nodes", "mean_degree", "degree_spread", "degrees", "component_fractions", "seed", "attributes"};
}

std::span<const std::string_view> synthetic_config_keys() noexcept { return kSyntheticKeys; }

SyntheticPopulationConfig synthetic_config_from(const KeyValueDocument& doc, std::string_view section) {
  SyntheticPopulationConfig cfg;
  std::vector<std::string> problems;
  bool have_degrees = false;
  const auto where = [&](const KeyValueEntry& e) {
    return doc.source() + ":" + std::to_string(e.line) + ": [" + e.section + "] " + e.key;
  };
  for (const auto& e : doc.entries()) {
    if (e.section != section) continue;
    const auto bad = [&](const std::string& what) { problems.push_back(where(e) + ": " + what); };
    if (e.key == "nodes") {
      const auto v = csv::parse_int(e.value);
      if (!v || *v <= 0) bad("expected a positive integer");
      else cfg.nodes = static_cast<std::size_t>(*v);
    } else if (e.key == "mean_degree") {
      const auto v = csv::parse_double(e.value);
      if (!v || !(*v > 0)) bad("expected a positive number");
      else cfg.mean_degree = *v;
    } else if (e.key == "degree_spread") {
      const auto v = csv::parse_double(e.value);
      if (!v || !(*v >= 0)) bad("expected a nonnegative number");
      else cfg.degree_spread = *v;
    } else if (e.key == "degrees") {
      have_degrees = true;
      for (const auto& item : split_list(e.value)) {
        const auto v = csv::parse_int(item);
        if (!v || *v < 0) {
          bad("degree `" + item + "` is not a nonnegative integer");
          break;
        }
        cfg.degrees.push_back(static_cast<std::uint32_t>(*v));
      }
    } else if (e.key == "component_fractions") {
      cfg.component_fractions.clear();
      for (const auto& item : split_list(e.value)) {
        const auto v = csv::parse_double(item);
        if (!v) {
          bad("fraction `" + item + "` is not a number");
          break;
        }
        cfg.component_fractions.push_back(*v);
      }
    } else if (e.key == "seed") {
      const auto v = csv::parse_int(e.value);
      if (!v || *v < 0) bad("expected a nonnegative integer");
      else cfg.seed = static_cast<std::uint64_t>(*v);
    } else if (e.key == "attributes") {
      for (const auto& item : split_list(e.value)) {
        const auto parts = csv::split(item, ':');
        SyntheticAttribute a;
        a.name = std::string(parts[0]);
        const auto prev = parts.size() > 1 ? csv::parse_double(parts[1]) : std::nullopt;
        const auto tilt = parts.size() > 2 ? csv::parse_double(parts[2]) : std::optional<double>(0.0);
        if (parts.size() < 2 || parts.size() > 3 || !prev || !tilt) {
          bad("attribute `" + item + "` must be name:prevalence[:degree_tilt]");
          break;
        }
        a.prevalence = *prev;
        a.degree_tilt = *tilt;
        cfg.attributes.push_back(std::move(a));
      }
    } else {
      problems.push_back(where(e) + ": unknown key");
    }
  }
  if (have_degrees && !doc.find(section, "nodes")) cfg.nodes = cfg.degrees.size();
  if (have_degrees) cfg.mean_degree.reset();
  if (problems.empty()) {
    try {
      cfg.validate();
    } catch (const ValidationError& e) {
      problems.emplace_back(e.what());
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid synthetic population config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
  return cfg;
}

SyntheticPopulationConfig desk_scale_population() {
  SyntheticPopulationConfig cfg;
  cfg.nodes = 5000;
  cfg.mean_degree = 7.9;
  cfg.degree_spread = 1.1;
  cfg.component_fractions = {0.8, 0.15, 0.05};
  cfg.seed = 90;
  cfg.attributes = {
      {"nonwhite", 0.24, 0.0},   {"female", 0.43, 0.0},  {"worker", 0.05, 0.5},
      {"procurer", 0.02, 0.3},   {"client", 0.09, 0.3},  {"dealer", 0.06, 0.4},
      {"cook", 0.01, 0.0},       {"thief", 0.02, 0.2},   {"retired", 0.03, 0.0},
      {"homemaker", 0.06, 0.0},  {"disabled", 0.04, 0.0}, {"unemployed", 0.16, 0.2},
      {"homeless", 0.01, 0.0},
  };
  return cfg;
}

}  // namespace netsample
