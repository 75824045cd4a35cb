#include "netsample/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "netsample/csv.hpp"
#include "netsample/error.hpp"

namespace netsample {

PopulationGraph PopulationGraph::from_edges(std::size_t node_count, std::vector<Edge> edges,
                                            std::vector<ExternalId> external_ids,
                                            std::size_t* duplicates_removed) {
  if (external_ids.empty()) {
    external_ids.resize(node_count);
    std::iota(external_ids.begin(), external_ids.end(), ExternalId{0});
  }
  if (external_ids.size() != node_count) {
    throw ValidationError("external id table has " + std::to_string(external_ids.size()) +
                          " entries for " + std::to_string(node_count) + " nodes");
  }
  if (!std::is_sorted(external_ids.begin(), external_ids.end()) ||
      std::adjacent_find(external_ids.begin(), external_ids.end()) != external_ids.end()) {
    throw ValidationError("external ids must be strictly increasing");
  }

  for (Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw ValidationError("edge endpoint out of range");
    }
    if (e.u == e.v) {
      throw ValidationError("self-loop on node " + std::to_string(external_ids[e.u]));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  if (duplicates_removed) *duplicates_removed = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());

  PopulationGraph g;
  g.external_ids_ = std::move(external_ids);
  g.offsets_.assign(node_count + 1, 0);
  for (const Edge& e : edges) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.targets_.resize(g.offsets_.back());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // edges are sorted by (u, v), so filling in this order leaves each list sorted
  for (const Edge& e : edges) g.targets_[cursor[e.u]++] = e.v;
  for (const Edge& e : edges) g.targets_[cursor[e.v]++] = e.u;
  for (std::size_t i = 0; i < node_count; ++i) {
    std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }
  g.edges_ = std::move(edges);
  return g;
}

std::optional<NodeId> PopulationGraph::find(ExternalId id) const noexcept {
  const auto it = std::lower_bound(external_ids_.begin(), external_ids_.end(), id);
  if (it == external_ids_.end() || *it != id) return std::nullopt;
  return static_cast<NodeId>(it - external_ids_.begin());
}

double PopulationGraph::mean_degree() const noexcept {
  if (node_count() == 0) return 0.0;
  return 2.0 * static_cast<double>(edge_count()) / static_cast<double>(node_count());
}

PopulationGraph parse_edge_list(std::istream& in, std::string_view source,
                                Diagnostics* diagnostics,
                                std::span<const ExternalId> extra_ids) {
  struct RawEdge {
    ExternalId u, v;
  };
  std::vector<RawEdge> raw;
  std::vector<ExternalId> ids(extra_ids.begin(), extra_ids.end());
  const std::string src(source);

  csv::for_each_line(in, [&](std::size_t line, std::string_view text) {
    const auto fields = csv::split(text, ',');
    if (fields.size() != 2) {
      throw ParseError(src, line, "expected `u,v`, got `" + std::string(text) + "`");
    }
    const auto u = csv::parse_int(fields[0]);
    const auto v = csv::parse_int(fields[1]);
    if (!u || !v || *u < 0 || *v < 0) {
      throw ParseError(src, line, "node ids must be nonnegative integers: `" +
                                      std::string(text) + "`");
    }
    if (*u == *v) {
      throw ParseError(src, line, "self-loop on node " + std::to_string(*u));
    }
    raw.push_back({*u, *v});
    ids.push_back(*u);
    ids.push_back(*v);
  });

  for (ExternalId id : extra_ids) {
    if (id < 0) throw ValidationError("node ids must be nonnegative: " + std::to_string(id));
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  const auto dense = [&](ExternalId id) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& r : raw) edges.push_back({dense(r.u), dense(r.v)});

  std::size_t duplicates = 0;
  const std::size_t n = ids.size();
  PopulationGraph g = PopulationGraph::from_edges(n, std::move(edges), std::move(ids), &duplicates);
  if (duplicates > 0 && diagnostics) {
    diagnostics->warn(src + ": " + std::to_string(duplicates) +
                      " duplicate or reversed edge line(s) removed");
  }
  return g;
}

PopulationGraph load_edge_list(const std::filesystem::path& path, Diagnostics* diagnostics,
                               std::span<const ExternalId> extra_ids) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list " + path.string());
  return parse_edge_list(in, path.string(), diagnostics, extra_ids);
}

std::string format_edge_list(const PopulationGraph& graph) {
  std::ostringstream out;
  out << "# nodes=" << graph.node_count() << " edges=" << graph.edge_count() << '\n';
  for (const Edge& e : graph.edges()) {
    out << graph.external_id(e.u) << ',' << graph.external_id(e.v) << '\n';
  }
  return out.str();
}

std::vector<std::uint32_t> label_components(std::span<const std::size_t> offsets,
                                            std::span<const NodeId> targets) {
  const std::size_t n = offsets.empty() ? 0 : offsets.size() - 1;
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  std::vector<std::uint32_t> raw(n, kUnset);
  std::vector<std::size_t> sizes;
  std::vector<NodeId> stack;
  // discovery in ascending node order, so raw label order == smallest-member order
  for (NodeId start = 0; start < n; ++start) {
    if (raw[start] != kUnset) continue;
    const auto label = static_cast<std::uint32_t>(sizes.size());
    std::size_t size = 0;
    raw[start] = label;
    stack.push_back(start);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      ++size;
      for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k) {
        const NodeId w = targets[k];
        if (raw[w] == kUnset) {
          raw[w] = label;
          stack.push_back(w);
        }
      }
    }
    sizes.push_back(size);
  }
  std::vector<std::uint32_t> order(sizes.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return sizes[a] > sizes[b]; });
  std::vector<std::uint32_t> rank(sizes.size());
  for (std::uint32_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos;
  for (auto& label : raw) label = rank[label];
  return raw;
}

std::vector<std::uint32_t> component_labels(const PopulationGraph& graph) {
  std::vector<std::size_t> offsets(graph.node_count() + 1, 0);
  std::vector<NodeId> targets;
  targets.reserve(2 * graph.edge_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    const auto nb = graph.neighbors(v);
    targets.insert(targets.end(), nb.begin(), nb.end());
    offsets[v + 1] = targets.size();
  }
  return label_components(offsets, targets);
}

std::vector<Component> components(const PopulationGraph& graph) {
  const auto labels = component_labels(graph);
  std::uint32_t count = 0;
  for (auto l : labels) count = std::max(count, l + 1);
  std::vector<Component> out(count);
  for (std::uint32_t c = 0; c < count; ++c) out[c].id = c;
  for (NodeId v = static_cast<NodeId>(labels.size()); v-- > 0;) {
    Component& c = out[labels[v]];
    ++c.size;
    c.smallest = v;
  }
  return out;
}

}  // namespace netsample
