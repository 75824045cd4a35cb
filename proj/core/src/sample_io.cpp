#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "netsample/csv.hpp"
#include "netsample/design.hpp"
#include "netsample/error.hpp"

namespace netsample {

std::string format_sample_nodes(const SampleNetwork& sample) {
  std::ostringstream out;
  out << "id,seed_flag,day,degree";
  for (const auto& name : sample.variable_names()) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& n = sample.node(i);
    out << n.id << ',' << static_cast<int>(n.entry) << ',' << n.day << ',' << n.degree;
    for (std::size_t v = 0; v < sample.variable_names().size(); ++v) {
      out << ',' << csv::format_double(sample.values(v)[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::string format_sample_edges(const SampleNetwork& sample) {
  std::ostringstream out;
  out << "recruiter,recruit\n";
  for (const auto& e : sample.edges()) {
    out << sample.node(e.recruiter).id << ',' << sample.node(e.recruit).id << '\n';
  }
  return out.str();
}

void write_sample(const SampleNetwork& sample, const std::filesystem::path& nodes_path,
                  const std::filesystem::path& edges_path) {
  csv::write_file_atomic(nodes_path, format_sample_nodes(sample));
  csv::write_file_atomic(edges_path, format_sample_edges(sample));
}

SampleNetwork parse_sample(std::istream& nodes_in, std::string_view nodes_source,
                           std::istream& edges_in, std::string_view edges_source) {
  const std::string nsrc(nodes_source), esrc(edges_source);
  std::vector<SampledNode> nodes;
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  std::unordered_map<ExternalId, std::uint32_t> position;
  bool header = true;

  csv::for_each_line(nodes_in, [&](std::size_t line, std::string_view text) {
    const auto fields = csv::split(text, ',');
    if (header) {
      if (fields.size() < 4 || fields[0] != "id" || fields[1] != "seed_flag" || fields[2] != "day" ||
          fields[3] != "degree") {
        throw ParseError(nsrc, line, "header must begin `id,seed_flag,day,degree`");
      }
      for (std::size_t c = 4; c < fields.size(); ++c) names.emplace_back(fields[c]);
      values.resize(names.size());
      header = false;
      return;
    }
    if (fields.size() != names.size() + 4) {
      throw ParseError(nsrc, line, "expected " + std::to_string(names.size() + 4) + " fields");
    }
    const auto id = csv::parse_int(fields[0]);
    const auto flag = csv::parse_int(fields[1]);
    const auto day = csv::parse_int(fields[2]);
    const auto degree = csv::parse_int(fields[3]);
    if (!id || *id < 0) throw ParseError(nsrc, line, "invalid id");
    if (!flag || *flag < 0 || *flag > 2) throw ParseError(nsrc, line, "seed_flag must be 0, 1 or 2");
    if (!day) throw ParseError(nsrc, line, "invalid day");
    if (!degree || *degree < 0) throw ParseError(nsrc, line, "invalid degree");
    if (!position.emplace(*id, static_cast<std::uint32_t>(nodes.size())).second) {
      throw ParseError(nsrc, line, "node " + std::to_string(*id) + " listed twice");
    }
    SampledNode node;
    node.id = *id;
    node.entry = static_cast<EntryKind>(*flag);
    node.day = static_cast<std::int32_t>(*day);
    node.degree = static_cast<std::uint32_t>(*degree);
    nodes.push_back(node);
    for (std::size_t v = 0; v < names.size(); ++v) {
      const auto x = csv::parse_double(fields[v + 4]);
      if (!x) throw ParseError(nsrc, line, "non-numeric value in column `" + names[v] + "`");
      values[v].push_back(*x);
    }
  });
  if (header) throw ParseError(nsrc, 1, "sample nodes file has no header");

  std::vector<RecruitmentEdge> edges;
  header = true;
  csv::for_each_line(edges_in, [&](std::size_t line, std::string_view text) {
    const auto fields = csv::split(text, ',');
    if (header) {
      if (fields.size() != 2 || fields[0] != "recruiter" || fields[1] != "recruit") {
        throw ParseError(esrc, line, "header must be `recruiter,recruit`");
      }
      header = false;
      return;
    }
    if (fields.size() != 2) throw ParseError(esrc, line, "expected `recruiter,recruit`");
    const auto a = csv::parse_int(fields[0]);
    const auto b = csv::parse_int(fields[1]);
    if (!a || !b) throw ParseError(esrc, line, "ids must be integers");
    const auto pa = position.find(*a);
    const auto pb = position.find(*b);
    if (pa == position.end() || pb == position.end()) {
      throw ParseError(esrc, line, "edge references a node not in the sample");
    }
    edges.push_back({pa->second, pb->second});
  });

  SampleNetwork sample(std::move(nodes), std::move(edges), std::move(names), std::move(values));
  sample.target_size = sample.size();
  sample.reached_target = true;
  return sample;
}

SampleNetwork read_sample(const std::filesystem::path& nodes_path,
                          const std::filesystem::path& edges_path) {
  std::ifstream nodes(nodes_path);
  if (!nodes) throw Error("cannot open " + nodes_path.string());
  std::ifstream edges(edges_path);
  if (!edges) throw Error("cannot open " + edges_path.string());
  return parse_sample(nodes, nodes_path.string(), edges, edges_path.string());
}

std::vector<RecruitmentEdge> population_ties(const SampleNetwork& sample,
                                             const PopulationGraph& graph) {
  constexpr auto kAbsent = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> position(graph.node_count(), kAbsent);
  for (std::uint32_t i = 0; i < sample.size(); ++i) {
    const auto v = graph.find(sample.node(i).id);
    if (!v) throw ValidationError("sampled id " + std::to_string(sample.node(i).id) + " is not in the population");
    position[*v] = i;
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> recruited;
  for (const auto& e : sample.edges()) {
    recruited.emplace_back(std::min(e.recruiter, e.recruit), std::max(e.recruiter, e.recruit));
  }
  std::sort(recruited.begin(), recruited.end());
  std::vector<RecruitmentEdge> ties;
  for (std::uint32_t i = 0; i < sample.size(); ++i) {
    for (auto w : graph.neighbors(*graph.find(sample.node(i).id))) {
      const auto j = position[w];
      if (j == kAbsent || j <= i) continue;
      if (std::binary_search(recruited.begin(), recruited.end(), std::make_pair(i, j))) continue;
      ties.push_back({i, j});
    }
  }
  std::sort(ties.begin(), ties.end(), [](const RecruitmentEdge& a, const RecruitmentEdge& b) {
    return std::tie(a.recruiter, a.recruit) < std::tie(b.recruiter, b.recruit);
  });
  return ties;
}

std::string format_known_ties(const SampleNetwork& sample) {
  std::ostringstream out;
  out << "i,j\n";
  for (const auto& t : sample.known_ties()) {
    out << sample.node(t.recruiter).id << ',' << sample.node(t.recruit).id << '\n';
  }
  return out.str();
}

void parse_known_ties(std::istream& in, std::string_view source, SampleNetwork& sample) {
  const std::string src(source);
  std::unordered_map<ExternalId, std::uint32_t> position;
  for (std::uint32_t i = 0; i < sample.size(); ++i) position.emplace(sample.node(i).id, i);
  std::vector<RecruitmentEdge> ties;
  bool header = true;
  csv::for_each_line(in, [&](std::size_t line, std::string_view text) {
    const auto fields = csv::split(text, ',');
    if (header) {
      if (fields.size() != 2 || fields[0] != "i" || fields[1] != "j") {
        throw ParseError(src, line, "header must be `i,j`");
      }
      header = false;
      return;
    }
    if (fields.size() != 2) throw ParseError(src, line, "expected `i,j`");
    const auto a = csv::parse_int(fields[0]);
    const auto b = csv::parse_int(fields[1]);
    if (!a || !b) throw ParseError(src, line, "ids must be integers");
    const auto pa = position.find(*a);
    const auto pb = position.find(*b);
    if (pa == position.end() || pb == position.end()) {
      throw ParseError(src, line, "tie references a node not in the sample");
    }
    if (pa->second == pb->second) throw ParseError(src, line, "self-tie");
    ties.push_back({pa->second, pb->second});
  });
  if (header) throw ParseError(src, 1, "ties file has no header");
  sample.set_known_ties(std::move(ties));
}

void read_known_ties(const std::filesystem::path& path, SampleNetwork& sample) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  parse_known_ties(in, path.string(), sample);
}

}  // namespace netsample
